// Copyright 2026 The dasampler Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: gen-synth, train, baseline, eval, sweep.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dasampler/dataset.hpp"
#include "dasampler/harness.hpp"

namespace {

using dasampler::ExperimentConfig;

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
};

void AddCommon(CLI::App* cmd, CommonFlags* flags) {
  cmd->add_option("--config", flags->config_path,
                  "experiment config (JSON); defaults to the synthetic task");
  cmd->add_option("--seed", flags->seed, "master seed (overrides config)");
  cmd->add_option("--out", flags->out, "output directory (overrides config)");
}

ExperimentConfig ResolveConfig(const CommonFlags& flags) {
  ExperimentConfig cfg = flags.config_path.empty()
                             ? dasampler::SyntheticTaskConfig(0)
                             : dasampler::LoadConfig(flags.config_path);
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.out) cfg.out_dir = *flags.out;
  cfg.Validate();
  return cfg;
}

void PrintSummary(const dasampler::RunMetrics& m) {
  std::cout << "state_dim " << m.state_dim << "  n_actions " << m.n_actions
            << "\n"
            << "learned policy accuracy " << m.learned_accuracy << "\n"
            << "source_only             " << m.source_only << "\n"
            << "random_policy           " << m.random_policy << "\n"
            << "all_noisy               " << m.all_noisy << "\n"
            << "wall clock              " << m.wall_clock_seconds << " s\n";
}

std::pair<std::uint64_t, std::uint64_t> ParseSeedRange(const std::string& s) {
  const auto dots = s.find("..");
  if (dots == std::string::npos) {
    const auto v = std::stoull(s);
    return {v, v};
  }
  const auto a = std::stoull(s.substr(0, dots));
  const auto b = std::stoull(s.substr(dots + 2));
  if (b < a) throw dasampler::ConfigError("empty seed range " + s);
  return {a, b};
}

int GenSynth(const CommonFlags& flags) {
  ExperimentConfig cfg = ResolveConfig(flags);
  if (!cfg.synthetic) {
    throw dasampler::ConfigError("gen-synth needs a synthetic config");
  }
  dasampler::SynthConfig sc = *cfg.synthetic;
  sc.seed = dasampler::SubstreamSeed(cfg.seed, "data");
  const dasampler::SynthData data = dasampler::SynthGenerate(sc);
  const std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  dasampler::WriteFeatureMatrix(dir / "source.fvec", data.source.features());
  dasampler::WriteLabels(dir / "source.lbls", data.source.labels());
  dasampler::WriteFeatureMatrix(dir / "target.fvec", data.target.features());
  dasampler::WriteLabels(dir / "target.lbls", data.target_truth.all());
  std::cout << "wrote " << data.source.size() << " source and "
            << data.target.size() << " target samples (dim "
            << data.source.dim() << ") to " << dir << "\n";
  return 0;
}

int Train(const CommonFlags& flags, bool quiet) {
  const ExperimentConfig cfg = ResolveConfig(flags);
  const auto m = dasampler::RunPipeline(cfg, quiet ? nullptr : &std::cerr);
  PrintSummary(m);
  std::cout << "outputs in " << cfg.out_dir << "\n";
  return 0;
}

int Baseline(const CommonFlags& flags, const std::string& kind_name) {
  const ExperimentConfig cfg = ResolveConfig(flags);
  const auto kind = dasampler::ParseBaselineKind(kind_name);
  const double acc = dasampler::RunBaseline(cfg, kind);
  std::filesystem::create_directories(cfg.out_dir);
  nlohmann::json j = {{"kind", dasampler::BaselineName(kind)},
                      {"accuracy", acc},
                      {"seed", cfg.seed},
                      {"config_hash", dasampler::ConfigHash(cfg)}};
  dasampler::WriteText(std::filesystem::path(cfg.out_dir) /
                           (std::string("baseline_") +
                            dasampler::BaselineName(kind) + ".json"),
                       j.dump(2) + "\n");
  std::cout << dasampler::BaselineName(kind) << " accuracy " << acc << "\n";
  return 0;
}

int Eval(const CommonFlags& flags, const std::string& checkpoint) {
  const ExperimentConfig cfg = ResolveConfig(flags);
  const auto fe = dasampler::EvaluateCheckpoint(checkpoint, cfg);
  std::filesystem::create_directories(cfg.out_dir);
  nlohmann::json j = {{"checkpoint", checkpoint},
                      {"accuracy", fe.accuracy},
                      {"picks", fe.picks},
                      {"pos_size", fe.pos_size},
                      {"eval_restricted_to_reward_set",
                       fe.restricted_to_reward_set},
                      {"seed", cfg.seed},
                      {"config_hash", dasampler::ConfigHash(cfg)}};
  dasampler::WriteText(std::filesystem::path(cfg.out_dir) / "eval.json",
                       j.dump(2) + "\n");
  std::cout << "policy accuracy " << fe.accuracy << " (" << fe.picks
            << " picks)\n";
  return 0;
}

int Sweep(const CommonFlags& flags, const std::string& seeds, int jobs) {
  const ExperimentConfig base = ResolveConfig(flags);
  const auto [first, last] = ParseSeedRange(seeds);
  std::vector<std::uint64_t> all;
  for (std::uint64_t s = first; s <= last; ++s) all.push_back(s);
  std::vector<nlohmann::json> results(all.size());
  std::atomic<std::size_t> next{0};
  std::mutex io_mutex;
  std::exception_ptr failure;

  auto worker = [&] {
    for (std::size_t i = next++; i < all.size(); i = next++) {
      ExperimentConfig cfg = base;
      cfg.seed = all[i];
      cfg.out_dir = (std::filesystem::path(base.out_dir) /
                     ("seed_" + std::to_string(all[i])))
                        .string();
      try {
        const auto m = dasampler::RunPipeline(cfg);
        results[i] = dasampler::SummaryJson(m);
        std::lock_guard lock(io_mutex);
        std::cout << "seed " << all[i] << ": learned " << m.learned_accuracy
                  << "  source_only " << m.source_only << "  random_policy "
                  << m.random_policy << "  all_noisy " << m.all_noisy << "\n";
      } catch (...) {
        std::lock_guard lock(io_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int n_threads =
      std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(all.size(), 1)));
  std::vector<std::thread> pool;
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  double learned = 0.0, source_only = 0.0, random_policy = 0.0, all_noisy = 0.0;
  for (const auto& r : results) {
    learned += r["learned_policy_accuracy"].get<double>();
    source_only += r["baselines"]["source_only"].get<double>();
    random_policy += r["baselines"]["random_policy"].get<double>();
    all_noisy += r["baselines"]["all_noisy"].get<double>();
  }
  const double k = static_cast<double>(results.size());
  nlohmann::json summary = {
      {"seeds", all},
      {"runs", results},
      {"mean",
       {{"learned_policy_accuracy", learned / k},
        {"source_only", source_only / k},
        {"random_policy", random_policy / k},
        {"all_noisy", all_noisy / k}}}};
  std::filesystem::create_directories(base.out_dir);
  dasampler::WriteText(std::filesystem::path(base.out_dir) / "sweep.json",
                       summary.dump(2) + "\n");
  std::cout << "mean: learned " << learned / k << "  source_only "
            << source_only / k << "  random_policy " << random_policy / k
            << "  all_noisy " << all_noisy / k << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learned sampling policies for semi-supervised domain adaptation"};
  app.require_subcommand(1);

  CommonFlags gen_flags, train_flags, base_flags, eval_flags, sweep_flags;
  auto* gen = app.add_subcommand("gen-synth", "write synthetic feature files");
  AddCommon(gen, &gen_flags);

  auto* train = app.add_subcommand("train", "train a sampling policy");
  AddCommon(train, &train_flags);
  bool quiet = false;
  train->add_flag("--quiet", quiet, "suppress progress output");

  auto* baseline = app.add_subcommand("baseline", "score one baseline");
  AddCommon(baseline, &base_flags);
  std::string kind;
  baseline->add_option("--kind", kind, "source_only | random_policy | all_noisy")
      ->required();

  auto* eval = app.add_subcommand("eval", "score a saved policy");
  AddCommon(eval, &eval_flags);
  std::string checkpoint;
  eval->add_option("--checkpoint", checkpoint, "policy.dqnc file")
      ->required()
      ->check(CLI::ExistingFile);

  auto* sweep = app.add_subcommand("sweep", "train over a range of seeds");
  AddCommon(sweep, &sweep_flags);
  std::string seeds;
  int jobs = 1;
  sweep->add_option("--seeds", seeds, "seed range a..b (inclusive)")->required();
  sweep->add_option("--jobs", jobs, "concurrent runs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return GenSynth(gen_flags);
    if (*train) return Train(train_flags, quiet);
    if (*baseline) return Baseline(base_flags, kind);
    if (*eval) return Eval(eval_flags, checkpoint);
    if (*sweep) return Sweep(sweep_flags, seeds, jobs);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
