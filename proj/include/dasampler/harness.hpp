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

#ifndef DASAMPLER_HARNESS_HPP_
#define DASAMPLER_HARNESS_HPP_

// Experiment configuration, the end-to-end training pipeline, final policy
// evaluation, baselines, and the trace/summary outputs.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "dasampler/dataset.hpp"
#include "dasampler/dqn.hpp"
#include "dasampler/env.hpp"
#include "dasampler/errors.hpp"
#include "dasampler/linsvm.hpp"
#include "dasampler/partition.hpp"
#include "dasampler/random.hpp"

namespace dasampler {

struct FileSource {
  std::string source_features;
  std::string source_labels;
  std::string target_features;
  // Required: the reward-set annotations are read from it, and the final
  // evaluation uses it unless evaluate_on_all_target is off.
  std::string target_labels;
};

struct ExperimentConfig {
  std::optional<SynthConfig> synthetic;
  std::optional<FileSource> files;
  int n_classes = 5;
  int k_per_class = 3;
  int l = 100;
  EnvConfig env;
  AgentConfig agent;
  SvmOptions svm;
  bool normalize_features = false;
  bool evaluate_on_all_target = true;
  std::uint64_t seed = 0;
  std::string out_dir = "out";

  void Validate() const {
    if (synthetic.has_value() == files.has_value()) {
      throw ConfigError("exactly one of \"synthetic\" and \"files\" is required");
    }
    if (synthetic) {
      synthetic->Validate();
      if (synthetic->n_classes != n_classes) {
        throw ConfigError("synthetic.n_classes differs from n_classes");
      }
    }
    if (n_classes < 2) throw ConfigError("n_classes must be >= 2");
    if (k_per_class < 1) throw ConfigError("k_per_class must be >= 1");
    if (l < 1) throw ConfigError("l must be >= 1");
    if (!(svm.C > 0.0) || !(svm.tol > 0.0) || svm.max_epochs < 1) {
      throw ConfigError("svm C and tol must be > 0, max_epochs >= 1");
    }
    env.Validate();
    agent.Validate();
  }
};

// --- JSON. Missing keys keep their defaults.

namespace harness_detail {
template <typename T>
void Take(const nlohmann::json& j, const char* key, T& field) {
  if (j.contains(key)) j.at(key).get_to(field);
}
}  // namespace harness_detail

inline void to_json(nlohmann::json& j, const SynthConfig& c) {
  j = {{"n_classes", c.n_classes},
       {"dim", c.dim},
       {"samples_per_class_source", c.samples_per_class_source},
       {"samples_per_class_target", c.samples_per_class_target},
       {"shift_scale", c.shift_scale},
       {"noise_sigma", c.noise_sigma},
       {"class_separation", c.class_separation}};
}

inline void from_json(const nlohmann::json& j, SynthConfig& c) {
  using harness_detail::Take;
  Take(j, "n_classes", c.n_classes);
  Take(j, "dim", c.dim);
  Take(j, "samples_per_class_source", c.samples_per_class_source);
  Take(j, "samples_per_class_target", c.samples_per_class_target);
  Take(j, "shift_scale", c.shift_scale);
  Take(j, "noise_sigma", c.noise_sigma);
  Take(j, "class_separation", c.class_separation);
}

inline void to_json(nlohmann::json& j, const FileSource& f) {
  j = {{"source_features", f.source_features},
       {"source_labels", f.source_labels},
       {"target_features", f.target_features},
       {"target_labels", f.target_labels}};
}

inline void from_json(const nlohmann::json& j, FileSource& f) {
  j.at("source_features").get_to(f.source_features);
  j.at("source_labels").get_to(f.source_labels);
  j.at("target_features").get_to(f.target_features);
  j.at("target_labels").get_to(f.target_labels);
}

inline void to_json(nlohmann::json& j, const EnvConfig& c) {
  j = {{"n_cand", c.n_cand},
       {"n_bin", c.n_bin},
       {"episode_length", c.episode_length},
       {"skip_retrain_on_noop", c.skip_retrain_on_noop}};
}

inline void from_json(const nlohmann::json& j, EnvConfig& c) {
  using harness_detail::Take;
  Take(j, "n_cand", c.n_cand);
  Take(j, "n_bin", c.n_bin);
  Take(j, "episode_length", c.episode_length);
  Take(j, "skip_retrain_on_noop", c.skip_retrain_on_noop);
}

inline void to_json(nlohmann::json& j, const AgentConfig& c) {
  j = {{"learning_rate", c.learning_rate},
       {"gamma", c.gamma},
       {"weight_decay", c.weight_decay},
       {"sync_period", c.sync_period},
       {"eps_start", c.eps_start},
       {"eps_end", c.eps_end},
       {"eps_decay_iters", c.eps_decay_iters},
       {"total_iters", c.total_iters},
       {"double_q", c.double_q},
       {"replay_capacity", c.replay_capacity},
       {"replay_batch", c.replay_batch},
       {"adam_beta1", c.adam_beta1},
       {"adam_beta2", c.adam_beta2},
       {"adam_eps", c.adam_eps},
       {"advantage_hidden", c.advantage_hidden},
       {"value_hidden", c.value_hidden}};
}

inline void from_json(const nlohmann::json& j, AgentConfig& c) {
  using harness_detail::Take;
  Take(j, "learning_rate", c.learning_rate);
  Take(j, "gamma", c.gamma);
  Take(j, "weight_decay", c.weight_decay);
  Take(j, "sync_period", c.sync_period);
  Take(j, "eps_start", c.eps_start);
  Take(j, "eps_end", c.eps_end);
  Take(j, "eps_decay_iters", c.eps_decay_iters);
  Take(j, "total_iters", c.total_iters);
  Take(j, "double_q", c.double_q);
  Take(j, "replay_capacity", c.replay_capacity);
  Take(j, "replay_batch", c.replay_batch);
  Take(j, "adam_beta1", c.adam_beta1);
  Take(j, "adam_beta2", c.adam_beta2);
  Take(j, "adam_eps", c.adam_eps);
  Take(j, "advantage_hidden", c.advantage_hidden);
  Take(j, "value_hidden", c.value_hidden);
}

inline void to_json(nlohmann::json& j, const SvmOptions& c) {
  j = {{"C", c.C}, {"tol", c.tol}, {"max_epochs", c.max_epochs}};
}

inline void from_json(const nlohmann::json& j, SvmOptions& c) {
  using harness_detail::Take;
  Take(j, "C", c.C);
  Take(j, "tol", c.tol);
  Take(j, "max_epochs", c.max_epochs);
}

inline void to_json(nlohmann::json& j, const ExperimentConfig& c) {
  j = {{"n_classes", c.n_classes},
       {"k_per_class", c.k_per_class},
       {"l", c.l},
       {"env", c.env},
       {"agent", c.agent},
       {"svm", c.svm},
       {"normalize_features", c.normalize_features},
       {"evaluate_on_all_target", c.evaluate_on_all_target},
       {"seed", c.seed},
       {"out_dir", c.out_dir}};
  if (c.synthetic) j["synthetic"] = *c.synthetic;
  if (c.files) j["files"] = *c.files;
}

inline void from_json(const nlohmann::json& j, ExperimentConfig& c) {
  using harness_detail::Take;
  if (j.contains("synthetic")) c.synthetic = j.at("synthetic").get<SynthConfig>();
  if (j.contains("files")) c.files = j.at("files").get<FileSource>();
  Take(j, "n_classes", c.n_classes);
  Take(j, "k_per_class", c.k_per_class);
  Take(j, "l", c.l);
  Take(j, "env", c.env);
  Take(j, "agent", c.agent);
  Take(j, "svm", c.svm);
  Take(j, "normalize_features", c.normalize_features);
  Take(j, "evaluate_on_all_target", c.evaluate_on_all_target);
  Take(j, "seed", c.seed);
  Take(j, "out_dir", c.out_dir);
  if (c.synthetic && !j.at("synthetic").contains("n_classes")) {
    c.synthetic->n_classes = c.n_classes;
  }
}

inline ExperimentConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed config " + path.string() + ": " + e.what());
  }
  return j.get<ExperimentConfig>();
}

// Hash of the canonical config document, seed included. out_dir is left
// out so a sweep's runs differ only by seed.
inline std::string ConfigHash(const ExperimentConfig& cfg) {
  nlohmann::json j = cfg;
  j.erase("out_dir");
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(Fnv1a64(j.dump())));
  return buf;
}

// The desk-scale synthetic task: 5 classes in 16 dims, 100 samples per
// class in each domain, affine shift of magnitude 2.
inline ExperimentConfig SyntheticTaskConfig(std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.synthetic = SynthConfig{};
  cfg.seed = seed;
  return cfg;
}

// ---------------------------------------------------------------------------
// Pipeline stages.

// Everything fixed before the agent starts: data, the source classifier,
// the domain discriminator and the target partition.
struct PreparedTask {
  Dataset source;
  Dataset target;
  GroundTruth truth;
  MulticlassModel c_src;
  LinearModel c_dom;
  std::vector<int> noisy_labels;  // c_src prediction per target id
  PartitionResult partition;
};

inline PreparedTask PrepareTask(const ExperimentConfig& cfg) {
  cfg.Validate();
  PreparedTask task;
  if (cfg.synthetic) {
    SynthConfig sc = *cfg.synthetic;
    sc.seed = SubstreamSeed(cfg.seed, "data");
    SynthData data = SynthGenerate(sc);
    task.source = std::move(data.source);
    task.target = std::move(data.target);
    task.truth = std::move(data.target_truth);
  } else {
    task.source = LoadFeatureMatrix(cfg.files->source_features,
                                    cfg.files->source_labels, Domain::kSource);
    task.target = LoadFeatureMatrix(cfg.files->target_features, std::nullopt,
                                    Domain::kTarget);
    task.truth = GroundTruth(ReadLabels(cfg.files->target_labels));
    if (task.truth.size() != task.target.size()) {
      throw ConsistencyError("target label file does not match target features");
    }
    if (!task.source.has_labels()) {
      throw DataError("source labels are required");
    }
  }
  if (cfg.normalize_features) {
    task.source = L2Normalized(task.source);
    task.target = L2Normalized(task.target);
  }
  task.source.CheckLabelRange(cfg.n_classes);
  for (int y : task.truth.all()) {
    if (y < 0 || y >= cfg.n_classes) throw DataError("target label out of range");
  }

  SvmOptions src_opt = cfg.svm;
  src_opt.seed = SubstreamSeed(cfg.seed, "c_src");
  task.c_src = TrainMulticlass(task.source.features(), task.source.labels(),
                               cfg.n_classes, src_opt);
  SvmOptions dom_opt = cfg.svm;
  dom_opt.seed = SubstreamSeed(cfg.seed, "c_dom");
  task.c_dom = TrainDomainDiscriminator(task.source, task.target, dom_opt);

  task.noisy_labels.resize(task.target.size());
  for (SampleId id : task.target.ids()) {
    task.noisy_labels[static_cast<std::size_t>(id)] =
        Predict(task.c_src, task.target.row(id));
  }
  task.partition =
      BuildPartition(task.target, task.c_dom, task.c_src, task.truth,
                     cfg.k_per_class, cfg.l, SubstreamSeed(cfg.seed, "partition"));
  return task;
}

inline SvmOptions TargetSvmOptions(const ExperimentConfig& cfg) {
  SvmOptions opt = cfg.svm;
  opt.seed = SubstreamSeed(cfg.seed, "c_tar");
  return opt;
}

inline SamplingEnv MakeEnv(const PreparedTask& task,
                           const ExperimentConfig& cfg) {
  return SamplingEnv(task.target, task.noisy_labels, task.partition,
                     cfg.n_classes, cfg.env, TargetSvmOptions(cfg));
}

// Maps a state vector to an action in [0, n_cand].
using Policy = std::function<int(const Eigen::VectorXd&)>;

struct FinalEvaluation {
  double accuracy = 0.0;
  bool restricted_to_reward_set = false;
  int picks = 0;
  std::size_t pos_size = 0;
};

// One episode from the initial positive set under `policy`, then the
// accuracy of the resulting target classifier over every labeled target
// sample (or over the reward set alone when full labels are not to be
// used). Candidate draws come from the "eval" stream, so two policies are
// scored on identical candidate sequences.
inline FinalEvaluation EvaluateFinal(const Policy& policy,
                                     const PreparedTask& task,
                                     const ExperimentConfig& cfg) {
  SamplingEnv env = MakeEnv(task, cfg);
  Rng rng = MakeSubstream(cfg.seed, "eval");
  env.Reset(rng);
  FinalEvaluation out;
  while (!env.state().done) {
    const int a = policy(env.state().vector);
    if (a < cfg.env.n_cand) ++out.picks;
    env.Step(a, rng);
  }
  out.pos_size = env.state().pos.size();
  if (cfg.evaluate_on_all_target && !task.truth.empty()) {
    std::vector<LabeledId> all(task.target.size());
    for (SampleId id : task.target.ids()) {
      all[static_cast<std::size_t>(id)] = {id, task.truth.Label(id)};
    }
    out.accuracy = EvaluateAccuracy(env.classifier(), task.target, all);
  } else {
    out.restricted_to_reward_set = true;
    out.accuracy =
        EvaluateAccuracy(env.classifier(), task.target, task.partition.reward);
  }
  return out;
}

enum class BaselineKind { kSourceOnly, kRandomPolicy, kAllNoisy };

inline BaselineKind ParseBaselineKind(const std::string& s) {
  if (s == "source_only") return BaselineKind::kSourceOnly;
  if (s == "random_policy") return BaselineKind::kRandomPolicy;
  if (s == "all_noisy") return BaselineKind::kAllNoisy;
  throw ConfigError("unknown baseline kind \"" + s +
                    "\" (expected source_only, random_policy or all_noisy)");
}

inline const char* BaselineName(BaselineKind k) {
  switch (k) {
    case BaselineKind::kSourceOnly:
      return "source_only";
    case BaselineKind::kRandomPolicy:
      return "random_policy";
    case BaselineKind::kAllNoisy:
      return "all_noisy";
  }
  return "?";
}

inline std::vector<LabeledId> AllTargetTruth(const PreparedTask& task) {
  std::vector<LabeledId> all(task.target.size());
  for (SampleId id : task.target.ids()) {
    all[static_cast<std::size_t>(id)] = {id, task.truth.Label(id)};
  }
  return all;
}

inline double RunBaseline(const PreparedTask& task, const ExperimentConfig& cfg,
                          BaselineKind kind) {
  switch (kind) {
    case BaselineKind::kSourceOnly:
      return EvaluateAccuracy(task.c_src, task.target, AllTargetTruth(task));
    case BaselineKind::kRandomPolicy: {
      Rng rng = MakeSubstream(cfg.seed, "random_policy");
      const int n_actions = cfg.env.num_actions();
      Policy random = [&](const Eigen::VectorXd&) {
        return static_cast<int>(
            UniformIndex(rng, static_cast<std::size_t>(n_actions)));
      };
      return EvaluateFinal(random, task, cfg).accuracy;
    }
    case BaselineKind::kAllNoisy: {
      std::vector<LabeledId> noisy(task.target.size());
      for (SampleId id : task.target.ids()) {
        noisy[static_cast<std::size_t>(id)] = {
            id, task.noisy_labels[static_cast<std::size_t>(id)]};
      }
      const MulticlassModel m =
          TrainOnLabeled(task.target, noisy, cfg.n_classes, TargetSvmOptions(cfg));
      return EvaluateAccuracy(m, task.target, AllTargetTruth(task));
    }
  }
  return 0.0;
}

inline double RunBaseline(const ExperimentConfig& cfg, BaselineKind kind) {
  return RunBaseline(PrepareTask(cfg), cfg, kind);
}

// ---------------------------------------------------------------------------
// Training run.

struct TraceRow {
  long long iteration = 0;
  long long episode = 0;
  int step = 0;
  int action = 0;
  double reward = 0.0;
  double accuracy = 0.0;
  double epsilon = 0.0;
  std::size_t pos_size = 0;
};

struct RunMetrics {
  std::vector<TraceRow> trace;
  std::vector<double> reward_accuracy_curve;  // reward-set accuracy at episode end
  double initial_reward_accuracy = 0.0;
  double learned_accuracy = 0.0;
  double source_only = 0.0;
  double random_policy = 0.0;
  double all_noisy = 0.0;
  bool eval_restricted_to_reward_set = false;
  int state_dim = 0;
  int n_actions = 0;
  long long episodes = 0;
  long long syncs = 0;
  double wall_clock_seconds = 0.0;
  std::uint64_t seed = 0;
  std::string config_hash;
};

inline std::string TraceCsv(const std::vector<TraceRow>& rows) {
  std::string out =
      "iteration,episode,step,action,reward,accuracy,epsilon,pos_size\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%lld,%lld,%d,%d,%.17g,%.17g,%.17g,%zu\n",
                  r.iteration, r.episode, r.step, r.action, r.reward,
                  r.accuracy, r.epsilon, r.pos_size);
    out += buf;
  }
  return out;
}

inline nlohmann::json SummaryJson(const RunMetrics& m) {
  return {{"seed", m.seed},
          {"config_hash", m.config_hash},
          {"state_dim", m.state_dim},
          {"n_actions", m.n_actions},
          {"iterations", m.trace.size()},
          {"episodes", m.episodes},
          {"target_syncs", m.syncs},
          {"learned_policy_accuracy", m.learned_accuracy},
          {"baselines",
           {{"source_only", m.source_only},
            {"random_policy", m.random_policy},
            {"all_noisy", m.all_noisy}}},
          {"initial_reward_accuracy", m.initial_reward_accuracy},
          {"reward_accuracy_curve", m.reward_accuracy_curve},
          {"eval_restricted_to_reward_set", m.eval_restricted_to_reward_set},
          {"wall_clock_seconds", m.wall_clock_seconds}};
}

struct TrainedRun {
  RunMetrics metrics;
  std::optional<QAgent> agent;
  PreparedTask task;
};

// Trains the agent for total_iters environment steps on a prepared task,
// then scores the greedy policy and the three baselines.
inline TrainedRun TrainAndEvaluate(const ExperimentConfig& cfg,
                                   std::ostream* progress = nullptr) {
  const auto start = std::chrono::steady_clock::now();
  TrainedRun run;
  run.task = PrepareTask(cfg);
  const PreparedTask& task = run.task;
  RunMetrics& m = run.metrics;
  m.seed = cfg.seed;
  m.config_hash = ConfigHash(cfg);

  SamplingEnv env = MakeEnv(task, cfg);
  m.state_dim = env.state_dim();
  m.n_actions = env.num_actions();
  run.agent.emplace(m.state_dim, m.n_actions, cfg.agent,
                    SubstreamSeed(cfg.seed, "agent"));
  QAgent& agent = *run.agent;
  Rng env_rng = MakeSubstream(cfg.seed, "env");
  Rng agent_rng = MakeSubstream(cfg.seed, "explore");

  env.Reset(env_rng);
  m.initial_reward_accuracy = env.state().last_accuracy;
  long long episode = 0;
  m.trace.reserve(static_cast<std::size_t>(cfg.agent.total_iters));
  for (long long it = 0; it < cfg.agent.total_iters; ++it) {
    if (env.state().done) {
      env.Reset(env_rng);
      ++episode;
    }
    const double eps = EpsilonAt(cfg.agent, it);
    const int action = agent.Act(env.state().vector, it, agent_rng);
    const Transition t = env.Step(action, env_rng);
    agent.Observe(t, agent_rng);
    m.trace.push_back({it, episode, env.state().step_index, action, t.reward,
                       env.state().last_accuracy, eps, env.state().pos.size()});
    if (t.done) m.reward_accuracy_curve.push_back(env.state().last_accuracy);
    if (progress && (it + 1) % 1000 == 0) {
      *progress << "iteration " << (it + 1) << "/" << cfg.agent.total_iters
                << "  episode " << episode << "  reward-set accuracy "
                << env.state().last_accuracy << "\n";
    }
  }
  m.episodes = episode + 1;
  m.syncs = agent.syncs();

  Policy greedy = [&](const Eigen::VectorXd& s) { return agent.ActGreedy(s); };
  const FinalEvaluation fe = EvaluateFinal(greedy, task, cfg);
  m.learned_accuracy = fe.accuracy;
  m.eval_restricted_to_reward_set = fe.restricted_to_reward_set;
  m.source_only = RunBaseline(task, cfg, BaselineKind::kSourceOnly);
  m.random_policy = RunBaseline(task, cfg, BaselineKind::kRandomPolicy);
  m.all_noisy = RunBaseline(task, cfg, BaselineKind::kAllNoisy);
  for (double v : {m.learned_accuracy, m.source_only, m.random_policy,
                   m.all_noisy, m.initial_reward_accuracy}) {
    if (!std::isfinite(v)) throw NumericError("non-finite summary metric");
  }
  m.wall_clock_seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
  return run;
}

inline void WriteText(const std::filesystem::path& path, const std::string& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << s;
}

// Full run: trains, evaluates, and writes trace.csv, summary.json,
// partition.json and policy.dqnc under cfg.out_dir.
inline RunMetrics RunPipeline(const ExperimentConfig& cfg,
                              std::ostream* progress = nullptr) {
  TrainedRun run = TrainAndEvaluate(cfg, progress);
  const std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  WriteText(dir / "trace.csv", TraceCsv(run.metrics.trace));
  nlohmann::json summary = SummaryJson(run.metrics);
  summary["config"] = cfg;
  WriteText(dir / "summary.json", summary.dump(2) + "\n");
  WriteText(dir / "partition.json",
            nlohmann::json(run.task.partition).dump() + "\n");
  SaveCheckpoint(dir / "policy.dqnc", *run.agent);
  return run.metrics;
}

// Greedy evaluation of a saved policy on the task defined by cfg.
inline FinalEvaluation EvaluateCheckpoint(const std::filesystem::path& path,
                                          const ExperimentConfig& cfg) {
  const PreparedTask task = PrepareTask(cfg);
  const Checkpoint ck = LoadCheckpoint(path);
  const int expected = cfg.env.state_dim(cfg.n_classes);
  if (ck.online.state_dim() != expected ||
      ck.online.n_actions() != cfg.env.num_actions()) {
    throw DimensionError("checkpoint shape does not match the config");
  }
  Policy greedy = [&](const Eigen::VectorXd& s) {
    return GreedyAction(ck.online, s);
  };
  return EvaluateFinal(greedy, task, cfg);
}

}  // namespace dasampler

#endif  // DASAMPLER_HARNESS_HPP_
