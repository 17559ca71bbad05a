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

#ifndef DASAMPLER_ENV_HPP_
#define DASAMPLER_ENV_HPP_

// The sample-selection MDP. Each step offers n_cand target samples drawn
// with replacement from the pool; the agent either picks one (it joins the
// positive set with its noisy label and is flagged for the rest of the
// episode) or passes. The target classifier is retrained from scratch on
// the positive set after every pick, and the reward is the change in its
// accuracy on the annotated reward set.

#include <Eigen/Dense>

#include <algorithm>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "dasampler/dataset.hpp"
#include "dasampler/errors.hpp"
#include "dasampler/linsvm.hpp"
#include "dasampler/partition.hpp"
#include "dasampler/random.hpp"

namespace dasampler {

struct EnvConfig {
  int n_cand = 20;
  int n_bin = 10;
  int episode_length = 50;
  bool skip_retrain_on_noop = true;

  void Validate() const {
    if (n_cand < 1) throw ConfigError("n_cand must be >= 1");
    if (n_bin < 2) throw ConfigError("n_bin must be >= 2");
    if (episode_length < 1) throw ConfigError("episode_length must be >= 1");
  }

  int num_actions() const { return n_cand + 1; }
  int state_dim(int n_classes) const { return n_classes * (n_bin + n_cand); }
};

struct Transition {
  Eigen::VectorXd state;
  int action = 0;
  double reward = 0.0;
  Eigen::VectorXd next_state;
  bool done = false;
};

struct EnvState {
  Eigen::VectorXd vector;
  std::vector<LabeledId> pos;  // noisy labels
  std::vector<SampleId> cand_ids;
  std::unordered_set<SampleId> flagged;
  int step_index = 0;
  double last_accuracy = 0.0;
  bool done = false;
};

// Bin of a confidence in [0, 1] among n_bin equal-width bins; 1.0 lands in
// the last bin.
inline int ConfidenceBin(double p, int n_bin) {
  const int b = static_cast<int>(p * n_bin);
  return std::clamp(b, 0, n_bin - 1);
}

// Flattened state: for each class c, the normalized histogram of the c-th
// confidence over the positive set (n * n_bin), followed by the confidence
// vector of every candidate in order (n * n_cand).
inline Eigen::VectorXd BuildState(const MulticlassModel& c_tar,
                                  const Dataset& target,
                                  std::span<const LabeledId> pos,
                                  std::span<const SampleId> cand_ids,
                                  int n_bin) {
  if (pos.empty()) throw DataError("state needs a nonempty positive set");
  const int n = c_tar.n();
  const Eigen::Index hist_len = static_cast<Eigen::Index>(n) * n_bin;
  Eigen::VectorXd state = Eigen::VectorXd::Zero(
      hist_len + static_cast<Eigen::Index>(n) *
                     static_cast<Eigen::Index>(cand_ids.size()));
  const double unit = 1.0 / static_cast<double>(pos.size());
  for (const auto& p : pos) {
    const Eigen::VectorXd conf = Confidence(c_tar, target.row(p.id));
    for (int c = 0; c < n; ++c) {
      state(c * n_bin + ConfidenceBin(conf(c), n_bin)) += unit;
    }
  }
  for (std::size_t k = 0; k < cand_ids.size(); ++k) {
    state.segment(hist_len + static_cast<Eigen::Index>(k) * n, n) =
        Confidence(c_tar, target.row(cand_ids[k]));
  }
  return state;
}

// Fraction of the annotated samples the model classifies correctly.
inline double EvaluateAccuracy(const MulticlassModel& model,
                               const Dataset& data,
                               std::span<const LabeledId> annotated) {
  if (annotated.empty()) throw DataError("accuracy over an empty set");
  std::size_t correct = 0;
  for (const auto& a : annotated) {
    if (Predict(model, data.row(a.id)) == a.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(annotated.size());
}

inline MulticlassModel TrainOnLabeled(const Dataset& data,
                                      std::span<const LabeledId> labeled,
                                      int n_classes, const SvmOptions& opt) {
  FeatureMatrix x(static_cast<Eigen::Index>(labeled.size()), data.dim());
  std::vector<int> y(labeled.size());
  for (std::size_t i = 0; i < labeled.size(); ++i) {
    x.row(static_cast<Eigen::Index>(i)) = data.row(labeled[i].id);
    y[i] = labeled[i].label;
  }
  return TrainMulticlass(x, y, n_classes, opt);
}

class SamplingEnv {
 public:
  // `noisy_labels` holds the source classifier's prediction for every
  // target id; the reward set inside `partition` carries true labels.
  SamplingEnv(const Dataset& target, std::vector<int> noisy_labels,
              PartitionResult partition, int n_classes, EnvConfig cfg,
              SvmOptions svm)
      : target_(&target),
        noisy_labels_(std::move(noisy_labels)),
        partition_(std::move(partition)),
        n_classes_(n_classes),
        cfg_(cfg),
        svm_(svm) {
    cfg_.Validate();
    if (noisy_labels_.size() != target.size()) {
      throw ConsistencyError("noisy labels must cover every target id");
    }
    if (partition_.reward.empty()) throw DataError("empty reward set");
    if (partition_.initial_positive.empty()) {
      throw DataError("empty initial positive set");
    }
  }

  const EnvConfig& config() const { return cfg_; }
  int n_classes() const { return n_classes_; }
  int state_dim() const { return cfg_.state_dim(n_classes_); }
  int num_actions() const { return cfg_.num_actions(); }
  const EnvState& state() const { return state_; }
  const MulticlassModel& classifier() const { return c_tar_; }
  const PartitionResult& partition() const { return partition_; }
  const Dataset& target() const { return *target_; }

  const EnvState& Reset(Rng& rng) {
    state_ = EnvState{};
    state_.pos = partition_.initial_positive;
    Retrain();
    state_.last_accuracy = RewardAccuracy();
    available_ = partition_.pool_ids;
    state_.cand_ids = SampleCandidates(rng);
    state_.vector = MakeStateVector();
    return state_;
  }

  // Pool: target ids minus reward set, positive set and flagged ids.
  std::vector<SampleId> SampleCandidates(Rng& rng) const {
    if (available_.empty()) {
      throw ExhaustedPoolError("candidate pool is empty");
    }
    std::vector<SampleId> cand(static_cast<std::size_t>(cfg_.n_cand));
    for (auto& id : cand) id = available_[UniformIndex(rng, available_.size())];
    return cand;
  }

  Transition Step(int action, Rng& rng) {
    if (state_.done) throw EpisodeDoneError("step on a finished episode");
    if (action < 0 || action > cfg_.n_cand) {
      throw ActionRangeError("action " + std::to_string(action) +
                             " outside [0, " + std::to_string(cfg_.n_cand) +
                             "]");
    }
    Transition t;
    t.state = state_.vector;
    t.action = action;

    double accuracy = state_.last_accuracy;
    if (action < cfg_.n_cand) {
      const SampleId id = state_.cand_ids[static_cast<std::size_t>(action)];
      state_.pos.push_back({id, noisy_labels_[static_cast<std::size_t>(id)]});
      state_.flagged.insert(id);
      available_.erase(std::remove(available_.begin(), available_.end(), id),
                       available_.end());
      Retrain();
      accuracy = RewardAccuracy();
    } else if (!cfg_.skip_retrain_on_noop) {
      Retrain();
      accuracy = RewardAccuracy();
    }
    t.reward = accuracy - state_.last_accuracy;
    state_.last_accuracy = accuracy;
    ++state_.step_index;
    state_.done = state_.step_index >= cfg_.episode_length;
    try {
      state_.cand_ids = SampleCandidates(rng);
    } catch (const ExhaustedPoolError&) {
      state_.done = true;
    }
    state_.vector = MakeStateVector();
    t.next_state = state_.vector;
    t.done = state_.done;
    return t;
  }

 private:
  void Retrain() {
    c_tar_ = TrainOnLabeled(*target_, state_.pos, n_classes_, svm_);
  }

  double RewardAccuracy() const {
    return EvaluateAccuracy(c_tar_, *target_, partition_.reward);
  }

  Eigen::VectorXd MakeStateVector() const {
    return BuildState(c_tar_, *target_, state_.pos, state_.cand_ids,
                      cfg_.n_bin);
  }

  const Dataset* target_;
  std::vector<int> noisy_labels_;
  PartitionResult partition_;
  int n_classes_;
  EnvConfig cfg_;
  SvmOptions svm_;
  EnvState state_;
  MulticlassModel c_tar_;
  std::vector<SampleId> available_;
};

}  // namespace dasampler

#endif  // DASAMPLER_ENV_HPP_
