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

#ifndef DASAMPLER_PARTITION_HPP_
#define DASAMPLER_PARTITION_HPP_

// Splits the target domain into the annotated reward set, the initial
// noisily-labeled positive set, and the remaining candidate pool, using
// distances to the domain discriminator's hyperplane as sampling weights.

#include "json.hpp"

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "dasampler/dataset.hpp"
#include "dasampler/errors.hpp"
#include "dasampler/linsvm.hpp"
#include "dasampler/random.hpp"

namespace dasampler {

// Clamp applied to hyperplane distances before they become weights.
inline constexpr double kDistanceFloor = 1e-3;

struct LabeledId {
  SampleId id = 0;
  int label = 0;

  bool operator==(const LabeledId&) const = default;
};

struct PartitionResult {
  std::vector<LabeledId> reward;            // true labels
  std::vector<LabeledId> initial_positive;  // source-classifier labels
  std::vector<SampleId> pool_ids;
  std::uint64_t seed = 0;
};

// Sequential draws, each proportional to the weights still in the pool.
inline std::vector<std::size_t> WeightedSampleWithoutReplacement(
    std::span<const double> weights, std::size_t k, Rng& rng) {
  std::size_t positive = 0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw DataError("sampling weights must be finite and nonnegative");
    }
    if (w > 0.0) ++positive;
  }
  if (k > positive) {
    throw InsufficientMassError("cannot draw " + std::to_string(k) +
                                " items from " + std::to_string(positive) +
                                " with positive weight");
  }
  std::vector<double> remaining(weights.begin(), weights.end());
  std::vector<std::size_t> drawn;
  drawn.reserve(k);
  for (std::size_t draw = 0; draw < k; ++draw) {
    double total = 0.0;
    for (double w : remaining) total += w;
    const double u = UniformUnit(rng) * total;
    double acc = 0.0;
    std::size_t pick = remaining.size();
    std::size_t last_positive = remaining.size();
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      if (remaining[i] <= 0.0) continue;
      last_positive = i;
      acc += remaining[i];
      if (u < acc) {
        pick = i;
        break;
      }
    }
    if (pick == remaining.size()) pick = last_positive;  // rounding at the top
    drawn.push_back(pick);
    remaining[pick] = 0.0;
  }
  return drawn;
}

// Flips the hyperplane if needed so target samples have positive mean
// signed distance.
inline LinearModel OrientTowardTarget(LinearModel dom, const Dataset& target) {
  double mean = 0.0;
  for (SampleId id : target.ids()) mean += SignedDistance(dom, target.row(id));
  if (mean < 0.0) {
    dom.weights = -dom.weights;
    dom.bias = -dom.bias;
  }
  return dom;
}

// Binary source (-1) vs target (+1) SVM, oriented toward the target.
inline LinearModel TrainDomainDiscriminator(const Dataset& source,
                                            const Dataset& target,
                                            const SvmOptions& opt) {
  if (source.dim() != target.dim()) {
    throw DimensionError("source and target feature dims differ");
  }
  FeatureMatrix x(static_cast<Eigen::Index>(source.size() + target.size()),
                  source.dim());
  x.topRows(static_cast<Eigen::Index>(source.size())) = source.features();
  x.bottomRows(static_cast<Eigen::Index>(target.size())) = target.features();
  std::vector<int> y(source.size(), -1);
  y.resize(source.size() + target.size(), 1);
  return OrientTowardTarget(TrainBinary(x, y, opt), target);
}

// Class-stratified draw of k_per_class annotated target samples, weighted
// by max(d_i, floor) so samples far on the target side are favoured.
inline std::vector<LabeledId> BuildRewardSet(const Dataset& target,
                                             const LinearModel& c_dom,
                                             int k_per_class, int n_classes,
                                             const GroundTruth& truth,
                                             Rng& rng) {
  if (truth.size() != target.size()) {
    throw ConsistencyError("ground truth does not cover the target domain");
  }
  std::vector<std::vector<SampleId>> by_class(static_cast<std::size_t>(n_classes));
  for (SampleId id : target.ids()) {
    const int y = truth.Label(id);
    if (y < 0 || y >= n_classes) throw DataError("target label out of range");
    by_class[static_cast<std::size_t>(y)].push_back(id);
  }
  std::vector<LabeledId> out;
  for (int c = 0; c < n_classes; ++c) {
    const auto& members = by_class[static_cast<std::size_t>(c)];
    if (static_cast<int>(members.size()) < k_per_class) {
      throw BudgetError("class " + std::to_string(c) + " has " +
                        std::to_string(members.size()) +
                        " target samples, fewer than k = " +
                        std::to_string(k_per_class));
    }
    std::vector<double> w(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
      w[i] = std::max(SignedDistance(c_dom, target.row(members[i])),
                      kDistanceFloor);
    }
    for (std::size_t i : WeightedSampleWithoutReplacement(
             w, static_cast<std::size_t>(k_per_class), rng)) {
      out.push_back({members[i], c});
    }
  }
  return out;
}

// Draws l target samples outside `excluded`, weighted by
// 1 / max(|d_i|, floor) so samples near the hyperplane are favoured, and
// labels them with the source classifier.
inline std::vector<LabeledId> BuildInitialPositiveSet(
    const Dataset& target, const LinearModel& c_dom,
    const MulticlassModel& c_src, int l,
    const std::unordered_set<SampleId>& excluded, Rng& rng) {
  std::vector<SampleId> eligible;
  for (SampleId id : target.ids()) {
    if (!excluded.contains(id)) eligible.push_back(id);
  }
  if (l < 0 || static_cast<std::size_t>(l) > eligible.size()) {
    throw BudgetError("initial positive set of size " + std::to_string(l) +
                      " exceeds the " + std::to_string(eligible.size()) +
                      " eligible target samples");
  }
  std::vector<double> w(eligible.size());
  for (std::size_t i = 0; i < eligible.size(); ++i) {
    const double d = SignedDistance(c_dom, target.row(eligible[i]));
    w[i] = 1.0 / std::max(std::abs(d), kDistanceFloor);
  }
  std::vector<LabeledId> out;
  for (std::size_t i :
       WeightedSampleWithoutReplacement(w, static_cast<std::size_t>(l), rng)) {
    const SampleId id = eligible[i];
    out.push_back({id, Predict(c_src, target.row(id))});
  }
  return out;
}

inline PartitionResult BuildPartition(const Dataset& target,
                                      const LinearModel& c_dom,
                                      const MulticlassModel& c_src,
                                      const GroundTruth& truth,
                                      int k_per_class, int l,
                                      std::uint64_t seed) {
  Rng rng(seed);
  PartitionResult result;
  result.seed = seed;
  result.reward =
      BuildRewardSet(target, c_dom, k_per_class, c_src.n(), truth, rng);
  std::unordered_set<SampleId> taken;
  for (const auto& r : result.reward) taken.insert(r.id);
  result.initial_positive =
      BuildInitialPositiveSet(target, c_dom, c_src, l, taken, rng);
  for (const auto& p : result.initial_positive) taken.insert(p.id);
  for (SampleId id : target.ids()) {
    if (!taken.contains(id)) result.pool_ids.push_back(id);
  }
  return result;
}

inline void to_json(nlohmann::json& j, const PartitionResult& p) {
  auto split = [](const std::vector<LabeledId>& v) {
    nlohmann::json ids = nlohmann::json::array();
    nlohmann::json labels = nlohmann::json::array();
    for (const auto& x : v) {
      ids.push_back(x.id);
      labels.push_back(x.label);
    }
    return nlohmann::json{{"ids", ids}, {"labels", labels}};
  };
  j = nlohmann::json{{"seed", p.seed},
                     {"reward", split(p.reward)},
                     {"initial_positive", split(p.initial_positive)},
                     {"pool_ids", p.pool_ids}};
}

inline void from_json(const nlohmann::json& j, PartitionResult& p) {
  auto join = [](const nlohmann::json& part) {
    const auto ids = part.at("ids").get<std::vector<SampleId>>();
    const auto labels = part.at("labels").get<std::vector<int>>();
    if (ids.size() != labels.size()) {
      throw ConsistencyError("partition ids and labels differ in length");
    }
    std::vector<LabeledId> out(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) out[i] = {ids[i], labels[i]};
    return out;
  };
  p.seed = j.at("seed").get<std::uint64_t>();
  p.reward = join(j.at("reward"));
  p.initial_positive = join(j.at("initial_positive"));
  p.pool_ids = j.at("pool_ids").get<std::vector<SampleId>>();
}

}  // namespace dasampler

#endif  // DASAMPLER_PARTITION_HPP_
