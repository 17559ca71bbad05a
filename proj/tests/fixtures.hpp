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

// Shared fixtures and property checks used by both the unit tests and the
// acceptance binary.

#ifndef DASAMPLER_TESTS_FIXTURES_HPP_
#define DASAMPLER_TESTS_FIXTURES_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "dasampler/dqn.hpp"
#include "dasampler/env.hpp"
#include "dasampler/harness.hpp"
#include "dasampler/linsvm.hpp"
#include "oracles.hpp"

namespace dasampler::testing {

// 50 points in two boxes centred at (-3, 0) and (3, 0), half-width 1.
struct SeparableSet {
  FeatureMatrix x;
  std::vector<int> y;
};

inline SeparableSet MakeSeparable50(std::uint64_t seed = 5) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SeparableSet s{FeatureMatrix(50, 2), std::vector<int>(50)};
  for (int i = 0; i < 50; ++i) {
    const int label = i < 25 ? -1 : 1;
    s.x(i, 0) = 3.0 * label + u(gen);
    s.x(i, 1) = u(gen);
    s.y[static_cast<std::size_t>(i)] = label;
  }
  return s;
}

// Small network for finite-difference work: value [6 -> 5 -> 1],
// advantage [6 -> 7 -> 7 -> 3].
inline NetShape TinyShape() { return NetShape{6, 3, {5}, {7, 7}}; }

// Every weight and bias drawn from N(0, scale^2).
inline DuelingNetParams RandomParams(const NetShape& shape, double scale,
                                     std::mt19937_64& gen) {
  DuelingNetParams p = InitParams(shape, gen());
  std::normal_distribution<double> normal(0.0, scale);
  for (auto t : p.Tensors()) {
    for (double& v : t) v = normal(gen);
  }
  return p;
}

inline Eigen::VectorXd RandomVector(int n, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = u(gen);
  return v;
}

inline Transition RandomTransition(const NetShape& shape,
                                   std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Transition t;
  t.state = RandomVector(shape.state_dim, gen);
  t.next_state = RandomVector(shape.state_dim, gen);
  t.action = static_cast<int>(gen() % static_cast<std::uint64_t>(shape.n_actions));
  t.reward = 0.1 * u(gen);
  t.done = gen() % 4 == 0;
  return t;
}

// Largest relative difference between the analytic gradient of the full
// loss and central differences with step h, over `transitions` random
// tiny networks. Differences are scaled by max(|analytic|, |numeric|, 1e-6).
inline double MaxGradientRelativeError(int transitions, double h,
                                       std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  const NetShape shape = TinyShape();
  AgentConfig cfg;
  cfg.weight_decay = 1e-2;
  double worst = 0.0;
  for (int n = 0; n < transitions; ++n) {
    cfg.double_q = n % 2 == 1;
    DuelingNetParams online = RandomParams(shape, 0.7, gen);
    const DuelingNetParams target = RandomParams(shape, 0.7, gen);
    const Transition t = RandomTransition(shape, gen);
    const TdGradient g = ComputeTdGradient(online, target, t, cfg);
    // The bootstrap target is a constant of the loss.
    const double y = TdTarget(online, target, t, cfg);
    std::vector<double*> coords;
    std::vector<double> analytic;
    auto pt = online.Tensors();
    auto gt = g.grads.Tensors();
    for (std::size_t i = 0; i < pt.size(); ++i) {
      for (std::size_t j = 0; j < pt[i].size(); ++j) {
        coords.push_back(&pt[i][j]);
        analytic.push_back(gt[i][j]);
      }
    }
    const std::vector<double> numeric =
        CentralDifferences(coords, [&] { return TdLoss(online, t, y, cfg); }, h);
    for (std::size_t i = 0; i < numeric.size(); ++i) {
      const double scale =
          std::max({std::abs(analytic[i]), std::abs(numeric[i]), 1e-6});
      worst = std::max(worst, std::abs(analytic[i] - numeric[i]) / scale);
    }
  }
  return worst;
}

// Largest |mean_a pre_q(a) - V(s)| over random states and networks.
inline double MaxDuelingIdentityError(int draws, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  const NetShape shape{150, 21, {150}, {64, 64}};
  double worst = 0.0;
  DuelingNetParams params = InitParams(shape, gen());
  for (int d = 0; d < draws; ++d) {
    if (d % 50 == 0) params = RandomParams(shape, 0.2, gen);
    const ForwardPass f =
        ForwardWithCache(params, RandomVector(shape.state_dim, gen), false);
    worst = std::max(worst, std::abs(f.pre_q.mean() - f.value));
  }
  return worst;
}

// Largest |sum of rewards - (final - initial reward-set accuracy)| over
// episodes of uniformly random actions.
inline double MaxTelescopingError(const PreparedTask& task,
                                  const ExperimentConfig& cfg, int episodes,
                                  std::uint64_t seed) {
  double worst = 0.0;
  Rng rng(seed);
  for (int e = 0; e < episodes; ++e) {
    SamplingEnv env = MakeEnv(task, cfg);
    env.Reset(rng);
    const double initial = EvaluateAccuracy(env.classifier(), task.target,
                                            task.partition.reward);
    double total = 0.0;
    while (!env.state().done) {
      const int a = static_cast<int>(
          UniformIndex(rng, static_cast<std::size_t>(env.num_actions())));
      total += env.Step(a, rng).reward;
    }
    const double final_acc = EvaluateAccuracy(env.classifier(), task.target,
                                              task.partition.reward);
    worst = std::max(worst, std::abs(total - (final_acc - initial)));
  }
  return worst;
}

}  // namespace dasampler::testing

#endif  // DASAMPLER_TESTS_FIXTURES_HPP_
