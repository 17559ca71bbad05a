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

#include "dasampler/env.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <unordered_set>
#include <vector>

#include "dasampler/harness.hpp"
#include "oracles.hpp"

namespace dasampler {
namespace {

// Two clusters on the x axis; ids 0..n-1 alternate between classes.
struct TinyWorld {
  Dataset target;
  std::vector<int> labels;
};

TinyWorld MakeTinyWorld(int n) {
  FeatureMatrix f(n, 2);
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int c = i % 2;
    f(i, 0) = c == 0 ? -2.0 - 0.1 * i : 2.0 + 0.1 * i;
    f(i, 1) = 0.05 * i;
    labels[static_cast<std::size_t>(i)] = c;
  }
  return {Dataset(std::move(f), std::nullopt, Domain::kTarget), labels};
}

PartitionResult TinyPartition(std::vector<SampleId> pool) {
  PartitionResult p;
  p.reward = {{0, 0}, {1, 1}};
  p.initial_positive = {{2, 0}, {3, 1}};
  p.pool_ids = std::move(pool);
  return p;
}

EnvConfig SmallEnvConfig() {
  EnvConfig c;
  c.n_cand = 4;
  c.n_bin = 5;
  c.episode_length = 10;
  return c;
}

class SyntheticEnvTest : public ::testing::Test {
 protected:
  void SetUp() override {
    cfg_ = SyntheticTaskConfig(11);
    task_ = PrepareTask(cfg_);
  }
  ExperimentConfig cfg_;
  PreparedTask task_;
};

TEST(ConfidenceBinTest, Edges) {
  EXPECT_EQ(ConfidenceBin(0.0, 10), 0);
  EXPECT_EQ(ConfidenceBin(0.0999, 10), 0);
  EXPECT_EQ(ConfidenceBin(0.35, 10), 3);
  EXPECT_EQ(ConfidenceBin(0.999, 10), 9);
  EXPECT_EQ(ConfidenceBin(1.0, 10), 9);
}

TEST(EnvConfigTest, PaperScaleShapes) {
  const EnvConfig c;
  EXPECT_EQ(c.state_dim(31), 930);
  EXPECT_EQ(c.num_actions(), 21);
  EXPECT_EQ(c.state_dim(5), 150);
}

TEST(BuildStateTest, OneHotPlacement) {
  // One sample at the origin under a zero model: every class confidence
  // is 1/3, which lands in bin 1 of 5.
  const MulticlassModel zero{{LinearModel{Eigen::Vector2d::Zero(), 0.0},
                              LinearModel{Eigen::Vector2d::Zero(), 0.0},
                              LinearModel{Eigen::Vector2d::Zero(), 0.0}}};
  FeatureMatrix f = FeatureMatrix::Zero(1, 2);
  const Dataset d(std::move(f), std::nullopt, Domain::kTarget);
  const std::vector<LabeledId> pos{{0, 0}};
  const std::vector<SampleId> cand{0, 0};
  const Eigen::VectorXd s = BuildState(zero, d, pos, cand, 5);
  ASSERT_EQ(s.size(), 3 * 5 + 3 * 2);
  for (int c = 0; c < 3; ++c) {
    for (int b = 0; b < 5; ++b) {
      EXPECT_EQ(s(c * 5 + b), b == 1 ? 1.0 : 0.0) << c << "," << b;
    }
  }
  for (int i = 15; i < 21; ++i) EXPECT_DOUBLE_EQ(s(i), 1.0 / 3.0);
}

TEST(BuildStateTest, MatchesNaiveHistogram) {
  Rng rng(31);
  std::normal_distribution<double> normal(0.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 6;
    const int dim = 3;
    const int m = 5 + trial % 17;
    const int n_bin = 2 + trial % 9;
    MulticlassModel model;
    for (int c = 0; c < n; ++c) {
      LinearModel lm{Eigen::VectorXd(dim), normal(rng)};
      for (int j = 0; j < dim; ++j) lm.weights(j) = normal(rng);
      model.per_class.push_back(lm);
    }
    FeatureMatrix f(m, dim);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < dim; ++j) f(i, j) = normal(rng);
    }
    const Dataset d(std::move(f), std::nullopt, Domain::kTarget);
    std::vector<LabeledId> pos;
    Eigen::MatrixXd conf(m, n);
    for (int i = 0; i < m; ++i) {
      pos.push_back({i, 0});
      conf.row(i) = Confidence(model, d.row(i)).transpose();
    }
    const std::vector<SampleId> cand{0, static_cast<SampleId>(m - 1)};
    const Eigen::VectorXd s = BuildState(model, d, pos, cand, n_bin);
    const Eigen::MatrixXd hist = testing::NaiveHistogram(conf, n_bin);
    for (int c = 0; c < n; ++c) {
      for (int b = 0; b < n_bin; ++b) {
        EXPECT_NEAR(s(c * n_bin + b), hist(c, b), 1e-12);
      }
    }
    const Eigen::Index tail = static_cast<Eigen::Index>(n) * n_bin;
    EXPECT_TRUE(s.segment(tail, n).isApprox(conf.row(0).transpose()));
    EXPECT_TRUE(s.segment(tail + n, n).isApprox(conf.row(m - 1).transpose()));
  }
}

TEST(BuildStateTest, EmptyPositiveSetRejected) {
  const TinyWorld w = MakeTinyWorld(4);
  const MulticlassModel m{{ConstantModel(2, 1.0), ConstantModel(2, -1.0)}};
  EXPECT_THROW(BuildState(m, w.target, {}, std::vector<SampleId>{0}, 5),
               DataError);
}

TEST(EvaluateAccuracyTest, PerfectAndChance) {
  const TinyWorld w = MakeTinyWorld(8);
  std::vector<LabeledId> all;
  for (int i = 0; i < 8; ++i) all.push_back({i, w.labels[static_cast<std::size_t>(i)]});
  const MulticlassModel model =
      TrainOnLabeled(w.target, all, 2, SvmOptions{});
  EXPECT_EQ(EvaluateAccuracy(model, w.target, all), 1.0);

  // A constant classifier over 31 classes, one sample each.
  FeatureMatrix f = FeatureMatrix::Zero(31, 2);
  const Dataset d(std::move(f), std::nullopt, Domain::kTarget);
  MulticlassModel constant;
  for (int c = 0; c < 31; ++c) constant.per_class.push_back(ConstantModel(2, c == 4 ? 1.0 : -1.0));
  std::vector<LabeledId> one_each;
  for (int c = 0; c < 31; ++c) one_each.push_back({c, c});
  EXPECT_DOUBLE_EQ(EvaluateAccuracy(constant, d, one_each), 1.0 / 31.0);
  EXPECT_THROW(EvaluateAccuracy(constant, d, {}), DataError);
}

TEST_F(SyntheticEnvTest, AccuracyMatchesNaiveLoop) {
  const auto all = AllTargetTruth(task_);
  int correct = 0;
  for (const auto& a : all) {
    const Eigen::VectorXd dv = DecisionValues(task_.c_src, task_.target.row(a.id));
    int best = 0;
    for (int c = 1; c < dv.size(); ++c) {
      if (dv(c) > dv(best)) best = c;
    }
    correct += best == a.label;
  }
  EXPECT_DOUBLE_EQ(EvaluateAccuracy(task_.c_src, task_.target, all),
                   static_cast<double>(correct) / all.size());
}

TEST_F(SyntheticEnvTest, ResetIsDeterministic) {
  SamplingEnv a = MakeEnv(task_, cfg_);
  SamplingEnv b = MakeEnv(task_, cfg_);
  Rng ra(5);
  Rng rb(5);
  const EnvState& sa = a.Reset(ra);
  const EnvState& sb = b.Reset(rb);
  EXPECT_EQ(sa.vector, sb.vector);
  EXPECT_EQ(sa.cand_ids, sb.cand_ids);
  EXPECT_EQ(sa.pos.size(), 100u);
  EXPECT_TRUE(sa.flagged.empty());
  EXPECT_EQ(sa.step_index, 0);
  EXPECT_FALSE(sa.done);
  EXPECT_EQ(sa.vector.size(), a.state_dim());
  EXPECT_EQ(sa.cand_ids.size(), 20u);
}

TEST_F(SyntheticEnvTest, CandidatesAvoidReservedAndFlaggedIds) {
  SamplingEnv env = MakeEnv(task_, cfg_);
  Rng rng(8);
  env.Reset(rng);
  for (int i = 0; i < 10; ++i) env.Step(i % cfg_.env.n_cand, rng);
  std::unordered_set<SampleId> forbidden(env.state().flagged);
  for (const auto& r : task_.partition.reward) forbidden.insert(r.id);
  for (const auto& p : task_.partition.initial_positive) forbidden.insert(p.id);
  EXPECT_FALSE(env.state().flagged.empty());
  for (int draw = 0; draw < 500; ++draw) {
    for (SampleId id : env.SampleCandidates(rng)) {
      ASSERT_FALSE(forbidden.contains(id)) << id;
    }
  }
}

TEST_F(SyntheticEnvTest, NoOpLeavesEverythingButTheStep) {
  SamplingEnv env = MakeEnv(task_, cfg_);
  Rng rng(2);
  env.Reset(rng);
  const double before = env.state().last_accuracy;
  const Transition t = env.Step(cfg_.env.n_cand, rng);
  EXPECT_EQ(t.reward, 0.0);
  EXPECT_EQ(env.state().pos.size(), 100u);
  EXPECT_EQ(env.state().step_index, 1);
  EXPECT_EQ(env.state().last_accuracy, before);
  EXPECT_EQ(t.action, cfg_.env.n_cand);
}

TEST_F(SyntheticEnvTest, TelescopingReward) {
  for (int seq = 0; seq < 20; ++seq) {
    SamplingEnv env = MakeEnv(task_, cfg_);
    Rng rng(static_cast<std::uint64_t>(100 + seq));
    env.Reset(rng);
    const double initial = EvaluateAccuracy(env.classifier(), task_.target,
                                            task_.partition.reward);
    double total = 0.0;
    int picks = 0;
    while (!env.state().done) {
      const int a = static_cast<int>(UniformIndex(rng, cfg_.env.num_actions()));
      picks += a < cfg_.env.n_cand;
      total += env.Step(a, rng).reward;
    }
    const double final_acc = EvaluateAccuracy(env.classifier(), task_.target,
                                              task_.partition.reward);
    EXPECT_NEAR(total, final_acc - initial, 1e-12);
    EXPECT_LE(total, 1.0 - initial + 1e-12);
    EXPECT_EQ(env.state().pos.size(), 100u + picks);
    EXPECT_EQ(env.state().step_index, cfg_.env.episode_length);
  }
}

TEST_F(SyntheticEnvTest, StateIsNormalized) {
  SamplingEnv env = MakeEnv(task_, cfg_);
  Rng rng(4);
  env.Reset(rng);
  const int n = cfg_.n_classes;
  const int n_bin = cfg_.env.n_bin;
  for (int step = 0; step < 15; ++step) {
    const Eigen::VectorXd& s = env.state().vector;
    EXPECT_GE(s.minCoeff(), 0.0);
    EXPECT_LE(s.maxCoeff(), 1.0);
    for (int c = 0; c < n; ++c) {
      EXPECT_NEAR(s.segment(c * n_bin, n_bin).sum(), 1.0, 1e-12);
    }
    for (int k = 0; k < cfg_.env.n_cand; ++k) {
      EXPECT_NEAR(s.segment(n * n_bin + k * n, n).sum(), 1.0, 1e-12);
    }
    env.Step(step % 3 == 0 ? cfg_.env.n_cand : step % cfg_.env.n_cand, rng);
  }
}

TEST(SamplingEnvTest, PoolOfOneTerminatesEarly) {
  const TinyWorld w = MakeTinyWorld(5);
  SamplingEnv env(w.target, w.labels, TinyPartition({4}), 2, SmallEnvConfig(),
                  SvmOptions{});
  Rng rng(1);
  env.Reset(rng);
  EXPECT_EQ(env.state().cand_ids, (std::vector<SampleId>{4, 4, 4, 4}));
  const Transition t = env.Step(2, rng);
  EXPECT_TRUE(t.done);
  EXPECT_TRUE(env.state().done);
  EXPECT_EQ(env.state().flagged.size(), 1u);
  EXPECT_EQ(env.state().pos.back(), (LabeledId{4, 0}));
  EXPECT_THROW(env.SampleCandidates(rng), ExhaustedPoolError);
  EXPECT_THROW(env.Step(0, rng), EpisodeDoneError);
}

TEST(SamplingEnvTest, DuplicateCandidatePickedOnce) {
  const TinyWorld w = MakeTinyWorld(6);
  SamplingEnv env(w.target, w.labels, TinyPartition({4, 5}), 2,
                  SmallEnvConfig(), SvmOptions{});
  Rng rng(3);
  env.Reset(rng);
  const SampleId picked = env.state().cand_ids[0];
  env.Step(0, rng);
  EXPECT_EQ(env.state().flagged, (std::unordered_set<SampleId>{picked}));
  const SampleId other = picked == 4 ? 5 : 4;
  EXPECT_EQ(env.state().cand_ids, std::vector<SampleId>(4, other));
  EXPECT_EQ(env.state().pos.size(), 3u);
}

TEST(SamplingEnvTest, RejectsBadActionsAndInputs) {
  const TinyWorld w = MakeTinyWorld(6);
  SamplingEnv env(w.target, w.labels, TinyPartition({4, 5}), 2,
                  SmallEnvConfig(), SvmOptions{});
  Rng rng(3);
  env.Reset(rng);
  EXPECT_THROW(env.Step(-1, rng), ActionRangeError);
  EXPECT_THROW(env.Step(5, rng), ActionRangeError);
  EXPECT_NO_THROW(env.Step(4, rng));

  EXPECT_THROW(SamplingEnv(w.target, {0, 1}, TinyPartition({4}), 2,
                           SmallEnvConfig(), SvmOptions{}),
               ConsistencyError);
  EnvConfig bad = SmallEnvConfig();
  bad.n_bin = 1;
  EXPECT_THROW(SamplingEnv(w.target, w.labels, TinyPartition({4}), 2, bad,
                           SvmOptions{}),
               ConfigError);
}

TEST(SamplingEnvTest, EpisodeEndsAtConfiguredLength) {
  const TinyWorld w = MakeTinyWorld(40);
  std::vector<SampleId> pool(36);
  std::iota(pool.begin(), pool.end(), 4);
  SamplingEnv env(w.target, w.labels, TinyPartition(pool), 2, SmallEnvConfig(),
                  SvmOptions{});
  Rng rng(6);
  env.Reset(rng);
  for (int i = 0; i < 9; ++i) EXPECT_FALSE(env.Step(i % 5, rng).done);
  EXPECT_TRUE(env.Step(0, rng).done);
}

TEST(SamplingEnvTest, ThirtyOneClassStateShape) {
  ExperimentConfig cfg = SyntheticTaskConfig(3);
  cfg.n_classes = 31;
  cfg.synthetic->n_classes = 31;
  cfg.synthetic->dim = 8;
  cfg.synthetic->samples_per_class_source = 8;
  cfg.synthetic->samples_per_class_target = 8;
  cfg.l = 40;
  const PreparedTask task = PrepareTask(cfg);
  SamplingEnv env = MakeEnv(task, cfg);
  Rng rng(1);
  EXPECT_EQ(env.Reset(rng).vector.size(), 930);
  EXPECT_EQ(env.num_actions(), 21);
}

}  // namespace
}  // namespace dasampler
