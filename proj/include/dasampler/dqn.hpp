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

#ifndef DASAMPLER_DQN_HPP_
#define DASAMPLER_DQN_HPP_

// Dueling Q-network with sigmoid-bounded outputs, trained online with Adam
// against a periodically synchronized target network.
//
//   V     = value_stream(s)                       (scalar)
//   A     = advantage_stream(s)                   (n_actions)
//   pre_q = V + A - mean(A)
//   Q     = sigmoid(pre_q)
//
// Hidden layers use rectifiers; the last layer of each stream is linear.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dasampler/binary_io.hpp"
#include "dasampler/env.hpp"
#include "dasampler/errors.hpp"
#include "dasampler/random.hpp"

namespace dasampler {

struct DenseLayer {
  Eigen::MatrixXd w;  // out x in
  Eigen::VectorXd b;

  int in() const { return static_cast<int>(w.cols()); }
  int out() const { return static_cast<int>(w.rows()); }
};

struct NetShape {
  int state_dim = 0;
  int n_actions = 0;
  std::vector<int> value_hidden;
  std::vector<int> advantage_hidden;

  // Value stream [state_dim -> state_dim -> 1], advantage stream
  // [state_dim -> 512 -> 512 -> n_actions].
  static NetShape Default(int state_dim, int n_actions) {
    return NetShape{state_dim, n_actions, {state_dim}, {512, 512}};
  }
};

struct DuelingNetParams {
  std::vector<DenseLayer> value;
  std::vector<DenseLayer> advantage;

  int state_dim() const { return value.front().in(); }
  int n_actions() const { return advantage.back().out(); }

  NetShape shape() const {
    NetShape s{state_dim(), n_actions(), {}, {}};
    for (std::size_t i = 0; i + 1 < value.size(); ++i) {
      s.value_hidden.push_back(value[i].out());
    }
    for (std::size_t i = 0; i + 1 < advantage.size(); ++i) {
      s.advantage_hidden.push_back(advantage[i].out());
    }
    return s;
  }

  // Every parameter array in checkpoint order: value layers then advantage
  // layers, each as W (column-major) followed by b.
  std::vector<std::span<double>> Tensors() {
    std::vector<std::span<double>> out;
    for (auto* stream : {&value, &advantage}) {
      for (auto& layer : *stream) {
        out.emplace_back(layer.w.data(), static_cast<std::size_t>(layer.w.size()));
        out.emplace_back(layer.b.data(), static_cast<std::size_t>(layer.b.size()));
      }
    }
    return out;
  }

  std::vector<std::span<const double>> Tensors() const {
    std::vector<std::span<const double>> out;
    for (auto* stream : {&value, &advantage}) {
      for (const auto& layer : *stream) {
        out.emplace_back(layer.w.data(), static_cast<std::size_t>(layer.w.size()));
        out.emplace_back(layer.b.data(), static_cast<std::size_t>(layer.b.size()));
      }
    }
    return out;
  }

  std::size_t NumParams() const {
    std::size_t n = 0;
    for (auto t : Tensors()) n += t.size();
    return n;
  }

  double SquaredNorm() const {
    double s = 0.0;
    for (auto t : Tensors()) {
      s += Eigen::Map<const Eigen::ArrayXd>(t.data(),
                                            static_cast<Eigen::Index>(t.size()))
               .square()
               .sum();
    }
    return s;
  }

  bool AllFinite() const {
    for (auto t : Tensors()) {
      if (!Eigen::Map<const Eigen::ArrayXd>(t.data(),
                                            static_cast<Eigen::Index>(t.size()))
               .allFinite()) {
        return false;
      }
    }
    return true;
  }

  DuelingNetParams ZerosLike() const {
    DuelingNetParams z = *this;
    for (auto t : z.Tensors()) std::fill(t.begin(), t.end(), 0.0);
    return z;
  }

  bool operator==(const DuelingNetParams& other) const {
    auto a = Tensors();
    auto b = other.Tensors();
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!std::equal(a[i].begin(), a[i].end(), b[i].begin(), b[i].end())) {
        return false;
      }
    }
    return true;
  }
};

// Weights uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)], biases zero.
inline DuelingNetParams InitParams(const NetShape& shape, std::uint64_t seed) {
  if (shape.state_dim <= 0 || shape.n_actions <= 0) {
    throw ConfigError("network dims must be positive");
  }
  Rng rng(seed);
  auto build = [&](const std::vector<int>& hidden, int out_dim) {
    std::vector<DenseLayer> layers;
    int in = shape.state_dim;
    std::vector<int> widths = hidden;
    widths.push_back(out_dim);
    for (int out : widths) {
      if (out <= 0) throw ConfigError("layer width must be positive");
      const double bound = 1.0 / std::sqrt(static_cast<double>(in));
      DenseLayer layer{Eigen::MatrixXd(out, in), Eigen::VectorXd::Zero(out)};
      for (Eigen::Index i = 0; i < layer.w.size(); ++i) {
        layer.w.data()[i] = bound * (2.0 * UniformUnit(rng) - 1.0);
      }
      layers.push_back(std::move(layer));
      in = out;
    }
    return layers;
  };
  DuelingNetParams p;
  p.value = build(shape.value_hidden, 1);
  p.advantage = build(shape.advantage_hidden, shape.n_actions);
  return p;
}

inline DuelingNetParams InitParams(int state_dim, int n_actions,
                                   std::uint64_t seed) {
  return InitParams(NetShape::Default(state_dim, n_actions), seed);
}

struct ForwardPass {
  std::vector<Eigen::VectorXd> value_acts;      // inputs to each value layer
  std::vector<Eigen::VectorXd> advantage_acts;  // inputs to each adv layer
  double value = 0.0;
  Eigen::VectorXd advantage;
  Eigen::VectorXd pre_q;
  Eigen::VectorXd q;
};

namespace dqn_detail {

inline Eigen::VectorXd RunStream(const std::vector<DenseLayer>& layers,
                                 const Eigen::VectorXd& input,
                                 std::vector<Eigen::VectorXd>* acts) {
  Eigen::VectorXd h = input;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (acts) acts->push_back(h);
    Eigen::VectorXd z = layers[i].b;
    z.noalias() += layers[i].w * h;
    if (i + 1 < layers.size()) z = z.cwiseMax(0.0);
    h = std::move(z);
  }
  return h;
}

// Accumulates parameter gradients of a stream given d(loss)/d(output).
inline void BackStream(const std::vector<DenseLayer>& layers,
                       const std::vector<Eigen::VectorXd>& acts,
                       Eigen::VectorXd delta, bool accumulate,
                       std::vector<DenseLayer>* grads) {
  for (std::size_t k = layers.size(); k-- > 0;) {
    if (accumulate) {
      (*grads)[k].w.noalias() += delta * acts[k].transpose();
      (*grads)[k].b += delta;
    } else {
      (*grads)[k].w.noalias() = delta * acts[k].transpose();
      (*grads)[k].b = delta;
    }
    if (k == 0) break;
    Eigen::VectorXd prev = layers[k].w.transpose() * delta;
    // acts[k] is the rectified output of layer k-1.
    delta = (acts[k].array() > 0.0).select(prev, 0.0);
  }
}

inline double Sigmoid(double x) {
  return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x))
                  : std::exp(x) / (1.0 + std::exp(x));
}

}  // namespace dqn_detail

inline ForwardPass ForwardWithCache(const DuelingNetParams& params,
                                    const Eigen::VectorXd& state,
                                    bool keep_acts = true) {
  if (state.size() != params.state_dim()) {
    throw DimensionError("state has length " + std::to_string(state.size()) +
                         ", network expects " +
                         std::to_string(params.state_dim()));
  }
  ForwardPass f;
  f.value = dqn_detail::RunStream(params.value, state,
                                  keep_acts ? &f.value_acts : nullptr)(0);
  f.advantage = dqn_detail::RunStream(params.advantage, state,
                                      keep_acts ? &f.advantage_acts : nullptr);
  f.pre_q = (f.value + f.advantage.array() - f.advantage.mean()).matrix();
  f.q = f.pre_q.unaryExpr(&dqn_detail::Sigmoid);
  if (!f.q.allFinite()) throw NumericError("non-finite Q values in forward");
  return f;
}

inline Eigen::VectorXd Forward(const DuelingNetParams& params,
                               const Eigen::VectorXd& state) {
  return ForwardWithCache(params, state, false).q;
}

struct AgentConfig {
  double learning_rate = 0.001;
  double gamma = 0.99;
  double weight_decay = 1e-4;
  int sync_period = 10;
  double eps_start = 1.0;
  double eps_end = 0.0;
  int eps_decay_iters = 2000;
  int total_iters = 20000;
  // Bootstrap with the online argmax evaluated by the target network.
  bool double_q = false;
  // Experience replay; capacity 0 means purely online updates.
  int replay_capacity = 0;
  int replay_batch = 32;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::vector<int> advantage_hidden = {512, 512};
  // Empty means one hidden layer as wide as the state.
  std::vector<int> value_hidden;

  void Validate() const {
    if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
      throw ConfigError("gamma must lie in [0, 1]");
    }
    if (!(weight_decay >= 0.0)) throw ConfigError("weight_decay must be >= 0");
    if (sync_period < 1) throw ConfigError("sync_period must be >= 1");
    if (eps_decay_iters < 1 || eps_decay_iters > total_iters) {
      throw ConfigError("eps_decay_iters must lie in [1, total_iters]");
    }
    if (replay_capacity < 0 || replay_batch < 1) {
      throw ConfigError("replay capacity must be >= 0 and batch >= 1");
    }
  }

  NetShape Shape(int state_dim, int n_actions) const {
    NetShape s = NetShape::Default(state_dim, n_actions);
    s.advantage_hidden = advantage_hidden;
    if (!value_hidden.empty()) s.value_hidden = value_hidden;
    return s;
  }
};

// Linear anneal from eps_start to eps_end over eps_decay_iters.
inline double EpsilonAt(const AgentConfig& cfg, long long iteration) {
  const double frac = std::max(
      0.0, 1.0 - static_cast<double>(iteration) /
                     static_cast<double>(cfg.eps_decay_iters));
  return cfg.eps_end + (cfg.eps_start - cfg.eps_end) * frac;
}

inline int GreedyAction(const DuelingNetParams& params,
                        const Eigen::VectorXd& state) {
  return ArgMax(Forward(params, state));
}

inline int SelectAction(const DuelingNetParams& params,
                        const Eigen::VectorXd& state, double epsilon,
                        Rng& rng) {
  if (UniformUnit(rng) < epsilon) {
    return static_cast<int>(
        UniformIndex(rng, static_cast<std::size_t>(params.n_actions())));
  }
  return GreedyAction(params, state);
}

// Bootstrap target y for one transition.
inline double TdTarget(const DuelingNetParams& online,
                       const DuelingNetParams& target, const Transition& t,
                       const AgentConfig& cfg) {
  if (t.done || cfg.gamma == 0.0) return t.reward;
  const Eigen::VectorXd next_q = Forward(target, t.next_state);
  double bootstrap = next_q.maxCoeff();
  if (cfg.double_q) bootstrap = next_q(GreedyAction(online, t.next_state));
  return t.reward + cfg.gamma * bootstrap;
}

// Squared TD error of the online Q(s, a) against a fixed target y, plus
// weight_decay * |w|^2.
inline double TdLoss(const DuelingNetParams& online, const Transition& t,
                     double y, const AgentConfig& cfg) {
  const double q = Forward(online, t.state)(t.action);
  return (y - q) * (y - q) + cfg.weight_decay * online.SquaredNorm();
}

// Gradient of the squared TD error (without the decay term), written into
// `grads` or added to it; returns the squared error. `grads` must already
// have the network's shape.
inline double AccumulateTdGradient(const DuelingNetParams& online,
                                   const Transition& t, double y,
                                   bool accumulate, DuelingNetParams* grads) {
  if (t.action < 0 || t.action >= online.n_actions()) {
    throw ActionRangeError("transition action outside the network's range");
  }
  const ForwardPass f = ForwardWithCache(online, t.state);
  const double q = f.q(t.action);
  const double err = y - q;
  const double d_pre = -2.0 * err * q * (1.0 - q);

  // pre_q_j = V + A_j - mean(A): dV = sum_j dpre_j, dA_j = dpre_j - mean.
  const int n = online.n_actions();
  Eigen::VectorXd d_adv = Eigen::VectorXd::Constant(n, -d_pre / n);
  d_adv(t.action) += d_pre;
  Eigen::VectorXd d_value = Eigen::VectorXd::Constant(1, d_pre);

  dqn_detail::BackStream(online.value, f.value_acts, std::move(d_value),
                         accumulate, &grads->value);
  dqn_detail::BackStream(online.advantage, f.advantage_acts, std::move(d_adv),
                         accumulate, &grads->advantage);
  return err * err;
}

struct TdGradient {
  double loss = 0.0;
  DuelingNetParams grads;
};

// Full gradient of TdLoss with the target network held constant.
inline TdGradient ComputeTdGradient(const DuelingNetParams& online,
                                    const DuelingNetParams& target,
                                    const Transition& t,
                                    const AgentConfig& cfg) {
  const double y = TdTarget(online, target, t, cfg);
  TdGradient g{0.0, online.ZerosLike()};
  const double sq = AccumulateTdGradient(online, t, y, false, &g.grads);
  auto gt = g.grads.Tensors();
  auto pt = online.Tensors();
  for (std::size_t i = 0; i < gt.size(); ++i) {
    for (std::size_t j = 0; j < gt[i].size(); ++j) {
      gt[i][j] += 2.0 * cfg.weight_decay * pt[i][j];
    }
  }
  g.loss = sq + cfg.weight_decay * online.SquaredNorm();
  return g;
}

struct AdamState {
  long long step = 0;
  DuelingNetParams m;
  DuelingNetParams v;

  static AdamState For(const DuelingNetParams& params) {
    return AdamState{0, params.ZerosLike(), params.ZerosLike()};
  }
};

// Adam step on grads + 2 * decay * params. With decay = 0 this is plain
// Adam on `grads`.
inline void AdamStep(DuelingNetParams* params, const DuelingNetParams& grads,
                     const AgentConfig& cfg, AdamState* adam,
                     double decay = 0.0) {
  ++adam->step;
  const double b1 = cfg.adam_beta1;
  const double b2 = cfg.adam_beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(adam->step));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(adam->step));
  auto p = params->Tensors();
  auto g = grads.Tensors();
  auto m = adam->m.Tensors();
  auto v = adam->v.Tensors();
  for (std::size_t i = 0; i < p.size(); ++i) {
    Eigen::Map<Eigen::ArrayXd> pi(p[i].data(), static_cast<Eigen::Index>(p[i].size()));
    Eigen::Map<const Eigen::ArrayXd> gi(g[i].data(), static_cast<Eigen::Index>(g[i].size()));
    Eigen::Map<Eigen::ArrayXd> mi(m[i].data(), static_cast<Eigen::Index>(m[i].size()));
    Eigen::Map<Eigen::ArrayXd> vi(v[i].data(), static_cast<Eigen::Index>(v[i].size()));
    if (decay == 0.0) {
      mi = b1 * mi + (1.0 - b1) * gi;
      vi = b2 * vi + (1.0 - b2) * gi.square();
    } else {
      mi = b1 * mi + (1.0 - b1) * (gi + 2.0 * decay * pi);
      vi = b2 * vi + (1.0 - b2) * (gi + 2.0 * decay * pi).square();
    }
    pi -= cfg.learning_rate * (mi / c1) / ((vi / c2).sqrt() + cfg.adam_eps);
  }
}

inline void CheckFiniteGradient(const TdGradient& g) {
  if (!std::isfinite(g.loss)) {
    throw NumericError("non-finite TD loss " + std::to_string(g.loss));
  }
  if (!g.grads.AllFinite()) throw NumericError("non-finite TD gradient");
}

// One Adam step on a single transition. Returns the loss before the step.
// `scratch` is reused between calls to hold the gradient.
inline double TdUpdate(DuelingNetParams* online,
                       const DuelingNetParams& target, const Transition& t,
                       const AgentConfig& cfg, AdamState* adam,
                       DuelingNetParams* scratch = nullptr) {
  DuelingNetParams local;
  if (scratch == nullptr) {
    local = online->ZerosLike();
    scratch = &local;
  }
  const double y = TdTarget(*online, target, t, cfg);
  const double sq = AccumulateTdGradient(*online, t, y, false, scratch);
  const double loss = sq + cfg.weight_decay * online->SquaredNorm();
  if (!std::isfinite(loss)) {
    throw NumericError("non-finite TD loss " + std::to_string(loss));
  }
  if (!scratch->AllFinite()) throw NumericError("non-finite TD gradient");
  AdamStep(online, *scratch, cfg, adam, cfg.weight_decay);
  return loss;
}

inline void SyncTarget(const DuelingNetParams& online,
                       DuelingNetParams* target) {
  *target = online;
}

// Online and target networks, optimizer state, and the update/sync
// schedule. One update per observed transition; the target is synced after
// every sync_period-th update.
class QAgent {
 public:
  QAgent(int state_dim, int n_actions, AgentConfig cfg, std::uint64_t seed)
      : cfg_(std::move(cfg)),
        online_(InitParams(cfg_.Shape(state_dim, n_actions), seed)),
        target_(online_),
        adam_(AdamState::For(online_)),
        grads_(online_.ZerosLike()) {
    cfg_.Validate();
  }

  const AgentConfig& config() const { return cfg_; }
  const DuelingNetParams& online() const { return online_; }
  const DuelingNetParams& target() const { return target_; }
  const AdamState& adam() const { return adam_; }
  long long updates() const { return adam_.step; }
  long long syncs() const { return syncs_; }

  int Act(const Eigen::VectorXd& state, long long iteration, Rng& rng) const {
    return SelectAction(online_, state, EpsilonAt(cfg_, iteration), rng);
  }

  int ActGreedy(const Eigen::VectorXd& state) const {
    return GreedyAction(online_, state);
  }

  // Returns the TD loss before the update.
  double Observe(const Transition& t, Rng& rng) {
    double loss = 0.0;
    if (cfg_.replay_capacity == 0) {
      loss = TdUpdate(&online_, target_, t, cfg_, &adam_, &grads_);
    } else {
      replay_.push_back(t);
      if (static_cast<int>(replay_.size()) > cfg_.replay_capacity) {
        replay_.pop_front();
      }
      loss = ReplayUpdate(rng);
    }
    if (++since_sync_ == cfg_.sync_period) {
      SyncTarget(online_, &target_);
      since_sync_ = 0;
      ++syncs_;
    }
    return loss;
  }

  void Restore(DuelingNetParams online, DuelingNetParams target,
               AdamState adam) {
    online_ = std::move(online);
    target_ = std::move(target);
    adam_ = std::move(adam);
  }

 private:
  double ReplayUpdate(Rng& rng) {
    const std::size_t batch = std::min<std::size_t>(
        static_cast<std::size_t>(cfg_.replay_batch), replay_.size());
    double sq = 0.0;
    for (std::size_t k = 0; k < batch; ++k) {
      const Transition& t = replay_[UniformIndex(rng, replay_.size())];
      const double y = TdTarget(online_, target_, t, cfg_);
      sq += AccumulateTdGradient(online_, t, y, k > 0, &grads_);
    }
    const double scale = 1.0 / static_cast<double>(batch);
    for (auto t : grads_.Tensors()) {
      Eigen::Map<Eigen::ArrayXd>(t.data(), static_cast<Eigen::Index>(t.size())) *=
          scale;
    }
    const double loss = sq * scale + cfg_.weight_decay * online_.SquaredNorm();
    if (!std::isfinite(loss) || !grads_.AllFinite()) {
      throw NumericError("non-finite TD loss or gradient in replay update");
    }
    AdamStep(&online_, grads_, cfg_, &adam_, cfg_.weight_decay);
    return loss;
  }

  AgentConfig cfg_;
  DuelingNetParams online_;
  DuelingNetParams target_;
  AdamState adam_;
  DuelingNetParams grads_;
  std::deque<Transition> replay_;
  int since_sync_ = 0;
  long long syncs_ = 0;
};

// --- checkpoints
//
// "DQNC", u32 version = 1, u32 state_dim, u32 n_actions,
// u32 #value hidden layers, their widths (u32 each),
// u32 #advantage hidden layers, their widths (u32 each),
// then every parameter of the online network as f64 in Tensors() order,
// the same for the target network, then i64 Adam step followed by the
// first and second moment arrays in Tensors() order. Little-endian.

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  DuelingNetParams online;
  DuelingNetParams target;
  AdamState adam;
};

inline void SaveCheckpoint(const std::filesystem::path& path,
                           const QAgent& agent) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  const NetShape shape = agent.online().shape();
  io::WriteMagic(out, "DQNC");
  io::WriteLe<std::uint32_t>(out, kCheckpointVersion);
  io::WriteLe<std::uint32_t>(out, static_cast<std::uint32_t>(shape.state_dim));
  io::WriteLe<std::uint32_t>(out, static_cast<std::uint32_t>(shape.n_actions));
  for (const auto* widths : {&shape.value_hidden, &shape.advantage_hidden}) {
    io::WriteLe<std::uint32_t>(out, static_cast<std::uint32_t>(widths->size()));
    for (int w : *widths) io::WriteLe<std::uint32_t>(out, static_cast<std::uint32_t>(w));
  }
  auto dump = [&](const DuelingNetParams& p) {
    for (auto t : p.Tensors())
      for (double v : t) io::WriteLe<double>(out, v);
  };
  dump(agent.online());
  dump(agent.target());
  io::WriteLe<std::int64_t>(out, agent.adam().step);
  dump(agent.adam().m);
  dump(agent.adam().v);
  if (!out) throw Error("write failed for " + path.string());
}

inline Checkpoint LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open checkpoint " + path.string());
  io::ExpectMagic(in, "DQNC");
  io::ExpectVersion(in, kCheckpointVersion);
  NetShape shape;
  shape.state_dim = static_cast<int>(io::ReadLe<std::uint32_t>(in, "state_dim"));
  shape.n_actions = static_cast<int>(io::ReadLe<std::uint32_t>(in, "n_actions"));
  for (auto* widths : {&shape.value_hidden, &shape.advantage_hidden}) {
    const auto count = io::ReadLe<std::uint32_t>(in, "layer count");
    if (count > 64) throw FormatError("implausible layer count");
    for (std::uint32_t i = 0; i < count; ++i) {
      widths->push_back(static_cast<int>(io::ReadLe<std::uint32_t>(in, "width")));
    }
  }
  Checkpoint ck;
  ck.online = InitParams(shape, 0);
  auto fill = [&](DuelingNetParams* p) {
    for (auto t : p->Tensors())
      for (double& v : t) v = io::ReadLe<double>(in, "parameter");
  };
  fill(&ck.online);
  ck.target = ck.online.ZerosLike();
  fill(&ck.target);
  ck.adam = AdamState::For(ck.online);
  ck.adam.step = io::ReadLe<std::int64_t>(in, "adam step");
  fill(&ck.adam.m);
  fill(&ck.adam.v);
  if (in.peek() != std::char_traits<char>::eof()) {
    throw FormatError("trailing bytes in checkpoint " + path.string());
  }
  return ck;
}

}  // namespace dasampler

#endif  // DASAMPLER_DQN_HPP_
