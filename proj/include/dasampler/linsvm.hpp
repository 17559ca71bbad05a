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

#ifndef DASAMPLER_LINSVM_HPP_
#define DASAMPLER_LINSVM_HPP_

// Linear SVMs trained by dual coordinate descent on the L2-regularized
// L1-loss (hinge) problem, with the bias learned as an extra constant
// feature:
//
//   min_w  1/2 |w|^2 + C sum_i max(0, 1 - y_i (w . x_i + b))
//
// Multiclass models are one-vs-all collections of binary models.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "dasampler/binary_io.hpp"
#include "dasampler/dataset.hpp"
#include "dasampler/errors.hpp"
#include "dasampler/random.hpp"

namespace dasampler {

struct LinearModel {
  Eigen::VectorXd weights;
  double bias = 0.0;

  int dim() const { return static_cast<int>(weights.size()); }

  template <typename Derived>
  double Decision(const Eigen::MatrixBase<Derived>& x) const {
    return weights.dot(x.derived()) + bias;
  }
};

struct MulticlassModel {
  std::vector<LinearModel> per_class;

  int n() const { return static_cast<int>(per_class.size()); }
  int dim() const { return per_class.empty() ? 0 : per_class.front().dim(); }
};

struct SvmOptions {
  double C = 1.0;
  int max_epochs = 1000;
  // Stop once max(PG) - min(PG) over an epoch falls below tol, where PG is
  // the projected gradient of the dual.
  double tol = 1e-4;
  std::uint64_t seed = 0;
};

struct EpochReport {
  int epoch = 0;
  double dual_objective = 0.0;
  double pg_spread = 0.0;
};

using EpochObserver = std::function<void(const EpochReport&)>;

namespace svm_detail {

inline void CheckBinaryLabels(std::span<const int> labels, std::size_t rows) {
  if (labels.size() != rows) {
    throw ConsistencyError("label count does not match sample count");
  }
  bool pos = false;
  bool neg = false;
  for (int y : labels) {
    if (y == 1) {
      pos = true;
    } else if (y == -1) {
      neg = true;
    } else {
      throw DataError("binary labels must be -1 or +1");
    }
  }
  if (!pos || !neg) {
    throw DegenerateInputError("binary SVM needs samples of both signs");
  }
}

}  // namespace svm_detail

// Primal objective of a model on (features, labels), bias included in the
// regularizer as the solver treats it.
inline double PrimalObjective(const LinearModel& m, const FeatureMatrix& x,
                              std::span<const int> y, double C) {
  double loss = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double margin = y[static_cast<std::size_t>(i)] * m.Decision(x.row(i));
    loss += std::max(0.0, 1.0 - margin);
  }
  return 0.5 * (m.weights.squaredNorm() + m.bias * m.bias) + C * loss;
}

inline LinearModel TrainBinary(const FeatureMatrix& x, std::span<const int> y,
                               const SvmOptions& opt,
                               const EpochObserver& observer = {}) {
  svm_detail::CheckBinaryLabels(y, static_cast<std::size_t>(x.rows()));
  if (!(opt.C > 0.0)) throw ConfigError("SVM C must be positive");
  const Eigen::Index rows = x.rows();
  const Eigen::Index dim = x.cols();

  Eigen::VectorXd w = Eigen::VectorXd::Zero(dim);
  double b = 0.0;
  std::vector<double> alpha(static_cast<std::size_t>(rows), 0.0);
  std::vector<double> qdiag(static_cast<std::size_t>(rows));
  for (Eigen::Index i = 0; i < rows; ++i) {
    qdiag[static_cast<std::size_t>(i)] = x.row(i).squaredNorm() + 1.0;
  }
  std::vector<std::size_t> order(static_cast<std::size_t>(rows));
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(opt.seed);

  // Coordinates stuck at a bound whose gradient points outward are shrunk
  // from the active set; convergence on the active set triggers one full
  // pass before the solver stops.
  std::size_t active = order.size();
  double pg_max_old = INFINITY;
  double pg_min_old = -INFINITY;
  double alpha_sum = 0.0;
  for (int epoch = 0; epoch < opt.max_epochs; ++epoch) {
    std::shuffle(order.begin(),
                 order.begin() + static_cast<std::ptrdiff_t>(active), rng);
    double pg_max = -INFINITY;
    double pg_min = INFINITY;
    for (std::size_t s = 0; s < active; ++s) {
      const std::size_t i = order[s];
      const auto r = static_cast<Eigen::Index>(i);
      const double yi = y[i];
      const double g = yi * (w.dot(x.row(r)) + b) - 1.0;
      double pg = 0.0;
      if (alpha[i] == 0.0) {
        if (g > pg_max_old) {
          std::swap(order[s--], order[--active]);
          continue;
        }
        pg = std::min(g, 0.0);
      } else if (alpha[i] == opt.C) {
        if (g < pg_min_old) {
          std::swap(order[s--], order[--active]);
          continue;
        }
        pg = std::max(g, 0.0);
      } else {
        pg = g;
      }
      pg_max = std::max(pg_max, pg);
      pg_min = std::min(pg_min, pg);
      if (std::abs(pg) > 1e-12) {
        const double old = alpha[i];
        alpha[i] = std::clamp(old - g / qdiag[i], 0.0, opt.C);
        const double delta = (alpha[i] - old) * yi;
        w += delta * x.row(r).transpose();
        b += delta;
        alpha_sum += alpha[i] - old;
      }
    }
    const double spread = active > 0 ? pg_max - pg_min : 0.0;
    if (observer) {
      observer({epoch, alpha_sum - 0.5 * (w.squaredNorm() + b * b), spread});
    }
    if (spread <= opt.tol) {
      if (active == order.size()) break;
      active = order.size();
      pg_max_old = INFINITY;
      pg_min_old = -INFINITY;
      continue;
    }
    pg_max_old = pg_max <= 0.0 ? INFINITY : pg_max;
    pg_min_old = pg_min >= 0.0 ? -INFINITY : pg_min;
  }
  return LinearModel{std::move(w), b};
}

// Constant model whose decision value is `value` everywhere.
inline LinearModel ConstantModel(int dim, double value) {
  return LinearModel{Eigen::VectorXd::Zero(dim), value};
}

// One-vs-all training. A class with no positives gets a constant -1 model;
// a class with no negatives (the only class present) a constant +1 model.
inline MulticlassModel TrainMulticlass(const FeatureMatrix& x,
                                       std::span<const int> labels,
                                       int n_classes, const SvmOptions& opt) {
  if (n_classes < 2) throw ConfigError("multiclass SVM needs n >= 2");
  if (x.rows() == 0) {
    throw DegenerateInputError("empty training set for multiclass SVM");
  }
  if (labels.size() != static_cast<std::size_t>(x.rows())) {
    throw ConsistencyError("label count does not match sample count");
  }
  const int dim = static_cast<int>(x.cols());
  std::vector<int> counts(static_cast<std::size_t>(n_classes), 0);
  for (int y : labels) {
    if (y < 0 || y >= n_classes) {
      throw DataError("label " + std::to_string(y) + " outside [0, " +
                      std::to_string(n_classes) + ")");
    }
    ++counts[static_cast<std::size_t>(y)];
  }

  MulticlassModel model;
  model.per_class.reserve(static_cast<std::size_t>(n_classes));
  std::vector<int> binary(labels.size());
  for (int c = 0; c < n_classes; ++c) {
    const int pos = counts[static_cast<std::size_t>(c)];
    if (pos == 0) {
      model.per_class.push_back(ConstantModel(dim, -1.0));
      continue;
    }
    if (pos == static_cast<int>(labels.size())) {
      model.per_class.push_back(ConstantModel(dim, 1.0));
      continue;
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
      binary[i] = labels[i] == c ? 1 : -1;
    }
    SvmOptions sub = opt;
    sub.seed = SplitMix64(opt.seed + static_cast<std::uint64_t>(c));
    model.per_class.push_back(TrainBinary(x, binary, sub));
  }
  return model;
}

template <typename Derived>
Eigen::VectorXd DecisionValues(const MulticlassModel& model,
                               const Eigen::MatrixBase<Derived>& x) {
  if (x.size() != model.dim()) {
    throw DimensionError("input has dim " + std::to_string(x.size()) +
                         ", model expects " + std::to_string(model.dim()));
  }
  Eigen::VectorXd out(model.n());
  for (int c = 0; c < model.n(); ++c) {
    out(c) = model.per_class[static_cast<std::size_t>(c)].Decision(x);
  }
  return out;
}

// Index of the largest entry; ties go to the lowest index.
inline int ArgMax(const Eigen::Ref<const Eigen::VectorXd>& v) {
  int best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (v(i) > v(best)) best = static_cast<int>(i);
  }
  return best;
}

template <typename Derived>
int Predict(const MulticlassModel& model, const Eigen::MatrixBase<Derived>& x) {
  return ArgMax(DecisionValues(model, x));
}

// Max-shifted softmax, so large margins do not overflow.
inline Eigen::VectorXd Softmax(const Eigen::Ref<const Eigen::VectorXd>& z) {
  const double top = z.maxCoeff();
  Eigen::VectorXd e = (z.array() - top).exp().matrix();
  return e / e.sum();
}

template <typename Derived>
Eigen::VectorXd Confidence(const MulticlassModel& model,
                           const Eigen::MatrixBase<Derived>& x) {
  return Softmax(DecisionValues(model, x));
}

template <typename Derived>
double SignedDistance(const LinearModel& model,
                      const Eigen::MatrixBase<Derived>& x) {
  const double norm = model.weights.norm();
  if (!(norm > 0.0)) {
    throw DegenerateInputError("signed distance to a zero-weight hyperplane");
  }
  if (x.size() != model.dim()) {
    throw DimensionError("input dim does not match hyperplane dim");
  }
  return model.Decision(x) / norm;
}

// --- serialization: "LSVM", u32 version, u32 n, u32 dim, then per class
// dim weights followed by the bias, all f64 little-endian.

inline constexpr std::uint32_t kModelFileVersion = 1;

inline void WriteModel(std::ostream& out, const MulticlassModel& model) {
  io::WriteMagic(out, "LSVM");
  io::WriteLe<std::uint32_t>(out, kModelFileVersion);
  io::WriteLe<std::uint32_t>(out, static_cast<std::uint32_t>(model.n()));
  io::WriteLe<std::uint32_t>(out, static_cast<std::uint32_t>(model.dim()));
  for (const auto& m : model.per_class) {
    for (Eigen::Index j = 0; j < m.weights.size(); ++j) {
      io::WriteLe<double>(out, m.weights(j));
    }
    io::WriteLe<double>(out, m.bias);
  }
}

inline MulticlassModel ReadModel(std::istream& in) {
  io::ExpectMagic(in, "LSVM");
  io::ExpectVersion(in, kModelFileVersion);
  const auto n = io::ReadLe<std::uint32_t>(in, "n");
  const auto dim = io::ReadLe<std::uint32_t>(in, "dim");
  MulticlassModel model;
  for (std::uint32_t c = 0; c < n; ++c) {
    LinearModel m{Eigen::VectorXd(dim), 0.0};
    for (std::uint32_t j = 0; j < dim; ++j) {
      m.weights(j) = io::ReadLe<double>(in, "weight");
    }
    m.bias = io::ReadLe<double>(in, "bias");
    model.per_class.push_back(std::move(m));
  }
  return model;
}

inline void SaveModel(const std::filesystem::path& path,
                      const MulticlassModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  WriteModel(out, model);
}

inline MulticlassModel LoadModel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open model file " + path.string());
  return ReadModel(in);
}

}  // namespace dasampler

#endif  // DASAMPLER_LINSVM_HPP_
