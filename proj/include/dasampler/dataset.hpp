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

#ifndef DASAMPLER_DATASET_HPP_
#define DASAMPLER_DATASET_HPP_

// Feature-vector datasets for the source and target domains: the binary
// FVEC/LBLS file formats, and a seeded synthetic generator with an affine
// domain shift.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dasampler/binary_io.hpp"
#include "dasampler/errors.hpp"
#include "dasampler/random.hpp"

namespace dasampler {

using FeatureMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using SampleId = std::int64_t;

enum class Domain { kSource, kTarget };

inline const char* DomainName(Domain d) {
  return d == Domain::kSource ? "source" : "target";
}

// Immutable matrix of feature rows. Sample ids are row indices, assigned
// 0..num_samples-1 at construction and stable for the lifetime of a run.
class Dataset {
 public:
  Dataset() = default;

  Dataset(FeatureMatrix features, std::optional<std::vector<int>> labels,
          Domain domain)
      : features_(std::move(features)),
        labels_(std::move(labels)),
        domain_(domain) {
    if (!features_.allFinite()) {
      throw DataError(std::string(DomainName(domain_)) +
                      " features contain NaN or Inf");
    }
    if (labels_) {
      if (static_cast<Eigen::Index>(labels_->size()) != features_.rows()) {
        throw ConsistencyError(
            "label count " + std::to_string(labels_->size()) +
            " does not match sample count " + std::to_string(features_.rows()));
      }
      for (int y : *labels_) {
        if (y < 0) throw DataError("negative class label " + std::to_string(y));
      }
    }
    ids_.resize(static_cast<std::size_t>(features_.rows()));
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      ids_[i] = static_cast<SampleId>(i);
    }
  }

  std::size_t size() const { return ids_.size(); }
  int dim() const { return static_cast<int>(features_.cols()); }
  Domain domain() const { return domain_; }
  const FeatureMatrix& features() const { return features_; }
  const std::vector<SampleId>& ids() const { return ids_; }
  bool has_labels() const { return labels_.has_value(); }
  const std::vector<int>& labels() const { return labels_.value(); }

  auto row(SampleId id) const {
    return features_.row(static_cast<Eigen::Index>(id));
  }

  // Throws DataError unless every label lies in [0, n_classes).
  void CheckLabelRange(int n_classes) const {
    if (!labels_) return;
    for (int y : *labels_) {
      if (y >= n_classes) {
        throw DataError("label " + std::to_string(y) + " outside [0, " +
                        std::to_string(n_classes) + ")");
      }
    }
  }

 private:
  FeatureMatrix features_;
  std::optional<std::vector<int>> labels_;
  Domain domain_ = Domain::kSource;
  std::vector<SampleId> ids_;
};

// True target labels. Kept apart from the target Dataset so that only the
// reward-set annotation and the final evaluation can read them.
class GroundTruth {
 public:
  GroundTruth() = default;
  explicit GroundTruth(std::vector<int> labels) : labels_(std::move(labels)) {}

  int Label(SampleId id) const { return labels_.at(static_cast<std::size_t>(id)); }
  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  const std::vector<int>& all() const { return labels_; }

 private:
  std::vector<int> labels_;
};

// ---------------------------------------------------------------------------
// File formats.
//
// Feature file: "FVEC", u32 version = 1, u32 num_samples, u32 dim, then
// num_samples * dim f32 row-major. Label file: "LBLS", u32 version = 1,
// u32 num_samples, then num_samples i32. All little-endian.

inline constexpr std::uint32_t kFeatureFileVersion = 1;
inline constexpr std::uint32_t kLabelFileVersion = 1;

inline void WriteFeatureMatrix(const std::filesystem::path& path,
                               const FeatureMatrix& features) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  io::WriteMagic(out, "FVEC");
  io::WriteLe<std::uint32_t>(out, kFeatureFileVersion);
  io::WriteLe<std::uint32_t>(out, static_cast<std::uint32_t>(features.rows()));
  io::WriteLe<std::uint32_t>(out, static_cast<std::uint32_t>(features.cols()));
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    for (Eigen::Index j = 0; j < features.cols(); ++j) {
      io::WriteLe<float>(out, static_cast<float>(features(i, j)));
    }
  }
  if (!out) throw Error("write failed for " + path.string());
}

inline FeatureMatrix ReadFeatureMatrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open feature file " + path.string());
  io::ExpectMagic(in, "FVEC");
  io::ExpectVersion(in, kFeatureFileVersion);
  const auto rows = io::ReadLe<std::uint32_t>(in, "num_samples");
  const auto cols = io::ReadLe<std::uint32_t>(in, "dim");
  FeatureMatrix features(rows, cols);
  for (std::uint32_t i = 0; i < rows; ++i) {
    for (std::uint32_t j = 0; j < cols; ++j) {
      const float v = io::ReadLe<float>(in, "feature payload");
      if (!std::isfinite(v)) {
        throw DataError("non-finite feature at row " + std::to_string(i) +
                        ", column " + std::to_string(j) + " of " +
                        path.string());
      }
      features(i, j) = v;
    }
  }
  return features;
}

inline void WriteLabels(const std::filesystem::path& path,
                        const std::vector<int>& labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  io::WriteMagic(out, "LBLS");
  io::WriteLe<std::uint32_t>(out, kLabelFileVersion);
  io::WriteLe<std::uint32_t>(out, static_cast<std::uint32_t>(labels.size()));
  for (int y : labels) io::WriteLe<std::int32_t>(out, y);
  if (!out) throw Error("write failed for " + path.string());
}

inline std::vector<int> ReadLabels(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open label file " + path.string());
  io::ExpectMagic(in, "LBLS");
  io::ExpectVersion(in, kLabelFileVersion);
  const auto n = io::ReadLe<std::uint32_t>(in, "num_samples");
  std::vector<int> labels(n);
  for (auto& y : labels) y = io::ReadLe<std::int32_t>(in, "label payload");
  return labels;
}

inline Dataset LoadFeatureMatrix(
    const std::filesystem::path& path,
    const std::optional<std::filesystem::path>& labels_path, Domain domain) {
  FeatureMatrix features = ReadFeatureMatrix(path);
  std::optional<std::vector<int>> labels;
  if (labels_path) labels = ReadLabels(*labels_path);
  return Dataset(std::move(features), std::move(labels), domain);
}

// Scales every row to unit L2 norm; zero rows are left untouched.
inline Dataset L2Normalized(const Dataset& data) {
  FeatureMatrix f = data.features();
  for (Eigen::Index i = 0; i < f.rows(); ++i) {
    const double norm = f.row(i).norm();
    if (norm > 0.0) f.row(i) /= norm;
  }
  std::optional<std::vector<int>> labels;
  if (data.has_labels()) labels = data.labels();
  return Dataset(std::move(f), std::move(labels), data.domain());
}

// ---------------------------------------------------------------------------
// Synthetic domains.

struct SynthConfig {
  int n_classes = 5;
  int dim = 16;
  int samples_per_class_source = 100;
  int samples_per_class_target = 100;
  // RMS displacement of the class means under the source -> target map.
  double shift_scale = 2.0;
  double noise_sigma = 1.0;
  // Expected distance between two class means.
  double class_separation = 4.0;
  std::uint64_t seed = 0;

  void Validate() const {
    if (n_classes < 2) throw ConfigError("n_classes must be >= 2");
    if (dim < 2) throw ConfigError("dim must be >= 2");
    if (samples_per_class_source <= 0 || samples_per_class_target <= 0) {
      throw ConfigError("per-class sample counts must be positive");
    }
    if (!(shift_scale >= 0.0)) throw ConfigError("shift_scale must be >= 0");
    if (!(noise_sigma > 0.0)) throw ConfigError("noise_sigma must be > 0");
    if (!(class_separation > 0.0)) {
      throw ConfigError("class_separation must be > 0");
    }
  }
};

struct SynthData {
  Dataset source;
  Dataset target;  // unlabeled
  GroundTruth target_truth;
  FeatureMatrix source_means;  // n_classes x dim
  FeatureMatrix target_means;
};

// Source class c is N(mu_c, sigma^2 I). The target means are the image of
// the source means under x -> x + s * (R x + t - x), with R a random
// rotation, t a random translation and s chosen so the RMS displacement of
// the class means equals shift_scale. Features are rounded to f32 so a
// write/load cycle reproduces them exactly.
inline SynthData SynthGenerate(const SynthConfig& cfg) {
  cfg.Validate();
  Rng rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int n = cfg.n_classes;
  const int d = cfg.dim;

  const double mean_scale = cfg.class_separation / std::sqrt(2.0 * d);
  FeatureMatrix mu(n, d);
  for (int c = 0; c < n; ++c)
    for (int j = 0; j < d; ++j) mu(c, j) = mean_scale * normal(rng);

  Eigen::MatrixXd gauss(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) gauss(i, j) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gauss);
  Eigen::MatrixXd rotation = qr.householderQ();
  Eigen::VectorXd translation(d);
  for (int j = 0; j < d; ++j) translation(j) = mean_scale * normal(rng);

  FeatureMatrix displacement(n, d);
  for (int c = 0; c < n; ++c) {
    Eigen::VectorXd m = mu.row(c).transpose();
    displacement.row(c) = (rotation * m + translation - m).transpose();
  }
  const double rms = std::sqrt(displacement.rowwise().squaredNorm().mean());
  const double s = rms > 0.0 ? cfg.shift_scale / rms : 0.0;
  FeatureMatrix target_mu = mu + s * displacement;

  auto draw = [&](const FeatureMatrix& means, int per_class,
                  std::vector<int>* labels) {
    FeatureMatrix x(static_cast<Eigen::Index>(n) * per_class, d);
    Eigen::Index r = 0;
    for (int c = 0; c < n; ++c) {
      for (int k = 0; k < per_class; ++k, ++r) {
        for (int j = 0; j < d; ++j) {
          const double v = means(c, j) + cfg.noise_sigma * normal(rng);
          x(r, j) = static_cast<double>(static_cast<float>(v));
        }
        labels->push_back(c);
      }
    }
    return x;
  };

  std::vector<int> source_labels;
  std::vector<int> target_labels;
  FeatureMatrix xs = draw(mu, cfg.samples_per_class_source, &source_labels);
  FeatureMatrix xt =
      draw(target_mu, cfg.samples_per_class_target, &target_labels);

  // Interleave target rows so id order carries no class information.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(xt.rows()));
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Eigen::Index>(i);
  std::shuffle(order.begin(), order.end(), rng);
  FeatureMatrix xt_shuffled(xt.rows(), xt.cols());
  std::vector<int> truth(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    xt_shuffled.row(static_cast<Eigen::Index>(i)) = xt.row(order[i]);
    truth[i] = target_labels[static_cast<std::size_t>(order[i])];
  }

  return SynthData{
      Dataset(std::move(xs), std::move(source_labels), Domain::kSource),
      Dataset(std::move(xt_shuffled), std::nullopt, Domain::kTarget),
      GroundTruth(std::move(truth)), std::move(mu), std::move(target_mu)};
}

}  // namespace dasampler

#endif  // DASAMPLER_DATASET_HPP_
