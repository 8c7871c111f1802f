// Copyright 2026 The robust-mfg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <span>
#include <string>
#include <vector>

namespace rmfg {

/// A finite set of points embedded in Euclidean space. Houses both state
/// and action spaces; the embedding coordinates define the ground metric
/// used for transport distances.
class FiniteSpace {
 public:
  FiniteSpace(std::vector<std::string> labels,
              std::vector<std::vector<double>> coords);

  /// Builds a 1D grid space whose labels are the coordinate values.
  static FiniteSpace grid_1d(std::vector<double> coords);

  int size() const { return static_cast<int>(labels_.size()); }
  const std::string& label(int i) const { return labels_[i]; }
  const std::vector<double>& coord(int i) const { return coords_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }

  int dimension() const { return static_cast<int>(coords_.front().size()); }
  bool is_1d() const { return dimension() == 1; }
  /// First (and in the 1D case, only) coordinate of point i.
  double coord1(int i) const { return coords_[i].front(); }

  /// Index of the point with the given label, or -1 if absent.
  int index_of(const std::string& label) const;

  /// Euclidean distance between the coordinates of points i and j.
  double distance(int i, int j) const;

 private:
  std::vector<std::string> labels_;
  std::vector<std::vector<double>> coords_;
};

/// A probability weight vector over a finite support, i.e. a point of the
/// probability simplex with Euclidean coordinates.
///
/// The validating constructor enforces non-negative weights summing to one
/// within kSimplexTol. Rows coming from external files should go through
/// normalized(); unchecked() defers validation entirely (used by loaders
/// that want to report violations instead of throwing).
class DiscreteDistribution {
 public:
  static constexpr double kSimplexTol = 1e-12;

  /// Empty placeholder; not a valid simplex point until assigned.
  DiscreteDistribution() = default;

  /// Validates; throws std::invalid_argument on a simplex violation.
  explicit DiscreteDistribution(std::vector<double> weights);

  /// Load-time renormalization of non-negative raw weights.
  static DiscreteDistribution normalized(std::vector<double> raw);

  /// No validation at all; the caller owns the consequences.
  static DiscreteDistribution unchecked(std::vector<double> raw);

  static DiscreteDistribution point_mass(int i, int size);
  static DiscreteDistribution uniform(int size);

  int size() const { return static_cast<int>(weights_.size()); }
  double operator[](int i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }

  /// Sum_i f[i] * w[i].
  double expectation(std::span<const double> f) const;

  /// True when the weights form a valid simplex point at tolerance tol.
  bool is_valid_simplex(double tol = kSimplexTol) const;

  /// Largest absolute componentwise difference.
  double linf_distance(const DiscreteDistribution& other) const;

  bool operator==(const DiscreteDistribution& other) const {
    return weights_ == other.weights_;
  }

 private:
  struct Unchecked {};
  DiscreteDistribution(Unchecked, std::vector<double> w)
      : weights_(std::move(w)) {}

  std::vector<double> weights_;
};

}  // namespace rmfg
