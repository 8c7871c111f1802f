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

#include "rmfg/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace rmfg {

FiniteSpace::FiniteSpace(std::vector<std::string> labels,
                         std::vector<std::vector<double>> coords)
    : labels_(std::move(labels)), coords_(std::move(coords)) {
  if (labels_.empty()) throw std::invalid_argument("FiniteSpace: empty space");
  if (labels_.size() != coords_.size())
    throw std::invalid_argument("FiniteSpace: labels/coords size mismatch");
  std::unordered_set<std::string> seen;
  for (const auto& l : labels_) {
    if (!seen.insert(l).second)
      throw std::invalid_argument("FiniteSpace: duplicate label '" + l + "'");
  }
  const size_t dim = coords_.front().size();
  if (dim == 0) throw std::invalid_argument("FiniteSpace: zero-dimensional coords");
  for (const auto& c : coords_) {
    if (c.size() != dim)
      throw std::invalid_argument("FiniteSpace: inconsistent coord dimension");
  }
}

FiniteSpace FiniteSpace::grid_1d(std::vector<double> coords) {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> cs;
  labels.reserve(coords.size());
  cs.reserve(coords.size());
  for (double x : coords) {
    // Integer grid points get integer labels.
    if (x == std::floor(x) && std::abs(x) < 1e15) {
      labels.push_back(std::to_string(static_cast<long long>(x)));
    } else {
      labels.push_back(std::to_string(x));
    }
    cs.push_back({x});
  }
  return FiniteSpace(std::move(labels), std::move(cs));
}

int FiniteSpace::index_of(const std::string& label) const {
  for (size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return static_cast<int>(i);
  }
  return -1;
}

double FiniteSpace::distance(int i, int j) const {
  double sq = 0.0;
  const auto& a = coords_[i];
  const auto& b = coords_[j];
  for (size_t d = 0; d < a.size(); ++d) {
    const double diff = a[d] - b[d];
    sq += diff * diff;
  }
  return std::sqrt(sq);
}

DiscreteDistribution::DiscreteDistribution(std::vector<double> weights)
    : weights_(std::move(weights)) {
  if (weights_.empty())
    throw std::invalid_argument("DiscreteDistribution: empty weight vector");
  double sum = 0.0;
  for (double& w : weights_) {
    if (!std::isfinite(w))
      throw std::invalid_argument("DiscreteDistribution: non-finite weight");
    if (w < 0.0) {
      if (w < -kSimplexTol)
        throw std::invalid_argument("DiscreteDistribution: negative weight");
      w = 0.0;  // round-off residue
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > kSimplexTol)
    throw std::invalid_argument("DiscreteDistribution: weights sum to " +
                                std::to_string(sum) + ", not 1");
}

DiscreteDistribution DiscreteDistribution::normalized(std::vector<double> raw) {
  if (raw.empty())
    throw std::invalid_argument("DiscreteDistribution: empty weight vector");
  double sum = 0.0;
  for (double w : raw) {
    if (!std::isfinite(w) || w < 0.0)
      throw std::invalid_argument(
          "DiscreteDistribution: cannot normalize negative or non-finite weights");
    sum += w;
  }
  if (sum <= 0.0)
    throw std::invalid_argument("DiscreteDistribution: cannot normalize zero mass");
  for (double& w : raw) w /= sum;
  // Rescaling can still miss 1 by an ulp; push the residual into the
  // largest entry so the invariant holds exactly enough.
  double s2 = 0.0;
  for (double w : raw) s2 += w;
  auto it = std::max_element(raw.begin(), raw.end());
  *it += 1.0 - s2;
  return DiscreteDistribution(std::move(raw));
}

DiscreteDistribution DiscreteDistribution::unchecked(std::vector<double> raw) {
  return DiscreteDistribution(Unchecked{}, std::move(raw));
}

DiscreteDistribution DiscreteDistribution::point_mass(int i, int size) {
  std::vector<double> w(static_cast<size_t>(size), 0.0);
  w.at(static_cast<size_t>(i)) = 1.0;
  return DiscreteDistribution(std::move(w));
}

DiscreteDistribution DiscreteDistribution::uniform(int size) {
  if (size <= 0) throw std::invalid_argument("DiscreteDistribution: empty support");
  std::vector<double> w(static_cast<size_t>(size), 1.0 / size);
  return DiscreteDistribution::normalized(std::move(w));
}

double DiscreteDistribution::expectation(std::span<const double> f) const {
  double acc = 0.0;
  for (size_t i = 0; i < weights_.size(); ++i) acc += f[i] * weights_[i];
  return acc;
}

bool DiscreteDistribution::is_valid_simplex(double tol) const {
  if (weights_.empty()) return false;
  double sum = 0.0;
  for (double w : weights_) {
    if (!std::isfinite(w) || w < -tol) return false;
    sum += w;
  }
  return std::abs(sum - 1.0) <= tol;
}

double DiscreteDistribution::linf_distance(const DiscreteDistribution& other) const {
  double m = 0.0;
  for (size_t i = 0; i < weights_.size(); ++i)
    m = std::max(m, std::abs(weights_[i] - other.weights_[i]));
  return m;
}

}  // namespace rmfg
