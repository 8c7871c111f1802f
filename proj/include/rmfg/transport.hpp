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
#include <vector>

#include "rmfg/distribution.hpp"

namespace rmfg {

/// Ground cost between support points: symmetric, zero diagonal, and a
/// metric whenever it comes from a Euclidean embedding.
class CostMatrix {
 public:
  explicit CostMatrix(std::vector<std::vector<double>> entries);

  /// Pairwise Euclidean distances of the space's coordinates.
  static CostMatrix euclidean(const FiniteSpace& space);

  double operator()(int i, int j) const { return entries_[i][j]; }
  int size() const { return static_cast<int>(entries_.size()); }

 private:
  std::vector<std::vector<double>> entries_;
};

/// A transport plan gamma[i][j] >= 0 between two distributions on the same
/// number of support points. Row sums reproduce the first marginal, column
/// sums the second.
struct Coupling {
  std::vector<std::vector<double>> mass;

  std::vector<double> row_marginals() const;
  std::vector<double> col_marginals() const;
  double cost(const CostMatrix& c) const;
};

struct TransportResult {
  double value = 0.0;
  Coupling plan;
};

/// 1-Wasserstein distance of two distributions on a common strictly
/// increasing 1D grid, via the CDF telescoping sum
///   sum_k |F_p(k) - F_q(k)| * (x_{k+1} - x_k).
double w1_1d(const DiscreteDistribution& p, const DiscreteDistribution& q,
             std::span<const double> coords);

/// Exact optimum of the transportation linear program
///   min sum_{ij} c_ij gamma_ij   over couplings of (p, q),
/// solved by successive shortest augmenting paths. Returns the value and an
/// optimal coupling. Throws on marginal residual above 1e-9.
TransportResult w1_lp(const DiscreteDistribution& p,
                      const DiscreteDistribution& q, const CostMatrix& cost);

}  // namespace rmfg
