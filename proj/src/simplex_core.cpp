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

#include "simplex_core.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rmfg::detail {
namespace {

constexpr double kReducedCostTol = 1e-11;
constexpr double kPivotTol = 1e-11;
constexpr int kMaxIterations = 200000;
constexpr int kRefactorEvery = 64;

// Dense inverse via Gauss-Jordan with partial pivoting.
std::vector<std::vector<double>> invert(std::vector<std::vector<double>> m) {
  const int n = static_cast<int>(m.size());
  std::vector<std::vector<double>> inv(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
    if (std::abs(m[pivot][col]) < 1e-13)
      throw std::runtime_error("simplex: singular basis matrix");
    std::swap(m[pivot], m[col]);
    std::swap(inv[pivot], inv[col]);
    const double diag = m[col][col];
    for (int j = 0; j < n; ++j) {
      m[col][j] /= diag;
      inv[col][j] /= diag;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double factor = m[r][col];
      if (factor == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        m[r][j] -= factor * m[col][j];
        inv[r][j] -= factor * inv[col][j];
      }
    }
  }
  return inv;
}

std::vector<std::vector<double>> basis_inverse(const LpProblem& lp,
                                               const std::vector<int>& basis) {
  const int n = lp.num_rows;
  std::vector<std::vector<double>> b(n, std::vector<double>(n, 0.0));
  for (int col = 0; col < n; ++col) {
    for (const auto& [row, coef] : lp.columns[basis[col]].entries)
      b[row][col] = coef;
  }
  return invert(std::move(b));
}

}  // namespace

LpSolution solve_lp(const LpProblem& lp, std::vector<int> basis) {
  const int n = lp.num_rows;
  if (static_cast<int>(basis.size()) != n)
    throw std::invalid_argument("simplex: basis size must equal row count");

  auto b_inv = basis_inverse(lp, basis);

  std::vector<double> x_basic(n, 0.0);
  auto recompute_primal = [&] {
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) acc += b_inv[i][j] * lp.rhs[j];
      x_basic[i] = acc;
    }
  };
  recompute_primal();

  std::vector<char> in_basis(lp.columns.size(), 0);
  for (int idx : basis) in_basis[idx] = 1;

  std::vector<double> duals(n, 0.0);
  std::vector<double> direction(n, 0.0);

  int iterations = 0;
  while (true) {
    if (++iterations > kMaxIterations)
      throw std::runtime_error("simplex: iteration limit exceeded");
    if (iterations % kRefactorEvery == 0) {
      b_inv = basis_inverse(lp, basis);
      recompute_primal();
    }

    // duals y = c_B^T B^-1
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) acc += lp.columns[basis[i]].cost * b_inv[i][j];
      duals[j] = acc;
    }

    // Bland: smallest-index column with negative reduced cost.
    int entering = -1;
    for (size_t j = 0; j < lp.columns.size(); ++j) {
      if (in_basis[j]) continue;
      double rc = lp.columns[j].cost;
      for (const auto& [row, coef] : lp.columns[j].entries)
        rc -= duals[row] * coef;
      if (rc < -kReducedCostTol) {
        entering = static_cast<int>(j);
        break;
      }
    }
    if (entering < 0) break;  // optimal

    // direction d = B^-1 A_entering
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (const auto& [row, coef] : lp.columns[entering].entries)
        acc += b_inv[i][row] * coef;
      direction[i] = acc;
    }

    // Ratio test; among ties leave the basic variable with the smallest
    // index (Bland's anti-cycling pair).
    int leaving = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      if (direction[i] <= kPivotTol) continue;
      const double ratio = std::max(x_basic[i], 0.0) / direction[i];
      if (ratio < best_ratio - 1e-15 ||
          (ratio <= best_ratio + 1e-15 &&
           (leaving < 0 || basis[i] < basis[leaving]))) {
        best_ratio = ratio;
        leaving = i;
      }
    }
    if (leaving < 0)
      throw std::runtime_error("simplex: unbounded problem");

    // Pivot: eta update of the inverse, then refresh the primal point.
    const double pivot = direction[leaving];
    for (int j = 0; j < n; ++j) b_inv[leaving][j] /= pivot;
    for (int i = 0; i < n; ++i) {
      if (i == leaving) continue;
      const double factor = direction[i];
      if (factor == 0.0) continue;
      for (int j = 0; j < n; ++j)
        b_inv[i][j] -= factor * b_inv[leaving][j];
    }
    in_basis[basis[leaving]] = 0;
    in_basis[entering] = 1;
    basis[leaving] = entering;
    recompute_primal();
  }

  LpSolution out;
  out.iterations = iterations;
  out.x.assign(lp.columns.size(), 0.0);
  for (int i = 0; i < n; ++i) {
    // Clamp degenerate round-off so downstream simplex rows stay valid.
    out.x[basis[i]] = std::max(x_basic[i], 0.0);
  }
  double obj = 0.0;
  for (size_t j = 0; j < lp.columns.size(); ++j)
    obj += lp.columns[j].cost * out.x[j];
  out.objective = obj;
  return out;
}

}  // namespace rmfg::detail
