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

#include "rmfg/transport.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "simplex_core.hpp"

namespace rmfg {

namespace {
constexpr double kMarginalTol = 1e-9;
}

CostMatrix::CostMatrix(std::vector<std::vector<double>> entries)
    : entries_(std::move(entries)) {
  const size_t n = entries_.size();
  if (n == 0) throw std::invalid_argument("CostMatrix: empty");
  for (size_t i = 0; i < n; ++i) {
    if (entries_[i].size() != n)
      throw std::invalid_argument("CostMatrix: not square");
    if (entries_[i][i] != 0.0)
      throw std::invalid_argument("CostMatrix: nonzero diagonal");
    for (size_t j = 0; j < n; ++j) {
      if (!(entries_[i][j] >= 0.0))
        throw std::invalid_argument("CostMatrix: negative or NaN cost");
      if (std::abs(entries_[i][j] - entries_[j][i]) > 1e-12)
        throw std::invalid_argument("CostMatrix: not symmetric");
    }
  }
}

CostMatrix CostMatrix::euclidean(const FiniteSpace& space) {
  const int n = space.size();
  std::vector<std::vector<double>> c(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) c[i][j] = c[j][i] = space.distance(i, j);
  return CostMatrix(std::move(c));
}

std::vector<double> Coupling::row_marginals() const {
  std::vector<double> out(mass.size(), 0.0);
  for (size_t i = 0; i < mass.size(); ++i)
    for (double v : mass[i]) out[i] += v;
  return out;
}

std::vector<double> Coupling::col_marginals() const {
  if (mass.empty()) return {};
  std::vector<double> out(mass.front().size(), 0.0);
  for (const auto& row : mass)
    for (size_t j = 0; j < row.size(); ++j) out[j] += row[j];
  return out;
}

double Coupling::cost(const CostMatrix& c) const {
  double acc = 0.0;
  for (size_t i = 0; i < mass.size(); ++i)
    for (size_t j = 0; j < mass[i].size(); ++j)
      acc += c(static_cast<int>(i), static_cast<int>(j)) * mass[i][j];
  return acc;
}

double w1_1d(const DiscreteDistribution& p, const DiscreteDistribution& q,
             std::span<const double> coords) {
  const int n = p.size();
  if (q.size() != n || static_cast<int>(coords.size()) != n)
    throw std::invalid_argument("w1_1d: mismatched supports");
  for (int k = 0; k + 1 < n; ++k)
    if (!(coords[k] < coords[k + 1]))
      throw std::invalid_argument("w1_1d: coords must be strictly increasing");
  double acc = 0.0, fp = 0.0, fq = 0.0;
  for (int k = 0; k + 1 < n; ++k) {
    fp += p[k];
    fq += q[k];
    acc += std::abs(fp - fq) * (coords[k + 1] - coords[k]);
  }
  return acc;
}

TransportResult w1_lp(const DiscreteDistribution& p,
                      const DiscreteDistribution& q, const CostMatrix& cost) {
  const int n = p.size();
  if (q.size() != n || cost.size() != n)
    throw std::invalid_argument("w1_lp: support/cost size mismatch");

  TransportResult out;
  out.plan.mass.assign(n, std::vector<double>(n, 0.0));
  if (n == 1) {
    out.plan.mass[0][0] = 1.0;
    return out;
  }

  // Transportation LP over couplings: row sums p, column sums q, with the
  // last column constraint dropped as redundant.
  detail::LpProblem lp;
  lp.num_rows = 2 * n - 1;
  lp.rhs.resize(lp.num_rows);
  for (int i = 0; i < n; ++i) lp.rhs[i] = p[i];
  for (int j = 0; j + 1 < n; ++j) lp.rhs[n + j] = q[j];
  lp.columns.resize(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      auto& col = lp.columns[static_cast<size_t>(i) * n + j];
      col.cost = cost(i, j);
      col.entries.push_back({i, 1.0});
      if (j + 1 < n) col.entries.push_back({n + j, 1.0});
    }
  }

  // Northwest-corner starting plan. Exactly one index advances per cell, so
  // the visited staircase has 2n-1 cells and forms a spanning-tree basis.
  std::vector<int> basis;
  basis.reserve(2 * n - 1);
  {
    std::vector<double> supply(p.weights());
    std::vector<double> demand(q.weights());
    int i = 0, j = 0;
    while (true) {
      basis.push_back(i * n + j);
      const double moved = std::min(supply[i], demand[j]);
      supply[i] -= moved;
      demand[j] -= moved;
      if (i == n - 1 && j == n - 1) break;
      if (i < n - 1 && (supply[i] <= 0.0 || j == n - 1)) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  const auto solution = detail::solve_lp(lp, std::move(basis));

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.plan.mass[i][j] = solution.x[static_cast<size_t>(i) * n + j];
  out.value = solution.objective;

  const auto rows = out.plan.row_marginals();
  const auto cols = out.plan.col_marginals();
  for (int i = 0; i < n; ++i) {
    if (std::abs(rows[i] - p[i]) > kMarginalTol ||
        std::abs(cols[i] - q[i]) > kMarginalTol)
      throw std::runtime_error("w1_lp: marginal residual above tolerance");
  }
  return out;
}

}  // namespace rmfg
