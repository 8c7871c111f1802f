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

#include "rmfg/ambiguity.hpp"
#include "rmfg/distribution.hpp"
#include "rmfg/transport.hpp"

namespace rmfg {

/// Result of the inner adversary problem: the attained minimum of the
/// linear functional, its minimizing distribution, and the transport budget
/// the minimizer actually spends (0 for singleton sets).
struct InnerSolution {
  double value = 0.0;
  DiscreteDistribution minimizer;
  double budget_used = 0.0;
};

/// Selects the algorithm for the Wasserstein-ball case. The greedy exploits
/// the fractional-knapsack structure of the budgeted transport program and
/// is the default; the simplex solves the same LP from scratch and serves
/// as the correctness reference.
enum class InnerBackend { kGreedy, kSimplexLp };

/// Minimizes sum_k f(k) P(k) over the given ambiguity set and returns the
/// minimizing distribution. Exact for all three set variants. Rejects
/// non-finite objectives.
///
/// Ties in benefit-per-cost are broken deterministically: mass moves from
/// the highest-f source to the lowest-f target first, then by ascending
/// index, so repeated calls reproduce the same minimizer bit for bit.
InnerSolution worst_case_expectation(std::span<const double> f,
                                     const AmbiguityInstance& set,
                                     InnerBackend backend = InnerBackend::kGreedy);

/// True iff W1(candidate, reference) <= radius + 1e-9 under the given
/// ground cost (decided by the exact transport LP).
bool ball_membership(const DiscreteDistribution& candidate,
                     const DiscreteDistribution& reference, double radius,
                     const CostMatrix& cost);

/// Membership of a distribution in an ambiguity instance, at the same
/// 1e-9 tolerance (exact row match for singletons and finite sets).
bool set_membership(const DiscreteDistribution& candidate,
                    const AmbiguityInstance& set, double tol = 1e-9);

}  // namespace rmfg
