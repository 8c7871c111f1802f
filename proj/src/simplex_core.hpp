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

// Internal dense revised simplex for the small transportation-style LPs in
// this library: min c.x s.t. A x = b, x >= 0, with columns given sparsely
// and a feasible starting basis supplied by the caller. Bland's rule keeps
// degenerate instances (zero supplies, tied costs) from cycling.

#pragma once

#include <vector>

namespace rmfg::detail {

struct LpColumn {
  // (row, coefficient) entries of this column of A.
  std::vector<std::pair<int, double>> entries;
  double cost = 0.0;
};

struct LpProblem {
  int num_rows = 0;
  std::vector<LpColumn> columns;
  std::vector<double> rhs;
};

struct LpSolution {
  double objective = 0.0;
  std::vector<double> x;  // full-length primal solution
  int iterations = 0;
};

/// Solves the LP to optimality starting from the given basic feasible
/// basis (one column index per row). Throws std::runtime_error on a
/// singular basis or when the iteration cap is hit.
LpSolution solve_lp(const LpProblem& lp, std::vector<int> basis);

}  // namespace rmfg::detail
