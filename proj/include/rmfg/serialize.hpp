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

#include <string>
#include <vector>

#include <json.hpp>

#include "rmfg/dpp.hpp"
#include "rmfg/game.hpp"
#include "rmfg/mfe.hpp"
#include "rmfg/nagent.hpp"

namespace rmfg {

/// Thrown by the config loader with a field-path message such as
/// "ambiguity.lambda: expected a non-negative number".
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Builds a game from the documented JSON schema (docs/config.md). With
/// validate_rows = false, distribution rows are loaded unchecked so that
/// validate_assumptions can report simplex violations instead of the loader
/// throwing on them.
GameSpec load_game_config(const nlohmann::json& config, bool validate_rows = true);
GameSpec load_game_file(const std::string& path, bool validate_rows = true);

/// Parses a decimal or a fraction of the form "a/b" (so grids like 1/3 stay
/// exact to the last bit of the division).
double parse_lambda(const std::string& text);

nlohmann::json solve_result_to_json(const GameSpec& spec, const SolveResult& r);
nlohmann::json equilibrium_to_json(const GameSpec& spec, const Equilibrium& eq);
nlohmann::json residuals_to_json(const ResidualReport& r);
nlohmann::json diagnostics_to_json(const DiagnosticsReport& r);
nlohmann::json nagent_report_to_json(const NAgentReport& r);

/// Policy rows as JSON ([t][s] -> weight list) and back.
nlohmann::json policy_to_json(const GameSpec& spec, const MarkovPolicy& policy);
MarkovPolicy policy_from_json(const GameSpec& spec, const nlohmann::json& j);
MeasureFlow flow_from_json(const GameSpec& spec, const nlohmann::json& j);

/// CSV emission. Headers are stable and documented in the README; numbers
/// are printed with round-trip precision so reruns are byte-identical.
std::string sweep_to_csv(const GameSpec& spec, const SweepTable& table);
std::string kernels_to_csv(const GameSpec& spec, const SweepTable& table);
std::string policies_to_csv(const GameSpec& spec, const SweepTable& table);
std::string nagent_reports_to_csv(const std::vector<NAgentReport>& reports);
std::string chaos_to_csv(const std::vector<std::pair<int, std::vector<ChaosRow>>>& by_n);

/// Round-trip decimal formatting used by every CSV writer.
std::string format_double(double v);

void write_file(const std::string& path, const std::string& contents);

}  // namespace rmfg
