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

#include "rmfg/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace rmfg {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

double require_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

std::vector<double> require_number_list(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (size_t i = 0; i < j.size(); ++i)
    out.push_back(require_number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

FiniteSpace parse_space(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array");
  if (j.front().is_number()) {
    return FiniteSpace::grid_1d(require_number_list(j, path));
  }
  std::vector<std::string> labels;
  std::vector<std::vector<double>> coords;
  for (size_t i = 0; i < j.size(); ++i) {
    const std::string entry_path = path + "[" + std::to_string(i) + "]";
    coords.push_back(require_number_list(j[i], entry_path));
    std::ostringstream label;
    label << "p" << i;
    labels.push_back(label.str());
  }
  return FiniteSpace(std::move(labels), std::move(coords));
}

DiscreteDistribution parse_row(const json& j, const std::string& path,
                               int expected, bool validate) {
  auto raw = require_number_list(j, path);
  if (static_cast<int>(raw.size()) != expected)
    fail(path, "expected " + std::to_string(expected) + " weights");
  if (!validate) return DiscreteDistribution::unchecked(std::move(raw));
  try {
    return DiscreteDistribution(std::move(raw));
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
}

// Kernel JSON is [s][a][s'] (time-homogeneous, broadcast over t) or
// [t][s][a][s'].
TransitionKernelTable parse_kernel(const json& j, const std::string& path,
                                   int horizon, int n_s, int n_a, bool validate) {
  if (!j.is_array()) fail(path, "expected a kernel array");
  const bool time_indexed =
      static_cast<int>(j.size()) == horizon && !j.empty() && j.front().is_array() &&
      static_cast<int>(j.front().size()) == n_s && j.front().front().is_array() &&
      !j.front().front().empty() && j.front().front().front().is_array();
  TransitionKernelTable table(horizon, n_s, n_a);
  for (int t = 0; t < horizon; ++t) {
    const json& slice = time_indexed ? j[t] : j;
    const std::string slice_path =
        time_indexed ? path + "[" + std::to_string(t) + "]" : path;
    if (!slice.is_array() || static_cast<int>(slice.size()) != n_s)
      fail(slice_path, "expected " + std::to_string(n_s) + " state rows");
    for (int s = 0; s < n_s; ++s) {
      const json& by_action = slice[s];
      const std::string state_path = slice_path + "[" + std::to_string(s) + "]";
      if (!by_action.is_array() || static_cast<int>(by_action.size()) != n_a)
        fail(state_path, "expected " + std::to_string(n_a) + " action rows");
      for (int a = 0; a < n_a; ++a)
        table.set(t, s, a,
                  parse_row(by_action[a], state_path + "[" + std::to_string(a) + "]",
                            n_s, validate));
    }
  }
  return table;
}

// The crowd reference kernel over arbitrary horizon, reused by configs that
// say "crowd": true.
TransitionKernelTable crowd_reference(int horizon) {
  TransitionKernelTable reference(horizon, 5, 3);
  for (int t = 0; t < horizon; ++t)
    for (int s = 0; s < 5; ++s)
      for (int a = 0; a < 3; ++a) {
        std::vector<double> row(5, 0.0);
        for (int eps = -1; eps <= 1; ++eps) {
          const int next = s + (a - 1) + eps;
          row[(next >= 0 && next <= 4) ? next : s] += 1.0 / 3.0;
        }
        reference.set(t, s, a, DiscreteDistribution(std::move(row)));
      }
  return reference;
}

json distribution_to_json(const DiscreteDistribution& d) {
  return json(d.weights());
}

json kernel_to_json(const GameSpec& spec, const TransitionKernelTable& table) {
  json out = json::object();
  for (int t = 0; t < table.horizon(); ++t) {
    json slice = json::object();
    for (int s = 0; s < spec.num_states(); ++s) {
      json by_action = json::object();
      for (int a = 0; a < spec.num_actions(); ++a)
        by_action[spec.actions().label(a)] = distribution_to_json(table.at(t, s, a));
      slice[spec.states().label(s)] = std::move(by_action);
    }
    out[std::to_string(t)] = std::move(slice);
  }
  return out;
}

json policy_table_to_json(const GameSpec& spec, const MarkovPolicy& policy) {
  json out = json::object();
  for (int t = 0; t < policy.horizon(); ++t) {
    json slice = json::object();
    for (int s = 0; s < spec.num_states(); ++s)
      slice[spec.states().label(s)] = distribution_to_json(policy.at(t, s));
    out[std::to_string(t)] = std::move(slice);
  }
  return out;
}

}  // namespace

double parse_lambda(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      size_t used = 0;
      const double v = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument("trailing characters");
      return v;
    }
    size_t used_num = 0, used_den = 0;
    const std::string num_text = text.substr(0, slash);
    const std::string den_text = text.substr(slash + 1);
    const double num = std::stod(num_text, &used_num);
    const double den = std::stod(den_text, &used_den);
    if (used_num != num_text.size() || used_den != den_text.size() || den == 0.0)
      throw std::invalid_argument("malformed fraction");
    return num / den;
  } catch (const std::exception&) {
    throw ConfigError("lambda: cannot parse '" + text +
                      "' as a decimal or fraction a/b");
  }
}

GameSpec load_game_config(const json& config, bool validate_rows) {
  if (!config.is_object()) fail("(root)", "expected a JSON object");
  for (const char* field : {"states", "actions", "horizon", "initial", "reward",
                            "ambiguity"}) {
    if (!config.contains(field)) fail(field, "missing required field");
  }

  FiniteSpace states = parse_space(config["states"], "states");
  FiniteSpace actions = parse_space(config["actions"], "actions");
  if (!config["horizon"].is_number_integer() || config["horizon"].get<int>() < 1)
    fail("horizon", "expected an integer >= 1");
  const int horizon = config["horizon"].get<int>();
  const int n_s = states.size();
  const int n_a = actions.size();

  DiscreteDistribution initial =
      parse_row(config["initial"], "initial", n_s, validate_rows);

  // reward: {"variant": "crowd", "c": ...} or
  //         {"variant": "table", "values": [s][a][s'], "congestion"?: {beta, c},
  //          "bound"?: number}
  const json& rj = config["reward"];
  if (!rj.is_object() || !rj.contains("variant") || !rj["variant"].is_string())
    fail("reward.variant", "expected a string variant tag");
  RewardModel reward = RewardModel::constant_zero(n_s, n_a);
  const std::string reward_variant = rj["variant"].get<std::string>();
  if (reward_variant == "crowd") {
    const double c = rj.contains("c") ? require_number(rj["c"], "reward.c") : 1e-7;
    if (c <= 0.0) fail("reward.c", "expected a positive number");
    reward = RewardModel(CrowdReward{c});
  } else if (reward_variant == "table") {
    if (!rj.contains("values")) fail("reward.values", "missing required field");
    const json& vj = rj["values"];
    if (!vj.is_array() || static_cast<int>(vj.size()) != n_s)
      fail("reward.values", "expected " + std::to_string(n_s) + " state slices");
    TableReward table;
    table.num_states = n_s;
    table.num_actions = n_a;
    table.values.reserve(static_cast<size_t>(n_s) * n_a * n_s);
    for (int s = 0; s < n_s; ++s) {
      const std::string spath = "reward.values[" + std::to_string(s) + "]";
      if (!vj[s].is_array() || static_cast<int>(vj[s].size()) != n_a)
        fail(spath, "expected " + std::to_string(n_a) + " action rows");
      for (int a = 0; a < n_a; ++a) {
        const auto row = require_number_list(vj[s][a], spath + "[" + std::to_string(a) + "]");
        if (static_cast<int>(row.size()) != n_s)
          fail(spath + "[" + std::to_string(a) + "]",
               "expected " + std::to_string(n_s) + " entries");
        table.values.insert(table.values.end(), row.begin(), row.end());
      }
    }
    if (rj.contains("congestion")) {
      const json& cj = rj["congestion"];
      CongestionTerm term;
      term.beta = cj.contains("beta")
                      ? require_number(cj["beta"], "reward.congestion.beta")
                      : 1.0;
      term.c = cj.contains("c") ? require_number(cj["c"], "reward.congestion.c")
                                : 1e-7;
      if (term.c <= 0.0) fail("reward.congestion.c", "expected a positive number");
      table.congestion = term;
    }
    if (rj.contains("bound"))
      table.declared_bound = require_number(rj["bound"], "reward.bound");
    reward = RewardModel(std::move(table));
  } else {
    fail("reward.variant", "unknown variant '" + reward_variant + "'");
  }

  // ambiguity: {"variant": "singleton"|"finite_set"|"wasserstein_ball",
  //             "lambda"?: number|string, "reference"?: kernel,
  //             "members"?: [kernel...], "crowd"?: true}
  const json& aj = config["ambiguity"];
  if (!aj.is_object() || !aj.contains("variant") || !aj["variant"].is_string())
    fail("ambiguity.variant", "expected a string variant tag");
  const std::string ambiguity_variant = aj["variant"].get<std::string>();

  auto parse_reference = [&](const std::string& base) -> TransitionKernelTable {
    const bool crowd = aj.contains("crowd") && aj["crowd"].is_boolean() &&
                       aj["crowd"].get<bool>();
    if (crowd) {
      if (n_s != 5 || n_a != 3)
        fail(base + ".crowd", "crowd reference needs 5 states and 3 actions");
      return crowd_reference(horizon);
    }
    if (!aj.contains("reference")) fail(base + ".reference", "missing required field");
    return parse_kernel(aj["reference"], base + ".reference", horizon, n_s, n_a,
                        validate_rows);
  };

  AmbiguityFamily ambiguity = [&] {
    if (ambiguity_variant == "singleton")
      return AmbiguityFamily::singleton(parse_reference("ambiguity"));
    if (ambiguity_variant == "finite_set") {
      if (!aj.contains("members") || !aj["members"].is_array() || aj["members"].empty())
        fail("ambiguity.members", "expected a non-empty array of kernels");
      std::vector<TransitionKernelTable> members;
      for (size_t m = 0; m < aj["members"].size(); ++m)
        members.push_back(parse_kernel(aj["members"][m],
                                       "ambiguity.members[" + std::to_string(m) + "]",
                                       horizon, n_s, n_a, validate_rows));
      return AmbiguityFamily::finite_set(std::move(members));
    }
    if (ambiguity_variant == "wasserstein_ball") {
      if (!aj.contains("lambda")) fail("ambiguity.lambda", "missing required field");
      double lambda = 0.0;
      if (aj["lambda"].is_string())
        lambda = parse_lambda(aj["lambda"].get<std::string>());
      else
        lambda = require_number(aj["lambda"], "ambiguity.lambda");
      if (lambda < 0.0) fail("ambiguity.lambda", "expected a non-negative number");
      return AmbiguityFamily::wasserstein_ball(parse_reference("ambiguity"), lambda);
    }
    fail("ambiguity.variant", "unknown variant '" + ambiguity_variant + "'");
  }();

  try {
    return GameSpec(std::move(states), std::move(actions), horizon,
                    std::move(initial), std::move(reward), std::move(ambiguity));
  } catch (const std::exception& e) {
    fail("(root)", e.what());
  }
}

GameSpec load_game_file(const std::string& path, bool validate_rows) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  json config;
  try {
    in >> config;
  } catch (const std::exception& e) {
    throw ConfigError(path + ": invalid JSON: " + e.what());
  }
  return load_game_config(config, validate_rows);
}

json solve_result_to_json(const GameSpec& spec, const SolveResult& r) {
  json jhat = json::object();
  json vhat = json::object();
  for (int t = 0; t < spec.horizon(); ++t) {
    json jh_slice = json::object();
    json vh_slice = json::object();
    for (int s = 0; s < spec.num_states(); ++s) {
      json by_action = json::object();
      for (int a = 0; a < spec.num_actions(); ++a)
        by_action[spec.actions().label(a)] = r.q_values[t][s][a];
      jh_slice[spec.states().label(s)] = std::move(by_action);
      vh_slice[spec.states().label(s)] = r.state_values[t][s];
    }
    jhat[std::to_string(t)] = std::move(jh_slice);
    vhat[std::to_string(t)] = std::move(vh_slice);
  }
  return json{{"Jhat", std::move(jhat)},
              {"Vhat", std::move(vhat)},
              {"pStar", kernel_to_json(spec, r.worst_kernel)},
              {"piStar", policy_table_to_json(spec, r.optimal_policy)},
              {"Vflow", r.flow_value}};
}

json residuals_to_json(const ResidualReport& r) {
  return json{{"optimality", r.optimality},
              {"adversary", r.adversary},
              {"flow", r.flow},
              {"support_violation", r.support_violation}};
}

json equilibrium_to_json(const GameSpec& spec, const Equilibrium& eq) {
  json flow = json::array();
  for (int t = 0; t < eq.flow.horizon(); ++t)
    flow.push_back(distribution_to_json(eq.flow.at(t)));
  return json{{"states", spec.states().labels()},
              {"actions", spec.actions().labels()},
              {"flow", std::move(flow)},
              {"policy", policy_table_to_json(spec, eq.policy)},
              {"kernel", kernel_to_json(spec, eq.kernel)},
              {"residuals", residuals_to_json(eq.residuals)},
              {"value", eq.value},
              {"iterations", eq.iterations},
              {"converged", eq.converged}};
}

json diagnostics_to_json(const DiagnosticsReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back(json{{"name", c.name},
                          {"passed", c.passed},
                          {"unchecked", c.unchecked},
                          {"detail", c.detail}});
  return json{{"checks", std::move(checks)},
              {"reward_bound", r.reward_bound},
              {"all_passed", r.all_passed()}};
}

json nagent_report_to_json(const NAgentReport& r) {
  json out{{"N", r.num_agents},
           {"agent", r.agent},
           {"paths", r.paths},
           {"seed", r.seed},
           {"certified", r.certified},
           {"surrogate", r.surrogate},
           {"gap_is_lower_bound", r.gap_is_lower_bound},
           {"method", r.method}};
  if (r.exact_value) out["J_exact"] = *r.exact_value;
  if (r.mc_estimate) out["J_mc"] = *r.mc_estimate;
  if (r.mc_stderr) out["stderr"] = *r.mc_stderr;
  if (r.nash_gap) out["nash_gap"] = *r.nash_gap;
  return out;
}

json policy_to_json(const GameSpec& spec, const MarkovPolicy& policy) {
  json rows = json::array();
  for (int t = 0; t < policy.horizon(); ++t) {
    json slice = json::array();
    for (int s = 0; s < spec.num_states(); ++s)
      slice.push_back(distribution_to_json(policy.at(t, s)));
    rows.push_back(std::move(slice));
  }
  return rows;
}

MarkovPolicy policy_from_json(const GameSpec& spec, const json& j) {
  if (!j.is_array() || static_cast<int>(j.size()) != spec.horizon())
    throw ConfigError("policy: expected " + std::to_string(spec.horizon()) +
                      " time slices");
  MarkovPolicy policy(spec.horizon(), spec.num_states(), spec.num_actions());
  for (int t = 0; t < spec.horizon(); ++t) {
    const std::string tpath = "policy[" + std::to_string(t) + "]";
    if (!j[t].is_array() || static_cast<int>(j[t].size()) != spec.num_states())
      throw ConfigError(tpath + ": expected " + std::to_string(spec.num_states()) +
                        " state rows");
    for (int s = 0; s < spec.num_states(); ++s)
      policy.set(t, s,
                 parse_row(j[t][s], tpath + "[" + std::to_string(s) + "]",
                           spec.num_actions(), /*validate=*/true));
  }
  return policy;
}

MeasureFlow flow_from_json(const GameSpec& spec, const json& j) {
  if (!j.is_array() || static_cast<int>(j.size()) != spec.horizon())
    throw ConfigError("flow: expected " + std::to_string(spec.horizon()) +
                      " time slices");
  std::vector<DiscreteDistribution> measures;
  for (int t = 0; t < spec.horizon(); ++t)
    measures.push_back(parse_row(j[t], "flow[" + std::to_string(t) + "]",
                                 spec.num_states(), /*validate=*/true));
  return MeasureFlow(std::move(measures));
}

std::string format_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

std::string sweep_to_csv(const GameSpec& spec, const SweepTable& table) {
  std::ostringstream os;
  os << "lambda,V";
  for (int s = 0; s < spec.num_states(); ++s) os << ",mu1_" << s;
  for (int s = 0; s < spec.num_states(); ++s) os << ",muT_" << s;
  os << ",iterations,converged\n";
  for (const auto& row : table.rows) {
    os << format_double(row.lambda) << "," << format_double(row.value);
    const bool failed = !row.error.empty();
    for (int s = 0; s < spec.num_states(); ++s)
      os << "," << (failed ? "" : format_double(row.mu1[s]));
    for (int s = 0; s < spec.num_states(); ++s)
      os << "," << (failed ? "" : format_double(row.mu_terminal[s]));
    os << "," << row.iterations << "," << (row.converged ? 1 : 0) << "\n";
  }
  return os.str();
}

std::string kernels_to_csv(const GameSpec& spec, const SweepTable& table) {
  std::ostringstream os;
  os << "lambda,t,s,a";
  for (int s = 0; s < spec.num_states(); ++s)
    os << ",p_" << spec.states().label(s);
  os << "\n";
  for (const auto& row : table.rows) {
    const auto& eq = row.equilibrium;
    if (!row.error.empty() || eq.kernel.horizon() != spec.horizon()) continue;
    for (int t = 0; t < spec.horizon(); ++t)
      for (int s = 0; s < spec.num_states(); ++s)
        for (int a = 0; a < spec.num_actions(); ++a) {
          os << format_double(row.lambda) << "," << t << ","
             << spec.states().label(s) << "," << spec.actions().label(a);
          const auto& kernel_row = eq.kernel.at(t, s, a);
          for (int s2 = 0; s2 < spec.num_states(); ++s2)
            os << "," << format_double(kernel_row[s2]);
          os << "\n";
        }
  }
  return os.str();
}

std::string policies_to_csv(const GameSpec& spec, const SweepTable& table) {
  std::ostringstream os;
  os << "lambda,t,s";
  for (int a = 0; a < spec.num_actions(); ++a)
    os << ",pi_" << spec.actions().label(a);
  os << "\n";
  for (const auto& row : table.rows) {
    const auto& eq = row.equilibrium;
    if (!row.error.empty() || eq.policy.horizon() != spec.horizon()) continue;
    for (int t = 0; t < spec.horizon(); ++t)
      for (int s = 0; s < spec.num_states(); ++s) {
        os << format_double(row.lambda) << "," << t << ","
           << spec.states().label(s);
        const auto& policy_row = eq.policy.at(t, s);
        for (int a = 0; a < spec.num_actions(); ++a)
          os << "," << format_double(policy_row[a]);
        os << "\n";
      }
  }
  return os.str();
}

std::string nagent_reports_to_csv(const std::vector<NAgentReport>& reports) {
  std::ostringstream os;
  os << "N,J_mc,stderr,J_exact,nash_gap,certified\n";
  for (const auto& r : reports) {
    os << r.num_agents << ",";
    os << (r.mc_estimate ? format_double(*r.mc_estimate) : "") << ",";
    os << (r.mc_stderr ? format_double(*r.mc_stderr) : "") << ",";
    os << (r.exact_value ? format_double(*r.exact_value) : "") << ",";
    os << (r.nash_gap ? format_double(*r.nash_gap) : "") << ",";
    os << (r.certified ? 1 : 0) << "\n";
  }
  return os.str();
}

std::string chaos_to_csv(
    const std::vector<std::pair<int, std::vector<ChaosRow>>>& by_n) {
  std::ostringstream os;
  os << "N,t,indicator_gap,mu_marginal_w1,discrepancy\n";
  for (const auto& [n, rows] : by_n)
    for (const auto& row : rows)
      os << n << "," << row.t << "," << format_double(row.indicator_gap) << ","
         << format_double(row.mu_marginal_w1) << ","
         << format_double(row.discrepancy) << "\n";
  return os.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << contents;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace rmfg
