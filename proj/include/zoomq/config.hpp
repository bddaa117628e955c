// Copyright 2026 The zoomq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "zoomq/consensus.hpp"
#include "zoomq/objective.hpp"
#include "zoomq/optimizer.hpp"
#include "zoomq/rational.hpp"

namespace zoomq {

/// Invalid configuration; field() names the offending key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class PolicyKind { adaptive, refine_only, fixed_level };
enum class Accounting { nominal, measured };

struct PolicyConfig {
  PolicyKind kind = PolicyKind::adaptive;
  Rational refine_factor{10};
  std::vector<int> refine_widths{7, 10, 14};
  /// Step-indexed message widths charged to the refine-only baseline.
  std::vector<std::pair<std::int64_t, int>> refine_schedule{{0, 7}, {3, 10}, {9, 14}};
  /// Message (and quantizer) width per static level for the fixed baseline.
  std::vector<std::pair<Rational, int>> fixed_widths{{Rational(1, 10), 7}, {Rational(1, 100), 10}, {Rational(1, 1000), 14}};
};

struct CostConfig {
  bool random = true;
  std::int64_t lo = 1;
  std::int64_t hi = 5;
  bool shared_minimizer = true;
  std::vector<QuadraticCost> explicit_costs;
};

struct RunConfig {
  std::size_t nodes = 20;
  double edge_prob = 0.5;
  std::optional<std::string> graph_file;
  std::uint64_t seed = 1;

  Rational alpha{3, 25};
  Rational delta0{1, 2};
  Rational c_in{4, 3};
  Rational c_out{2};
  Rational basis0{0};
  int bits = 3;

  PolicyConfig policy;
  CostConfig costs;

  Rational x_init_lo{1};
  Rational x_init_hi{5};
  Rational x_init_resolution{1, 100};
  std::vector<Rational> x_init_values;  // explicit initial estimates; overrides the draw

  std::int64_t max_steps = 200;
  double target_error = 1e-5;  // non-finite: no target

  Accounting accounting = Accounting::nominal;
  int nominal_bits_per_message = 3;

  MassEncoding encoding = MassEncoding::basis_relative;
  std::int64_t round_cap = 100000;

  std::string out_dir;  // empty: flag, then environment, then default

  void validate() const {
    if (nodes < 2 && !graph_file) throw ConfigError("nodes", "must be at least 2");
    if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) throw ConfigError("edge_prob", "must lie in [0, 1]");
    if (delta0.sign() <= 0) throw ConfigError("delta0", "must be positive");
    if (c_in <= Rational(1)) throw ConfigError("c_in", "must exceed 1");
    if (c_out <= Rational(1)) throw ConfigError("c_out", "must exceed 1");
    if (bits < 1 || bits > 62) throw ConfigError("bits", "must lie in [1, 62]");
    if (alpha.sign() < 0) throw ConfigError("alpha", "must be nonnegative");
    if (x_init_hi < x_init_lo) throw ConfigError("x_init.lo", "must not exceed x_init.hi");
    if (x_init_resolution.sign() <= 0) throw ConfigError("x_init.resolution", "must be positive");
    if (max_steps < 0) throw ConfigError("max_steps", "must be nonnegative");
    if (round_cap < 1) throw ConfigError("round_cap", "must be positive");
    if (policy.kind == PolicyKind::refine_only && policy.refine_factor <= Rational(1))
      throw ConfigError("policy.factor", "must exceed 1");
    if (policy.kind == PolicyKind::refine_only && policy.refine_widths.empty())
      throw ConfigError("policy.widths", "must not be empty");
    if (!costs.random) {
      if (costs.explicit_costs.empty()) throw ConfigError("costs.list", "must not be empty");
      for (const auto& c : costs.explicit_costs)
        if (c.beta.sign() <= 0) throw ConfigError("costs.list", "beta must be positive");
    } else if (costs.lo > costs.hi || costs.lo <= 0) {
      throw ConfigError("costs.lo", "value set must be a nonempty range of positive integers");
    }
  }
};

inline std::string to_string(PolicyKind k) {
  switch (k) {
    case PolicyKind::adaptive: return "adaptive";
    case PolicyKind::refine_only: return "refine_only";
    case PolicyKind::fixed_level: return "fixed_level";
  }
  return "adaptive";
}

inline PolicyKind parse_policy(const std::string& s) {
  if (s == "adaptive") return PolicyKind::adaptive;
  if (s == "refine_only" || s == "refine-only") return PolicyKind::refine_only;
  if (s == "fixed_level" || s == "fixed-level") return PolicyKind::fixed_level;
  throw ConfigError("policy", "unknown policy '" + s + "' (adaptive, refine_only, fixed_level)");
}

inline std::string to_string(Accounting a) { return a == Accounting::nominal ? "nominal" : "measured"; }

inline Accounting parse_accounting(const std::string& s) {
  if (s == "nominal" || s == "fixed") return Accounting::nominal;
  if (s == "measured") return Accounting::measured;
  throw ConfigError("accounting", "unknown mode '" + s + "' (nominal, measured)");
}

inline std::string to_string(MassEncoding e) {
  return e == MassEncoding::basis_relative ? "basis_relative" : "absolute";
}

inline MassEncoding parse_encoding(const std::string& s) {
  if (s == "basis_relative") return MassEncoding::basis_relative;
  if (s == "absolute") return MassEncoding::absolute;
  throw ConfigError("consensus.encoding", "unknown encoding '" + s + "' (basis_relative, absolute)");
}

namespace detail {

inline Rational get_rational(const nlohmann::json& j, const char* key, const std::string& field) {
  try {
    if (j.at(key).is_number_integer()) return Rational(j.at(key).get<long>());
    return Rational::parse(j.at(key).get<std::string>());
  } catch (const std::exception& e) {
    throw ConfigError(field, std::string("expected a rational \"num/den\": ") + e.what());
  }
}

template <typename T>
void read_opt(const nlohmann::json& j, const char* key, T& out, const std::string& field) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const std::exception& e) {
    throw ConfigError(field, e.what());
  }
}

inline void read_opt_rational(const nlohmann::json& j, const char* key, Rational& out, const std::string& field) {
  if (j.contains(key)) out = get_rational(j, key, field);
}

}  // namespace detail

inline nlohmann::json to_json(const RunConfig& c) {
  using nlohmann::json;
  json policy = {{"kind", to_string(c.policy.kind)}};
  policy["factor"] = c.policy.refine_factor.str();
  policy["widths"] = c.policy.refine_widths;
  policy["schedule"] = json::array();
  for (auto [k, b] : c.policy.refine_schedule) policy["schedule"].push_back({k, b});
  policy["fixed_widths"] = json::array();
  for (const auto& [lvl, b] : c.policy.fixed_widths) policy["fixed_widths"].push_back({lvl.str(), b});

  json costs;
  if (c.costs.random) {
    costs = {{"kind", "random"}, {"lo", c.costs.lo}, {"hi", c.costs.hi}, {"shared_minimizer", c.costs.shared_minimizer}};
  } else {
    costs = {{"kind", "explicit"}, {"list", json::array()}};
    for (const auto& q : c.costs.explicit_costs) costs["list"].push_back({{"beta", q.beta.str()}, {"x0", q.x0.str()}});
  }

  json x_init = {{"lo", c.x_init_lo.str()}, {"hi", c.x_init_hi.str()}, {"resolution", c.x_init_resolution.str()}};
  if (!c.x_init_values.empty()) {
    x_init["values"] = json::array();
    for (const auto& v : c.x_init_values) x_init["values"].push_back(v.str());
  }

  json graph = {{"nodes", c.nodes}, {"edge_prob", c.edge_prob}};
  if (c.graph_file) graph["file"] = *c.graph_file;

  json stop = {{"max_steps", c.max_steps}};
  stop["target_error"] = std::isfinite(c.target_error) ? json(c.target_error) : json(nullptr);

  return json{{"seed", c.seed},
              {"graph", graph},
              {"alpha", c.alpha.str()},
              {"delta0", c.delta0.str()},
              {"c_in", c.c_in.str()},
              {"c_out", c.c_out.str()},
              {"basis0", c.basis0.str()},
              {"bits", c.bits},
              {"policy", policy},
              {"costs", costs},
              {"x_init", x_init},
              {"stop", stop},
              {"accounting", {{"mode", to_string(c.accounting)}, {"bits_per_message", c.nominal_bits_per_message}}},
              {"consensus", {{"encoding", to_string(c.encoding)}, {"round_cap", c.round_cap}}},
              {"out_dir", c.out_dir}};
}

/// Reads a config; missing keys keep their defaults.
inline RunConfig config_from_json(const nlohmann::json& j) {
  using detail::read_opt;
  using detail::read_opt_rational;
  RunConfig c;
  read_opt(j, "seed", c.seed, "seed");
  if (j.contains("graph")) {
    const auto& g = j["graph"];
    read_opt(g, "nodes", c.nodes, "graph.nodes");
    read_opt(g, "edge_prob", c.edge_prob, "graph.edge_prob");
    if (g.contains("file")) c.graph_file = g["file"].get<std::string>();
  }
  read_opt_rational(j, "alpha", c.alpha, "alpha");
  read_opt_rational(j, "delta0", c.delta0, "delta0");
  read_opt_rational(j, "c_in", c.c_in, "c_in");
  read_opt_rational(j, "c_out", c.c_out, "c_out");
  read_opt_rational(j, "basis0", c.basis0, "basis0");
  read_opt(j, "bits", c.bits, "bits");

  if (j.contains("policy")) {
    const auto& p = j["policy"];
    if (p.contains("kind")) c.policy.kind = parse_policy(p["kind"].get<std::string>());
    read_opt_rational(p, "factor", c.policy.refine_factor, "policy.factor");
    read_opt(p, "widths", c.policy.refine_widths, "policy.widths");
    if (p.contains("schedule")) {
      c.policy.refine_schedule.clear();
      for (const auto& e : p["schedule"]) c.policy.refine_schedule.emplace_back(e.at(0).get<std::int64_t>(), e.at(1).get<int>());
    }
    if (p.contains("fixed_widths")) {
      c.policy.fixed_widths.clear();
      for (const auto& e : p["fixed_widths"])
        c.policy.fixed_widths.emplace_back(Rational::parse(e.at(0).get<std::string>()), e.at(1).get<int>());
    }
  }

  if (j.contains("costs")) {
    const auto& cs = j["costs"];
    const std::string kind = cs.value("kind", std::string("random"));
    if (kind == "random") {
      c.costs.random = true;
      read_opt(cs, "lo", c.costs.lo, "costs.lo");
      read_opt(cs, "hi", c.costs.hi, "costs.hi");
      read_opt(cs, "shared_minimizer", c.costs.shared_minimizer, "costs.shared_minimizer");
    } else if (kind == "explicit") {
      c.costs.random = false;
      for (const auto& e : cs.at("list"))
        c.costs.explicit_costs.push_back(
            {detail::get_rational(e, "beta", "costs.list.beta"), detail::get_rational(e, "x0", "costs.list.x0")});
    } else {
      throw ConfigError("costs.kind", "expected 'random' or 'explicit'");
    }
  }

  if (j.contains("x_init")) {
    const auto& xi = j["x_init"];
    read_opt_rational(xi, "lo", c.x_init_lo, "x_init.lo");
    read_opt_rational(xi, "hi", c.x_init_hi, "x_init.hi");
    read_opt_rational(xi, "resolution", c.x_init_resolution, "x_init.resolution");
    if (xi.contains("values"))
      for (const auto& v : xi["values"]) c.x_init_values.push_back(Rational::parse(v.get<std::string>()));
  }

  if (j.contains("stop")) {
    const auto& s = j["stop"];
    read_opt(s, "max_steps", c.max_steps, "stop.max_steps");
    if (s.contains("target_error"))
      c.target_error = s["target_error"].is_null() ? std::numeric_limits<double>::infinity()
                                                   : s["target_error"].get<double>();
  }
  if (j.contains("accounting")) {
    const auto& a = j["accounting"];
    if (a.contains("mode")) c.accounting = parse_accounting(a["mode"].get<std::string>());
    read_opt(a, "bits_per_message", c.nominal_bits_per_message, "accounting.bits_per_message");
  }
  if (j.contains("consensus")) {
    const auto& cn = j["consensus"];
    if (cn.contains("encoding")) c.encoding = parse_encoding(cn["encoding"].get<std::string>());
    read_opt(cn, "round_cap", c.round_cap, "consensus.round_cap");
  }
  read_opt(j, "out_dir", c.out_dir, "out_dir");
  c.validate();
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config", e.what());
  }
  return config_from_json(j);
}

}  // namespace zoomq
