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

// Command-line front end: run, sweep, compare, table1.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "zoomq/config.hpp"
#include "zoomq/runner.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> nodes;
  std::optional<double> edge_prob;
  std::optional<std::string> alpha, delta0, c_in, c_out, policy, accounting, target_error, graph;
  std::optional<std::int64_t> max_steps;
  std::string out;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON run configuration");
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--nodes", o.nodes, "Node count for the random digraph");
  cmd->add_option("--edge-prob", o.edge_prob, "Extra-edge probability for the random digraph");
  cmd->add_option("--graph", o.graph, "Edge-list file instead of a random digraph");
  cmd->add_option("--alpha", o.alpha, "Step size (rational, e.g. 3/25)");
  cmd->add_option("--delta0", o.delta0, "Initial quantization level");
  cmd->add_option("--c-in", o.c_in, "Zoom-in factor");
  cmd->add_option("--c-out", o.c_out, "Zoom-out factor");
  cmd->add_option("--policy", o.policy, "adaptive | refine_only | fixed_level");
  cmd->add_option("--max-steps", o.max_steps, "Step limit");
  cmd->add_option("--target-error", o.target_error, "Stop once the error reaches this value ('none' disables)");
  cmd->add_option("--accounting", o.accounting, "nominal (fixed bits per message) | measured");
  cmd->add_option("--out", o.out, "Output directory (default $ZOOMQ_OUT_DIR or ./zoomq-out)");
}

zoomq::Rational rational_flag(const std::string& text, const std::string& field) {
  try {
    return zoomq::Rational::parse(text);
  } catch (const std::exception& e) {
    throw zoomq::ConfigError(field, e.what());
  }
}

zoomq::RunConfig resolve(const Overrides& o) {
  zoomq::RunConfig c = o.config.empty() ? zoomq::RunConfig{} : zoomq::load_config(o.config);
  if (o.seed) c.seed = *o.seed;
  if (o.nodes) c.nodes = *o.nodes;
  if (o.edge_prob) c.edge_prob = *o.edge_prob;
  if (o.graph) c.graph_file = *o.graph;
  if (o.alpha) c.alpha = rational_flag(*o.alpha, "alpha");
  if (o.delta0) c.delta0 = rational_flag(*o.delta0, "delta0");
  if (o.c_in) c.c_in = rational_flag(*o.c_in, "c_in");
  if (o.c_out) c.c_out = rational_flag(*o.c_out, "c_out");
  if (o.policy) c.policy.kind = zoomq::parse_policy(*o.policy);
  if (o.accounting) c.accounting = zoomq::parse_accounting(*o.accounting);
  if (o.max_steps) c.max_steps = *o.max_steps;
  if (o.target_error) {
    if (*o.target_error == "none" || *o.target_error == "inf") {
      c.target_error = std::numeric_limits<double>::infinity();
    } else {
      try {
        c.target_error = std::stod(*o.target_error);
      } catch (const std::exception&) {
        throw zoomq::ConfigError("target_error", "not a number: " + *o.target_error);
      }
    }
  }
  c.validate();
  return c;
}

/// "a-b" (inclusive), "a,b,c", or a mix such as "1-5,9".
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) continue;
    try {
      const auto dash = part.find('-');
      if (dash == std::string::npos) {
        out.push_back(std::stoull(part));
      } else {
        const auto lo = std::stoull(part.substr(0, dash));
        const auto hi = std::stoull(part.substr(dash + 1));
        if (hi < lo) throw std::invalid_argument("descending range");
        for (auto s = lo; s <= hi; ++s) out.push_back(s);
      }
    } catch (const std::exception&) {
      throw zoomq::ConfigError("seeds", "cannot parse '" + part + "'");
    }
  }
  if (out.empty()) throw zoomq::ConfigError("seeds", "no seeds given");
  return out;
}

std::string steps_text(double v) {
  if (std::isinf(v)) return "inf";
  char b[32];
  std::snprintf(b, sizeof b, "%.1f", v);
  return b;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zoomq: quantized distributed optimization simulator"};
  app.require_subcommand(1);

  Overrides run_o, sweep_o, cmp_o;
  std::string trace;
  auto* run = app.add_subcommand("run", "Single run; writes history.csv, summary.csv, config.json");
  add_common(run, run_o);
  run->add_option("--trace", trace, "Per-round consensus trace CSV");

  auto* sw = app.add_subcommand("sweep", "Seed sweep; writes sweep.csv and sweep_aggregate.csv");
  add_common(sw, sweep_o);
  std::string seeds = "1-100";
  unsigned threads = 0;
  sw->add_option("--seeds", seeds, "Seeds, e.g. 1-100 or 3,5,8")->capture_default_str();
  sw->add_option("--threads", threads, "Worker threads (0: all cores)");

  auto* cmp = app.add_subcommand("compare", "Adaptive policy against the baselines; writes compare.csv");
  add_common(cmp, cmp_o);

  auto* t1 = app.add_subcommand("table1", "Bit-total table and average bits per node per step");
  std::string t1_out;
  t1->add_option("--out", t1_out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto cfg = resolve(run_o);
      const auto dir = zoomq::resolve_out_dir(run_o.out, cfg);
      const auto art = zoomq::cmd_run(cfg, dir, trace.empty() ? std::nullopt : std::optional<std::filesystem::path>(trace));
      const auto& s = art.summary;
      std::cout << "steps " << s.steps << ", final error " << zoomq::format_real(s.final_error) << ", zoom-ins "
                << s.zoom_ins << ", zoom-outs " << s.zoom_outs << ", bits (" << zoomq::to_string(s.accounting)
                << ") " << s.bits_total() << "\n"
                << "wrote " << dir.string() << "\n";
      if (s.status != "ok") {
        std::cerr << "run failed at " << s.status << '\n';
        return 2;
      }
    } else if (*sw) {
      const auto cfg = resolve(sweep_o);
      const auto dir = zoomq::resolve_out_dir(sweep_o.out, cfg);
      const auto res = zoomq::cmd_sweep(cfg, parse_seeds(seeds), dir, threads);
      const auto& a = res.aggregate;
      std::cout << a.runs << " runs, " << a.failures << " failures; median steps to 1e-2/1e-3/1e-5: "
                << steps_text(a.median_steps_to[0]) << '/' << steps_text(a.median_steps_to[1]) << '/'
                << steps_text(a.median_steps_to[2]) << "; mean mass transmissions per consensus "
                << a.mean_mass_transmissions << "\nwrote " << dir.string() << '\n';
    } else if (*cmp) {
      const auto cfg = resolve(cmp_o);
      const auto dir = zoomq::resolve_out_dir(cmp_o.out, cfg);
      const auto cols = zoomq::cmd_compare(cfg, dir);
      for (const auto& c : cols)
        std::cout << c.name << ": final error " << zoomq::format_real(c.summary.final_error) << '\n';
      std::cout << "wrote " << dir.string() << '\n';
    } else if (*t1) {
      const auto dir = zoomq::resolve_out_dir(t1_out, zoomq::RunConfig{});
      zoomq::cmd_table1(dir);
      std::cout << "wrote " << dir.string() << '\n';
    }
  } catch (const zoomq::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
