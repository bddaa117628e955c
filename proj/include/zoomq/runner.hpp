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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "zoomq/config.hpp"
#include "zoomq/consensus.hpp"
#include "zoomq/graph.hpp"
#include "zoomq/metrics.hpp"
#include "zoomq/objective.hpp"
#include "zoomq/optimizer.hpp"
#include "zoomq/quantizer.hpp"
#include "zoomq/rational.hpp"
#include "zoomq/rng.hpp"

namespace zoomq {

inline constexpr double kErrorTargets[3] = {1e-2, 1e-3, 1e-5};

/// Exact decimal rendering rounded half away from zero.
inline std::string to_decimal(const Rational& r, int digits) {
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  mpq_class scaled = r.abs().raw() * scale + mpq_class(1, 2);
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  std::string s = q.get_str();
  if (digits > 0) {
    if (s.size() <= static_cast<std::size_t>(digits)) s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
    s.insert(s.size() - static_cast<std::size_t>(digits), ".");
  }
  return (r.sign() < 0 && q != 0 ? "-" : "") + s;
}

/// Decimal truncated (not rounded) to the given number of digits.
inline std::string to_decimal_truncated(const Rational& r, int digits) {
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  const Rational scaled(r.raw() * scale);
  const Rational cut = scaled.sign() < 0 ? scaled.ceil() : scaled.floor();
  return to_decimal(cut / Rational(mpq_class(scale)), digits);
}

inline std::string format_real(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10e", v);
  return buf;
}

/// Graph, costs, optimum and initial estimates fixed by a config.
struct Experiment {
  RunConfig cfg;
  Digraph graph;
  QuadraticSuite costs;
  Rational x_star;
  std::vector<Rational> x_init;
};

inline Digraph build_graph(const RunConfig& cfg) {
  if (cfg.graph_file) {
    std::ifstream in(*cfg.graph_file);
    if (!in) throw ConfigError("graph.file", "cannot open '" + *cfg.graph_file + "'");
    try {
      return read_edge_list(in);
    } catch (const std::exception& e) {
      throw ConfigError("graph.file", e.what());
    }
  }
  return generate_random_digraph(cfg.nodes, cfg.edge_prob, mix_seed(cfg.seed, SeedStream::graph));
}

inline QuadraticSuite build_costs(const RunConfig& cfg, std::size_t n) {
  if (!cfg.costs.random) {
    if (cfg.costs.explicit_costs.size() != n)
      throw ConfigError("costs.list", "needs one entry per node (" + std::to_string(n) + ")");
    return QuadraticSuite(cfg.costs.explicit_costs);
  }
  return random_cost_suite(n, mix_seed(cfg.seed, SeedStream::costs), cfg.costs.shared_minimizer, cfg.costs.lo,
                           cfg.costs.hi);
}

/// Uniform draws from the grid lo + j * resolution inside [lo, hi]. A draw
/// equal to the optimum is redrawn so the error metric stays defined.
inline std::vector<Rational> draw_initial_estimates(const RunConfig& cfg, const Rational& x_star, std::size_t n) {
  if (!cfg.x_init_values.empty()) {
    if (cfg.x_init_values.size() != n)
      throw ConfigError("x_init.values", "needs one entry per node (" + std::to_string(n) + ")");
    for (const auto& v : cfg.x_init_values)
      if (v == x_star) throw ConfigError("x_init.values", "an initial estimate equals the optimum");
    return cfg.x_init_values;
  }
  const Rational span = (cfg.x_init_hi - cfg.x_init_lo) / cfg.x_init_resolution;
  const mpz_class top_z = span.floor().numerator();
  if (!top_z.fits_slong_p()) throw ConfigError("x_init.resolution", "grid too fine");
  const std::int64_t top = top_z.get_si();
  if (top == 0 && cfg.x_init_lo == x_star) throw ConfigError("x_init", "the only grid point equals the optimum");
  Rng rng(mix_seed(cfg.seed, SeedStream::init));
  std::vector<Rational> out;
  out.reserve(n);
  while (out.size() < n) {
    Rational v = cfg.x_init_lo + Rational(static_cast<long>(rng.between(0, top))) * cfg.x_init_resolution;
    if (v != x_star) out.push_back(std::move(v));
  }
  return out;
}

inline Experiment build_experiment(const RunConfig& cfg) {
  cfg.validate();
  Digraph g = build_graph(cfg);
  QuadraticSuite costs = build_costs(cfg, g.size());
  Rational x_star = global_optimum(costs);
  auto x_init = draw_initial_estimates(cfg, x_star, g.size());
  return Experiment{cfg, std::move(g), std::move(costs), std::move(x_star), std::move(x_init)};
}

/// Width listed for a static level, if any.
inline std::optional<int> fixed_width_for(const PolicyConfig& p, const Rational& level) {
  for (const auto& [lvl, bits] : p.fixed_widths)
    if (lvl == level) return bits;
  return std::nullopt;
}

inline QuantizerState initial_quantizer(const RunConfig& cfg) {
  QuantizerState q;
  q.basis = cfg.basis0;
  q.level = cfg.delta0;
  q.zoom_in_factor = cfg.c_in;
  q.zoom_out_factor = cfg.c_out;
  switch (cfg.policy.kind) {
    case PolicyKind::adaptive: q.bits = cfg.bits; break;
    case PolicyKind::refine_only: q.bits = cfg.policy.refine_widths.front(); break;
    case PolicyKind::fixed_level: q.bits = fixed_width_for(cfg.policy, cfg.delta0).value_or(cfg.bits); break;
  }
  q.validate();
  return q;
}

inline ZoomPolicy make_policy(const RunConfig& cfg) {
  switch (cfg.policy.kind) {
    case PolicyKind::refine_only: return RefineOnly{cfg.policy.refine_factor, cfg.policy.refine_widths};
    case PolicyKind::fixed_level: return FixedLevel{};
    case PolicyKind::adaptive: break;
  }
  return AdaptiveZoom{};
}

/// Bits per message charged in nominal accounting.
inline WidthSchedule nominal_width_schedule(const RunConfig& cfg) {
  switch (cfg.policy.kind) {
    case PolicyKind::refine_only: return WidthSchedule{cfg.policy.refine_schedule};
    case PolicyKind::fixed_level:
      return WidthSchedule{{{0, fixed_width_for(cfg.policy, cfg.delta0).value_or(cfg.nominal_bits_per_message)}}};
    case PolicyKind::adaptive: break;
  }
  return WidthSchedule{{{0, cfg.nominal_bits_per_message}}};
}

struct RunOutcome {
  std::vector<RunRecord> history;
  QuantizerState q;
  std::string failure;  // empty on success
};

/// Runs the configured policy. A consensus failure ends the run and is
/// reported in `failure` together with the offending step.
inline RunOutcome execute(const Experiment& ex, std::optional<StopRule> stop = std::nullopt,
                          std::function<void(const ConsensusState&, const RoundOutcome&)> observer = {}) {
  const RunConfig& cfg = ex.cfg;
  StopRule rule = stop.value_or(StopRule{cfg.max_steps, cfg.target_error});
  OptimizerState st{ex.x_init, initial_quantizer(cfg), 0, {}};
  StepContext<QuadraticCost> ctx{ex.graph, ex.costs, cfg.alpha};
  ctx.policy = make_policy(cfg);
  ctx.nominal_widths = nominal_width_schedule(cfg);
  ctx.consensus.round_cap = cfg.round_cap;
  ctx.consensus.encoding = cfg.encoding;
  ctx.consensus.observer = std::move(observer);
  ctx.x_star = ex.x_star;
  ctx.x_init = ex.x_init;
  Rng rng(mix_seed(cfg.seed, SeedStream::protocol));
  RunOutcome out;
  try {
    run_until(st, ctx, rule, rng);
  } catch (const std::exception& e) {
    out.failure = "step " + std::to_string(st.k) + ": " + e.what();
  }
  out.history = std::move(st.history);
  out.q = st.q;
  return out;
}

/// Iteration count k at which the error first drops to the target.
inline std::optional<std::int64_t> steps_to(const std::vector<RunRecord>& history, double target) {
  for (const auto& r : history)
    if (r.error <= target) return r.k + 1;
  return std::nullopt;
}

/// Steps whose distance |x - x*| exceeds the contraction envelope driven by
/// the run's own level sequence, starting from the worst initial distance.
inline std::int64_t envelope_violations(const Experiment& ex, const std::vector<RunRecord>& history) {
  Rational d0{0};
  for (const auto& v : ex.x_init) d0 = max(d0, (v - ex.x_star).abs());
  std::vector<Rational> levels;
  levels.reserve(history.size());
  for (const auto& r : history) levels.push_back(r.level);
  const auto bound = contraction_envelope(ex.cfg.alpha, ex.costs.mu, ex.costs.L, ex.graph.size(), levels, d0);
  std::int64_t bad = 0;
  for (std::size_t j = 0; j < history.size(); ++j)
    if ((history[j].x - ex.x_star).abs() > bound[j + 1]) ++bad;
  return bad;
}

struct RunSummary {
  std::uint64_t seed = 0;
  std::string status = "ok";
  std::int64_t steps = 0;
  Rational final_x{0};
  double final_error = std::numeric_limits<double>::quiet_NaN();
  Rational x_star{0};
  std::uint64_t zoom_ins = 0;
  std::uint64_t zoom_outs = 0;
  std::uint64_t refinements = 0;
  Rational final_level{0};
  std::optional<std::int64_t> steps_to_target[3];
  std::int64_t consensus_rounds = 0;
  std::int64_t mass_transmissions = 0;
  std::int64_t flood_broadcasts = 0;
  std::int64_t bits_nominal = 0;
  std::int64_t bits_measured = 0;
  Accounting accounting = Accounting::nominal;
  std::int64_t envelope_violations = 0;
  int diameter = 0;

  double mean_mass_transmissions() const {
    return steps == 0 ? 0.0 : static_cast<double>(mass_transmissions) / static_cast<double>(steps);
  }
  std::int64_t bits_total() const { return accounting == Accounting::nominal ? bits_nominal : bits_measured; }
};

inline RunSummary summarize(const Experiment& ex, const RunOutcome& out) {
  RunSummary s;
  s.seed = ex.cfg.seed;
  if (!out.failure.empty()) s.status = out.failure;
  s.steps = static_cast<std::int64_t>(out.history.size());
  s.final_x = out.history.empty() ? ex.x_init.front() : out.history.back().x;
  s.final_error = out.history.empty() ? error_metric(ex.x_init, ex.x_init, ex.x_star) : out.history.back().error;
  s.x_star = ex.x_star;
  s.zoom_ins = out.q.zoom_ins;
  s.zoom_outs = out.q.zoom_outs;
  s.refinements = out.q.refinements;
  s.final_level = out.q.level;
  for (int t = 0; t < 3; ++t) s.steps_to_target[t] = steps_to(out.history, kErrorTargets[t]);
  for (const auto& r : out.history) {
    s.consensus_rounds += r.consensus_rounds;
    s.mass_transmissions += r.mass_transmissions;
    s.flood_broadcasts += r.flood_broadcasts;
    s.bits_nominal += r.bits_nominal;
    s.bits_measured += r.bits_measured;
  }
  s.accounting = ex.cfg.accounting;
  if (ex.cfg.policy.kind == PolicyKind::adaptive) s.envelope_violations = envelope_violations(ex, out.history);
  s.diameter = ex.graph.diameter();
  return s;
}

// CSV ------------------------------------------------------------------

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

inline const char* kHistoryHeader =
    "k,x,x_decimal,error,level,basis,event,consensus_rounds,mass_transmissions,flood_broadcasts,"
    "bits_per_message_nominal,bits_per_message_measured,bits_nominal,bits_measured,zoom_ins,zoom_outs";

/// One row per step; x and error describe the estimate after step k.
inline void write_history_csv(std::ostream& os, const std::vector<RunRecord>& history) {
  os << kHistoryHeader << '\n';
  for (const auto& r : history)
    os << r.k << ',' << r.x.str() << ',' << to_decimal(r.x, 12) << ',' << format_real(r.error) << ','
       << r.level.str() << ',' << r.basis.str() << ',' << to_string(r.event) << ',' << r.consensus_rounds << ','
       << r.mass_transmissions << ',' << r.flood_broadcasts << ',' << r.nominal_bits_per_message << ','
       << r.measured_bits_per_message << ',' << r.bits_nominal << ',' << r.bits_measured << ',' << r.zoom_ins << ','
       << r.zoom_outs << '\n';
}

inline const char* kSummaryHeader =
    "seed,status,steps,final_x,final_x_decimal,final_error,x_star,diameter,zoom_ins,zoom_outs,refinements,"
    "final_level,steps_to_1e-2,steps_to_1e-3,steps_to_1e-5,consensus_rounds,mass_transmissions,"
    "flood_broadcasts,mean_mass_transmissions,bits_nominal,bits_measured,accounting,bits_total,envelope_violations";

inline std::string opt_steps(const std::optional<std::int64_t>& v) { return v ? std::to_string(*v) : "inf"; }

inline void write_summary_row(std::ostream& os, const RunSummary& s) {
  char mean[32];
  std::snprintf(mean, sizeof mean, "%.4f", s.mean_mass_transmissions());
  os << s.seed << ',' << csv_quote(s.status) << ',' << s.steps << ',' << s.final_x.str() << ','
     << to_decimal(s.final_x, 12) << ',' << format_real(s.final_error) << ',' << s.x_star.str() << ',' << s.diameter
     << ',' << s.zoom_ins << ',' << s.zoom_outs << ',' << s.refinements << ',' << s.final_level.str() << ','
     << opt_steps(s.steps_to_target[0]) << ',' << opt_steps(s.steps_to_target[1]) << ','
     << opt_steps(s.steps_to_target[2]) << ',' << s.consensus_rounds << ',' << s.mass_transmissions << ','
     << s.flood_broadcasts << ',' << mean << ',' << s.bits_nominal << ',' << s.bits_measured << ','
     << to_string(s.accounting) << ',' << s.bits_total() << ',' << s.envelope_violations << '\n';
}

// Output directory -------------------------------------------------------

inline constexpr const char* kOutDirEnv = "ZOOMQ_OUT_DIR";

/// Flag, then config, then $ZOOMQ_OUT_DIR, then "zoomq-out".
inline std::filesystem::path resolve_out_dir(const std::string& flag, const RunConfig& cfg) {
  if (!flag.empty()) return flag;
  if (!cfg.out_dir.empty()) return cfg.out_dir;
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  return "zoomq-out";
}

inline std::ofstream open_output(const std::filesystem::path& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  std::ofstream os(dir / name, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + (dir / name).string());
  return os;
}

// Commands ---------------------------------------------------------------

struct RunArtifacts {
  Experiment experiment;
  RunOutcome outcome;
  RunSummary summary;
};

/// Single run. Writes history.csv, summary.csv and the resolved config.json.
inline RunArtifacts cmd_run(const RunConfig& cfg, const std::filesystem::path& out_dir,
                            const std::optional<std::filesystem::path>& trace_path = std::nullopt) {
  Experiment ex = build_experiment(cfg);
  std::ofstream trace;
  std::function<void(const ConsensusState&, const RoundOutcome&)> observer;
  if (trace_path) {
    trace = open_output(trace_path->parent_path().empty() ? "." : trace_path->parent_path(),
                        trace_path->filename().string());
    observer = make_trace_writer(trace);
  }
  RunOutcome out = execute(ex, std::nullopt, std::move(observer));
  RunSummary sum = summarize(ex, out);

  auto hist = open_output(out_dir, "history.csv");
  write_history_csv(hist, out.history);
  auto summ = open_output(out_dir, "summary.csv");
  summ << kSummaryHeader << '\n';
  write_summary_row(summ, sum);
  auto conf = open_output(out_dir, "config.json");
  conf << to_json(cfg).dump(2) << '\n';
  return RunArtifacts{std::move(ex), std::move(out), std::move(sum)};
}

/// Median with unreached targets counted as +inf.
inline double median_steps(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  if (v.size() % 2 == 1) return v[m];
  if (std::isinf(v[m - 1]) || std::isinf(v[m])) return std::numeric_limits<double>::infinity();
  return (v[m - 1] + v[m]) / 2.0;
}

struct SweepAggregate {
  std::size_t runs = 0;
  std::size_t failures = 0;
  double median_steps_to[3] = {0, 0, 0};
  double mean_mass_transmissions = 0;  // per consensus execution, over all steps and seeds
  std::int64_t max_steps_to_finest = 0;  // -1 if some run never reached 1e-5
  std::int64_t envelope_violations = 0;
  std::uint64_t max_zoom_outs = 0;
};

struct SweepResult {
  std::vector<RunSummary> runs;
  SweepAggregate aggregate;
};

inline SweepAggregate aggregate(const std::vector<RunSummary>& runs) {
  SweepAggregate a;
  a.runs = runs.size();
  std::int64_t steps = 0, mass = 0;
  for (int t = 0; t < 3; ++t) {
    std::vector<double> v;
    for (const auto& r : runs)
      v.push_back(r.steps_to_target[t] ? static_cast<double>(*r.steps_to_target[t])
                                       : std::numeric_limits<double>::infinity());
    a.median_steps_to[t] = median_steps(std::move(v));
  }
  for (const auto& r : runs) {
    if (r.status != "ok") ++a.failures;
    steps += r.steps;
    mass += r.mass_transmissions;
    a.envelope_violations += r.envelope_violations;
    a.max_zoom_outs = std::max(a.max_zoom_outs, r.zoom_outs);
    if (a.max_steps_to_finest >= 0)
      a.max_steps_to_finest = r.steps_to_target[2] ? std::max(a.max_steps_to_finest, *r.steps_to_target[2]) : -1;
  }
  a.mean_mass_transmissions = steps == 0 ? 0.0 : static_cast<double>(mass) / static_cast<double>(steps);
  return a;
}

/// Runs every seed (in parallel when threads > 1); rows keep seed order.
inline SweepResult sweep(const RunConfig& base, const std::vector<std::uint64_t>& seeds, unsigned threads = 0) {
  if (seeds.empty()) throw ConfigError("seeds", "sweep needs at least one seed");
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(seeds.size()));
  SweepResult res;
  res.runs.resize(seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      RunConfig cfg = base;
      cfg.seed = seeds[i];
      try {
        const Experiment ex = build_experiment(cfg);
        res.runs[i] = summarize(ex, execute(ex));
      } catch (const std::exception& e) {
        res.runs[i].seed = seeds[i];
        res.runs[i].status = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  res.aggregate = aggregate(res.runs);
  return res;
}

inline void write_aggregate_csv(std::ostream& os, const SweepAggregate& a) {
  auto med = [](double v) {
    if (std::isinf(v)) return std::string("inf");
    char b[32];
    std::snprintf(b, sizeof b, "%.1f", v);
    return std::string(b);
  };
  char mean[32];
  std::snprintf(mean, sizeof mean, "%.4f", a.mean_mass_transmissions);
  os << "runs,failures,median_steps_to_1e-2,median_steps_to_1e-3,median_steps_to_1e-5,max_steps_to_1e-5,"
        "mean_mass_transmissions_per_consensus,envelope_violations,max_zoom_outs\n";
  os << a.runs << ',' << a.failures << ',' << med(a.median_steps_to[0]) << ',' << med(a.median_steps_to[1]) << ','
     << med(a.median_steps_to[2]) << ','
     << (a.max_steps_to_finest < 0 ? std::string("inf") : std::to_string(a.max_steps_to_finest)) << ',' << mean
     << ',' << a.envelope_violations << ',' << a.max_zoom_outs << '\n';
}

/// Writes sweep.csv (one row per seed) and sweep_aggregate.csv.
inline SweepResult cmd_sweep(const RunConfig& cfg, const std::vector<std::uint64_t>& seeds,
                             const std::filesystem::path& out_dir, unsigned threads = 0) {
  SweepResult res = sweep(cfg, seeds, threads);
  auto rows = open_output(out_dir, "sweep.csv");
  rows << kSummaryHeader << '\n';
  for (const auto& r : res.runs) write_summary_row(rows, r);
  auto agg = open_output(out_dir, "sweep_aggregate.csv");
  write_aggregate_csv(agg, res.aggregate);
  auto conf = open_output(out_dir, "config.json");
  conf << to_json(cfg).dump(2) << '\n';
  return res;
}

struct CompareColumn {
  std::string name;
  RunConfig cfg;
  RunOutcome outcome;
  RunSummary summary;
};

/// The adaptive policy and the baselines on one graph, cost suite and seed.
inline std::vector<RunConfig> comparison_configs(const RunConfig& base) {
  std::vector<RunConfig> out;
  RunConfig a = base;
  a.policy.kind = PolicyKind::adaptive;
  out.push_back(a);
  RunConfig r = base;
  r.policy.kind = PolicyKind::refine_only;
  r.delta0 = Rational(1, 10);
  out.push_back(r);
  for (const auto& lvl : {Rational(1, 10), Rational(1, 100), Rational(1, 1000)}) {
    RunConfig f = base;
    f.policy.kind = PolicyKind::fixed_level;
    f.delta0 = lvl;
    out.push_back(f);
  }
  return out;
}

inline std::string column_name(const RunConfig& c) {
  switch (c.policy.kind) {
    case PolicyKind::adaptive: return "adaptive";
    case PolicyKind::refine_only: return "refine_only";
    case PolicyKind::fixed_level: return "fixed_level_" + to_decimal(c.delta0, 3);
  }
  return "adaptive";
}

/// Every column runs exactly max_steps steps (no error target) so rows align.
/// Writes compare.csv (k, error per column; k = 0 is the initial state) and
/// compare_summary.csv.
inline std::vector<CompareColumn> cmd_compare(const RunConfig& base, const std::filesystem::path& out_dir) {
  std::vector<CompareColumn> cols;
  const StopRule rule{base.max_steps, std::numeric_limits<double>::infinity()};
  for (auto& cfg : comparison_configs(base)) {
    const Experiment ex = build_experiment(cfg);
    RunOutcome out = execute(ex, rule);
    RunSummary sum = summarize(ex, out);
    cols.push_back({column_name(cfg), std::move(cfg), std::move(out), std::move(sum)});
  }
  const Experiment ref = build_experiment(cols.front().cfg);
  const double e0 = error_metric(ref.x_init, ref.x_init, ref.x_star);

  auto os = open_output(out_dir, "compare.csv");
  os << 'k';
  for (const auto& c : cols) os << ',' << c.name;
  os << '\n';
  std::size_t rows = 0;
  for (const auto& c : cols) rows = std::max(rows, c.outcome.history.size());
  for (std::size_t k = 0; k <= rows; ++k) {
    os << k;
    for (const auto& c : cols) {
      os << ',';
      if (k == 0) os << format_real(e0);
      else if (k <= c.outcome.history.size()) os << format_real(c.outcome.history[k - 1].error);
    }
    os << '\n';
  }
  auto summ = open_output(out_dir, "compare_summary.csv");
  summ << "policy," << kSummaryHeader << '\n';
  for (const auto& c : cols) {
    summ << c.name << ',';
    write_summary_row(summ, c.summary);
  }
  return cols;
}

// Bit table ---------------------------------------------------------------

/// Transmissions per consensus execution assumed by the bit table.
inline Rational table_transmissions() { return Rational(21188, 100); }

struct TableCell {
  std::string algorithm;
  int target_exponent = 0;          // error target 10^-e
  std::int64_t steps = 0;           // convergence step count
  std::int64_t bit_steps = 0;       // sum of per-step message widths over those steps
  Rational total{0};                // bit_steps * transmissions
  std::optional<std::string> reference;  // reference value, if any
};

struct TableRow {
  std::string algorithm;
  /// (step count, bits per message from that step on) segments.
  std::vector<std::pair<std::int64_t, int>> widths;
  /// Step counts for 1e-2, 1e-3, 1e-5; nullopt for cells left empty.
  std::optional<std::int64_t> steps[3];
  const char* reference[3];
};

inline std::int64_t bit_steps(const std::vector<std::pair<std::int64_t, int>>& widths, std::int64_t steps) {
  std::int64_t total = 0;
  for (std::size_t i = 0; i < widths.size(); ++i) {
    const std::int64_t from = widths[i].first;
    const std::int64_t to = i + 1 < widths.size() ? widths[i + 1].first : steps;
    if (from >= steps) break;
    total += (std::min(to, steps) - from) * widths[i].second;
  }
  return total;
}

/// Rows of the reference bit table. The refine-only step counts (3, 8, 16)
/// are the only ones consistent with its reference totals.
inline std::vector<TableRow> table_rows() {
  return {
      {"adaptive_zoom", {{0, 3}}, {18, 27, 40}, {"11441.52", "17162.28", "25425.60"}},
      {"refine_only", {{0, 7}, {3, 10}, {8, 14}}, {3, 8, 16}, {"4449.48", "15043.28", "38774.04"}},
      {"fixed_level_0.1", {{0, 7}}, {3, std::nullopt, std::nullopt}, {"4449.48", nullptr, nullptr}},
      {"fixed_level_0.01", {{0, 10}}, {3, 5, std::nullopt}, {"6356.40", "10594.00", nullptr}},
      {"fixed_level_0.001", {{0, 14}}, {3, 5, 11}, {"8898.96", "14831.60", "32629.52"}},
  };
}

inline std::vector<TableCell> table_cells() {
  std::vector<TableCell> out;
  const int exps[3] = {2, 3, 5};
  for (const auto& row : table_rows())
    for (int t = 0; t < 3; ++t) {
      if (!row.steps[t]) continue;
      TableCell c;
      c.algorithm = row.algorithm;
      c.target_exponent = exps[t];
      c.steps = *row.steps[t];
      c.bit_steps = bit_steps(row.widths, c.steps);
      c.total = bits_total(Rational(1), Rational(static_cast<long>(c.bit_steps)), table_transmissions());
      if (row.reference[t]) c.reference = row.reference[t];
      out.push_back(std::move(c));
    }
  return out;
}

struct AverageBitsRow {
  std::string algorithm;
  int target_exponent = 0;
  Rational value{0};  // average bits per node per step
  std::string reference;
};

/// Average bits per node per optimization step on the 20-node network:
/// (average message width) * transmissions / n.
inline std::vector<AverageBitsRow> average_bits_rows() {
  std::vector<AverageBitsRow> out;
  const char* reference[5][3] = {{"31.782", "31.782", "31.782"},
                               {"74.15", "94.02", "121.16"},
                               {"74.15", "", ""},
                               {"105.94", "105.94", ""},
                               {"148.31", "148.31", "148.31"}};
  const auto cells = table_cells();
  const auto rows = table_rows();
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (const auto& c : cells) {
      if (c.algorithm != rows[r].algorithm) continue;
      const int t = c.target_exponent == 2 ? 0 : c.target_exponent == 3 ? 1 : 2;
      const Rational width = Rational(static_cast<long>(c.bit_steps), static_cast<long>(c.steps));
      out.push_back({c.algorithm, c.target_exponent, avg_bits_per_node_per_step(width, table_transmissions(), 20),
                     reference[r][t]});
    }
  return out;
}

/// Writes table1.csv (reference layout), table1_detail.csv and
/// average_bits.csv.
inline void cmd_table1(const std::filesystem::path& out_dir) {
  const auto cells = table_cells();
  auto os = open_output(out_dir, "table1.csv");
  os << "algorithm,1e-2,1e-3,1e-5\n";
  for (const auto& row : table_rows()) {
    os << row.algorithm;
    for (int e : {2, 3, 5}) {
      os << ',';
      auto it = std::find_if(cells.begin(), cells.end(),
                             [&](const TableCell& c) { return c.algorithm == row.algorithm && c.target_exponent == e; });
      os << (it == cells.end() ? std::string("--") : to_decimal(it->total, 2));
    }
    os << '\n';
  }

  auto det = open_output(out_dir, "table1_detail.csv");
  det << "algorithm,target,steps,bit_steps,transmissions,recomputed,reference,abs_diff\n";
  for (const auto& c : cells) {
    det << c.algorithm << ",1e-" << c.target_exponent << ',' << c.steps << ',' << c.bit_steps << ','
        << to_decimal(table_transmissions(), 2) << ',' << to_decimal(c.total, 2) << ',' << c.reference.value_or("")
        << ',';
    if (c.reference) det << to_decimal((c.total - Rational::parse(*c.reference)).abs(), 2);
    det << '\n';
  }

  auto avg = open_output(out_dir, "average_bits.csv");
  avg << "algorithm,target,exact,truncated_2dp,rounded_3dp,reference\n";
  for (const auto& r : average_bits_rows())
    avg << r.algorithm << ",1e-" << r.target_exponent << ',' << r.value.str() << ','
        << to_decimal_truncated(r.value, 2) << ',' << to_decimal(r.value, 3) << ',' << r.reference << '\n';
}

}  // namespace zoomq
