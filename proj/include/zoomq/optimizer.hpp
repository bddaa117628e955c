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
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "zoomq/consensus.hpp"
#include "zoomq/graph.hpp"
#include "zoomq/metrics.hpp"
#include "zoomq/objective.hpp"
#include "zoomq/quantizer.hpp"
#include "zoomq/rational.hpp"
#include "zoomq/rng.hpp"

namespace zoomq {

/// Zoom in or out whenever the estimate repeats.
struct AdaptiveZoom {
  friend bool operator==(const AdaptiveZoom&, const AdaptiveZoom&) = default;
};

/// Divide the level by a fixed factor whenever the estimate repeats; the
/// basis never moves. The quantizer widens to widths[r] bits after r
/// refinements, then by ceil(log2(factor)) bits per further refinement.
struct RefineOnly {
  Rational factor{10};
  std::vector<int> widths{7, 10, 14};

  int width_after(std::uint64_t refinements) const {
    if (widths.empty()) throw std::invalid_argument("refine-only policy needs at least one width");
    if (refinements < widths.size()) return widths[refinements];
    const int step = static_cast<int>(std::ceil(std::log2(factor.to_double())));
    return widths.back() + step * static_cast<int>(refinements - widths.size() + 1);
  }
  friend bool operator==(const RefineOnly&, const RefineOnly&) = default;
};

/// Static level, no adaptation.
struct FixedLevel {
  friend bool operator==(const FixedLevel&, const FixedLevel&) = default;
};

using ZoomPolicy = std::variant<AdaptiveZoom, RefineOnly, FixedLevel>;

enum class ZoomEvent { none, zoom_in, zoom_out, refine };

inline std::string_view to_string(ZoomEvent e) {
  switch (e) {
    case ZoomEvent::none: return "none";
    case ZoomEvent::zoom_in: return "zoom_in";
    case ZoomEvent::zoom_out: return "zoom_out";
    case ZoomEvent::refine: return "refine";
  }
  return "none";
}

/// Bits per message as a step-indexed schedule: entry (k0, b) applies from
/// step k0 until the next entry.
struct WidthSchedule {
  std::vector<std::pair<std::int64_t, int>> entries{{0, 3}};

  int at(std::int64_t k) const {
    int bits = entries.empty() ? 0 : entries.front().second;
    for (const auto& [start, b] : entries)
      if (start <= k) bits = b;
    return bits;
  }
  friend bool operator==(const WidthSchedule&, const WidthSchedule&) = default;
};

/// One optimization step.
struct RunRecord {
  std::int64_t k = 0;
  Rational x{0};  // common estimate after the step
  double error = std::numeric_limits<double>::quiet_NaN();
  Rational level{0};  // level used by this step's consensus
  Rational basis{0};  // basis used by this step's consensus
  ZoomEvent event = ZoomEvent::none;
  std::int64_t consensus_rounds = 0;
  std::int64_t mass_transmissions = 0;
  std::int64_t flood_broadcasts = 0;
  int nominal_bits_per_message = 0;
  int measured_bits_per_message = 0;
  std::int64_t bits_nominal = 0;
  std::int64_t bits_measured = 0;
  std::uint64_t zoom_ins = 0;   // cumulative, after the step
  std::uint64_t zoom_outs = 0;  // cumulative, after the step
};

struct OptimizerState {
  std::vector<Rational> x;
  QuantizerState q;
  std::int64_t k = 0;
  std::vector<RunRecord> history;
};

/// Everything a step needs besides the mutable state.
template <LocalCost C>
struct StepContext {
  const Digraph& graph;
  const CostSuite<C>& costs;
  Rational alpha;
  ZoomPolicy policy = AdaptiveZoom{};
  WidthSchedule nominal_widths{};
  ConsensusOptions consensus{};
  /// Reporting only: the error column needs the optimum and initial values.
  std::optional<Rational> x_star{};
  std::vector<Rational> x_init{};
};

/// x_i - alpha * grad f_i(x_i) for every node.
template <LocalCost C>
std::vector<Rational> gradient_step(std::span<const Rational> x, const CostSuite<C>& s, const Rational& alpha) {
  if (x.size() != s.size()) throw std::invalid_argument("gradient_step: one estimate per cost required");
  std::vector<Rational> out;
  out.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out.push_back(x[i] - alpha * s.costs[i].gradient(x[i]));
  return out;
}

/// Applies the policy's reaction to a repeated estimate. The adaptive
/// saturation test uses the level in force before the zoom.
inline ZoomEvent adapt_quantizer(QuantizerState& q, const Rational& x_new, const ZoomPolicy& policy) {
  return std::visit(
      [&](const auto& p) -> ZoomEvent {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, AdaptiveZoom>) {
          if (q.in_range(x_new)) {
            zoom_in(q, x_new);
            return ZoomEvent::zoom_in;
          }
          zoom_out(q, x_new);
          return ZoomEvent::zoom_out;
        } else if constexpr (std::is_same_v<P, RefineOnly>) {
          refine(q, p.factor);
          q.bits = p.width_after(q.refinements);
          return ZoomEvent::refine;
        } else {
          return ZoomEvent::none;
        }
      },
      policy);
}

/// Adapts the quantizer after a consensus; nothing happens unless the new
/// estimate exactly equals the previous one.
inline ZoomEvent zoom_decide(QuantizerState& q, const Rational& x_new, const Rational& x_old,
                             const ZoomPolicy& policy) {
  if (x_new != x_old) return ZoomEvent::none;
  return adapt_quantizer(q, x_new, policy);
}

/// Gradient step, consensus, zoom decision. Appends and returns the record.
template <LocalCost C>
const RunRecord& step(OptimizerState& state, const StepContext<C>& ctx, Rng& rng) {
  const auto x_half = gradient_step<C>(state.x, ctx.costs, ctx.alpha);
  RunRecord rec;
  rec.k = state.k;
  rec.level = state.q.level;
  rec.basis = state.q.basis;

  ConsensusResult cr = run_consensus(x_half, state.q, ctx.graph, rng, ctx.consensus);
  rec.x = cr.values.front();
  // Before the first step estimates differ per node; the shared quantizer
  // only adapts when the new value repeats every node's previous estimate.
  const bool repeated =
      std::all_of(state.x.begin(), state.x.end(), [&](const Rational& prev) { return prev == rec.x; });
  rec.event = repeated ? adapt_quantizer(state.q, rec.x, ctx.policy) : ZoomEvent::none;
  state.x = std::move(cr.values);

  rec.consensus_rounds = cr.stats.rounds;
  rec.mass_transmissions = cr.stats.mass_transmissions;
  rec.flood_broadcasts = cr.stats.flood_broadcasts;
  rec.nominal_bits_per_message = ctx.nominal_widths.at(state.k);
  rec.measured_bits_per_message = cr.stats.measured_bits_per_message();
  rec.bits_nominal = rec.nominal_bits_per_message * rec.mass_transmissions;
  rec.bits_measured = rec.measured_bits_per_message * rec.mass_transmissions;
  rec.zoom_ins = state.q.zoom_ins;
  rec.zoom_outs = state.q.zoom_outs;
  if (ctx.x_star) rec.error = error_metric(state.x, ctx.x_init, *ctx.x_star);

  ++state.k;
  state.history.push_back(std::move(rec));
  return state.history.back();
}

struct StopRule {
  std::int64_t max_steps = 100;
  /// Non-finite means no error target.
  double target_error = std::numeric_limits<double>::infinity();
};

template <LocalCost C>
const std::vector<RunRecord>& run_until(OptimizerState& state, const StepContext<C>& ctx, const StopRule& stop,
                                        Rng& rng) {
  const bool use_target = std::isfinite(stop.target_error);
  if (use_target && !ctx.x_star) throw std::invalid_argument("run_until: error target needs the optimum");
  while (state.k < stop.max_steps) {
    const RunRecord& rec = step(state, ctx, rng);
    if (use_target && rec.error <= stop.target_error) break;
  }
  return state.history;
}

}  // namespace zoomq
