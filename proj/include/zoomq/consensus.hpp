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
#include <functional>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "zoomq/graph.hpp"
#include "zoomq/quantizer.hpp"
#include "zoomq/rational.hpp"
#include "zoomq/rng.hpp"

namespace zoomq {

// Finite-time quantized average consensus by mass splitting with max/min
// flooding as a distributed stopping test.
//
// Every node starts with value mass y = 2 * (quantized input) / level and
// count mass z = 2. Each round a node with z > 1 peels off floor(y/z) units
// per excess token and sends each token to itself or a uniformly chosen
// out-neighbor. In parallel, ceil(y/z) and floor(y/z) are flooded for one
// diameter-length epoch; when the flooded spread is at most one, every node
// outputs the flooded minimum scaled back by the level.

/// How quantized inputs are turned into value mass.
enum class MassEncoding {
  /// y = 2 (Q(x) - basis) / level, an odd integer; output basis + m * level.
  basis_relative,
  /// y = 2 Q(x) / level; output m * level. Non-integer once the basis leaves
  /// the level grid, which can stall the stopping test.
  absolute,
};

struct MassState {
  Rational y{0};
  std::int64_t z = 0;
};

/// Running ceil/floor extremes flooded during an epoch.
struct FloodState {
  Rational max{0};
  Rational min{0};
};

struct MassMessage {
  NodeId from = 0;
  NodeId to = 0;
  Rational value{0};  // always integer valued
};

/// Counters for one consensus execution.
struct ConsensusStats {
  std::int64_t rounds = 0;
  std::int64_t mass_transmissions = 0;
  /// One per node per round: each node broadcasts (max, min) to all its
  /// out-neighbors at once.
  std::int64_t flood_broadcasts = 0;
  std::set<Rational> alphabet;  // distinct mass payloads sent

  /// Bits needed to index the observed mass alphabet (at least one).
  int measured_bits_per_message() const {
    int bits = 1;
    while ((std::size_t{1} << bits) < alphabet.size()) ++bits;
    return bits;
  }
};

struct ConsensusState {
  std::vector<MassState> mass;
  std::vector<FloodState> flood;
  std::int64_t lambda = 0;  // rounds completed
};

struct RoundOutcome {
  std::vector<MassMessage> mass_messages;
  std::int64_t flood_broadcasts = 0;
};

class RoundLimitExceeded : public std::runtime_error {
 public:
  explicit RoundLimitExceeded(std::int64_t cap)
      : std::runtime_error("consensus did not stop within " + std::to_string(cap) + " rounds") {}
};

struct ConsensusOptions {
  std::int64_t round_cap = 100000;
  MassEncoding encoding = MassEncoding::basis_relative;
  /// Called after every round with the post-delivery state.
  std::function<void(const ConsensusState&, const RoundOutcome&)> observer;
};

struct ConsensusResult {
  std::vector<Rational> values;
  ConsensusStats stats;
};

/// Flooding epoch length. The reset test "lambda mod D == 1" never fires for
/// D = 1, so epochs are at least two rounds long.
inline int epoch_length(int diameter) { return std::max(diameter, 2); }

inline std::vector<MassState> init_consensus(std::span<const Rational> x_half, const QuantizerState& q,
                                             MassEncoding encoding = MassEncoding::basis_relative) {
  std::vector<MassState> out;
  out.reserve(x_half.size());
  for (const auto& x : x_half) {
    Rational v = quantize(q, x);
    if (encoding == MassEncoding::basis_relative) v -= q.basis;
    out.push_back({Rational(2) * v / q.level, 2});
  }
  return out;
}

/// Self or one out-neighbor, each with probability 1 / (1 + out-degree).
/// Index k < out-degree selects the k-th sorted out-neighbor; the last index is self.
inline NodeId sample_out_target(NodeId node, const Digraph& g, Rng& rng) {
  const auto& nbrs = g.out_neighbors(node);
  const std::uint64_t pick = rng.below(nbrs.size() + 1);
  return pick == nbrs.size() ? node : nbrs[pick];
}

inline ConsensusState make_consensus_state(std::vector<MassState> mass) {
  ConsensusState s;
  s.flood.resize(mass.size());
  s.mass = std::move(mass);
  return s;
}

/// One synchronous round. All sends are computed from pre-round state and
/// delivered before the function returns.
inline RoundOutcome consensus_round(ConsensusState& s, const Digraph& g, int epoch, Rng& rng) {
  const std::size_t n = s.mass.size();
  ++s.lambda;

  if (s.lambda % epoch == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto& ms = s.mass[i];
      if (ms.z < 1) continue;  // keeps stale extremes until mass returns
      const Rational ratio = ms.y / Rational(ms.z);
      s.flood[i].max = ratio.ceil();
      s.flood[i].min = ratio.floor();
    }
  }

  RoundOutcome out;
  std::vector<FloodState> next = s.flood;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j : g.in_neighbors(i)) {
      if (next[i].max < s.flood[j].max) next[i].max = s.flood[j].max;
      if (s.flood[j].min < next[i].min) next[i].min = s.flood[j].min;
    }
  }
  s.flood = std::move(next);
  out.flood_broadcasts = static_cast<std::int64_t>(n);

  for (NodeId i = 0; i < n; ++i) {
    auto& ms = s.mass[i];
    while (ms.z > 1) {
      Rational share = (ms.y / Rational(ms.z)).floor();
      ms.y -= share;
      --ms.z;
      out.mass_messages.push_back({i, sample_out_target(i, g, rng), std::move(share)});
    }
  }
  for (const auto& msg : out.mass_messages) {
    s.mass[msg.to].y += msg.value;
    ++s.mass[msg.to].z;
  }
  return out;
}

/// Maps a flooded floor value back to the value domain.
inline Rational decode_result(const Rational& flooded_min, const QuantizerState& q, MassEncoding encoding) {
  Rational v = flooded_min * q.level;
  if (encoding == MassEncoding::basis_relative) v += q.basis;
  return v;
}

/// Per-node stopping decision at an epoch end: a value for every node whose
/// flooded spread is at most one, nothing elsewhere or between epoch ends.
inline std::vector<std::optional<Rational>> check_stop(std::span<const FloodState> flood, std::int64_t lambda,
                                                       int epoch, const QuantizerState& q,
                                                       MassEncoding encoding = MassEncoding::basis_relative) {
  std::vector<std::optional<Rational>> out(flood.size());
  if (lambda % epoch != 0) return out;
  for (std::size_t i = 0; i < flood.size(); ++i)
    if (flood[i].max - flood[i].min <= Rational(1)) out[i] = decode_result(flood[i].min, q, encoding);
  return out;
}

inline ConsensusResult run_consensus(std::span<const Rational> x_half, const QuantizerState& q, const Digraph& g,
                                     Rng& rng, const ConsensusOptions& options = {}) {
  if (x_half.size() != g.size()) throw std::invalid_argument("run_consensus: one input per node required");
  const int epoch = epoch_length(g.diameter());
  ConsensusState s = make_consensus_state(init_consensus(x_half, q, options.encoding));
  ConsensusResult result;
  auto& st = result.stats;

  while (true) {
    if (s.lambda >= options.round_cap) throw RoundLimitExceeded(options.round_cap);
    RoundOutcome round = consensus_round(s, g, epoch, rng);
    st.rounds = s.lambda;
    st.mass_transmissions += static_cast<std::int64_t>(round.mass_messages.size());
    st.flood_broadcasts += round.flood_broadcasts;
    for (const auto& msg : round.mass_messages) st.alphabet.insert(msg.value);
    if (options.observer) options.observer(s, round);

    auto decided = check_stop(s.flood, s.lambda, epoch, q, options.encoding);
    const auto stopped = std::count_if(decided.begin(), decided.end(), [](const auto& v) { return v.has_value(); });
    if (stopped == 0) continue;
    if (static_cast<std::size_t>(stopped) != decided.size())
      throw std::logic_error("run_consensus: nodes disagree on stopping");
    result.values.reserve(decided.size());
    for (auto& v : decided) result.values.push_back(std::move(*v));
    for (const auto& v : result.values)
      if (v != result.values.front()) throw std::logic_error("run_consensus: nodes disagree on result");
    return result;
  }
}

/// Observer writing one CSV row per node per round:
/// lambda,node,y,z,max,min,sent
inline std::function<void(const ConsensusState&, const RoundOutcome&)> make_trace_writer(std::ostream& os) {
  os << "lambda,node,y,z,max,min,sent\n";
  return [&os](const ConsensusState& s, const RoundOutcome& round) {
    std::vector<std::int64_t> sent(s.mass.size(), 0);
    for (const auto& m : round.mass_messages) ++sent[m.from];
    for (std::size_t i = 0; i < s.mass.size(); ++i)
      os << s.lambda << ',' << i << ',' << s.mass[i].y << ',' << s.mass[i].z << ',' << s.flood[i].max << ','
         << s.flood[i].min << ',' << sent[i] << '\n';
  };
}

}  // namespace zoomq
