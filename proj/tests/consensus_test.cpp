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

#include <gtest/gtest.h>

#include <sstream>

#include "zoomq/consensus.hpp"
#include "zoomq/graph.hpp"
#include "zoomq/quantizer.hpp"
#include "zoomq/rng.hpp"

using namespace zoomq;
using Adj = std::vector<std::vector<NodeId>>;

namespace {

QuantizerState level_half() {
  QuantizerState q;
  q.level = Rational(1, 2);
  return q;
}

Digraph three_cycle() { return Digraph(Adj{{1}, {2}, {0}}); }

std::vector<Rational> random_inputs(Rng& rng, std::size_t n) {
  std::vector<Rational> xs;
  for (std::size_t i = 0; i < n; ++i) xs.push_back(Rational(static_cast<long>(rng.between(-400, 400)), 100));
  return xs;
}

}  // namespace

TEST(Consensus, InitExamples) {
  const auto q = level_half();
  auto one = init_consensus(std::vector<Rational>{Rational(1, 4)}, q);
  EXPECT_EQ(one[0].y, Rational(1));
  EXPECT_EQ(one[0].z, 2);
  auto sat = init_consensus(std::vector<Rational>{Rational(-10)}, q);
  EXPECT_EQ(sat[0].y, Rational(-7));
  auto three = init_consensus(std::vector<Rational>{Rational(1, 4), Rational(3, 4), Rational(5, 4)}, q);
  EXPECT_EQ(three[0].y + three[1].y + three[2].y, Rational(9));
  EXPECT_EQ(three[0].z + three[1].z + three[2].z, 6);
}

TEST(Consensus, EncodingsCoincideAtZeroBasis) {
  const auto q = level_half();
  const std::vector<Rational> xs{Rational(3, 7), Rational(-2), Rational(9, 5)};
  const auto a = init_consensus(xs, q, MassEncoding::basis_relative);
  const auto b = init_consensus(xs, q, MassEncoding::absolute);
  for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_EQ(a[i].y, b[i].y);
}

TEST(Consensus, BasisRelativeMassIsOddInteger) {
  QuantizerState q;
  q.basis = Rational(7, 3);
  q.level = Rational(3, 8);
  Rng rng(4);
  for (const auto& m : init_consensus(random_inputs(rng, 50), q)) {
    ASSERT_TRUE(m.y.is_integer());
    ASSERT_NE(m.y.numerator() % 2, 0);
  }
}

TEST(Consensus, SamplerFrequencies) {
  // Node 0 has out-degree 3.
  const Digraph g(Adj{{1, 2, 3}, {0}, {0}, {0}});
  Rng rng(2024);
  std::vector<int> hits(4, 0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) ++hits[sample_out_target(0, g, rng)];
  for (int h : hits) EXPECT_NEAR(h / static_cast<double>(draws), 0.25, 0.01);

  Rng a(9), b(9);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sample_out_target(0, g, a), sample_out_target(0, g, b));
}

TEST(Consensus, EpochLengthGuard) {
  EXPECT_EQ(epoch_length(1), 2);
  EXPECT_EQ(epoch_length(2), 2);
  EXPECT_EQ(epoch_length(5), 5);
}

TEST(Consensus, AllEqualHandTrace) {
  const Digraph g = three_cycle();
  auto s = make_consensus_state(std::vector<MassState>(3, MassState{Rational(1), 2}));
  Rng rng(1);
  const int epoch = epoch_length(g.diameter());
  const auto r1 = consensus_round(s, g, epoch, rng);
  ASSERT_EQ(r1.mass_messages.size(), 3u);
  for (const auto& m : r1.mass_messages) EXPECT_EQ(m.value, Rational(0));
  for (const auto& f : s.flood) {
    EXPECT_EQ(f.max, Rational(1));
    EXPECT_EQ(f.min, Rational(0));
  }
  EXPECT_TRUE(check_stop(s.flood, s.lambda, epoch, level_half(), MassEncoding::basis_relative)[0] == std::nullopt);
  consensus_round(s, g, epoch, rng);
  const auto stop = check_stop(s.flood, s.lambda, epoch, level_half(), MassEncoding::basis_relative);
  for (const auto& v : stop) {
    ASSERT_TRUE(v.has_value());
    EXPECT_EQ(*v, Rational(0));
  }

  Rng rng2(1);
  const auto res = run_consensus(std::vector<Rational>(3, Rational(1, 4)), level_half(), g, rng2);
  for (const auto& v : res.values) EXPECT_EQ(v, Rational(0));
  EXPECT_EQ(res.stats.rounds, 2);
}

TEST(Consensus, NoStopWhenSpreadExceedsOne) {
  std::vector<FloodState> flood(2, FloodState{Rational(3), Rational(1)});
  const auto out = check_stop(flood, 4, 2, level_half(), MassEncoding::basis_relative);
  EXPECT_FALSE(out[0].has_value());
  EXPECT_FALSE(out[1].has_value());
  flood[0].min = Rational(2);
  flood[1].min = Rational(2);
  EXPECT_FALSE(check_stop(flood, 3, 2, level_half(), MassEncoding::basis_relative)[0].has_value());  // mid-epoch
}

TEST(Consensus, ConservationOnTwoNodes) {
  const Digraph g(Adj{{1}, {0}});
  auto s = make_consensus_state({MassState{Rational(1), 2}, MassState{Rational(3), 2}});
  Rng rng(6);
  for (int r = 0; r < 50; ++r) {
    consensus_round(s, g, 2, rng);
    ASSERT_EQ(s.mass[0].y + s.mass[1].y, Rational(4));
    ASSERT_EQ(s.mass[0].z + s.mass[1].z, 4);
  }
}

TEST(Consensus, ThreeNodeOddMasses) {
  const Digraph g = three_cycle();
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const auto res = run_consensus(std::vector<Rational>{Rational(1, 4), Rational(3, 4), Rational(5, 4)},
                                   level_half(), g, rng);
    const Rational out = res.values.front();
    ASSERT_TRUE(out == Rational(1, 2) || out == Rational(1)) << out;
    ASSERT_LE((out - Rational(3, 4)).abs(), Rational(1, 2));
  }
}

TEST(Consensus, AgreementAccuracyConservationOnRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    const std::size_t n = 2 + seed % 19;
    const Digraph g = generate_random_digraph(n, 0.15 + 0.1 * static_cast<double>(seed % 4), seed);
    QuantizerState q;
    q.basis = Rational(static_cast<long>(seed % 7) - 3, 3);
    q.level = Rational(1 + static_cast<long>(seed % 5), 8);
    Rng in(seed + 1000);
    const auto xs = random_inputs(in, n);
    Rational mean(0);
    for (const auto& x : xs) mean += quantize(q, x);
    mean /= Rational(static_cast<long>(n));

    const auto init = init_consensus(xs, q);
    Rational y0(0);
    for (const auto& m : init) y0 += m.y;
    ConsensusOptions opt;
    std::int64_t rounds = 0;
    opt.observer = [&](const ConsensusState& s, const RoundOutcome& r) {
      ++rounds;
      Rational y(0);
      std::int64_t z = 0;
      for (const auto& m : s.mass) {
        y += m.y;
        z += m.z;
        EXPECT_GE(m.z, 1);
      }
      EXPECT_EQ(y, y0);
      EXPECT_EQ(z, static_cast<std::int64_t>(2 * n));
      EXPECT_EQ(r.mass_messages.size(), n);
      for (const auto& msg : r.mass_messages) EXPECT_TRUE(msg.value.is_integer());
    };
    Rng rng(seed);
    const auto res = run_consensus(xs, q, g, rng, opt);
    for (const auto& v : res.values) ASSERT_EQ(v, res.values.front());
    EXPECT_LE((res.values.front() - mean).abs(), q.level) << seed;
    EXPECT_EQ(rounds, res.stats.rounds);
    EXPECT_EQ(res.stats.rounds % epoch_length(g.diameter()), 0);
    EXPECT_EQ(res.stats.flood_broadcasts, res.stats.rounds * static_cast<std::int64_t>(n));
    // Output sits on the shifted grid.
    EXPECT_TRUE(((res.values.front() - q.basis) / q.level).is_integer());
  }
}

TEST(Consensus, FloodingReachesGlobalExtremesEachEpoch) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t n = 4 + seed % 12;
    const Digraph g = generate_random_digraph(n, 0.1, seed);
    const int epoch = epoch_length(g.diameter());
    Rng in(seed);
    auto s = make_consensus_state(init_consensus(random_inputs(in, n), level_half()));
    Rng rng(seed);
    Rational want_max(0), want_min(0);
    for (int r = 0; r < 6 * epoch; ++r) {
      if ((s.lambda + 1) % epoch == 1) {
        // Extremes of the ratios at the start of the epoch.
        want_max = (s.mass[0].y / Rational(s.mass[0].z)).ceil();
        want_min = (s.mass[0].y / Rational(s.mass[0].z)).floor();
        for (const auto& m : s.mass) {
          want_max = max(want_max, (m.y / Rational(m.z)).ceil());
          want_min = min(want_min, (m.y / Rational(m.z)).floor());
        }
      }
      consensus_round(s, g, epoch, rng);
      if (s.lambda % epoch == 0)
        for (const auto& f : s.flood) {
          ASSERT_EQ(f.max, want_max) << seed << " round " << s.lambda;
          ASSERT_EQ(f.min, want_min) << seed << " round " << s.lambda;
        }
    }
  }
}

TEST(Consensus, Deterministic) {
  const Digraph g = generate_random_digraph(15, 0.2, 3);
  Rng in(8);
  const auto xs = random_inputs(in, 15);
  Rng a(77), b(77);
  const auto ra = run_consensus(xs, level_half(), g, a);
  const auto rb = run_consensus(xs, level_half(), g, b);
  EXPECT_EQ(ra.values, rb.values);
  EXPECT_EQ(ra.stats.rounds, rb.stats.rounds);
  EXPECT_EQ(ra.stats.mass_transmissions, rb.stats.mass_transmissions);
  EXPECT_EQ(ra.stats.alphabet, rb.stats.alphabet);
}

TEST(Consensus, RoundCapSignalsLiveness) {
  const Digraph g = generate_random_digraph(10, 0.1, 1);
  Rng in(2);
  const auto xs = random_inputs(in, 10);
  Rng rng(3);
  ConsensusOptions opt;
  opt.round_cap = 1;
  EXPECT_THROW(run_consensus(xs, level_half(), g, rng, opt), RoundLimitExceeded);
  Rng rng2(3);
  EXPECT_THROW(run_consensus(std::vector<Rational>(3, Rational(0)), level_half(), g, rng2), std::invalid_argument);
}

TEST(Consensus, MeasuredWidth) {
  ConsensusStats st;
  EXPECT_EQ(st.measured_bits_per_message(), 1);
  st.alphabet = {Rational(0)};
  EXPECT_EQ(st.measured_bits_per_message(), 1);
  st.alphabet = {Rational(0), Rational(1), Rational(2)};
  EXPECT_EQ(st.measured_bits_per_message(), 2);
  st.alphabet.insert(Rational(3));
  EXPECT_EQ(st.measured_bits_per_message(), 2);
  st.alphabet.insert(Rational(4));
  EXPECT_EQ(st.measured_bits_per_message(), 3);
}

TEST(Consensus, TraceWriter) {
  std::ostringstream os;
  ConsensusOptions opt;
  opt.observer = make_trace_writer(os);
  Rng rng(1);
  run_consensus(std::vector<Rational>(3, Rational(1, 4)), level_half(), three_cycle(), rng, opt);
  const std::string out = os.str();
  EXPECT_EQ(out.rfind("lambda,node,y,z,max,min,sent\n", 0), 0u);
  EXPECT_NE(out.find("\n2,2,"), std::string::npos);
}
