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

#include <cmath>

#include "zoomq/metrics.hpp"

using namespace zoomq;

TEST(Metrics, ErrorExamples) {
  const std::vector<Rational> init{Rational(0), Rational(2)};
  EXPECT_DOUBLE_EQ(error_metric(std::vector<Rational>(2, Rational(1)), init, Rational(1)), 0.0);
  EXPECT_NEAR(error_metric(std::vector<Rational>{Rational(1, 2), Rational(3, 2)}, init, Rational(1)), 0.70710678,
              1e-8);
  std::vector<Rational> x0;
  for (int i = 0; i < 20; ++i) x0.push_back(Rational(i + 2, 3));
  EXPECT_NEAR(error_metric(x0, x0, Rational(-1)), std::sqrt(20.0), 1e-12);
  EXPECT_THROW(error_metric(init, init, Rational(2)), std::invalid_argument);
}

TEST(Metrics, BitTotals) {
  const Rational ntt = Rational::parse("211.88");
  EXPECT_EQ(bits_total(Rational(18), Rational(3), ntt), Rational::parse("11441.52"));
  EXPECT_EQ(bits_total(Rational(27), Rational(3), ntt), Rational::parse("17162.28"));
  EXPECT_EQ(bits_total(Rational(40), Rational(3), ntt), Rational::parse("25425.60"));
  // Linear in every factor.
  EXPECT_EQ(bits_total(Rational(36), Rational(3), ntt), Rational(2) * bits_total(Rational(18), Rational(3), ntt));
  EXPECT_EQ(bits_total(Rational(18), Rational(3), ntt * Rational(5)),
            Rational(5) * bits_total(Rational(18), Rational(3), ntt));
  EXPECT_THROW(bits_total(Rational(-1), Rational(3), ntt), std::invalid_argument);
}

TEST(Metrics, AverageBits) {
  const Rational ntt = Rational::parse("211.88");
  EXPECT_EQ(avg_bits_per_node_per_step(Rational(3), ntt, 20), Rational::parse("31.782"));
  EXPECT_EQ(avg_bits_per_node_per_step(Rational(7), ntt, 20), Rational::parse("74.158"));
  EXPECT_EQ(avg_bits_per_node_per_step(Rational(5), ntt, 1), Rational(5) * ntt);
  EXPECT_THROW(avg_bits_per_node_per_step(Rational(3), ntt, 0), std::invalid_argument);
}

TEST(Metrics, EnvelopeExamples) {
  const Rational alpha(3, 25), sixty(60);
  const std::vector<Rational> zeros(5, Rational(0));
  const auto geo = contraction_envelope(alpha, sixty, sixty, 20, zeros, Rational(1));
  ASSERT_EQ(geo.size(), 6u);
  for (std::size_t k = 0; k < geo.size(); ++k) EXPECT_EQ(geo[k], pow(Rational(16, 25), static_cast<long>(k)));

  const std::vector<Rational> lv{Rational(1, 2), Rational(1, 4), Rational(1, 8)};
  const auto flat = contraction_envelope(Rational(0), sixty, sixty, 20, lv, Rational(1));
  EXPECT_EQ(flat.back(), Rational(1) + Rational(2) * (Rational(1, 2) + Rational(1, 4) + Rational(1, 8)));

  const auto one = contraction_envelope(alpha, sixty, sixty, 20, std::vector<Rational>{Rational(1, 2)}, Rational(1));
  // 0.64 * 1 + (1.44 + 2) * 0.5
  EXPECT_EQ(one[1], Rational(59, 25));
}

TEST(Metrics, StepSizeAdmissible) {
  EXPECT_TRUE(step_size_admissible(Rational(3, 25), Rational(60), Rational(60), 20));
  EXPECT_TRUE(step_size_admissible(Rational(1, 3), Rational(60), Rational(60), 20));
  EXPECT_FALSE(step_size_admissible(Rational(34, 100), Rational(60), Rational(60), 20));
  EXPECT_FALSE(step_size_admissible(Rational(0), Rational(60), Rational(60), 20));
}

TEST(Metrics, ZoomOutBound) {
  const auto b = zoom_out_bound(Rational(10), Rational(1, 2), Rational(2));
  EXPECT_EQ(b.literal, 14);
  EXPECT_EQ(b.corrected, 3);
  EXPECT_EQ(zoom_out_bound(Rational(100), Rational(1, 2), Rational(2)).corrected, 7);
  EXPECT_EQ(zoom_out_bound(Rational(-10), Rational(1, 2), Rational(2)).corrected, 3);
  EXPECT_EQ(zoom_out_bound(Rational(1), Rational(1, 2), Rational(2)).corrected, 0);
  EXPECT_EQ(zoom_out_bound(Rational(3, 2), Rational(1, 2), Rational(2)).corrected, 0);
  EXPECT_EQ(zoom_out_bound(Rational(3), Rational(1, 2), Rational(2)).corrected, 1);  // exact power
  EXPECT_THROW(zoom_out_bound(Rational(0), Rational(1, 2), Rational(2)), std::invalid_argument);
  EXPECT_THROW(zoom_out_bound(Rational(5), Rational(0), Rational(2)), std::invalid_argument);
  EXPECT_THROW(zoom_out_bound(Rational(5), Rational(1, 2), Rational(1)), std::invalid_argument);
}

TEST(Metrics, CorrectedBoundIsSmallestSufficientPower) {
  for (long x = 1; x <= 300; x += 7) {
    const auto b = zoom_out_bound(Rational(x), Rational(1, 2), Rational(2));
    EXPECT_GE(Rational(3, 2) * pow(Rational(2), b.corrected), Rational(x));
    if (b.corrected > 0) {
      EXPECT_LT(Rational(3, 2) * pow(Rational(2), b.corrected - 1), Rational(x));
    }
  }
}
