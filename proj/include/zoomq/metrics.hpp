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
#include <span>
#include <stdexcept>
#include <vector>

#include "zoomq/rational.hpp"

namespace zoomq {

/// Normalized distance to the optimum:
/// sqrt( sum_j (x_j - x*)^2 / (x_j^init - x*)^2 ).
/// The sum is exact; only the square root is taken in floating point.
inline double error_metric(std::span<const Rational> x, std::span<const Rational> x_init, const Rational& x_star) {
  if (x.size() != x_init.size()) throw std::invalid_argument("error_metric: size mismatch");
  Rational sum{0};
  for (std::size_t j = 0; j < x.size(); ++j) {
    const Rational den = x_init[j] - x_star;
    if (den.sign() == 0) throw std::invalid_argument("error_metric: initial value equals the optimum");
    const Rational num = x[j] - x_star;
    sum += (num * num) / (den * den);
  }
  return std::sqrt(sum.to_double());
}

/// Total communicated bits = steps * bits per message * transmissions per
/// consensus execution.
struct BitAccount {
  Rational steps{0};
  Rational bits_per_message{0};
  Rational transmissions{0};

  Rational total() const { return steps * bits_per_message * transmissions; }
};

inline Rational bits_total(const Rational& steps, const Rational& bits_per_message, const Rational& transmissions) {
  if (steps.sign() < 0 || bits_per_message.sign() < 0 || transmissions.sign() < 0)
    throw std::invalid_argument("bits_total: inputs must be nonnegative");
  return BitAccount{steps, bits_per_message, transmissions}.total();
}

inline Rational avg_bits_per_node_per_step(const Rational& bits_per_message, const Rational& transmissions,
                                           std::size_t n) {
  if (n == 0) throw std::invalid_argument("avg_bits_per_node_per_step: n must be positive");
  return bits_per_message * transmissions / Rational(static_cast<long>(n));
}

/// Linear-rate envelope for the distance to the optimum:
///   bound[0]   = d0
///   bound[k+1] = (1 - alpha mu / n) bound[k] + (4 alpha L / n + 2) level[k]
/// where level[k] is the quantization level used at step k. Exact.
/// Returns levels.size() + 1 entries.
inline std::vector<Rational> contraction_envelope(const Rational& alpha, const Rational& mu, const Rational& L,
                                                  std::size_t n, std::span<const Rational> levels,
                                                  const Rational& d0) {
  if (n == 0) throw std::invalid_argument("contraction_envelope: n must be positive");
  const Rational nn(static_cast<long>(n));
  const Rational rate = Rational(1) - alpha * mu / nn;
  const Rational gain = Rational(4) * alpha * L / nn + Rational(2);
  std::vector<Rational> bound;
  bound.reserve(levels.size() + 1);
  bound.push_back(d0);
  for (const auto& lvl : levels) bound.push_back(rate * bound.back() + gain * lvl);
  return bound;
}

/// True iff alpha lies in (0, 2n / (mu + L)].
inline bool step_size_admissible(const Rational& alpha, const Rational& mu, const Rational& L, std::size_t n) {
  return alpha.sign() > 0 && alpha <= Rational(2 * static_cast<long>(n)) / (mu + L);
}

struct ZoomOutBound {
  /// ceil((x* - ln(3 level)) / ln(c_out)), evaluated as reference.
  std::int64_t literal = 0;
  /// ceil(log_{c_out}(|x*| / (3 level))) clamped at zero: the smallest
  /// nu >= 0 with 3 level c_out^nu >= |x*|.
  std::int64_t corrected = 0;
};

inline ZoomOutBound zoom_out_bound(const Rational& x_star, const Rational& level0, const Rational& c_out) {
  if (level0.sign() <= 0) throw std::invalid_argument("zoom_out_bound: level must be positive");
  if (c_out <= Rational(1)) throw std::invalid_argument("zoom_out_bound: zoom-out factor must exceed 1");
  if (x_star.sign() == 0) throw std::invalid_argument("zoom_out_bound: corrected form needs x* != 0");
  ZoomOutBound b;
  const double three_level = 3.0 * level0.to_double();
  b.literal = static_cast<std::int64_t>(
      std::ceil((x_star.to_double() - std::log(three_level)) / std::log(c_out.to_double())));
  // Exact search avoids log rounding at powers of c_out.
  const Rational target = x_star.abs();
  Rational reach = Rational(3) * level0;
  while (reach < target) {
    reach *= c_out;
    ++b.corrected;
  }
  return b;
}

}  // namespace zoomq
