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

#include <cstdint>
#include <stdexcept>

#include "zoomq/rational.hpp"

namespace zoomq {

/// Parameters of the mid-rise uniform quantizer with base shifting, plus the
/// zoom bookkeeping every node holds identically.
///
/// With bit width w the quantizer has 2^w output levels
/// basis + (2c - (2^w - 1)) * level / 2 for c in [0, 2^w), and saturates
/// outside [basis - h*level, basis + h*level) where h = 2^(w-1) - 1.
/// Bins are closed on the left and open on the right.
struct QuantizerState {
  Rational basis{0};
  Rational level{1, 2};
  Rational zoom_in_factor{4, 3};
  Rational zoom_out_factor{2};
  int bits = 3;

  std::uint64_t zoom_ins = 0;
  std::uint64_t zoom_outs = 0;
  std::uint64_t zooms = 0;  // always zoom_ins + zoom_outs
  std::uint64_t refinements = 0;

  /// Exact for any width; refine-only widths grow past 64 bits.
  mpz_class level_count() const {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 2, static_cast<unsigned long>(bits));
    return r;
  }
  mpz_class half_range() const { return level_count() / 2 - 1; }

  Rational lower_edge() const { return basis - Rational(half_range()) * level; }
  Rational upper_edge() const { return basis + Rational(half_range()) * level; }

  /// True iff x lies in the non-saturated window [lower_edge, upper_edge).
  bool in_range(const Rational& x) const { return lower_edge() <= x && x < upper_edge(); }

  void validate() const {
    if (level.sign() <= 0) throw std::invalid_argument("quantizer: level must be positive");
    if (zoom_in_factor <= Rational(1)) throw std::invalid_argument("quantizer: zoom-in factor must exceed 1");
    if (zoom_out_factor <= Rational(1)) throw std::invalid_argument("quantizer: zoom-out factor must exceed 1");
    if (bits < 1) throw std::invalid_argument("quantizer: bit width must be at least 1");
  }

  friend bool operator==(const QuantizerState&, const QuantizerState&) = default;
};

/// Code c in [0, 2^bits) of the bin containing xi; saturated inputs map to
/// the extreme codes.
inline mpz_class level_index(const QuantizerState& q, const Rational& xi) {
  const mpz_class count = q.level_count();
  const mpz_class shifted = ((xi - q.basis) / q.level).floor().numerator() + count / 2;
  if (shifted < 0) return 0;
  if (shifted >= count) return count - 1;
  return shifted;
}

/// Output level for code c.
inline Rational level_value(const QuantizerState& q, const mpz_class& code) {
  return q.basis + Rational(mpz_class(2 * code - (q.level_count() - 1))) * q.level / Rational(2);
}

/// Midpoint of the bin containing xi (clamped to the extreme levels).
inline Rational quantize(const QuantizerState& q, const Rational& xi) {
  return level_value(q, level_index(q, xi));
}

/// Widens the range: basis moves to x_new, level grows by the zoom-out factor.
inline void zoom_out(QuantizerState& q, const Rational& x_new) {
  ++q.zoom_outs;
  ++q.zooms;
  q.basis = x_new;
  q.level *= q.zoom_out_factor;
}

/// Narrows the range: basis moves to x_new, level shrinks by the zoom-in factor.
inline void zoom_in(QuantizerState& q, const Rational& x_new) {
  ++q.zoom_ins;
  ++q.zooms;
  q.basis = x_new;
  q.level /= q.zoom_in_factor;
}

/// Fixed-basis refinement used by the refine-only baseline.
inline void refine(QuantizerState& q, const Rational& factor) {
  ++q.refinements;
  q.level /= factor;
}

}  // namespace zoomq
