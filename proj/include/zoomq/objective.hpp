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

#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "zoomq/rational.hpp"
#include "zoomq/rng.hpp"

namespace zoomq {

/// A node's local objective: value, gradient, gradient-Lipschitz constant and
/// strong-convexity constant, all exact.
template <typename C>
concept LocalCost = requires(const C& c, const Rational& x) {
  { c.value(x) } -> std::convertible_to<Rational>;
  { c.gradient(x) } -> std::convertible_to<Rational>;
  { c.lipschitz() } -> std::convertible_to<Rational>;
  { c.convexity() } -> std::convertible_to<Rational>;
};

/// f(x) = beta/2 * (x - x0)^2.
struct QuadraticCost {
  Rational beta{1};
  Rational x0{0};

  Rational value(const Rational& x) const {
    const Rational d = x - x0;
    return beta * d * d / Rational(2);
  }
  Rational gradient(const Rational& x) const { return beta * (x - x0); }
  Rational lipschitz() const { return beta; }
  Rational convexity() const { return beta; }

  friend bool operator==(const QuadraticCost&, const QuadraticCost&) = default;
};

static_assert(LocalCost<QuadraticCost>);

template <LocalCost C>
struct CostSuite {
  std::vector<C> costs;
  Rational L{0};   // sum of local Lipschitz constants
  Rational mu{0};  // sum of local strong-convexity constants

  explicit CostSuite(std::vector<C> cs) : costs(std::move(cs)) {
    for (const auto& c : costs) {
      if (c.convexity().sign() <= 0) throw std::invalid_argument("cost suite: convexity must be positive");
      L += c.lipschitz();
      mu += c.convexity();
    }
  }

  std::size_t size() const { return costs.size(); }

  Rational value(const Rational& x) const {
    Rational sum{0};
    for (const auto& c : costs) sum += c.value(x);
    return sum;
  }
};

using QuadraticSuite = CostSuite<QuadraticCost>;

inline Rational grad(const QuadraticCost& c, const Rational& x) { return c.gradient(x); }

/// Closed-form minimizer sum(beta_i x0_i) / sum(beta_i).
inline Rational global_optimum(const QuadraticSuite& s) {
  Rational num{0}, den{0};
  for (const auto& c : s.costs) {
    num += c.beta * c.x0;
    den += c.beta;
  }
  if (den.sign() <= 0) throw std::invalid_argument("global_optimum: curvatures must be positive");
  return num / den;
}

/// Largest admissible constant step size, 2n / (mu + L).
template <LocalCost C>
Rational max_step_size(const CostSuite<C>& s, std::size_t n) {
  const Rational denom = s.mu + s.L;
  if (denom.sign() <= 0) throw std::invalid_argument("max_step_size: mu + L must be positive");
  return Rational(2 * static_cast<long>(n)) / denom;
}

/// Curvatures and minimizers drawn uniformly from {lo, ..., hi}. With
/// shared_minimizer every node gets the same minimizer (one draw).
inline QuadraticSuite random_cost_suite(std::size_t n, std::uint64_t seed, bool shared_minimizer = true,
                                        std::int64_t lo = 1, std::int64_t hi = 5) {
  if (n < 2) throw std::invalid_argument("random_cost_suite: n must be >= 2");
  if (lo > hi) throw std::invalid_argument("random_cost_suite: empty value set");
  Rng rng(seed);
  std::vector<QuadraticCost> costs(n);
  const Rational common{shared_minimizer ? static_cast<long>(rng.between(lo, hi)) : 0L};
  for (auto& c : costs) {
    c.beta = Rational(static_cast<long>(rng.between(lo, hi)));
    c.x0 = shared_minimizer ? common : Rational(static_cast<long>(rng.between(lo, hi)));
  }
  return QuadraticSuite(std::move(costs));
}

}  // namespace zoomq
