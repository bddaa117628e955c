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
#include <unordered_set>

#include "zoomq/rational.hpp"

using zoomq::Rational;

TEST(Rational, LowestTerms) {
  const Rational r(6, -4);
  EXPECT_EQ(r.str(), "-3/2");
  EXPECT_EQ(Rational(0, 7).str(), "0/1");
  EXPECT_EQ(Rational(5).str(), "5/1");
}

TEST(Rational, RejectsZeroDenominator) {
  EXPECT_THROW(Rational(1, 0), std::domain_error);
  Rational r(1);
  EXPECT_THROW(r /= Rational(0), std::domain_error);
}

TEST(Rational, ParsesFractionsIntegersAndDecimals) {
  EXPECT_EQ(Rational::parse("3/25"), Rational(3, 25));
  EXPECT_EQ(Rational::parse("-4/6"), Rational(-2, 3));
  EXPECT_EQ(Rational::parse("17"), Rational(17));
  EXPECT_EQ(Rational::parse("0.12"), Rational(3, 25));
  EXPECT_EQ(Rational::parse("-0.5"), Rational(-1, 2));
  EXPECT_EQ(Rational::parse("1e-3"), Rational(1, 1000));
  EXPECT_EQ(Rational::parse("2.5E2"), Rational(250));
  EXPECT_EQ(Rational::parse(" 211.88 "), Rational(5297, 25));
}

TEST(Rational, ParseRejectsGarbage) {
  for (const char* bad : {"", "abc", "1/0", "1/", "/2", "1.2.3", "--1", "1e", "0x10"})
    EXPECT_THROW(Rational::parse(bad), std::invalid_argument) << bad;
}

TEST(Rational, FloorAndCeil) {
  EXPECT_EQ(Rational(7, 2).floor(), Rational(3));
  EXPECT_EQ(Rational(7, 2).ceil(), Rational(4));
  EXPECT_EQ(Rational(-7, 2).floor(), Rational(-4));
  EXPECT_EQ(Rational(-7, 2).ceil(), Rational(-3));
  EXPECT_EQ(Rational(4).floor(), Rational(4));
  EXPECT_EQ(Rational(4).ceil(), Rational(4));
}

TEST(Rational, ArithmeticAndOrdering) {
  const Rational a(1, 3), b(1, 6);
  EXPECT_EQ(a + b, Rational(1, 2));
  EXPECT_EQ(a - b, Rational(1, 6));
  EXPECT_EQ(a * b, Rational(1, 18));
  EXPECT_EQ(a / b, Rational(2));
  EXPECT_LT(b, a);
  EXPECT_EQ(zoomq::min(a, b), b);
  EXPECT_EQ(zoomq::max(a, b), a);
  EXPECT_EQ(Rational(-3, 4).abs(), Rational(3, 4));
  EXPECT_EQ(zoomq::pow(Rational(3, 4), 3), Rational(27, 64));
  EXPECT_EQ(zoomq::pow(Rational(3, 4), -2), Rational(16, 9));
  EXPECT_EQ(zoomq::pow(Rational(5), 0), Rational(1));
}

TEST(Rational, ExactWhereDoublesDrift) {
  Rational sum(0);
  for (int i = 0; i < 10; ++i) sum += Rational::parse("0.1");
  EXPECT_EQ(sum, Rational(1));
}

TEST(Rational, HashAgreesWithEquality) {
  std::unordered_set<Rational> set{Rational(1, 2), Rational(2, 4), Rational(3, 6), Rational(1, 3)};
  EXPECT_EQ(set.size(), 2u);
}

TEST(Rational, StreamsAsFraction) {
  std::ostringstream os;
  os << Rational(9, 4);
  EXPECT_EQ(os.str(), "9/4");
}
