/*
 * Copyright (c) 2026 The bmolab Authors. All Rights Reserved
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "bmolab/error.hpp"
#include "bmolab/field.hpp"
#include "bmolab/geometry.hpp"

namespace bmo {
namespace {

TEST(Cube, VolumeAndMembership) {
  Cube q({0.0, 1.0}, 2.0);
  EXPECT_DOUBLE_EQ(q.volume(), 4.0);
  std::vector<double> in{1.0, 2.0}, out{1.0001, 1.0};
  EXPECT_TRUE(q.contains(in));
  EXPECT_FALSE(q.contains(out));
  EXPECT_THROW(Cube({0.0}, 0.0), DomainError);
  EXPECT_THROW(Cube({0.0}, -1.0), DomainError);
}

TEST(Cube, ContainmentAndDisjointness) {
  Cube big({0.0}, 4.0), small({1.0}, 1.0), far({5.0}, 1.0);
  EXPECT_TRUE(big.contains(small));
  EXPECT_FALSE(small.contains(big));
  EXPECT_TRUE(small.disjoint(far));
  EXPECT_FALSE(big.disjoint(small));
}

TEST(Box, IntersectAndHull) {
  Box a({0.0, 0.0}, {2.0, 2.0}), b({1.0, -1.0}, {3.0, 1.0});
  Box i = a.intersect(b);
  EXPECT_DOUBLE_EQ(i.volume(), 1.0);
  EXPECT_FALSE(i.empty());
  Box h = a.hull(b);
  EXPECT_DOUBLE_EQ(h.lower(1), -1.0);
  EXPECT_DOUBLE_EQ(h.upper(0), 3.0);
  EXPECT_TRUE(a.intersect(Box({5.0, 5.0}, {6.0, 6.0})).empty());
}

TEST(CubeFamily, DyadicMembersInsideRoot) {
  Cube root({0.0, 0.0}, 4.0);
  CubeFamily fam(root, 0, 3, true);
  for (const auto& mem : fam.members()) {
    EXPECT_TRUE(root.contains(mem.cube)) << mem.id;
    EXPECT_DOUBLE_EQ(mem.cube.side(), 4.0 / std::pow(2.0, mem.level));
  }
  // Per level: 4^l plain + shifted lattices with (2^l - 1) cells on shifted axes.
  std::size_t expected = 0;
  for (int l = 0; l <= 3; ++l) {
    const std::size_t c = std::size_t{1} << l;
    expected += c * c + 2 * c * (c - 1) + (c - 1) * (c - 1);
  }
  EXPECT_EQ(fam.size(), expected);
}

TEST(CubeFamily, OrderAndCap) {
  CubeFamily fam(Cube({0.0}, 2.0), 0, 2, false);
  ASSERT_EQ(fam.size(), 7u);
  for (std::size_t i = 1; i < fam.size(); ++i) EXPECT_LE(fam[i - 1].level, fam[i].level);
  EXPECT_EQ(CubeFamily(Cube({0.0}, 2.0), 0, 4, true, 10).size(), 10u);
  EXPECT_THROW(CubeFamily(Cube({0.0}, 1.0), 2, 1, false), DomainError);
}

TEST(Field, Descriptors) {
  std::vector<double> x{-0.5}, z{0.0};
  EXPECT_DOUBLE_EQ(ScalarField::sign(1).real(z), 1.0);
  EXPECT_DOUBLE_EQ(ScalarField::sign(1).real(x), -1.0);
  EXPECT_DOUBLE_EQ(ScalarField::abs(1).real(x), 0.5);
  EXPECT_DOUBLE_EQ(ScalarField::log_abs(1).real(x), std::log(0.5));
  EXPECT_TRUE(ScalarField::log_abs(1).singular_at(z));
  EXPECT_FALSE(ScalarField::abs(1).has_singular_set());
  EXPECT_DOUBLE_EQ(ScalarField::indicator(Cube({0.0}, 1.0)).real(x), 1.0);
  std::vector<double> y{0.7};
  EXPECT_DOUBLE_EQ(ScalarField::indicator(Cube({0.0}, 1.0)).real(y), 0.0);
  EXPECT_NEAR(ScalarField::sine({2.0}).real(y), std::sin(1.4), 1e-15);
}

TEST(Field, ModulatedIndicator) {
  auto f = ScalarField::modulated_indicator({3.0}, Cube({0.0}, 2.0));
  std::vector<double> x{0.4};
  EXPECT_NEAR(std::abs(f(x) - std::polar(1.0, 1.2)), 0.0, 1e-15);
  EXPECT_FALSE(f.is_real());
  ASSERT_TRUE(f.support().has_value());
  EXPECT_DOUBLE_EQ(f.support()->lower(0), -1.0);
}

TEST(Field, RandomPiecewiseDeterministic) {
  auto a = ScalarField::random_piecewise(1, 42, 5);
  auto b = ScalarField::random_piecewise(1, 42, 5);
  auto c = ScalarField::random_piecewise(1, 43, 5);
  bool differs = false;
  for (int i = 0; i < 200; ++i) {
    std::vector<double> x{-3.0 + 0.03 * i};
    EXPECT_EQ(a.real(x), b.real(x));
    EXPECT_LE(std::abs(a.real(x)), 1.0);
    differs |= a.real(x) != c.real(x);
  }
  EXPECT_TRUE(differs);
}

TEST(Field, ThresholdSign) {
  auto s = ScalarField::threshold_sign(ScalarField::coordinate(1, 0), 0.25, Cube({0.0}, 1.0));
  std::vector<double> lo{0.1}, hi{0.3}, out{2.0};
  EXPECT_DOUBLE_EQ(s.real(lo), 1.0);
  EXPECT_DOUBLE_EQ(s.real(hi), -1.0);
  EXPECT_DOUBLE_EQ(s.real(out), 0.0);
}

TEST(Field, Composites) {
  auto x = ScalarField::coordinate(1, 0);
  std::vector<double> p{3.0};
  EXPECT_DOUBLE_EQ((x * x).real(p), 9.0);
  EXPECT_DOUBLE_EQ((x + 1.0).real(p), 4.0);
  EXPECT_DOUBLE_EQ((x - x).real(p), 0.0);
  EXPECT_DOUBLE_EQ(x.dilated(2.0).real(p), 1.5);
  EXPECT_DOUBLE_EQ(x.scaled(-2.0).real(p), -6.0);
  EXPECT_TRUE(x.same_descriptor(ScalarField::coordinate(1, 0)));
  EXPECT_FALSE(x.same_descriptor(ScalarField::sign(1)));
}

}  // namespace
}  // namespace bmo
