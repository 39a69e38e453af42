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
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "bmolab/error.hpp"
#include "bmolab/kernel.hpp"

namespace bmo {
namespace {

TEST(Kernel, BilinearValues) {
  HomogeneousKernel k(2, 1);
  std::vector<double> a{1.0, 0.0}, b{0.0, 1.0}, c{1.0, 1.0};
  EXPECT_DOUBLE_EQ(k(a), 1.0);
  EXPECT_DOUBLE_EQ(k(b), 0.0);
  EXPECT_NEAR(k(c), std::pow(2.0, -1.5), 1e-15);
  EXPECT_EQ(k.degree(), -2);
  std::vector<double> zero{0.0, 0.0};
  EXPECT_THROW(k(zero), SingularityError);
}

TEST(Kernel, HilbertAndConfiguration) {
  auto h = HomogeneousKernel::hilbert();
  std::vector<double> u{-0.25};
  EXPECT_DOUBLE_EQ(h(u), -4.0);
  HomogeneousKernel k(2, 1);
  std::vector<double> ys{1.0, 0.0, 1.0};  // u = (1, 0)
  EXPECT_DOUBLE_EQ(k.at_configuration(ys), 1.0);
}

TEST(Kernel, Homogeneity) {
  std::mt19937_64 gen(4);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ud(-3.0, 3.0);
  for (std::size_t m : {1u, 2u, 3u}) {
    for (std::size_t n : {1u, 2u}) {
      HomogeneousKernel k(m, n, m * n - 1, 0.7);
      for (int t = 0; t < 200; ++t) {
        std::vector<double> u(m * n);
        for (auto& x : u) x = nd(gen);
        EXPECT_LE(homogeneity_residual(k, u, std::exp(ud(gen))), 1e-12);
      }
    }
  }
}

TEST(Kernel, SphericalMean) {
  EXPECT_NEAR(spherical_mean(HomogeneousKernel(1, 1)), 0.0, 1e-15);
  EXPECT_NEAR(spherical_mean(HomogeneousKernel(2, 1)), 0.0, 1e-12);
  EXPECT_NEAR(spherical_mean(HomogeneousKernel(2, 2, 3)), 0.0, 1e-10);
  auto one = [](std::span<const double>) { return 1.0; };
  auto sq = [](std::span<const double> t) { return t[0] * t[0]; };
  for (std::size_t d = 1; d <= 4; ++d) {
    EXPECT_NEAR(sphere_average(one, d, 32), 1.0, 1e-12) << d;
    EXPECT_NEAR(sphere_average(sq, d, 32), 1.0 / static_cast<double>(d), 2e-3) << d;
  }
}

TEST(Kernel, PairDistanceSum) {
  std::vector<double> ys{0.0, 1.0, 3.0};
  EXPECT_DOUBLE_EQ(pair_distance_sum(ys, 1), 2.0 * (1.0 + 3.0 + 2.0));
}

TEST(SizeCondition, HilbertIsExactlyTwo) {
  // |1/(y0 - y1)| * 2|y0 - y1| = 2 for every configuration.
  auto h = HomogeneousKernel::hilbert();
  EXPECT_NEAR(size_condition_fit(h, 500, 11), 2.0, 1e-12);
}

TEST(SizeCondition, ScalingDoublesFit) {
  HomogeneousKernel k(2, 1);
  double a = size_condition_fit(k, 1000, 5);
  double b = size_condition_fit(k.scaled(2.0), 1000, 5);
  EXPECT_NEAR(b, 2.0 * a, 1e-12 * a);
}

TEST(SizeCondition, RayInvariantAndSubsetBound) {
  HomogeneousKernel k(2, 1);
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::vector<double>> configs;
  for (int t = 0; t < 300; ++t) configs.push_back({u(gen), u(gen), u(gen)});
  for (const auto& c : configs) {
    std::vector<double> scaled(c);
    for (auto& x : scaled) x *= 7.5;
    EXPECT_NEAR(size_condition_value(k, scaled), size_condition_value(k, c), 1e-10 * size_condition_value(k, c));
  }
  std::span<const std::vector<double>> all(configs), part(configs.data(), 50);
  EXPECT_LE(size_condition_fit(k, part), size_condition_fit(k, all));
}

TEST(SizeCondition, StableUnderMoreSamples) {
  HomogeneousKernel k(2, 1);
  double a = size_condition_fit(k, 2000, 21);
  double b = size_condition_fit(k, 8000, 21);
  EXPECT_LE(std::abs(b - a), 0.1 * a);
}

TEST(Smoothness, ZeroPerturbationAndDomain) {
  HomogeneousKernel k(2, 1);
  std::vector<double> ys{0.0, 1.0, -1.0};
  std::vector<double> same{1.0};
  EXPECT_EQ(smoothness_condition_value(k, ys, 1, same, 1.0), 0.0);
  std::vector<double> far{1.0 + 1.5};  // > max_k |y_1 - y_k| / 2 = 1
  EXPECT_THROW(smoothness_condition_value(k, ys, 1, far, 1.0), DomainError);
  std::vector<double> near{1.2};
  double v = smoothness_condition_value(k, ys, 1, near, 1.0);
  EXPECT_GT(v, 0.0);
  EXPECT_TRUE(std::isfinite(v));
}

TEST(Smoothness, HilbertOracle) {
  // y0 = 0, y1 = 1, y1' = 1 + t: |1/1 - 1/(1+t)| * 2^2 / t = 4 / (1 + t).
  auto h = HomogeneousKernel::hilbert();
  std::vector<double> ys{0.0, 1.0};
  for (double t : {0.1, 0.25, 0.5}) {
    std::vector<double> p{1.0 + t};
    EXPECT_NEAR(smoothness_condition_value(h, ys, 1, p, 1.0), 4.0 / (1.0 + t), 1e-12);
  }
  double fit = smoothness_condition_fit(h, 1.0, 2000, 3);
  EXPECT_TRUE(std::isfinite(fit));
  EXPECT_GT(fit, 0.0);
}

TEST(KernelBounds, Validation) {
  EXPECT_THROW((KernelBounds{0.0, 1.0}.validate()), DomainError);
  EXPECT_THROW((KernelBounds{1.0, 0.0}.validate()), DomainError);
  EXPECT_NO_THROW((KernelBounds{2.0, 0.5}.validate()));
}

}  // namespace
}  // namespace bmo
