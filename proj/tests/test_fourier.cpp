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
#include "bmolab/fourier.hpp"
#include "bmolab/kernel.hpp"

namespace bmo {
namespace {

const HomogeneousKernel kHilbert = HomogeneousKernel::hilbert();

class HilbertExpansion : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    e_ = new FourierExpansion(expand_reciprocal(kHilbert, {2.0}, 0.5, 512, 1e-6));
  }
  static void TearDownTestSuite() { delete e_; }
  static FourierExpansion* e_;
};
FourierExpansion* HilbertExpansion::e_ = nullptr;

TEST_F(HilbertExpansion, Geometry) {
  EXPECT_EQ(e_->dimension(), 1u);
  EXPECT_EQ(e_->truncation(), 512u);
  EXPECT_DOUBLE_EQ(e_->radius, 0.5);
  EXPECT_DOUBLE_EQ(e_->center[0], 2.0);
  EXPECT_LE(e_->reconstruction_error, 1e-6);
  EXPECT_TRUE(std::isfinite(e_->sum_abs));
  EXPECT_GT(e_->sum_abs, 0.0);
  for (std::size_t k = 1; k < e_->modes.size(); ++k)
    EXPECT_GE(std::abs(e_->modes[k - 1].coefficient), std::abs(e_->modes[k].coefficient));
}

TEST_F(HilbertExpansion, ReconstructionAtProbes) {
  std::vector<double> c{2.0};
  EXPECT_NEAR(std::abs(e_->evaluate(c) - Complex(2.0)), 0.0, 1e-6);
  for (int i = 0; i < 64; ++i) {
    std::vector<double> y{1.5 + (i + 0.5) / 64.0};
    EXPECT_LE(std::abs(e_->evaluate(y) - Complex(y[0])), 1e-6) << y[0];
  }
}

TEST_F(HilbertExpansion, ScalingIdentity) {
  // 1/K(y) = delta^{-1} 1/K(delta y): residual at y is 2 times the error at y / 2.
  const double delta = 0.5;
  for (int i = 0; i < 64; ++i) {
    std::vector<double> y{4.0 + 1.98 * ((i + 0.5) / 64.0 - 0.5)};
    EXPECT_LE(scaling_identity_residual(kHilbert, *e_, y), 2.0 * 1e-6) << y[0];
  }
  std::vector<double> centre{4.0}, c{2.0};
  double err = std::abs(Complex(2.0) - e_->evaluate(c));
  EXPECT_NEAR(scaling_identity_residual(kHilbert, *e_, centre), err / delta, 1e-13);
  std::vector<double> outside{5.5};
  EXPECT_THROW(scaling_identity_residual(kHilbert, *e_, outside), DomainError);
}

TEST_F(HilbertExpansion, ExactSeriesHasZeroResidual) {
  auto recip = [&](std::span<const double> y) {
    std::vector<double> s{0.5 * y[0]};
    return 2.0 * e_->evaluate(s);
  };
  for (double y0 : {3.2, 4.0, 4.9}) {
    std::vector<double> y{y0};
    EXPECT_LE(scaling_identity_residual(recip, *e_, y), 1e-14);
  }
}

TEST_F(HilbertExpansion, JsonRoundTrip) {
  auto back = expansion_from_json(to_json(*e_));
  EXPECT_EQ(back.truncation(), e_->truncation());
  EXPECT_EQ(back.sum_abs, e_->sum_abs);
  for (double y0 : {1.6, 2.0, 2.45}) {
    std::vector<double> y{y0};
    EXPECT_EQ(back.evaluate(y), e_->evaluate(y));
  }
}

TEST(Fourier, Deterministic) {
  auto a = expand_reciprocal(kHilbert, {2.0}, 0.5, 128, 1e-3);
  auto b = expand_reciprocal(kHilbert, {2.0}, 0.5, 128, 1e-3);
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
}

TEST(Fourier, ConstantStubIsSingleMode) {
  KernelFunction k = [](std::span<const double>) { return 4.0; };
  auto e = expand_reciprocal(k, 1, 1, {3.0}, 0.5, 1, 1e-12);
  ASSERT_EQ(e.truncation(), 1u);
  EXPECT_EQ(e.modes[0].index, std::vector<int>{0});
  EXPECT_NEAR(std::abs(e.modes[0].coefficient - Complex(0.25)), 0.0, 1e-15);
  EXPECT_LE(e.tail_estimate, 1e-14);
}

TEST(Fourier, ErrorDecreasesWithModes) {
  auto spec = ReciprocalSpectrum::compute(
      [](std::span<const double> u) { return kHilbert(u); }, 1, 1, {2.0}, 0.5);
  double prev = INFINITY;
  for (std::size_t N : {16u, 64u, 256u}) {
    auto e = spec.truncate(N);
    EXPECT_LT(e.reconstruction_error, prev);
    prev = e.reconstruction_error;
  }
  EXPECT_LE(spec.truncate(64).reconstruction_error, 1e-4);
}

TEST(Fourier, SumAbsMonotoneInTransition) {
  double prev = INFINITY;
  for (double tau : {0.25, 0.5, 1.0}) {
    ExpansionOptions o;
    o.transition_fraction = tau;
    auto e = expand_reciprocal(kHilbert, {2.0}, 0.5, 512, 1e-3, o);
    EXPECT_LE(e.sum_abs, prev * (1 + 1e-12)) << tau;
    prev = e.sum_abs;
  }
}

TEST(Fourier, TwoDimensionalKernel) {
  HomogeneousKernel k(2, 1);
  auto spec = ReciprocalSpectrum::compute([&](std::span<const double> u) { return k(u); }, 2, 1, {4.0}, 0.5);
  auto coarse = spec.truncate(256), fine = spec.truncate(1024);
  EXPECT_LT(fine.reconstruction_error, coarse.reconstruction_error);
  EXPECT_LE(fine.reconstruction_error, 1e-2);
  EXPECT_EQ(fine.frequency_block(0, 1).size(), 1u);
}

TEST(Fourier, AdaptiveLadder) {
  auto e = expand_reciprocal_adaptive(kHilbert, {2.0}, 0.5, 1e-6, 512);
  EXPECT_LE(e.reconstruction_error, 1e-6);
  EXPECT_LE(e.truncation(), 512u);
  EXPECT_THROW(expand_reciprocal_adaptive(kHilbert, {2.0}, 0.5, 1e-14, 64), ToleranceUnreachableError);
}

TEST(Fourier, UnreachableTolerance) {
  try {
    expand_reciprocal(kHilbert, {2.0}, 0.5, 2, 1e-10);
    FAIL() << "expected ToleranceUnreachableError";
  } catch (const ToleranceUnreachableError& err) {
    EXPECT_GT(err.achieved(), 1e-10);
    EXPECT_EQ(err.truncation(), 2u);
  }
}

TEST(Fourier, VanishingKernelWitness) {
  KernelFunction k = [](std::span<const double> y) { return y[0] - 2.2; };
  try {
    expand_reciprocal(k, 1, 1, {2.0}, 0.5, 16, 1e-3);
    FAIL() << "expected KernelVanishesError";
  } catch (const KernelVanishesError& err) {
    ASSERT_EQ(err.witness().size(), 1u);
    EXPECT_NEAR(err.witness()[0], 2.2, 1e-6);
  }
}

TEST(Fourier, Preconditions) {
  EXPECT_THROW(expand_reciprocal(kHilbert, {1.0}, 0.5, 16, 1e-3), DomainError);
  EXPECT_THROW(expand_reciprocal(kHilbert, {2.0}, 1.0, 16, 1e-3), DomainError);
  EXPECT_THROW(expand_reciprocal(kHilbert, {2.0}, 0.5, 0, 1e-3), DomainError);
  EXPECT_EQ(default_z0(2, 1), std::vector<double>{4.0});
  EXPECT_NEAR(default_z0(1, 2)[0], 2.0 * std::sqrt(2.0), 1e-15);
}

}  // namespace
}  // namespace bmo
