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
#include "bmolab/theorem.hpp"

namespace bmo {
namespace {

// Built once: the expansions dominate the setup cost.
const TheoremConfig& config_m1() {
  static const TheoremConfig cfg = [] {
    auto c = make_theorem_config(HomogeneousKernel::hilbert(), {2.0}, 0.5, 256, 1e-5);
    c.rule = QuadratureRule::tensor(64);
    return c;
  }();
  return cfg;
}

const TheoremConfig& config_m2() {
  static const TheoremConfig cfg = [] {
    auto c = make_theorem_config(HomogeneousKernel(2, 1), {4.0}, 0.5, 256, 0.1);
    c.rule = QuadratureRule::tensor(24);
    c.output_points = 12;
    return c;
  }();
  return cfg;
}

std::size_t zero_mode(const FourierExpansion& e) {
  for (std::size_t k = 0; k < e.modes.size(); ++k) {
    bool zero = true;
    for (int v : e.modes[k].index) zero = zero && v == 0;
    if (zero) return k;
  }
  return e.modes.size();
}

TEST(CompanionCube, Placement) {
  const auto& cfg = config_m1();
  EXPECT_EQ(build_companion_cube(Cube({0.0}, 1.0), cfg), Cube({4.0}, 1.0));
  EXPECT_EQ(build_companion_cube(Cube({0.0}, 2.0), cfg), Cube({8.0}, 2.0));
  EXPECT_EQ(build_companion_cube(Cube({5.0}, 1.0), cfg), Cube({9.0}, 1.0));
  EXPECT_THROW(build_companion_cube(Cube({0.0, 0.0}, 1.0), cfg), DomainError);
}

TEST(CompanionCube, ContainmentProbes) {
  for (const TheoremConfig* cfg : {&config_m1(), &config_m2()}) {
    Cube q({0.3}, 0.7);
    Cube qp = build_companion_cube(q, *cfg);
    std::vector<double> witness;
    double worst = containment_margin_probe(q, qp, *cfg, &witness);
    EXPECT_LE(worst, std::sqrt(double(cfg->m())) * (1 + 1e-12));
    EXPECT_FALSE(witness.empty());
  }
}

TEST(SignWeight, Oracles) {
  const auto& cfg = config_m1();
  Cube q({0.0}, 1.0), qp({4.0}, 1.0);
  std::vector<double> pts{-0.4, -0.1, 0.0, 0.2, 0.45};
  auto c = sign_weight(FunctionTuple({ScalarField::constant(2.0, 1)}), 0, q, qp, cfg.rule);
  auto x = sign_weight(FunctionTuple({ScalarField::coordinate(1, 0)}), 0, q, qp, cfg.rule);
  auto nx = sign_weight(FunctionTuple({ScalarField::coordinate(1, 0, -1.0)}), 0, q, qp, cfg.rule);
  for (double p : pts) {
    std::vector<double> y{p};
    EXPECT_EQ(c.real(y), 1.0);
    EXPECT_EQ(x.real(y), 1.0);  // sgn(4 - x)
    EXPECT_EQ(nx.real(y), -1.0);
  }
  // Companion mean 0.1 splits Q(0, 1): sgn(0.1 - x).
  auto split = sign_weight(FunctionTuple({ScalarField::coordinate(1, 0)}), 0, q, Cube({0.1}, 0.2), cfg.rule);
  std::vector<double> lo{0.05}, hi{0.15};
  EXPECT_EQ(split.real(lo), 1.0);
  EXPECT_EQ(split.real(hi), -1.0);
}

TEST(Bundle, MeansAndThresholds) {
  const auto& cfg = config_m2();
  FunctionTuple b({ScalarField::sign(1), ScalarField::coordinate(1, 0)});
  auto bundle = build_bundle(b, cfg, Cube({0.0}, 1.0));
  EXPECT_EQ(bundle.qp, Cube({8.0}, 1.0));
  ASSERT_EQ(bundle.companion_means.size(), 2u);
  EXPECT_NEAR(bundle.companion_means[0], 1.0, 1e-12);
  EXPECT_NEAR(bundle.companion_means[1], 8.0, 1e-12);
  EXPECT_NEAR(bundle.thresholds[0], 2.0 * 1.0 - 8.0, 1e-12);
  EXPECT_NEAR(bundle.thresholds[1], 2.0 * 8.0 - 1.0, 1e-12);
}

TEST(TestFunctions, ZeroFrequencyAndNorms) {
  const auto& cfg = config_m2();
  FunctionTuple b({ScalarField::sign(1), ScalarField::sign(1)});
  auto bundle = build_bundle(b, cfg, Cube({0.0}, 1.0));
  std::size_t k0 = zero_mode(cfg.expansion);
  ASSERT_LT(k0, cfg.expansion.truncation());
  auto tf = build_test_functions(cfg, bundle, 0, k0);
  std::vector<double> inq{0.2}, inqp{8.3};
  EXPECT_EQ(tf.f[0](inq), bundle.sign_weights[0](inq));
  EXPECT_EQ(tf.f[1](inqp), Complex(1.0));
  EXPECT_EQ(tf.g(inqp), Complex(1.0));
  EXPECT_EQ(tf.g(inq), Complex(0.0));

  auto r = QuadratureRule::tensor(256);
  for (std::size_t k : {0u, 5u, 40u}) {
    auto t = build_test_functions(cfg, bundle, 1, k);
    EXPECT_NEAR(lp_norm(t.f[0], 4.0, bundle.q, r), 1.0, 1e-12);
    EXPECT_NEAR(lp_norm(t.f[1], 4.0, bundle.qp, r), 1.0, 1e-12);
  }
  TheoremConfig wide = cfg;
  auto big = build_bundle(b, wide, Cube({0.0}, 2.0));
  auto t = build_test_functions(wide, big, 0, 3);
  EXPECT_NEAR(lp_norm(t.f[1], 4.0, big.qp, r), std::pow(2.0, 0.25), 1e-12);
}

TEST(TestFunctions, PhaseBookkeeping) {
  // g(x) f_1(y_1) f_2(y_2) = s(y_1) exp(i (delta / r) sum_s v^s . (x - y_s)).
  const auto& cfg = config_m2();
  FunctionTuple b({ScalarField::sign(1), ScalarField::abs(1)});
  Cube q({0.3}, 0.5);
  auto bundle = build_bundle(b, cfg, q);
  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (std::size_t k = 0; k < 30; ++k) {
    auto tf = build_test_functions(cfg, bundle, 0, k);
    auto v = cfg.expansion.frequency(k);
    const double f = cfg.delta / q.side();
    for (int t = 0; t < 10; ++t) {
      std::vector<double> x{bundle.qp.center(0) + q.side() * u(gen)};
      std::vector<double> y1{q.center(0) + q.side() * u(gen)};
      std::vector<double> y2{bundle.qp.center(0) + q.side() * u(gen)};
      Complex lhs = tf.g(x) * tf.f[0](y1) * tf.f[1](y2);
      Complex rhs = bundle.sign_weights[0](y1) * std::polar(1.0, f * (v[0] * (x[0] - y1[0]) + v[1] * (x[0] - y2[0])));
      EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-12);
    }
  }
}

TEST(TestFunctions, SignSplitIntegrandAgainstGaussLegendre) {
  // m = 1, b = sign on Q(0, 1): s = 1, and the commutator integrand at y in Q'
  // reduces to int_{-1/2}^0 2 exp(-i w x) / (y - x) dx with w = (delta / r) v_k.
  const auto& cfg = config_m1();
  FunctionTuple b({ScalarField::sign(1)});
  auto bundle = build_bundle(b, cfg, Cube({0.0}, 1.0));
  std::vector<double> probe{-0.3, 0.1};
  for (double p : probe) EXPECT_EQ(bundle.sign_weights[0].real(std::vector<double>{p}), 1.0);
  for (std::size_t k : {0u, 1u, 7u}) {
    auto tf = build_test_functions(cfg, bundle, 0, k);
    OperatorEvaluation ev;
    ev.inputs = tf.f;
    ev.rule = QuadratureRule::tensor(4096);
    const double w = cfg.delta * cfg.expansion.frequency(k)[0];
    for (double y : {3.6, 4.0, 4.4}) {
      std::vector<double> yp{y};
      Complex F = commutator_sum_kernel_form(b, ev, yp);
      // 5-point Gauss-Legendre on 64 panels
      const double xs[] = {0.0, 0.5384693101056831, -0.5384693101056831, 0.9061798459386640, -0.9061798459386640};
      const double ws[] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665, 0.2369268850561891,
                           0.2369268850561891};
      Complex ref = 0.0;
      const double h = 0.5 / 64;
      for (int panel = 0; panel < 64; ++panel) {
        double mid = -0.5 + (panel + 0.5) * h;
        for (int j = 0; j < 5; ++j) {
          double x = mid + 0.5 * h * xs[j];
          ref += 0.5 * h * ws[j] * 2.0 * std::polar(1.0, -w * x) / (y - x);
        }
      }
      EXPECT_NEAR(std::abs(F - ref), 0.0, 1e-3) << k << " " << y;
    }
  }
}

TEST(Chain, SignOnUnitCube) {
  auto rec = theorem_chain_verify(FunctionTuple({ScalarField::sign(1)}), config_m1(), Cube({0.0}, 1.0));
  ASSERT_FALSE(rec.error) << *rec.error;
  EXPECT_NEAR(rec.lhs, 1.0, 1e-12);
  EXPECT_NEAR(rec.step1, 1.0, 1e-12);
  EXPECT_EQ(rec.verdict, Verdict::pass);
  EXPECT_LE(rec.identity_residual, 1e-6);
  EXPECT_LE(rec.step1, rec.step3 * (1 + 1e-2));
  EXPECT_LE(rec.step3, rec.rhs * (1 + 1e-12));
  EXPECT_EQ(rec.partial_sums.size(), rec.truncation);
  EXPECT_NEAR(rec.partial_sums.back(), rec.rhs, 1e-12 * rec.rhs);
  for (std::size_t k = 1; k < rec.partial_sums.size(); ++k) EXPECT_GE(rec.partial_sums[k], rec.partial_sums[k - 1]);
  EXPECT_TRUE(rec.pairing_consistent);
}

TEST(Chain, ConstantsPass) {
  auto rec = theorem_chain_verify(FunctionTuple({ScalarField::constant(3.0, 1)}), config_m1(), Cube({0.0}, 1.0));
  EXPECT_EQ(rec.lhs, 0.0);
  EXPECT_EQ(rec.verdict, Verdict::pass);
}

TEST(Chain, ScaleAndDeltaInvariantLhs) {
  FunctionTuple b({ScalarField::sign(1)});
  auto r1 = theorem_chain_verify(b, config_m1(), Cube({0.0}, 1.0));
  auto r2 = theorem_chain_verify(b, config_m1(), Cube({0.0}, 2.0));
  EXPECT_NEAR(r1.lhs, r2.lhs, 1e-12);
  auto c = make_theorem_config(HomogeneousKernel::hilbert(), {2.0}, 0.25, 256, 1e-3);
  c.rule = QuadratureRule::tensor(64);
  auto r3 = theorem_chain_verify(b, c, Cube({0.0}, 1.0));
  EXPECT_NEAR(r1.lhs, r3.lhs, 1e-12);
  EXPECT_EQ(r3.verdict, Verdict::pass);
}

TEST(Chain, BilinearSignTensorAndMonteCarlo) {
  FunctionTuple b({ScalarField::sign(1), ScalarField::sign(1)});
  auto rec = theorem_chain_verify(b, config_m2(), Cube({0.1}, 0.5));
  ASSERT_FALSE(rec.error) << *rec.error;
  EXPECT_EQ(rec.verdict, Verdict::pass);
  EXPECT_LE(rec.identity_residual, 0.05);

  TheoremConfig mc = config_m2();
  mc.rule = QuadratureRule::monte_carlo(400, 7);
  auto r = theorem_chain_verify(b, mc, Cube({0.1}, 0.5));
  ASSERT_FALSE(r.error) << *r.error;
  EXPECT_EQ(r.verdict, Verdict::pass);
}

TEST(Chain, MixedTupleFlagsPairing) {
  // Distinct entries: the split integrand still reproduces step1, the
  // commutator integrand does not, and the record says so.
  FunctionTuple b({ScalarField::random_piecewise(1, 3, 5), ScalarField::sign(1)});
  auto rec = theorem_chain_verify(b, config_m2(), Cube({0.0}, 1.0));
  ASSERT_FALSE(rec.error);
  EXPECT_FALSE(rec.pairing_consistent);
  EXPECT_LE(std::abs(rec.step2_paired - rec.step1), 1e-3 * rec.step1);
  EXPECT_GT(std::abs(rec.step2 - rec.step2_paired), 0.1 * rec.step1);
}

TEST(LowerBound, BelowBmoEstimate) {
  FunctionTuple b({ScalarField::sign(1)});
  CubeFamily fam(Cube({0.0}, 2.0), 0, 2, true, 6);
  auto rep = bmo_lower_bound_report(b, config_m1(), fam);
  EXPECT_EQ(rep.records.size(), fam.size());
  EXPECT_TRUE(rep.all_pass);
  EXPECT_EQ(rep.passed, fam.size());
  double bmo = bmo_norm_estimate(b[0], fam, config_m1().rule).value;
  EXPECT_LE(rep.bmo_lower_bound, bmo + 1e-9);
  EXPECT_GT(rep.bmo_lower_bound, 0.0);
  EXPECT_LE(rep.comparison_constant, 2.0 + 1e-9);
  for (const auto& c : rep.comparisons) EXPECT_TRUE(c.comparison_holds);
  EXPECT_GE(rep.implied_upper_bound, bmo);
}

TEST(Config, Validation) {
  TheoremConfig c = config_m1();
  c.p = 0.5;
  c.p_list = {0.5};
  EXPECT_THROW(c.validate(), DomainError);
  c = config_m1();
  c.delta = 0.3;
  EXPECT_THROW(c.validate(), DomainError);
  c = config_m1();
  c.p_list = {3.0};
  EXPECT_THROW(c.validate(), DomainError);
}

}  // namespace
}  // namespace bmo
