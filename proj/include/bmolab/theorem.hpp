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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bmolab/field.hpp"
#include "bmolab/fourier.hpp"
#include "bmolab/geometry.hpp"
#include "bmolab/kernel.hpp"
#include "bmolab/operators.hpp"
#include "bmolab/oscillation.hpp"
#include "bmolab/quadrature.hpp"
#include "bmolab/verdict.hpp"

namespace bmo {

struct TheoremConfig {
  HomogeneousKernel kernel = HomogeneousKernel::hilbert();
  std::vector<double> z0;  ///< in R^n, |z0| > m sqrt(n)
  double delta = 0.5;
  FourierExpansion expansion;
  std::vector<double> p_list;
  double p = 2.0;
  /// Rule for the oscillation side and for the slot lattices of the commutators.
  QuadratureRule rule = QuadratureRule::tensor(32);
  /// Output nodes per axis of the companion cube (midpoint rule).
  std::size_t output_points = 16;
  TruncationPolicy policy;
  double tolerance = 0.05;  ///< relative slack of the chain verdict
  std::size_t containment_probes = 1000;
  std::uint64_t seed = 1;

  std::size_t m() const noexcept { return kernel.arity(); }
  std::size_t n() const noexcept { return kernel.dimension(); }
  void validate() const;
};

/// Builds the expansion for (kernel, z0, delta) and fills a config with
/// p_i = m p; throws whatever expand_reciprocal throws.
TheoremConfig make_theorem_config(const HomogeneousKernel& kernel, std::vector<double> z0,
                                  double delta, std::size_t modes, double fourier_tolerance,
                                  const ExpansionOptions& options = {}, double p = 2.0);

/// Q' = Q(x0 + r z0 / delta, r) for Q = Q(x0, r), r the side. Verifies
/// disjointness and, on the 3^n x 3^{mn} corner lattice plus
/// `containment_probes` random configurations, that
///   sqrt(|(y_i - x)/r - z1|^2 + sum_{j != i} |(y_i - y_j)/r|^2) <= sqrt(mn)
/// for every i (ContainmentError with the configuration otherwise).
Cube build_companion_cube(const Cube& q, const TheoremConfig& cfg);

/// Largest value of the containment expression over corner and random probes.
double containment_margin_probe(const Cube& q, const Cube& qp, const TheoremConfig& cfg,
                                std::vector<double>* witness = nullptr);

/// s_i(x) = sgn(m c_i - sum_{j != i} c_j - b_i(x)) on Q with c_j = (b_j)_{Q'};
/// this is the sign of the (Q')^m average of the split integrand.
ScalarField sign_weight(const FunctionTuple& b, std::size_t i, const Cube& q, const Cube& qp,
                        const QuadratureRule& rule);

struct ConstructionBundle {
  Cube q;
  Cube qp;
  std::vector<double> z1;
  std::vector<double> companion_means;  ///< c_j = (b_j)_{Q'}
  std::vector<double> thresholds;       ///< m c_i - sum_{j != i} c_j
  std::vector<ScalarField> sign_weights;
};

ConstructionBundle build_bundle(const FunctionTuple& b, const TheoremConfig& cfg, const Cube& q);

struct TestFunctions {
  std::vector<ScalarField> f;  ///< m inputs
  ScalarField g;
};

/// f_1 = e^{-i (delta/r) v^1 . x} s_i chi_Q, f_s = e^{-i (delta/r) v^s . y} chi_{Q'}
/// for s >= 2, g = e^{i (delta/r) (v^1 + ... + v^m) . y} chi_{Q'}, where v^s is
/// the block of v_k paired with kernel slot s.
TestFunctions build_test_functions(const TheoremConfig& cfg, const ConstructionBundle& bundle,
                                   std::size_t i, std::size_t k);

struct VerificationRecord {
  std::size_t cube_id = 0;
  int level = 0;
  std::vector<double> center;
  double side = 0.0;
  std::vector<double> companion_center;
  double lhs = 0.0;     ///< average over Q^m of |sum_i b_i(x_i) - (b_i)_{Q'}|
  double step1 = 0.0;   ///< after the telescoping split and triangle inequality
  double step2 = 0.0;   ///< series with the commutator, real part
  double step2_paired = 0.0;  ///< series with the split integrand itself
  double step3 = 0.0;   ///< absolute series with L^1(Q') norms
  double rhs = 0.0;     ///< absolute series with L^p(Q') norms
  double tail = 0.0;
  double ratio = 0.0;   ///< lhs / (rhs (1 + tol) + tail)
  double identity_residual = 0.0;  ///< |step2_paired - step1| / max(step1, 1e-300)
  double norm_lower_bound = 0.0;   ///< max over (i, k) of ||F|| / prod ||f_s||
  double max_factor = 0.0;         ///< max over k of delta^{-mn} sum_i ratio_{i,k}
  std::vector<double> partial_sums;  ///< running rhs over modes
  std::size_t truncation = 0;
  bool pairing_consistent = true;  ///< split integrand equals the commutator integrand
  Verdict verdict = Verdict::fail;
  std::optional<std::string> error;
  double runtime_seconds = 0.0;
};

VerificationRecord theorem_chain_verify(const FunctionTuple& b, const TheoremConfig& cfg,
                                        const Cube& q);
VerificationRecord theorem_chain_verify(const FunctionTuple& b, const TheoremConfig& cfg,
                                        const FamilyMember& member);

struct CubeComparison {
  std::size_t cube_id = 0;
  double star2_own = 0.0;        ///< against (b_i)_Q
  double star2_companion = 0.0;  ///< against (b_i)_{Q'}
  double star3 = 0.0;
  double constant = 0.0;         ///< star2_own / star2_companion (0 when both vanish)
  bool comparison_holds = true;  ///< star2_own <= 2 star2_companion + slack
};

struct LowerBoundReport {
  std::vector<VerificationRecord> records;
  std::vector<CubeComparison> comparisons;
  double comparison_constant = 0.0;  ///< max over the family
  double bmo_lower_bound = 0.0;      ///< sup_Q [b]_***(Q) / 2^m
  std::size_t lower_bound_argmax = 0;
  double implied_upper_bound = 0.0;  ///< sup_Q 2^{m+1} C (rhs (1 + tol) + tail)
  std::size_t passed = 0;
  std::size_t failed = 0;
  bool all_pass = true;
};

LowerBoundReport bmo_lower_bound_report(const FunctionTuple& b, const TheoremConfig& cfg,
                                        const CubeFamily& family);

}  // namespace bmo
