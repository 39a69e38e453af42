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
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "bmolab/field.hpp"
#include "bmolab/geometry.hpp"
#include "bmolab/kernel.hpp"
#include "bmolab/oscillation.hpp"
#include "bmolab/quadrature.hpp"

namespace bmo {

/// Principal-value truncation. Each input slot is discretized on a midpoint
/// lattice anchored at the output point x (cell boundaries at x + j h, clipped
/// to the slot's support); a node is dropped when, in every slot and on every
/// axis, its cell centre lies within pv_epsilon * h of x. The dropped set is a
/// box around the full diagonal y_1 = ... = y_m = x, symmetric under
/// u -> -u, so odd kernels cancel to O(h).
struct TruncationPolicy {
  double pv_epsilon = 1.5;          ///< in units of the node spacing; >= 1
  std::optional<Box> integration_box;  ///< clips slot supports; required for unbounded inputs

  void validate() const;
};

struct OperatorEvaluation {
  HomogeneousKernel kernel = HomogeneousKernel::hilbert();
  std::vector<ScalarField> inputs;
  std::vector<std::vector<double>> points;
  TruncationPolicy policy;
  /// points_per_dim is the number of cells across each slot support box.
  QuadratureRule rule = QuadratureRule::tensor(256);

  void validate() const;
};

/// int (c0 + sum_s beta_s(y_s)) K(x - y_1, ..., x - y_m) prod_s f_s(y_s) dy,
/// truncated as above. `beta` is empty or has one optional entry per slot.
/// Plain T is c0 = 1 with no beta.
Complex integrate_kernel(const HomogeneousKernel& k, std::span<const ScalarField> inputs,
                         std::span<const double> x, Complex c0,
                         std::span<const std::optional<ScalarField>> beta,
                         const TruncationPolicy& policy, const QuadratureRule& rule);

Complex apply_T(const OperatorEvaluation& eval, std::span<const double> x);
std::vector<Complex> apply_T(const OperatorEvaluation& eval);

/// [b, T]_i at x in both forms: b(x) T(f) - T(.., b f_i, ..) and the single
/// pass over (b(x) - b(y_i)) K prod f.
struct CommutatorValue {
  Complex difference_form{};
  Complex kernel_form{};

  Complex value() const noexcept { return difference_form; }
  double discrepancy() const { return std::abs(difference_form - kernel_form); }
};

CommutatorValue commutator_single(const ScalarField& b, std::size_t i,
                                  const OperatorEvaluation& eval, std::span<const double> x);

/// sum_i [b_i, T]_i at x via commutator_single.
Complex commutator_sum(const FunctionTuple& b, const OperatorEvaluation& eval,
                       std::span<const double> x);
/// One pass over (sum_i b_i(x) - b_i(y_i)) K prod f.
Complex commutator_sum_kernel_form(const FunctionTuple& b, const OperatorEvaluation& eval,
                                   std::span<const double> x);

/// |T_h f(x) - T_{h/2} f(x)| with the exclusion radius refined alongside.
double truncation_stability(const OperatorEvaluation& eval, std::span<const double> x);

using MultilinearOperator =
    std::function<Complex(std::span<const ScalarField>, std::span<const double>)>;

struct NormLowerBound {
  double value = 0.0;
  std::size_t argmax = 0;
  std::vector<double> ratios;  ///< one per test tuple, in input order
};

/// (int_domain |v|^p w)^{1/p} over a node set and matching values.
double lp_norm_of_values(std::span<const Complex> values, const NodeSet& nodes, double p);

/// max over tests of ||op(f)||_{L^p(domain)} / prod_i ||f_i||_{L^{p_i}}.
/// Output norms use `output_rule` on `domain`; input norms use `input_rule`
/// on each input's support (clipped to `domain` when unbounded).
NormLowerBound operator_norm_lower_bound(const MultilinearOperator& op,
                                         const std::vector<std::vector<ScalarField>>& tests,
                                         std::span<const double> p_list, double p,
                                         const Box& domain, const QuadratureRule& output_rule,
                                         const QuadratureRule& input_rule);

/// Columns x (or x_0.. for n > 1), re, im.
void write_evaluation_csv(std::ostream& os, const std::vector<std::vector<double>>& points,
                          std::span<const Complex> values);

/// Checks sum 1/p_i = 1/p within 1e-12.
void check_holder(std::span<const double> p_list, double p);

}  // namespace bmo
