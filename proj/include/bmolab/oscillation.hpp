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

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bmolab/field.hpp"
#include "bmolab/geometry.hpp"
#include "bmolab/quadrature.hpp"
#include "bmolab/verdict.hpp"

namespace bmo {

/// b = (b_1, ..., b_m), all on the same R^n.
class FunctionTuple {
 public:
  explicit FunctionTuple(std::vector<ScalarField> entries);

  std::size_t size() const noexcept { return entries_.size(); }
  std::size_t dimension() const noexcept { return entries_.front().dimension(); }
  const ScalarField& operator[](std::size_t i) const { return entries_.at(i); }
  const std::vector<ScalarField>& entries() const noexcept { return entries_; }
  /// True when every entry has the same descriptor as the first.
  bool all_same() const;

 private:
  std::vector<ScalarField> entries_;
};

/// All 2^m vectors of +-1 entries; pattern p has sigma_i = -1 iff bit i of p is set,
/// so pattern 0 is (+1, ..., +1).
class SignPatternSet {
 public:
  explicit SignPatternSet(std::size_t m);

  std::size_t arity() const noexcept { return m_; }
  std::size_t size() const noexcept { return std::size_t{1} << m_; }
  int sign(std::size_t pattern, std::size_t i) const {
    return ((pattern >> i) & 1U) ? -1 : 1;
  }
  std::vector<int> pattern(std::size_t p) const;

 private:
  std::size_t m_;
};

struct SignInequality {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// sum |a_i| <= sum over sigma of |sum sigma_i a_i| for real a_i.
SignInequality sign_inequality_check(std::span<const double> a, double slack = 1e-12);
/// Same for vectors a_i in R^n stored consecutively (a.size() == m*n).
SignInequality sign_inequality_check(std::span<const double> a, std::size_t n,
                                     double slack = 1e-12);

/// |sum_i sum_{j != i} (v_j - v_i)| for v_i = b_i(y_i), summed literally.
double telescoping_residual(std::span<const Complex> values);
/// `points` holds y_1, ..., y_m consecutively.
double telescoping_residual(const FunctionTuple& b, std::span<const double> points);

/// (1/|Q|^{m+1}) int_Q int_{Q^m} |sum_i (b_i(x) - b_i(y_i))|.
Estimate functional_star(const FunctionTuple& b, const Cube& q, const QuadratureRule& rule);
/// (1/|Q|^m) int_{Q^m} |sum_i (b_i(x_i) - (b_i)_Q)|.
Estimate functional_star2(const FunctionTuple& b, const Cube& q, const QuadratureRule& rule);
/// (1/|Q|^{2m}) int_{Q^m} int_{Q^m} |sum_i (b_i(x_i) - b_i(y_i))|.
Estimate functional_star3(const FunctionTuple& b, const Cube& q, const QuadratureRule& rule);

/// (1/|Q|^m) int_{Q^m} |sum_i (b_i(x_i) - c_i)| for given constants c_i.
/// functional_star2 is the case c_i = (b_i)_Q.
Estimate joint_oscillation(const FunctionTuple& b, const Cube& q,
                           std::span<const Complex> centers, const QuadratureRule& rule);

struct ChainCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double allowance = 0.0;
  bool holds = false;

  double margin() const { return rhs + allowance - lhs; }
};

struct ChainTolerance {
  double tensor = 1e-3;   ///< absolute slack for tensor rules
  double sigmas = 3.0;    ///< monte-carlo slack in combined standard errors
};

struct CubeOscillation {
  FamilyMember member;
  Estimate star;
  Estimate star2;
  Estimate star3;
  std::vector<Estimate> bmo;      ///< mean oscillation of each b_i on the cube
  std::vector<ChainCheck> chain;  ///< a=>b, b=>c, c=>d, d=>a
  std::optional<std::string> error;
};

/// Per-cube and supremal values of the three functionals and the entrywise
/// mean oscillations, plus the four chain checks of the equivalence.
struct OscillationReport {
  std::size_t m = 0;
  RuleKind rule_kind = RuleKind::tensor_midpoint;
  std::vector<CubeOscillation> cubes;
  double sup_star = 0.0;
  double sup_star2 = 0.0;
  double sup_star3 = 0.0;
  std::vector<double> bmo_sup;
  std::array<std::size_t, 4> chain_failures{};
  std::size_t cube_errors = 0;
  bool all_pass = true;
};

inline constexpr std::array<const char*, 4> kChainNames = {"a_implies_b", "b_implies_c",
                                                           "c_implies_d", "d_implies_a"};

/// Runs every functional on every cube and checks
///   [b]_** <= [b]_*,  [b]_*** <= 2 [b]_**,  max_i osc(b_i) <= 2^m [b]_***,
///   [b]_* <= 2 sum_i osc(b_i)
/// per cube. When m*n >= 5 a tensor rule is replaced by monte-carlo with the
/// rule's sample_count and seed. Per-cube errors are recorded, not thrown.
OscillationReport lemma_equivalence_suite(const FunctionTuple& b, const CubeFamily& family,
                                          const QuadratureRule& rule,
                                          const ChainTolerance& tol = {});

/// Growth of a supremal quantity over roots of side base*2^L.
struct GrowthSweep {
  std::vector<int> levels;
  std::vector<double> values;
  std::vector<double> ratios;  ///< values[L] / values[L-1], first entry 0
  Verdict verdict = Verdict::pass;
  bool divergent = false;
  bool stable = false;
};

/// Divergent iff every ratio from `from_level` on is >= grow_factor; stable iff
/// every such ratio is <= stable_ratio.
GrowthSweep classify_growth(std::vector<double> values, int from_level = 2,
                            double grow_factor = 1.5, double stable_ratio = 1.05);

/// bmo_norm_estimate of f over families rooted at root scaled by 2^L, L = 0..max_level.
GrowthSweep bmo_growth_sweep(const ScalarField& f, const Cube& root, int max_level, int depth,
                             bool translates, const QuadratureRule& rule);

/// sup [b]_** over the same growing roots.
GrowthSweep oscillation_growth_sweep(const FunctionTuple& b, const Cube& root, int max_level,
                                     int depth, bool translates, const QuadratureRule& rule);

}  // namespace bmo
