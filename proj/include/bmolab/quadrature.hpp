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
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "bmolab/field.hpp"
#include "bmolab/geometry.hpp"

namespace bmo {

enum class RuleKind { tensor_midpoint, monte_carlo };

std::string to_string(RuleKind kind);

struct QuadratureRule {
  RuleKind kind = RuleKind::tensor_midpoint;
  std::size_t points_per_dim = 16;
  std::size_t sample_count = 100000;
  std::uint64_t seed = 1;
  std::size_t node_budget = 1'000'000;

  static QuadratureRule tensor(std::size_t points_per_dim) {
    QuadratureRule r;
    r.points_per_dim = points_per_dim;
    return r;
  }
  static QuadratureRule monte_carlo(std::size_t samples, std::uint64_t seed) {
    QuadratureRule r;
    r.kind = RuleKind::monte_carlo;
    r.sample_count = samples;
    r.seed = seed;
    return r;
  }

  /// Same rule with a derived seed; tensor rules are unaffected.
  QuadratureRule with_stream(std::uint64_t stream) const;
  void validate() const;
};

/// Nominal tensor node count points_per_dim^dims; throws NodeBudgetError
/// when it exceeds `budget`.
std::size_t tensor_node_count(std::size_t points_per_dim, std::size_t dims, std::size_t budget);

/// Value of a quadrature plus the monte-carlo standard error (0 for tensor rules).
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t nodes = 0;
};

struct ComplexEstimate {
  Complex value{};
  double std_error = 0.0;
  std::size_t nodes = 0;
};

/// Flat node list with weights; weights sum to the box volume.
struct NodeSet {
  std::size_t dimension = 0;
  std::vector<double> coords;
  std::vector<double> weights;

  std::size_t size() const noexcept { return weights.size(); }
  std::span<const double> point(std::size_t i) const {
    return {coords.data() + i * dimension, dimension};
  }
};

/// Tensor rule: points_per_dim^n midpoints, all strictly interior.
/// Monte-carlo: sample_count uniform points drawn from (seed, stream).
NodeSet make_nodes(const Box& box, const QuadratureRule& rule, std::uint64_t stream = 0);

/// Values of f at the nodes; throws SingularNodeError on a hit.
std::vector<Complex> sample_field(const ScalarField& f, const NodeSet& nodes);

/// (1/|Q|) int_Q f.
Complex cube_average(const ScalarField& f, const Cube& q, const QuadratureRule& rule);

/// (1/|Q|) int_Q |f - f_Q| on one node set (the average uses the same nodes).
Estimate mean_oscillation(const ScalarField& f, const Cube& q, const QuadratureRule& rule);

struct BmoEstimate {
  double value = 0.0;         ///< max over the family; an under-estimate of the true norm
  std::size_t argmax = 0;     ///< member id attaining the max
  std::vector<double> per_cube;
};

BmoEstimate bmo_norm_estimate(const ScalarField& f, const CubeFamily& family,
                              const QuadratureRule& rule);

/// Integrand over m points of R^n, passed as one flat span of m*n coordinates.
using MultiPointIntegrand = std::function<Complex(std::span<const double>)>;

/// int_{Q^m} g, or the average over Q^m when `normalized`. The tensor rule
/// repeats the per-cube midpoint set on every factor.
ComplexEstimate integrate_over_cube_power(const MultiPointIntegrand& g, const Cube& q,
                                          std::size_t m, const QuadratureRule& rule,
                                          bool normalized = true);

/// (int_domain |f|^p)^{1/p}. Bounded supports are intersected with the domain first.
double lp_norm(const ScalarField& f, double p, const Cube& domain, const QuadratureRule& rule);
double lp_norm(const ScalarField& f, double p, const Box& domain, const QuadratureRule& rule);

}  // namespace bmo
