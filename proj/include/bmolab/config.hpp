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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bmolab/field.hpp"
#include "bmolab/fourier.hpp"
#include "bmolab/geometry.hpp"
#include "bmolab/kernel.hpp"
#include "bmolab/operators.hpp"
#include "bmolab/oscillation.hpp"
#include "bmolab/quadrature.hpp"
#include "json.hpp"

namespace bmo {

/// One entry of the function battery: a descriptor name, its parameters
/// (normalized with defaults filled in) and an optional seed.
struct FunctionSpec {
  std::string descriptor;
  nlohmann::json params = nlohmann::json::object();
  std::optional<std::uint64_t> seed;

  ScalarField build(std::size_t n) const;
  std::string label(std::size_t index) const;
};

/// Parsed and validated experiment configuration. Every field has a default
/// except `seed`; unknown keys are rejected with their path.
struct ExperimentConfig {
  std::size_t m = 1;
  std::size_t n = 1;
  double p = 2.0;
  std::vector<double> p_list;  ///< defaults to m copies of m p
  std::uint64_t seed = 0;

  std::vector<FunctionSpec> functions;
  /// "replicate": each function fills all m slots; "tuple": the list is one m-tuple.
  std::string tuple_mode = "replicate";

  std::vector<double> root_center;  ///< defaults to the origin
  double root_side = 4.0;
  int level_min = 0;
  int level_max = 4;
  bool include_translates = true;
  std::size_t max_cubes = 0;

  struct Quadrature {
    std::string kind = "tensor";  ///< tensor | monte_carlo
    std::size_t points_per_dim = 24;
    std::size_t mc_samples = 20000;
    std::uint64_t seed = 0;  ///< defaults to the top-level seed
    std::size_t node_budget = 1'000'000;
  } quadrature;

  struct Kernel {
    std::size_t omega_component = 0;
    double scale = 1.0;
  } kernel;

  struct Fourier {
    double z0_scale = 2.0;   ///< z0 = z0_scale * m sqrt(n) e_1 unless z0 is given
    std::vector<double> z0;
    double delta = 0.5;
    std::size_t n_coeffs = 512;
    double tolerance = 1e-6;
    double margin = 0.5;
    int smoothstep_order = 2;
    double transition_fraction = 1.0;
    std::size_t grid_points = 0;
    std::size_t probes = 64;
  } fourier;

  struct Truncation {
    double pv_epsilon_factor = 1.5;
  } truncation;

  struct Tolerances {
    double chain_tol = 1e-3;
    double sigmas = 3.0;
    double theorem_tol = 0.05;
    double machine_tol = 1e-10;
    double sphere_tol = 1e-8;
    double stability_tol = 0.1;
  } tolerances;

  struct KernelCheck {
    std::size_t samples = 2000;
    std::size_t stability_factor = 4;
    double epsilon = 1.0;
    std::size_t homogeneity_trials = 1000;
    std::size_t sphere_points = 64;
  } kernel_check;

  struct Theorem {
    std::size_t output_points = 16;
    std::size_t containment_probes = 1000;
  } theorem;

  struct Growth {
    bool enabled = false;
    int max_level = 6;
    int depth = 4;
    double base_side = 2.0;
    bool translates = false;
  } growth;

  static ExperimentConfig parse(const nlohmann::json& j);
  static ExperimentConfig from_file(const std::filesystem::path& path);

  /// Normalized echo with every default filled in; keys sorted.
  nlohmann::json canonical() const;
  /// Git blob SHA-1 of canonical().dump().
  std::string hash() const;

  QuadratureRule rule() const;
  CubeFamily family() const;
  std::vector<FunctionTuple> tuples() const;
  std::vector<std::string> tuple_labels() const;
  TruncationPolicy policy() const;
  HomogeneousKernel make_kernel() const;
  ExpansionOptions expansion_options() const;
  std::vector<double> z0() const;
};

/// SHA-1 of "blob <size>\0" + content, hex encoded.
std::string git_blob_sha1(std::string_view content);

}  // namespace bmo
