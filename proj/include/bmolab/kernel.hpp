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
#include <vector>

namespace bmo {

/// m-linear kernel K(u_1, ..., u_m) = Omega(u/|u|) / |u|^{mn} on R^{mn}, with
/// Omega(theta) = scale * theta_j, the j-th coordinate of the unit vector.
/// Odd coordinate choices give mean-zero Omega, i.e. the multilinear Riesz
/// kernels; m = n = 1, j = 0 is the Hilbert kernel 1/u.
class HomogeneousKernel {
 public:
  HomogeneousKernel(std::size_t m, std::size_t n, std::size_t omega_component = 0,
                    double scale = 1.0);

  static HomogeneousKernel hilbert() { return HomogeneousKernel(1, 1, 0, 1.0); }

  std::size_t arity() const noexcept { return m_; }
  std::size_t dimension() const noexcept { return n_; }
  std::size_t total_dimension() const noexcept { return m_ * n_; }
  std::size_t omega_component() const noexcept { return component_; }
  double scale() const noexcept { return scale_; }
  /// Homogeneity degree, always -mn.
  int degree() const noexcept { return -static_cast<int>(m_ * n_); }

  HomogeneousKernel scaled(double factor) const;

  /// Omega on the unit sphere (no normalization is applied to the argument).
  double omega(std::span<const double> unit) const;
  /// K(u); throws SingularityError at u = 0.
  double operator()(std::span<const double> u) const;
  /// K(y_0 - y_1, ..., y_0 - y_m); `ys` holds y_0..y_m in R^n consecutively.
  double at_configuration(std::span<const double> ys) const;

 private:
  std::size_t m_;
  std::size_t n_;
  std::size_t component_;
  double scale_;
};

/// Generic kernel used where non-homogeneous test stubs are allowed.
using KernelFunction = std::function<double(std::span<const double>)>;

struct KernelBounds {
  double A = 1.0;
  double epsilon = 1.0;

  void validate() const;
};

/// sum over ordered pairs k, l in 0..m of |y_k - y_l|.
double pair_distance_sum(std::span<const double> ys, std::size_t n);

/// |K(y_0 - y_1, ...)| * (sum_{k,l} |y_k - y_l|)^{mn} for one configuration.
double size_condition_value(const HomogeneousKernel& k, std::span<const double> ys);
/// Sup of size_condition_value over the given configurations.
double size_condition_fit(const HomogeneousKernel& k,
                          std::span<const std::vector<double>> configurations);
/// Sup over `sample_count` seeded configurations with y_k uniform in [-1, 1]^n.
double size_condition_fit(const HomogeneousKernel& k, std::size_t sample_count,
                          std::uint64_t seed);

/// |K(..y_j..) - K(..y'_j..)| * S^{mn+eps} / |y_j - y'_j|^eps with S the pair
/// distance sum of the unperturbed configuration. The perturbation must satisfy
/// |y_j - y'_j| <= max_k |y_j - y_k| / 2 (DomainError otherwise); a zero
/// perturbation contributes 0.
double smoothness_condition_value(const HomogeneousKernel& k, std::span<const double> ys,
                                  std::size_t j, std::span<const double> yj_prime,
                                  double epsilon);
double smoothness_condition_fit(const HomogeneousKernel& k, double epsilon,
                                std::size_t sample_count, std::uint64_t seed);

/// Relative residual |K(lambda u) - lambda^{-mn} K(u)| / |lambda^{-mn} K(u)|
/// (absolute when K(u) = 0).
double homogeneity_residual(const HomogeneousKernel& k, std::span<const double> u,
                            double lambda);

/// Mean of g over the unit sphere of R^d, midpoint rule in hyperspherical angles
/// (2 points for d = 1).
double sphere_average(const std::function<double(std::span<const double>)>& g, std::size_t d,
                      std::size_t points_per_angle);

/// Mean of Omega over the sphere S^{mn-1}.
double spherical_mean(const HomogeneousKernel& k, std::size_t points_per_angle = 64);

}  // namespace bmo
