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
#include <span>
#include <vector>

#include "bmolab/field.hpp"
#include "bmolab/kernel.hpp"
#include "json.hpp"

namespace bmo {

/// Parameters of the smooth periodic extension of 1/K.
struct ExpansionOptions {
  double margin = 0.5;               ///< periodization side = 2 * radius * (1 + margin)
  int smoothstep_order = 2;          ///< cutoff is C^order
  double transition_fraction = 1.0;  ///< ramp width as a fraction of margin * radius
  std::size_t grid_points = 0;       ///< DFT points per axis; 0 picks a default per dimension
  std::size_t probes_per_axis = 0;   ///< reconstruction probe lattice; 0 picks a default

  void validate() const;
};

struct FourierMode {
  std::vector<int> index;  ///< integer mode vector; frequency = scale * index
  Complex coefficient;
};

/// Truncated series 1/K(y) ~ sum_k a_k exp(i v_k . y) valid on the closed ball
/// B((z0, 0, ..., 0), delta * sqrt(mn)) of R^{mn}. Coefficients are stored in
/// absolute coordinates (no origin shift is needed to evaluate).
struct FourierExpansion {
  std::size_t m = 1;
  std::size_t n = 1;
  std::vector<double> z0;
  double delta = 0.5;
  std::vector<double> center;  ///< (z0, 0, ..., 0)
  double radius = 0.0;         ///< delta * sqrt(mn)
  double period_side = 0.0;
  std::vector<double> origin;  ///< lower corner of the periodization cube
  std::size_t grid_points = 0;
  std::vector<FourierMode> modes;  ///< by decreasing |a_k|, ties by index order
  double sum_abs = 0.0;            ///< sum of |a_k| over kept modes
  double tail_estimate = 0.0;      ///< sum of |a_k| over discarded DFT modes
  double reconstruction_error = 0.0;
  std::size_t probe_count = 0;
  ExpansionOptions options;

  std::size_t dimension() const noexcept { return m * n; }
  std::size_t truncation() const noexcept { return modes.size(); }
  double frequency_scale() const;
  /// v_k in R^{mn}.
  std::vector<double> frequency(std::size_t k) const;
  /// Slot block v_k^s in R^n, s = 0..m-1.
  std::vector<double> frequency_block(std::size_t k, std::size_t s) const;

  Complex evaluate(std::span<const double> y) const { return evaluate_scaled(y, 1.0); }
  /// sum_k a_k exp(i t v_k . y).
  Complex evaluate_scaled(std::span<const double> y, double t) const;
  bool in_ball(std::span<const double> y, double slack = 0.0) const;
};

/// Full DFT spectrum of the smooth extension; truncations reuse it.
class ReciprocalSpectrum {
 public:
  /// `kernel` is evaluated on the closed extended ball only and must not vanish
  /// there (KernelVanishesError with a witness otherwise).
  static ReciprocalSpectrum compute(const KernelFunction& kernel, std::size_t m, std::size_t n,
                                    std::vector<double> z0, double delta,
                                    const ExpansionOptions& options = {});

  /// Keep the N largest modes; measures the reconstruction error, never throws on it.
  FourierExpansion truncate(std::size_t N) const;
  std::size_t mode_count() const noexcept { return all_.modes.size(); }

 private:
  FourierExpansion all_;
  KernelFunction kernel_;
  std::vector<double> probes_;
};

/// 1/K expanded on B((z0,0,...,0), delta sqrt(mn)). Requires |z0| > m sqrt(n)
/// (by at least 1e-6) and 0 < delta < 1. Throws ToleranceUnreachableError if the
/// reconstruction error with N modes exceeds `tolerance`.
FourierExpansion expand_reciprocal(const HomogeneousKernel& k, std::vector<double> z0,
                                   double delta, std::size_t N, double tolerance,
                                   const ExpansionOptions& options = {});

/// Generic variant without the homogeneity-specific preconditions (test stubs).
FourierExpansion expand_reciprocal(const KernelFunction& k, std::size_t m, std::size_t n,
                                   std::vector<double> z0, double delta, std::size_t N,
                                   double tolerance, const ExpansionOptions& options = {});

/// Smallest N in the doubling ladder start, 2 start, ... <= max_modes meeting
/// the tolerance; ToleranceUnreachableError reports the best error otherwise.
FourierExpansion expand_reciprocal_adaptive(const HomogeneousKernel& k, std::vector<double> z0,
                                            double delta, double tolerance,
                                            std::size_t max_modes, std::size_t start = 16,
                                            const ExpansionOptions& options = {});

/// z0 = (scale * m * sqrt(n), 0, ..., 0) in R^n; the default scale gives 2 m sqrt(n).
std::vector<double> default_z0(std::size_t m, std::size_t n, double scale = 2.0);

/// |1/K(y) - delta^{-mn} sum_k a_k exp(i delta v_k . y)| for y in the scaled ball
/// |y - (z0/delta, 0, ..., 0)| < sqrt(mn) (DomainError otherwise).
double scaling_identity_residual(const HomogeneousKernel& k, const FourierExpansion& e,
                                 std::span<const double> y);
/// Same with an arbitrary reciprocal in place of 1/K.
double scaling_identity_residual(const std::function<Complex(std::span<const double>)>& reciprocal,
                                 const FourierExpansion& e, std::span<const double> y);

nlohmann::json to_json(const FourierExpansion& e);
FourierExpansion expansion_from_json(const nlohmann::json& j);

}  // namespace bmo
