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

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bmolab/geometry.hpp"

namespace bmo {

using Complex = std::complex<double>;

/// Pointwise-evaluable function on R^n described by a closed form.
///
/// Fields are immutable values backed by a shared expression node, so copies
/// are cheap. Besides the primitive descriptors (constant, coordinate, abs,
/// log_abs, sign, indicator, sin, modulated_indicator, random_piecewise) a
/// few composites are provided: products, affine combinations, dilation and
/// the threshold sign weight sgn(t - b(x)) restricted to a cube.
///
/// sign(0) evaluates to +1 everywhere in this library.
class ScalarField {
 public:
  static ScalarField constant(Complex value, std::size_t dimension);
  static ScalarField coordinate(std::size_t dimension, std::size_t axis, double scale = 1.0);
  /// Euclidean norm |x|.
  static ScalarField abs(std::size_t dimension);
  /// log|x|; singular at the origin.
  static ScalarField log_abs(std::size_t dimension);
  static ScalarField sign(std::size_t dimension, std::size_t axis = 0);
  static ScalarField indicator(Cube cube);
  /// sin(omega . x).
  static ScalarField sine(std::vector<double> omega);
  /// exp(i frequency . x) * weight(x) * chi_cube(x); weight defaults to 1.
  static ScalarField modulated_indicator(std::vector<double> frequency, Cube cube,
                                         std::optional<ScalarField> weight = std::nullopt);
  /// Piecewise constant on the lattice of cells of width `cell`; the value on
  /// each cell is one of `levels` equally spaced points in [-1, 1], chosen by
  /// hashing (seed, cell index).
  static ScalarField random_piecewise(std::size_t dimension, std::uint64_t seed, int levels,
                                      double cell = 0.25);
  /// sgn(threshold - base(x)) on `support`, 0 outside; values in {-1, +1} on the cube.
  static ScalarField threshold_sign(ScalarField base, double threshold, Cube support);

  /// x -> f(x / lambda).
  ScalarField dilated(double lambda) const;
  ScalarField scaled(Complex factor) const;
  ScalarField operator*(const ScalarField& other) const;
  ScalarField operator+(const ScalarField& other) const;
  ScalarField operator-(const ScalarField& other) const;
  ScalarField operator+(Complex c) const;

  Complex operator()(std::span<const double> x) const;
  /// Real part; for real fields this is the value.
  double real(std::span<const double> x) const { return (*this)(x).real(); }

  std::size_t dimension() const noexcept;
  bool is_real() const noexcept;
  /// Bounding box of the support; nullopt means unbounded.
  std::optional<Box> support() const;
  /// True iff x lies exactly on the singular set (e.g. the origin for log_abs).
  bool singular_at(std::span<const double> x) const;
  /// True iff the field has any singular points at all.
  bool has_singular_set() const noexcept;

  /// Stable human-readable descriptor, e.g. "sign(axis=0)".
  std::string describe() const;
  /// Structural equality of descriptors.
  bool same_descriptor(const ScalarField& other) const { return describe() == other.describe(); }

  struct Node;

 private:
  explicit ScalarField(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

}  // namespace bmo
