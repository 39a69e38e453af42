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

#include "bmolab/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "bmolab/error.hpp"
#include "bmolab/random.hpp"

namespace bmo {

namespace {

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double ipow(double x, std::size_t e) {
  double r = 1.0;
  while (e) {
    if (e & 1U) r *= x;
    x *= x;
    e >>= 1;
  }
  return r;
}

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

HomogeneousKernel::HomogeneousKernel(std::size_t m, std::size_t n, std::size_t omega_component,
                                     double scale)
    : m_(m), n_(n), component_(omega_component), scale_(scale) {
  if (m == 0 || n == 0 || n > 3) throw DomainError("kernel needs m >= 1 and 1 <= n <= 3");
  if (omega_component >= m * n) throw DomainError("omega component out of range");
  if (!std::isfinite(scale)) throw DomainError("kernel scale must be finite");
}

HomogeneousKernel HomogeneousKernel::scaled(double factor) const {
  return HomogeneousKernel(m_, n_, component_, scale_ * factor);
}

double HomogeneousKernel::omega(std::span<const double> unit) const {
  if (unit.size() != m_ * n_) throw DomainError("sphere point has the wrong dimension");
  return scale_ * unit[component_];
}

double HomogeneousKernel::operator()(std::span<const double> u) const {
  if (u.size() != m_ * n_) throw DomainError("kernel argument has the wrong dimension");
  const double r = norm2(u);
  if (r == 0.0) throw SingularityError("kernel evaluated at the origin");
  return scale_ * u[component_] / ipow(r, m_ * n_ + 1);
}

double HomogeneousKernel::at_configuration(std::span<const double> ys) const {
  if (ys.size() != (m_ + 1) * n_) throw DomainError("configuration needs m+1 points of R^n");
  std::vector<double> u(m_ * n_);
  for (std::size_t i = 0; i < m_; ++i)
    for (std::size_t a = 0; a < n_; ++a) u[i * n_ + a] = ys[a] - ys[(i + 1) * n_ + a];
  return (*this)(u);
}

void KernelBounds::validate() const {
  if (!(A > 0.0)) throw DomainError("kernel bound A must be positive");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw DomainError("kernel epsilon must lie in (0, 1]");
}

double pair_distance_sum(std::span<const double> ys, std::size_t n) {
  const std::size_t pts = ys.size() / n;
  double s = 0.0;
  for (std::size_t k = 0; k < pts; ++k)
    for (std::size_t l = 0; l < pts; ++l)
      if (k != l) s += distance(ys.subspan(k * n, n), ys.subspan(l * n, n));
  return s;
}

double size_condition_value(const HomogeneousKernel& k, std::span<const double> ys) {
  const std::size_t n = k.dimension();
  if (ys.size() != (k.arity() + 1) * n) throw DomainError("configuration needs m+1 points of R^n");
  const double s = pair_distance_sum(ys, n);
  if (s == 0.0) throw SingularityError("size-condition sample lies on the diagonal");
  return std::abs(k.at_configuration(ys)) * ipow(s, k.total_dimension());
}

double size_condition_fit(const HomogeneousKernel& k,
                          std::span<const std::vector<double>> configurations) {
  double best = 0.0;
  for (const auto& ys : configurations) best = std::max(best, size_condition_value(k, ys));
  return best;
}

double size_condition_fit(const HomogeneousKernel& k, std::size_t sample_count,
                          std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t len = (k.arity() + 1) * k.dimension();
  std::vector<double> ys(len);
  double best = 0.0;
  for (std::size_t s = 0; s < sample_count; ++s) {
    for (auto& v : ys) v = rng.uniform(-1.0, 1.0);
    best = std::max(best, size_condition_value(k, ys));
  }
  return best;
}

double smoothness_condition_value(const HomogeneousKernel& k, std::span<const double> ys,
                                  std::size_t j, std::span<const double> yj_prime,
                                  double epsilon) {
  const std::size_t n = k.dimension(), m = k.arity();
  if (ys.size() != (m + 1) * n) throw DomainError("configuration needs m+1 points of R^n");
  if (j > m) throw DomainError("perturbed index must lie in 0..m");
  if (yj_prime.size() != n) throw DomainError("perturbed point has the wrong dimension");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw DomainError("epsilon must lie in (0, 1]");
  const auto yj = ys.subspan(j * n, n);
  const double step = distance(yj, yj_prime);
  double reach = 0.0;
  for (std::size_t l = 0; l <= m; ++l) reach = std::max(reach, distance(yj, ys.subspan(l * n, n)));
  if (step > 0.5 * reach) throw DomainError("perturbation violates the half-max constraint");
  if (step == 0.0) return 0.0;
  std::vector<double> moved(ys.begin(), ys.end());
  std::copy(yj_prime.begin(), yj_prime.end(), moved.begin() + static_cast<long>(j * n));
  const double s = pair_distance_sum(ys, n);
  const double diff = std::abs(k.at_configuration(ys) - k.at_configuration(moved));
  return diff * std::pow(s, static_cast<double>(k.total_dimension()) + epsilon) /
         std::pow(step, epsilon);
}

double smoothness_condition_fit(const HomogeneousKernel& k, double epsilon,
                                std::size_t sample_count, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n = k.dimension(), m = k.arity();
  std::vector<double> ys((m + 1) * n), prime(n), dir(n);
  double best = 0.0;
  for (std::size_t s = 0; s < sample_count; ++s) {
    for (auto& v : ys) v = rng.uniform(-1.0, 1.0);
    const std::size_t j = rng.below(m + 1);
    const auto yj = std::span<const double>(ys).subspan(j * n, n);
    double reach = 0.0;
    for (std::size_t l = 0; l <= m; ++l)
      reach = std::max(reach, distance(yj, std::span<const double>(ys).subspan(l * n, n)));
    double len;
    do {
      for (auto& v : dir) v = rng.normal();
      len = norm2(dir);
    } while (len == 0.0);
    // Stay strictly inside the admissible radius to keep rounding from tripping the check.
    const double t = 0.5 * reach * rng.open_uniform() * (1.0 - 1e-12);
    for (std::size_t a = 0; a < n; ++a) prime[a] = yj[a] + t * dir[a] / len;
    best = std::max(best, smoothness_condition_value(k, ys, j, prime, epsilon));
  }
  return best;
}

double homogeneity_residual(const HomogeneousKernel& k, std::span<const double> u,
                            double lambda) {
  if (!(lambda > 0.0)) throw DomainError("homogeneity check needs lambda > 0");
  std::vector<double> v(u.begin(), u.end());
  for (auto& x : v) x *= lambda;
  const double expected = std::pow(lambda, k.degree()) * k(u);
  const double diff = std::abs(k(v) - expected);
  return expected != 0.0 ? diff / std::abs(expected) : diff;
}

double sphere_average(const std::function<double(std::span<const double>)>& g, std::size_t d,
                      std::size_t points_per_angle) {
  if (d == 0) throw DomainError("sphere dimension must be >= 1");
  if (points_per_angle < 2) throw DomainError("sphere quadrature needs >= 2 points per angle");
  if (d == 1) {
    const double plus[1] = {1.0}, minus[1] = {-1.0};
    return 0.5 * (g(plus) + g(minus));
  }
  const std::size_t polar = d - 2;  // angles on [0, pi]
  const std::size_t p = points_per_angle, q = 2 * points_per_angle;
  std::vector<std::size_t> idx(d - 1, 0);
  std::vector<double> x(d), ang(d - 1);
  double sum = 0.0, wsum = 0.0;
  while (true) {
    double w = 1.0;
    for (std::size_t a = 0; a < polar; ++a) {
      ang[a] = (static_cast<double>(idx[a]) + 0.5) * M_PI / static_cast<double>(p);
      w *= ipow(std::sin(ang[a]), d - 2 - a);
    }
    ang[polar] = (static_cast<double>(idx[polar]) + 0.5) * 2.0 * M_PI / static_cast<double>(q);
    double prod = 1.0;
    for (std::size_t a = 0; a < d - 1; ++a) {
      x[a] = prod * std::cos(ang[a]);
      prod *= std::sin(ang[a]);
    }
    x[d - 1] = prod;
    sum += w * g(x);
    wsum += w;
    std::size_t a = 0;
    for (; a < d - 1; ++a) {
      const std::size_t lim = a < polar ? p : q;
      if (++idx[a] < lim) break;
      idx[a] = 0;
    }
    if (a == d - 1) break;
  }
  return sum / wsum;
}

double spherical_mean(const HomogeneousKernel& k, std::size_t points_per_angle) {
  return sphere_average([&](std::span<const double> t) { return k.omega(t); },
                        k.total_dimension(), points_per_angle);
}

}  // namespace bmo
