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

#include "bmolab/fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "bmolab/error.hpp"

namespace bmo {

namespace {

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Polynomial smoothstep of class C^s: 0 for t <= 0, 1 for t >= 1.
double smoothstep(double t, int s) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  double sum = 0.0;
  for (int k = 0; k <= s; ++k) sum += binomial(s + k, k) * binomial(2 * s + 1, s - k) * std::pow(-t, k);
  return std::pow(t, s + 1) * sum;
}

std::size_t default_grid(std::size_t d) {
  switch (d) {
    case 1: return 4096;
    case 2: return 256;
    case 3: return 48;
    default: return 24;
  }
}

std::size_t default_probes(std::size_t d) {
  switch (d) {
    case 1: return 65;
    case 2: return 33;
    case 3: return 13;
    default: return 9;
  }
}

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

// Locate a zero (or singular point) of k on the segment from `a` (where the
// sign is s0) to `b` (where it is not) by bisection.
std::vector<double> bisect_witness(const KernelFunction& k, std::vector<double> a,
                                   std::vector<double> b, int s0) {
  std::vector<double> mid(a.size());
  for (int it = 0; it < 80; ++it) {
    for (std::size_t i = 0; i < a.size(); ++i) mid[i] = 0.5 * (a[i] + b[i]);
    int s = 0;
    try {
      s = sign_of(k(mid));
    } catch (const SingularityError&) {
      return mid;
    }
    if (s == 0) return mid;
    (s == s0 ? a : b) = mid;
  }
  return b;
}

void check_dimensions(std::size_t m, std::size_t n, const std::vector<double>& z0, double delta) {
  if (m == 0 || n == 0) throw DomainError("expansion needs m, n >= 1");
  if (m * n > 4) throw DomainError("expansion is limited to mn <= 4");
  if (z0.size() != n) throw DomainError("z0 must lie in R^n");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("delta must be positive");
}

void check_homogeneous(const HomogeneousKernel& k, const std::vector<double>& z0, double delta) {
  check_dimensions(k.arity(), k.dimension(), z0, delta);
  if (!(delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
  const double gap = norm2(z0) - static_cast<double>(k.arity()) * std::sqrt(double(k.dimension()));
  if (gap < 1e-6) throw DomainError("|z0| must exceed m sqrt(n) by at least 1e-6");
}

KernelFunction as_function(const HomogeneousKernel& k) {
  return [k](std::span<const double> u) { return k(u); };
}

}  // namespace

void ExpansionOptions::validate() const {
  if (!(margin > 0.0) || !std::isfinite(margin)) throw DomainError("margin must be positive");
  if (smoothstep_order < 0 || smoothstep_order > 8)
    throw DomainError("smoothstep order must lie in 0..8");
  if (!(transition_fraction > 0.0 && transition_fraction <= 1.0))
    throw DomainError("transition fraction must lie in (0, 1]");
  if (grid_points != 0 && (grid_points < 8 || grid_points % 2 != 0))
    throw DomainError("grid points must be even and at least 8");
  if (probes_per_axis == 1) throw DomainError("probe lattice needs at least 2 points per axis");
}

double FourierExpansion::frequency_scale() const {
  return 2.0 * std::numbers::pi / period_side;
}

std::vector<double> FourierExpansion::frequency(std::size_t k) const {
  const auto& idx = modes.at(k).index;
  const double s = frequency_scale();
  std::vector<double> v(idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a) v[a] = s * idx[a];
  return v;
}

std::vector<double> FourierExpansion::frequency_block(std::size_t k, std::size_t s) const {
  if (s >= m) throw DomainError("slot index out of range");
  const auto v = frequency(k);
  return {v.begin() + static_cast<long>(s * n), v.begin() + static_cast<long>((s + 1) * n)};
}

Complex FourierExpansion::evaluate_scaled(std::span<const double> y, double t) const {
  if (y.size() != dimension()) throw DomainError("expansion argument has the wrong dimension");
  const double s = frequency_scale() * t;
  Complex sum = 0.0;
  for (const auto& mode : modes) {
    double phase = 0.0;
    for (std::size_t a = 0; a < y.size(); ++a) phase += mode.index[a] * y[a];
    sum += mode.coefficient * std::polar(1.0, s * phase);
  }
  return sum;
}

bool FourierExpansion::in_ball(std::span<const double> y, double slack) const {
  return y.size() == center.size() && distance(y, center) <= radius + slack;
}

ReciprocalSpectrum ReciprocalSpectrum::compute(const KernelFunction& kernel, std::size_t m,
                                               std::size_t n, std::vector<double> z0,
                                               double delta, const ExpansionOptions& options) {
  check_dimensions(m, n, z0, delta);
  options.validate();
  const std::size_t d = m * n;
  const std::size_t M = options.grid_points ? options.grid_points : default_grid(d);
  if (std::pow(double(M), double(d)) > std::pow(64.0, 4.0))
    throw DomainError("DFT grid exceeds 64^4 points");

  ReciprocalSpectrum out;
  FourierExpansion& e = out.all_;
  e.m = m;
  e.n = n;
  e.z0 = z0;
  e.delta = delta;
  e.center.assign(d, 0.0);
  for (std::size_t a = 0; a < n; ++a) e.center[a] = z0[a];
  e.radius = delta * std::sqrt(double(d));
  e.period_side = 2.0 * e.radius * (1.0 + options.margin);
  e.origin.resize(d);
  for (std::size_t a = 0; a < d; ++a) e.origin[a] = e.center[a] - 0.5 * e.period_side;
  e.grid_points = M;
  e.options = options;
  out.kernel_ = kernel;

  const double width = options.transition_fraction * options.margin * e.radius;
  const double outer = e.radius + width;

  double k_center = 0.0;
  try {
    k_center = kernel(e.center);
  } catch (const SingularityError&) {
    throw KernelVanishesError(e.center);
  }
  const int s0 = sign_of(k_center);
  if (s0 == 0 || !std::isfinite(k_center)) throw KernelVanishesError(e.center);
  const double r_center = 1.0 / k_center;

  auto checked = [&](const std::vector<double>& y) {
    double v = 0.0;
    try {
      v = kernel(y);
    } catch (const SingularityError&) {
      throw KernelVanishesError(y);
    }
    if (sign_of(v) != s0 || !std::isfinite(v))
      throw KernelVanishesError(bisect_witness(kernel, e.center, y, s0));
    return v;
  };

  // Probe lattice on the closed ball; also the nonvanishing check.
  const std::size_t P = options.probes_per_axis ? options.probes_per_axis : default_probes(d);
  std::vector<double> y(d);
  std::vector<std::size_t> j(d, 0);
  for (bool done = false; !done;) {
    for (std::size_t a = 0; a < d; ++a)
      y[a] = e.center[a] - e.radius + 2.0 * e.radius * double(j[a]) / double(P - 1);
    if (distance(y, e.center) <= e.radius * (1.0 + 1e-12)) {
      checked(y);
      out.probes_.insert(out.probes_.end(), y.begin(), y.end());
    }
    std::size_t a = d;
    while (a > 0 && ++j[a - 1] == P) j[--a] = 0;
    done = a == 0;
  }

  // Smooth extension on the periodization grid: 1/K blended into its central
  // value over the ramp radius..radius+width, constant beyond.
  std::size_t total = 1;
  for (std::size_t a = 0; a < d; ++a) total *= M;
  auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total));
  if (!buf) throw Error("out of memory for DFT grid");
  const double h = e.period_side / double(M);
  std::fill(j.begin(), j.end(), 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    for (std::size_t a = 0; a < d; ++a) y[a] = e.origin[a] + h * double(j[a]);
    const double r = distance(y, e.center);
    double g = r_center;
    if (r < outer) {
      double kv = 0.0;
      try {
        kv = checked(y);
      } catch (...) {
        fftw_free(buf);
        throw;
      }
      const double t = (r - e.radius) / width;
      g = r_center + (1.0 - smoothstep(t, options.smoothstep_order)) * (1.0 / kv - r_center);
    }
    buf[flat][0] = g;
    buf[flat][1] = 0.0;
    std::size_t a = d;
    while (a > 0 && ++j[a - 1] == M) j[--a] = 0;
  }

  std::vector<int> dims(d, static_cast<int>(M));
  fftw_plan plan = fftw_plan_dft(static_cast<int>(d), dims.data(), buf, buf, FFTW_FORWARD,
                                 FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);

  const double scale = e.frequency_scale();
  e.modes.reserve(total);
  std::fill(j.begin(), j.end(), 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    FourierMode mode;
    mode.index.resize(d);
    double phase = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
      const int k = j[a] < M / 2 ? static_cast<int>(j[a]) : static_cast<int>(j[a]) - int(M);
      mode.index[a] = k;
      phase += scale * k * e.origin[a];
    }
    const Complex ghat = Complex(buf[flat][0], buf[flat][1]) / double(total);
    mode.coefficient = ghat * std::polar(1.0, -phase);
    e.modes.push_back(std::move(mode));
    std::size_t a = d;
    while (a > 0 && ++j[a - 1] == M) j[--a] = 0;
  }
  fftw_free(buf);

  std::sort(e.modes.begin(), e.modes.end(), [](const FourierMode& x, const FourierMode& y) {
    const double ax = std::abs(x.coefficient), ay = std::abs(y.coefficient);
    if (ax != ay) return ax > ay;
    return x.index < y.index;
  });
  e.sum_abs = 0.0;
  for (const auto& mode : e.modes) e.sum_abs += std::abs(mode.coefficient);
  e.probe_count = out.probes_.size() / d;
  return out;
}

FourierExpansion ReciprocalSpectrum::truncate(std::size_t N) const {
  if (N == 0) throw DomainError("truncation must keep at least one mode");
  FourierExpansion e = all_;
  N = std::min(N, all_.modes.size());
  e.modes.assign(all_.modes.begin(), all_.modes.begin() + static_cast<long>(N));
  e.sum_abs = 0.0;
  for (const auto& mode : e.modes) e.sum_abs += std::abs(mode.coefficient);
  e.tail_estimate = 0.0;
  for (std::size_t k = N; k < all_.modes.size(); ++k)
    e.tail_estimate += std::abs(all_.modes[k].coefficient);
  const std::size_t d = e.dimension();
  double err = 0.0;
  for (std::size_t p = 0; p < e.probe_count; ++p) {
    std::span<const double> y(probes_.data() + p * d, d);
    err = std::max(err, std::abs(1.0 / kernel_(y) - e.evaluate(y)));
  }
  e.reconstruction_error = err;
  return e;
}

FourierExpansion expand_reciprocal(const KernelFunction& k, std::size_t m, std::size_t n,
                                   std::vector<double> z0, double delta, std::size_t N,
                                   double tolerance, const ExpansionOptions& options) {
  if (!(tolerance > 0.0)) throw DomainError("tolerance must be positive");
  auto e = ReciprocalSpectrum::compute(k, m, n, std::move(z0), delta, options).truncate(N);
  if (e.reconstruction_error > tolerance)
    throw ToleranceUnreachableError(e.reconstruction_error, tolerance, e.truncation());
  return e;
}

FourierExpansion expand_reciprocal(const HomogeneousKernel& k, std::vector<double> z0,
                                   double delta, std::size_t N, double tolerance,
                                   const ExpansionOptions& options) {
  check_homogeneous(k, z0, delta);
  return expand_reciprocal(as_function(k), k.arity(), k.dimension(), std::move(z0), delta, N,
                           tolerance, options);
}

FourierExpansion expand_reciprocal_adaptive(const HomogeneousKernel& k, std::vector<double> z0,
                                            double delta, double tolerance,
                                            std::size_t max_modes, std::size_t start,
                                            const ExpansionOptions& options) {
  check_homogeneous(k, z0, delta);
  if (!(tolerance > 0.0)) throw DomainError("tolerance must be positive");
  if (start == 0 || max_modes < start) throw DomainError("bad truncation ladder");
  const auto spectrum =
      ReciprocalSpectrum::compute(as_function(k), k.arity(), k.dimension(), std::move(z0), delta,
                                  options);
  FourierExpansion best;
  for (std::size_t N = start; N <= max_modes; N *= 2) {
    best = spectrum.truncate(N);
    if (best.reconstruction_error <= tolerance) return best;
    if (N >= spectrum.mode_count()) break;
  }
  throw ToleranceUnreachableError(best.reconstruction_error, tolerance, best.truncation());
}

std::vector<double> default_z0(std::size_t m, std::size_t n, double scale) {
  std::vector<double> z(n, 0.0);
  z[0] = scale * double(m) * std::sqrt(double(n));
  return z;
}

double scaling_identity_residual(const std::function<Complex(std::span<const double>)>& reciprocal,
                                 const FourierExpansion& e, std::span<const double> y) {
  if (y.size() != e.dimension()) throw DomainError("probe has the wrong dimension");
  double s = 0.0;
  for (std::size_t a = 0; a < y.size(); ++a) {
    const double c = e.center[a] / e.delta;
    s += (y[a] - c) * (y[a] - c);
  }
  if (!(std::sqrt(s) < std::sqrt(double(e.dimension()))))
    throw DomainError("probe lies outside the scaled ball");
  const double factor = std::pow(e.delta, -double(e.dimension()));
  return std::abs(reciprocal(y) - factor * e.evaluate_scaled(y, e.delta));
}

double scaling_identity_residual(const HomogeneousKernel& k, const FourierExpansion& e,
                                 std::span<const double> y) {
  if (k.total_dimension() != e.dimension()) throw DomainError("kernel and expansion disagree");
  return scaling_identity_residual(
      [&k](std::span<const double> u) { return Complex(1.0 / k(u)); }, e, y);
}

nlohmann::json to_json(const FourierExpansion& e) {
  nlohmann::json modes = nlohmann::json::array(), coeffs = nlohmann::json::array();
  for (const auto& mode : e.modes) {
    modes.push_back(mode.index);
    coeffs.push_back({mode.coefficient.real(), mode.coefficient.imag()});
  }
  return {{"m", e.m},
          {"n", e.n},
          {"z0", e.z0},
          {"delta", e.delta},
          {"center", e.center},
          {"radius", e.radius},
          {"period_side", e.period_side},
          {"origin", e.origin},
          {"grid_points", e.grid_points},
          {"frequency_scale", e.frequency_scale()},
          {"truncation", e.truncation()},
          {"modes", modes},
          {"coefficients", coeffs},
          {"sum_abs", e.sum_abs},
          {"tail_estimate", e.tail_estimate},
          {"reconstruction_error", e.reconstruction_error},
          {"probe_count", e.probe_count},
          {"options",
           {{"margin", e.options.margin},
            {"smoothstep_order", e.options.smoothstep_order},
            {"transition_fraction", e.options.transition_fraction},
            {"grid_points", e.options.grid_points},
            {"probes_per_axis", e.options.probes_per_axis}}}};
}

FourierExpansion expansion_from_json(const nlohmann::json& j) {
  try {
    FourierExpansion e;
    e.m = j.at("m").get<std::size_t>();
    e.n = j.at("n").get<std::size_t>();
    e.z0 = j.at("z0").get<std::vector<double>>();
    e.delta = j.at("delta").get<double>();
    e.center = j.at("center").get<std::vector<double>>();
    e.radius = j.at("radius").get<double>();
    e.period_side = j.at("period_side").get<double>();
    e.origin = j.at("origin").get<std::vector<double>>();
    e.grid_points = j.at("grid_points").get<std::size_t>();
    const auto& modes = j.at("modes");
    const auto& coeffs = j.at("coefficients");
    if (modes.size() != coeffs.size()) throw DomainError("mode and coefficient counts differ");
    for (std::size_t k = 0; k < modes.size(); ++k) {
      FourierMode mode;
      mode.index = modes[k].get<std::vector<int>>();
      if (mode.index.size() != e.m * e.n) throw DomainError("mode vector has the wrong length");
      mode.coefficient = Complex(coeffs[k].at(0).get<double>(), coeffs[k].at(1).get<double>());
      e.modes.push_back(std::move(mode));
    }
    e.sum_abs = j.at("sum_abs").get<double>();
    e.tail_estimate = j.at("tail_estimate").get<double>();
    e.reconstruction_error = j.at("reconstruction_error").get<double>();
    e.probe_count = j.value("probe_count", std::size_t{0});
    if (j.contains("options")) {
      const auto& o = j["options"];
      e.options.margin = o.value("margin", e.options.margin);
      e.options.smoothstep_order = o.value("smoothstep_order", e.options.smoothstep_order);
      e.options.transition_fraction = o.value("transition_fraction", e.options.transition_fraction);
      e.options.grid_points = o.value("grid_points", e.options.grid_points);
      e.options.probes_per_axis = o.value("probes_per_axis", e.options.probes_per_axis);
    }
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw DomainError(std::string("malformed expansion JSON: ") + ex.what());
  }
}

}  // namespace bmo
