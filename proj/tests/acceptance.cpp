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
// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "bmolab/config.hpp"
#include "bmolab/error.hpp"
#include "bmolab/fourier.hpp"
#include "bmolab/kernel.hpp"
#include "bmolab/operators.hpp"
#include "bmolab/oscillation.hpp"
#include "bmolab/pipelines.hpp"
#include "bmolab/random.hpp"
#include "bmolab/report.hpp"
#include "bmolab/theorem.hpp"

namespace {

using namespace bmo;

struct Outcome {
  bool ok = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Outcome sign_inequality_suite() {
  double worst = 0.0;  // max of lhs - rhs
  for (std::size_t m = 1; m <= 6; ++m) {
    Rng rng(2024, m);
    for (int t = 0; t < 10000; ++t) {
      std::vector<double> a(m);
      for (auto& v : a) v = rng.normal() * std::exp(rng.uniform(-5.0, 5.0));
      auto r = sign_inequality_check(a, 1e-12);
      if (!r.holds) return {false, fmt("violation at m=%.0f, lhs-rhs=%.3g", double(m), r.lhs - r.rhs)};
      worst = std::max(worst, (r.lhs - r.rhs) / std::max(r.rhs, 1e-300));
    }
  }
  return {true, fmt("6 x 10000 vectors, max (lhs-rhs)/rhs = %.3g", worst)};
}

Outcome telescoping_suite() {
  double worst = 0.0;
  for (std::size_t m = 1; m <= 5; ++m) {
    Rng rng(77, m);
    for (int t = 0; t < 10000; ++t) {
      std::vector<Complex> v(m);
      double mag = 0.0;
      for (auto& x : v) {
        x = rng.normal() * std::exp(rng.uniform(-10.0, 10.0));
        mag = std::max(mag, std::abs(x));
      }
      const double res = telescoping_residual(v);
      if (mag > 0.0) worst = std::max(worst, res / mag);
      if (res > 1e-12 * mag) return {false, fmt("m=%.0f residual/magnitude %.3g", double(m), res / mag)};
    }
  }
  return {true, fmt("5 x 10000 trials, max residual/magnitude = %.3g", worst)};
}

Outcome lemma_battery() {
  std::vector<ScalarField> battery{ScalarField::constant(1.5, 1),
                                   ScalarField::sign(1),
                                   ScalarField::sine({3.0}),
                                   ScalarField::log_abs(1),
                                   ScalarField::random_piecewise(1, 11, 5, 0.25),
                                   ScalarField::random_piecewise(1, 12, 3, 0.5)};
  CubeFamily fam(Cube({0.0}, 4.0), 0, 4, true);
  const auto rule = QuadratureRule::tensor(24);
  std::size_t checks = 0, failures = 0;
  double min_margin = INFINITY;
  for (std::size_t m : {1u, 2u}) {
    for (const auto& f : battery) {
      FunctionTuple b(std::vector<ScalarField>(m, f));
      auto rep = lemma_equivalence_suite(b, fam, rule, ChainTolerance{1e-3, 3.0});
      failures += rep.cube_errors;
      for (const auto& c : rep.cubes)
        for (const auto& ch : c.chain) {
          ++checks;
          if (!ch.holds) ++failures;
          min_margin = std::min(min_margin, ch.margin());
        }
    }
  }
  return {failures == 0, fmt("%.0f chain checks over 2 x 6 tuples, %.0f failures, min margin %.3g",
                             double(checks), double(failures), min_margin)};
}

std::vector<double> hilbert_probes() {
  std::vector<double> xs;
  for (int i = 0; i < 10; ++i) xs.push_back(-3.0 + 2.5 * i / 9.0);  // [-3, -0.5]
  for (int i = 0; i < 10; ++i) xs.push_back(1.5 + 2.5 * i / 9.0);   // [1.5, 4]
  return xs;
}

Outcome hilbert_oracle() {
  OperatorEvaluation e;
  e.inputs = {ScalarField::indicator(Cube({0.5}, 1.0))};
  for (double x : hilbert_probes()) e.points.push_back({x});
  std::vector<double> prev;
  double final_worst = 0.0;
  bool monotone = true;
  for (std::size_t cells : {256u, 1024u, 4096u}) {
    e.rule = QuadratureRule::tensor(cells);
    auto v = apply_T(e);
    std::vector<double> err;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double x = e.points[i][0];
      const double exact = std::log(std::abs(x / (x - 1.0)));
      err.push_back(std::abs(v[i] - exact) / std::abs(exact));
    }
    if (!prev.empty())
      for (std::size_t i = 0; i < err.size(); ++i) monotone = monotone && err[i] <= prev[i] * (1 + 1e-9) + 1e-15;
    prev = err;
    final_worst = *std::max_element(err.begin(), err.end());
  }
  return {monotone && final_worst <= 1e-3,
          fmt("20 probes, max relative error %.3g at 4096 cells, ", final_worst) +
              (monotone ? "nonincreasing under refinement" : "NOT monotone")};
}

Outcome commutator_closed_form() {
  OperatorEvaluation e;
  e.inputs = {ScalarField::indicator(Cube({0.5}, 1.0))};
  e.rule = QuadratureRule::tensor(4096);
  const auto b = ScalarField::coordinate(1, 0);
  double worst = 0.0;
  std::vector<double> probes = hilbert_probes();
  for (int i = 0; i < 10; ++i) probes.push_back(0.05 + 0.1 * i);  // inside the support
  for (double x0 : probes) {
    std::vector<double> x{x0};
    worst = std::max(worst, std::abs(commutator_single(b, 0, e, x).value() - 1.0));
  }
  return {worst <= 1e-3, fmt("%.0f probes, max |[x,H]chi - 1| = %.3g", double(probes.size()), worst)};
}

Outcome fourier_expansion() {
  const auto k = HomogeneousKernel::hilbert();
  const double tol = 1e-6, delta = 0.5;
  FourierExpansion e;
  try {
    e = expand_reciprocal_adaptive(k, {2.0}, delta, tol, 512);
  } catch (const ToleranceUnreachableError& err) {
    return {false, fmt("tolerance unreachable, best %.3g", err.achieved())};
  }
  Rng rng(31);
  double worst = 0.0;
  for (int i = 0; i < 64; ++i) {
    std::vector<double> y{2.0 / delta + 0.999 * rng.uniform(-1.0, 1.0)};
    worst = std::max(worst, scaling_identity_residual(k, e, y));
  }
  const double bound = tol / delta;
  const bool ok = e.reconstruction_error <= tol && std::isfinite(e.sum_abs) && worst <= bound;
  return {ok, fmt("N = %.0f, reconstruction %.3g, sum|a| = %.6g", double(e.truncation()), e.reconstruction_error,
                  e.sum_abs) +
                  fmt(", scaling residual %.3g <= %.3g at 64 probes", worst, bound)};
}

Outcome kernel_validators() {
  std::ostringstream detail;
  bool ok = true;
  for (std::size_t m : {1u, 2u}) {
    HomogeneousKernel k(m, 1, 0);
    Rng rng(101, m);
    double homog = 0.0;
    for (int t = 0; t < 1000; ++t) {
      std::vector<double> u(m);
      for (auto& x : u) x = rng.normal();
      homog = std::max(homog, homogeneity_residual(k, u, std::exp(rng.uniform(-3.0, 3.0))));
    }
    const double mean = std::abs(spherical_mean(k, 64));
    const double a1 = size_condition_fit(k, 2000, 7);
    const double a4 = size_condition_fit(k, 8000, 7);
    const double drift = std::abs(a4 - a1) / a1;
    ok = ok && homog <= 1e-10 && mean <= 1e-8 && drift <= 0.1;
    detail << (m == 1 ? "" : "; ") << "m=" << m << " homogeneity " << homog << ", sphere mean " << mean
           << ", size drift " << drift;
  }
  return {ok, detail.str()};
}

Outcome theorem_chain() {
  std::size_t records = 0, failed = 0;
  double worst_ratio = 0.0;
  CubeFamily fam(Cube({0.0}, 4.0), 0, 4, true, 10);
  for (std::size_t m : {1u, 2u}) {
    TheoremConfig cfg = m == 1 ? make_theorem_config(HomogeneousKernel::hilbert(), {2.0}, 0.5, 256, 1e-5)
                               : make_theorem_config(HomogeneousKernel(2, 1), {4.0}, 0.5, 256, 0.1);
    cfg.rule = QuadratureRule::tensor(m == 1 ? 64 : 24);
    cfg.output_points = m == 1 ? 16 : 12;
    cfg.tolerance = 0.05;
    for (const auto& f : {ScalarField::sign(1), ScalarField::random_piecewise(1, 11, 5, 0.25)}) {
      FunctionTuple b(std::vector<ScalarField>(m, f));
      auto rep = bmo_lower_bound_report(b, cfg, fam);
      for (const auto& r : rep.records) {
        ++records;
        const bool pass = !r.error && r.lhs <= r.rhs * 1.05 + r.tail;
        if (!pass) ++failed;
        worst_ratio = std::max(worst_ratio, r.ratio);
      }
    }
  }
  return {failed == 0 && records == 40,
          fmt("%.0f records, %.0f failed, max lhs/(1.05 rhs + tail) = %.3f", double(records), double(failed),
              worst_ratio)};
}

Outcome growth_diagnostic() {
  const auto rule = QuadratureRule::tensor(64);
  auto abs = bmo_growth_sweep(ScalarField::abs(1), Cube({0.0}, 2.0), 6, 4, false, rule);
  auto sign = bmo_growth_sweep(ScalarField::sign(1), Cube({0.0}, 2.0), 6, 4, false, rule);
  double min_abs = INFINITY, max_sign = 0.0;
  for (std::size_t L = 2; L < abs.ratios.size(); ++L) min_abs = std::min(min_abs, abs.ratios[L]);
  for (std::size_t L = 2; L < sign.ratios.size(); ++L) max_sign = std::max(max_sign, sign.ratios[L]);
  return {min_abs >= 1.5 && max_sign <= 1.05 && abs.divergent && sign.stable,
          fmt("|x| min ratio %.4f (L >= 2), sign max ratio %.4f", min_abs, max_sign)};
}

Outcome determinism() {
  const std::vector<std::pair<std::string, std::string>> runs{
      {"bmo", "bmo_growth.json"},         {"lemma", "lemma_battery_m2.json"},
      {"kernel-check", "kernel_check_m2.json"}, {"fourier", "fourier_hilbert.json"},
      {"theorem", "theorem_m1.json"}};
  for (const auto& [sub, file] : runs) {
    const auto cfg = ExperimentConfig::from_file(std::string(BMOLAB_CONFIG_DIR) + "/" + file);
    std::string first, second;
    for (std::string* s : {&first, &second}) {
      auto bundle = run_subcommand(sub, cfg);
      bundle.timing.clear();
      std::ostringstream os;
      os << bundle.to_json(false).dump(2) << '\n';
      *s = os.str();
    }
    if (first != second) return {false, sub + " on " + file + " differs between runs"};
  }
  return {true, "5 pipelines run twice, byte-identical JSON without timing"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
    double budget_seconds;  // 0: no runtime bound
  };
  const std::vector<Criterion> criteria{
      {"sign combination inequality", sign_inequality_suite, 5},
      {"telescoping identity", telescoping_suite, 5},
      {"oscillation equivalence chain", lemma_battery, 120},
      {"Hilbert transform oracle", hilbert_oracle, 10},
      {"commutator closed form", commutator_closed_form, 0},
      {"Fourier expansion of 1/K", fourier_expansion, 30},
      {"kernel validators", kernel_validators, 0},
      {"commutator lower-bound chain", theorem_chain, 600},
      {"divergence diagnostic", growth_diagnostic, 0},
      {"determinism", determinism, 0},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (criteria[i].budget_seconds > 0 && secs > criteria[i].budget_seconds) {
      o.ok = false;
      o.detail += fmt("; over the %.0f s budget", criteria[i].budget_seconds);
    }
    std::printf("%s %2zu %s: %s (%.2f s)\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.ok) ++failures;
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
