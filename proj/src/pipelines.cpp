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

#include "bmolab/pipelines.hpp"

#include <chrono>
#include <cmath>
#include <functional>

#include "bmolab/fourier.hpp"
#include "bmolab/kernel.hpp"
#include "bmolab/oscillation.hpp"
#include "bmolab/random.hpp"
#include "bmolab/theorem.hpp"

namespace bmo {

using nlohmann::json;

namespace {

class Stopwatch {
 public:
  explicit Stopwatch(ReportBundle& b) : bundle_(b) {}

  template <class F>
  auto stage(const std::string& name, F&& f) {
    const auto start = std::chrono::steady_clock::now();
    auto done = [&] {
      bundle_.timing.emplace_back(
          name, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    };
    try {
      if constexpr (std::is_void_v<decltype(f())>) {
        f();
        done();
      } else {
        auto r = f();
        done();
        return r;
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const StageError&) {
      throw;
    } catch (const Error& e) {
      throw StageError(name, e.what());
    }
  }

 private:
  ReportBundle& bundle_;
};

void run_bmo(const ExperimentConfig& cfg, ReportBundle& out, Stopwatch& sw) {
  const auto family = cfg.family();
  const auto rule = cfg.rule();
  json fs = json::array();
  for (std::size_t i = 0; i < cfg.functions.size(); ++i) {
    const auto label = cfg.functions[i].label(i);
    const auto field = cfg.functions[i].build(cfg.n);
    const auto est = sw.stage("bmo:" + label, [&] { return bmo_norm_estimate(field, family, rule); });
    for (std::size_t c = 0; c < family.size(); ++c)
      out.rows.push_back(ReportRow::cube(family[c], label + ":osc", est.per_cube[c]));
    out.rows.push_back(ReportRow::global(label + ":bmo", est.value));
    json entry = {{"label", label},
                  {"descriptor", cfg.functions[i].descriptor},
                  {"bmo_estimate", json_number(est.value)},
                  {"argmax", est.argmax}};
    if (cfg.growth.enabled) {
      const Cube base(cfg.root_center, cfg.growth.base_side);
      const auto sweep = sw.stage("growth:" + label, [&] {
        return bmo_growth_sweep(field, base, cfg.growth.max_level, cfg.growth.depth,
                                cfg.growth.translates, rule);
      });
      for (std::size_t l = 0; l < sweep.values.size(); ++l)
        out.rows.push_back(
            ReportRow::global(label + ":growth_L" + std::to_string(l), sweep.values[l]));
      const double last = sweep.ratios.empty() ? 0.0 : sweep.ratios.back();
      out.rows.push_back(ReportRow::global(label + ":growth_ratio", last, sweep.verdict));
      json ratios = json::array();
      for (double r : sweep.ratios) ratios.push_back(json_number(r));
      entry["growth"] = {{"levels", sweep.levels},
                         {"values", sweep.values},
                         {"ratios", ratios},
                         {"divergent", sweep.divergent},
                         {"stable", sweep.stable},
                         {"verdict", to_string(sweep.verdict)}};
    }
    fs.push_back(entry);
  }
  out.results["functions"] = fs;
  out.results["family_size"] = family.size();
}

void run_lemma(const ExperimentConfig& cfg, ReportBundle& out, Stopwatch& sw) {
  const auto family = cfg.family();
  const auto rule = cfg.rule();
  const auto tuples = cfg.tuples();
  const auto labels = cfg.tuple_labels();
  const ChainTolerance tol{cfg.tolerances.chain_tol, cfg.tolerances.sigmas};
  json ts = json::array();
  for (std::size_t t = 0; t < tuples.size(); ++t) {
    const auto& label = labels[t];
    const auto rep = sw.stage("lemma:" + label,
                              [&] { return lemma_equivalence_suite(tuples[t], family, rule, tol); });
    for (const auto& c : rep.cubes) {
      if (c.error) {
        out.rows.push_back(ReportRow::cube(c.member, label + ":error", 0.0, Verdict::fail));
        continue;
      }
      out.rows.push_back(ReportRow::cube(c.member, label + ":star", c.star.value));
      out.rows.push_back(ReportRow::cube(c.member, label + ":star2", c.star2.value));
      out.rows.push_back(ReportRow::cube(c.member, label + ":star3", c.star3.value));
      for (std::size_t i = 0; i < c.bmo.size(); ++i)
        out.rows.push_back(
            ReportRow::cube(c.member, label + ":osc_" + std::to_string(i), c.bmo[i].value));
      for (const auto& ch : c.chain)
        out.rows.push_back(
            ReportRow::cube(c.member, label + ":" + ch.name, ch.margin(), verdict_of(ch.holds)));
    }
    json errors = json::array();
    for (const auto& c : rep.cubes)
      if (c.error) errors.push_back({{"cube_id", c.member.id}, {"error", *c.error}});
    ts.push_back({{"label", label},
                  {"rule", to_string(rep.rule_kind)},
                  {"sup_star", rep.sup_star},
                  {"sup_star2", rep.sup_star2},
                  {"sup_star3", rep.sup_star3},
                  {"bmo_sup", rep.bmo_sup},
                  {"chain_failures", rep.chain_failures},
                  {"cube_errors", rep.cube_errors},
                  {"errors", errors},
                  {"all_pass", rep.all_pass}});
  }
  out.results["tuples"] = ts;
  out.results["family_size"] = family.size();
}

void run_kernel_check(const ExperimentConfig& cfg, ReportBundle& out, Stopwatch& sw) {
  const auto k = cfg.make_kernel();
  const auto& kc = cfg.kernel_check;
  const auto& tol = cfg.tolerances;
  const double homog = sw.stage("homogeneity", [&] {
    Rng rng(cfg.seed, 101);
    std::vector<double> u(k.total_dimension());
    double worst = 0.0;
    for (std::size_t t = 0; t < kc.homogeneity_trials; ++t) {
      for (auto& v : u) v = rng.normal();
      const double lambda = std::exp(rng.uniform(-3.0, 3.0));
      worst = std::max(worst, homogeneity_residual(k, u, lambda));
    }
    return worst;
  });
  const double mean = sw.stage("spherical_mean", [&] { return spherical_mean(k, kc.sphere_points); });
  const double a1 = sw.stage("size_fit", [&] { return size_condition_fit(k, kc.samples, cfg.seed); });
  const double a4 = sw.stage("size_fit_refined", [&] {
    return size_condition_fit(k, kc.samples * kc.stability_factor, cfg.seed);
  });
  const double smooth = sw.stage("smoothness_fit", [&] {
    return smoothness_condition_fit(k, kc.epsilon, kc.samples, cfg.seed);
  });
  const double drift = a1 > 0.0 ? std::abs(a4 / a1 - 1.0) : INFINITY;
  const KernelBounds bounds{std::max({a1, a4, smooth}), kc.epsilon};
  bounds.validate();

  out.rows.push_back(
      ReportRow::global("homogeneity_residual", homog, verdict_of(homog <= tol.machine_tol)));
  out.rows.push_back(ReportRow::global("spherical_mean", std::abs(mean),
                                       verdict_of(std::abs(mean) <= tol.sphere_tol)));
  out.rows.push_back(ReportRow::global("size_fit", a1));
  out.rows.push_back(ReportRow::global("size_fit_refined", a4));
  out.rows.push_back(
      ReportRow::global("size_fit_drift", drift, verdict_of(drift <= tol.stability_tol)));
  out.rows.push_back(
      ReportRow::global("smoothness_fit", smooth, verdict_of(std::isfinite(smooth))));
  out.results = {{"m", k.arity()},
                 {"n", k.dimension()},
                 {"omega_component", k.omega_component()},
                 {"degree", k.degree()},
                 {"homogeneity_residual", homog},
                 {"spherical_mean", mean},
                 {"size_fit", a1},
                 {"size_fit_refined", a4},
                 {"size_fit_drift", json_number(drift)},
                 {"smoothness_fit", json_number(smooth)},
                 {"bounds", {{"A", bounds.A}, {"epsilon", bounds.epsilon}}}};
}

std::vector<std::vector<double>> scaled_ball_probes(const FourierExpansion& e, std::size_t count,
                                                    std::uint64_t seed) {
  const std::size_t d = e.dimension();
  const double radius = std::sqrt(double(d));
  Rng rng(seed, 202);
  std::vector<std::vector<double>> out;
  std::vector<double> dir(d);
  while (out.size() < count) {
    double norm = 0.0;
    for (auto& v : dir) {
      v = rng.normal();
      norm += v * v;
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    const double r = 0.999 * radius * std::pow(rng.uniform(), 1.0 / double(d));
    std::vector<double> y(d);
    for (std::size_t a = 0; a < d; ++a) y[a] = e.center[a] / e.delta + r * dir[a] / norm;
    out.push_back(std::move(y));
  }
  return out;
}

void run_fourier(const ExperimentConfig& cfg, ReportBundle& out, Stopwatch& sw) {
  const auto k = cfg.make_kernel();
  const auto& f = cfg.fourier;
  FourierExpansion e;
  std::optional<std::string> unreachable;
  sw.stage("expansion", [&] {
    try {
      e = expand_reciprocal(k, cfg.z0(), f.delta, f.n_coeffs, f.tolerance,
                            cfg.expansion_options());
    } catch (const ToleranceUnreachableError& err) {
      unreachable = err.what();
      e = ReciprocalSpectrum::compute([&k](std::span<const double> u) { return k(u); },
                                      k.arity(), k.dimension(), cfg.z0(), f.delta,
                                      cfg.expansion_options())
              .truncate(f.n_coeffs);
    }
  });
  out.rows.push_back(ReportRow::global("reconstruction_error", e.reconstruction_error,
                                       verdict_of(e.reconstruction_error <= f.tolerance)));
  out.rows.push_back(
      ReportRow::global("sum_abs", e.sum_abs, verdict_of(std::isfinite(e.sum_abs))));
  out.rows.push_back(ReportRow::global("tail_estimate", e.tail_estimate));
  out.rows.push_back(ReportRow::global("truncation", double(e.truncation())));
  out.results["expansion"] = to_json(e);
  if (unreachable) out.results["tolerance_unreachable"] = *unreachable;

  if (!unreachable) {
    const double bound = std::pow(f.delta, -double(e.dimension())) * f.tolerance;
    const auto probes = scaled_ball_probes(e, f.probes, cfg.seed);
    const auto residuals = sw.stage("scaling_identity", [&] {
      std::vector<double> r;
      for (const auto& y : probes) r.push_back(scaling_identity_residual(k, e, y));
      return r;
    });
    double worst = 0.0;
    for (double r : residuals) worst = std::max(worst, r);
    out.rows.push_back(
        ReportRow::global("scaling_identity_residual", worst, verdict_of(worst <= bound)));
    out.results["scaling_identity"] = {{"probes", probes.size()},
                                       {"max_residual", worst},
                                       {"bound", bound},
                                       {"residuals", residuals}};
  }
}

json record_json(const VerificationRecord& r) {
  json j = {{"cube_id", r.cube_id},
            {"level", r.level},
            {"center", r.center},
            {"side", r.side},
            {"companion_center", r.companion_center},
            {"lhs", r.lhs},
            {"step1", r.step1},
            {"step2", r.step2},
            {"step2_paired", r.step2_paired},
            {"step3", r.step3},
            {"rhs", r.rhs},
            {"tail", r.tail},
            {"ratio", json_number(r.ratio)},
            {"identity_residual", json_number(r.identity_residual)},
            {"norm_lower_bound", r.norm_lower_bound},
            {"max_factor", r.max_factor},
            {"partial_sums", r.partial_sums},
            {"truncation", r.truncation},
            {"pairing_consistent", r.pairing_consistent},
            {"verdict", to_string(r.verdict)}};
  if (r.error) j["error"] = *r.error;
  return j;
}

void run_theorem(const ExperimentConfig& cfg, ReportBundle& out, Stopwatch& sw) {
  const auto k = cfg.make_kernel();
  auto tc = sw.stage("expansion", [&] {
    return make_theorem_config(k, cfg.z0(), cfg.fourier.delta, cfg.fourier.n_coeffs,
                               cfg.fourier.tolerance, cfg.expansion_options(), cfg.p);
  });
  tc.p_list = cfg.p_list;
  tc.rule = cfg.rule();
  tc.output_points = cfg.theorem.output_points;
  tc.policy = cfg.policy();
  tc.tolerance = cfg.tolerances.theorem_tol;
  tc.containment_probes = cfg.theorem.containment_probes;
  tc.seed = cfg.seed;
  sw.stage("validate", [&] { tc.validate(); });

  const auto family = cfg.family();
  const auto rule = cfg.rule();
  const auto tuples = cfg.tuples();
  const auto labels = cfg.tuple_labels();
  json ts = json::array();
  for (std::size_t t = 0; t < tuples.size(); ++t) {
    const auto& label = labels[t];
    const auto rep =
        sw.stage("theorem:" + label, [&] { return bmo_lower_bound_report(tuples[t], tc, family); });
    const double bmo_est = sw.stage("bmo_estimate:" + label, [&] {
      double best = 0.0;
      for (const auto& f : tuples[t].entries())
        best = std::max(best, bmo_norm_estimate(f, family, rule).value);
      return best;
    });
    json records = json::array(), comparisons = json::array();
    for (std::size_t c = 0; c < rep.records.size(); ++c) {
      const auto& r = rep.records[c];
      const auto& cmp = rep.comparisons[c];
      const auto& member = family[c];
      out.rows.push_back(ReportRow::cube(member, label + ":lhs", r.lhs));
      out.rows.push_back(ReportRow::cube(member, label + ":step1", r.step1));
      out.rows.push_back(ReportRow::cube(member, label + ":step2", r.step2));
      out.rows.push_back(ReportRow::cube(member, label + ":step3", r.step3));
      out.rows.push_back(ReportRow::cube(member, label + ":rhs", r.rhs));
      out.rows.push_back(ReportRow::cube(member, label + ":tail", r.tail));
      out.rows.push_back(ReportRow::cube(member, label + ":chain_ratio", r.ratio, r.verdict));
      out.rows.push_back(ReportRow::cube(member, label + ":comparison_constant", cmp.constant,
                                         verdict_of(cmp.comparison_holds)));
      records.push_back(record_json(r));
      comparisons.push_back({{"cube_id", cmp.cube_id},
                             {"star2_own", cmp.star2_own},
                             {"star2_companion", cmp.star2_companion},
                             {"star3", cmp.star3},
                             {"constant", json_number(cmp.constant)},
                             {"comparison_holds", cmp.comparison_holds}});
    }
    const bool consistent = rep.bmo_lower_bound <= bmo_est + cfg.tolerances.chain_tol;
    out.rows.push_back(ReportRow::global(label + ":bmo_lower_bound", rep.bmo_lower_bound,
                                         verdict_of(consistent)));
    out.rows.push_back(ReportRow::global(label + ":bmo_estimate", bmo_est));
    ts.push_back({{"label", label},
                  {"records", records},
                  {"comparisons", comparisons},
                  {"comparison_constant", json_number(rep.comparison_constant)},
                  {"bmo_lower_bound", rep.bmo_lower_bound},
                  {"lower_bound_argmax", rep.lower_bound_argmax},
                  {"bmo_estimate", bmo_est},
                  {"implied_upper_bound", json_number(rep.implied_upper_bound)},
                  {"passed", rep.passed},
                  {"failed", rep.failed},
                  {"all_pass", rep.all_pass}});
  }
  out.results["tuples"] = ts;
  out.results["family_size"] = family.size();
  out.results["expansion"] = {{"truncation", tc.expansion.truncation()},
                              {"sum_abs", tc.expansion.sum_abs},
                              {"tail_estimate", tc.expansion.tail_estimate},
                              {"reconstruction_error", tc.expansion.reconstruction_error}};
}

}  // namespace

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names = {"bmo", "lemma", "kernel-check", "fourier",
                                                 "theorem"};
  return names;
}

ReportBundle run_subcommand(const std::string& name, const ExperimentConfig& cfg) {
  using Runner = std::function<void(const ExperimentConfig&, ReportBundle&, Stopwatch&)>;
  static const std::vector<std::pair<std::string, Runner>> table = {
      {"bmo", run_bmo},
      {"lemma", run_lemma},
      {"kernel-check", run_kernel_check},
      {"fourier", run_fourier},
      {"theorem", run_theorem}};
  for (const auto& [key, run] : table) {
    if (key != name) continue;
    ReportBundle out;
    out.subcommand = name;
    out.config = cfg.canonical();
    out.config_hash = cfg.hash();
    out.dimension = cfg.n;
    Stopwatch sw(out);
    run(cfg, out, sw);
    return out;
  }
  throw ConfigError("subcommand", "unknown subcommand '" + name + "'");
}

}  // namespace bmo
