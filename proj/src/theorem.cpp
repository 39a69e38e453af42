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

#include "bmolab/theorem.hpp"

#include <chrono>
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

// Containment expression for slot i; xs = (x, y_1, ..., y_m) in R^n each.
double containment_value(std::span<const double> xs, std::size_t m, std::size_t n,
                         std::size_t i, std::span<const double> z1, double r) {
  const double* x = xs.data();
  const double* yi = xs.data() + (i + 1) * n;
  double s = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    const double d = (yi[a] - x[a]) / r - z1[a];
    s += d * d;
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (j == i) continue;
    const double* yj = xs.data() + (j + 1) * n;
    for (std::size_t a = 0; a < n; ++a) {
      const double d = (yi[a] - yj[a]) / r;
      s += d * d;
    }
  }
  return std::sqrt(s);
}

std::vector<double> companion_shift(const TheoremConfig& cfg) {
  std::vector<double> z1(cfg.z0.size());
  for (std::size_t a = 0; a < z1.size(); ++a) z1[a] = cfg.z0[a] / cfg.delta;
  return z1;
}

}  // namespace

void TheoremConfig::validate() const {
  const std::size_t mm = m(), nn = n();
  if (z0.size() != nn) throw DomainError("z0 must lie in R^n");
  if (norm2(z0) - double(mm) * std::sqrt(double(nn)) < 1e-6)
    throw DomainError("|z0| must exceed m sqrt(n) by at least 1e-6");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
  if (expansion.modes.empty()) throw DomainError("theorem config has no expansion");
  if (expansion.m != mm || expansion.n != nn) throw DomainError("expansion dimension mismatch");
  if (std::abs(expansion.delta - delta) > 1e-12) throw DomainError("expansion delta mismatch");
  for (std::size_t a = 0; a < nn; ++a)
    if (std::abs(expansion.z0.at(a) - z0[a]) > 1e-12) throw DomainError("expansion z0 mismatch");
  if (p_list.size() != mm) throw DomainError("need one exponent per slot");
  check_holder(p_list, p);
  if (p < 1.0) throw DomainError("the chain needs p >= 1");
  rule.validate();
  policy.validate();
  if (output_points == 0) throw DomainError("output_points must be positive");
  if (!(tolerance >= 0.0)) throw DomainError("tolerance must be nonnegative");
}

TheoremConfig make_theorem_config(const HomogeneousKernel& kernel, std::vector<double> z0,
                                  double delta, std::size_t modes, double fourier_tolerance,
                                  const ExpansionOptions& options, double p) {
  TheoremConfig cfg;
  cfg.kernel = kernel;
  cfg.z0 = z0;
  cfg.delta = delta;
  cfg.expansion = expand_reciprocal(kernel, std::move(z0), delta, modes, fourier_tolerance,
                                    options);
  cfg.p = p;
  cfg.p_list.assign(kernel.arity(), p * double(kernel.arity()));
  cfg.rule.node_budget = 4'000'000;
  cfg.validate();
  return cfg;
}

double containment_margin_probe(const Cube& q, const Cube& qp, const TheoremConfig& cfg,
                                std::vector<double>* witness) {
  const std::size_t m = cfg.m(), n = cfg.n(), d = (m + 1) * n;
  const double r = q.side();
  const auto z1 = companion_shift(cfg);
  std::vector<double> xs(d);
  double worst = 0.0;
  auto consider = [&] {
    for (std::size_t i = 0; i < m; ++i) {
      const double v = containment_value(xs, m, n, i, z1, r);
      if (v > worst) {
        worst = v;
        if (witness) *witness = xs;
      }
    }
  };
  auto place = [&](std::size_t slot, std::size_t a, double t) {
    const Cube& c = slot == 0 ? q : qp;
    xs[slot * n + a] = c.center(a) + t * c.side();
  };
  // Corner lattice {-1/2, 0, 1/2} on every coordinate.
  std::vector<int> j(d, 0);
  for (bool done = false; !done;) {
    for (std::size_t t = 0; t < d; ++t) place(t / n, t % n, 0.5 * (j[t] - 1));
    consider();
    std::size_t t = d;
    while (t > 0 && ++j[t - 1] == 3) j[--t] = 0;
    done = t == 0;
  }
  Rng rng(cfg.seed, 0xC0A7A1);
  for (std::size_t s = 0; s < cfg.containment_probes; ++s) {
    for (std::size_t t = 0; t < d; ++t) place(t / n, t % n, rng.uniform(-0.5, 0.5));
    consider();
  }
  return worst;
}

Cube build_companion_cube(const Cube& q, const TheoremConfig& cfg) {
  if (q.dimension() != cfg.n()) throw DomainError("cube dimension does not match the kernel");
  const auto z1 = companion_shift(cfg);
  std::vector<double> c(q.center().begin(), q.center().end());
  for (std::size_t a = 0; a < c.size(); ++a) c[a] += q.side() * z1[a];
  Cube qp(std::move(c), q.side());
  if (!q.disjoint(qp)) throw DomainError("companion cube intersects the cube");
  std::vector<double> witness;
  const double bound = std::sqrt(double(cfg.m() * cfg.n()));
  const double worst = containment_margin_probe(q, qp, cfg, &witness);
  if (worst > bound * (1.0 + 1e-12)) throw ContainmentError(witness, worst, bound);
  return qp;
}

ScalarField sign_weight(const FunctionTuple& b, std::size_t i, const Cube& q, const Cube& qp,
                        const QuadratureRule& rule) {
  if (i >= b.size()) throw DomainError("sign weight index out of range");
  const double m = double(b.size());
  double t = 0.0;
  for (std::size_t j = 0; j < b.size(); ++j) {
    const double c = cube_average(b[j], qp, rule).real();
    t += j == i ? m * c : -c;
  }
  return ScalarField::threshold_sign(b[i], t, q);
}

ConstructionBundle build_bundle(const FunctionTuple& b, const TheoremConfig& cfg, const Cube& q) {
  cfg.validate();
  if (b.size() != cfg.m()) throw DomainError("need one symbol per kernel slot");
  if (b.dimension() != cfg.n()) throw DomainError("symbol dimension does not match the kernel");
  ConstructionBundle bundle{q, build_companion_cube(q, cfg), companion_shift(cfg), {}, {}, {}};
  const std::size_t m = b.size();
  for (std::size_t j = 0; j < m; ++j)
    bundle.companion_means.push_back(cube_average(b[j], bundle.qp, cfg.rule).real());
  for (std::size_t i = 0; i < m; ++i) {
    double t = 0.0;
    for (std::size_t j = 0; j < m; ++j)
      t += j == i ? double(m) * bundle.companion_means[j] : -bundle.companion_means[j];
    bundle.thresholds.push_back(t);
    bundle.sign_weights.push_back(ScalarField::threshold_sign(b[i], t, q));
  }
  return bundle;
}

TestFunctions build_test_functions(const TheoremConfig& cfg, const ConstructionBundle& bundle,
                                   std::size_t i, std::size_t k) {
  const std::size_t m = cfg.m(), n = cfg.n();
  if (i >= m) throw DomainError("test function index i out of range");
  if (k >= cfg.expansion.truncation()) throw DomainError("mode index k out of range");
  const double factor = cfg.delta / bundle.q.side();
  std::vector<double> total(n, 0.0);
  TestFunctions out{{}, ScalarField::constant(0.0, n)};
  for (std::size_t s = 0; s < m; ++s) {
    auto v = cfg.expansion.frequency_block(k, s);
    for (std::size_t a = 0; a < n; ++a) {
      total[a] += v[a];
      v[a] *= -factor;
    }
    if (s == 0)
      out.f.push_back(ScalarField::modulated_indicator(v, bundle.q, bundle.sign_weights[i]));
    else
      out.f.push_back(ScalarField::modulated_indicator(v, bundle.qp));
  }
  for (auto& t : total) t *= factor;
  out.g = ScalarField::modulated_indicator(total, bundle.qp);
  return out;
}

VerificationRecord theorem_chain_verify(const FunctionTuple& b, const TheoremConfig& cfg,
                                        const Cube& q) {
  return theorem_chain_verify(b, cfg, FamilyMember{0, 0, false, q});
}

VerificationRecord theorem_chain_verify(const FunctionTuple& b, const TheoremConfig& cfg,
                                        const FamilyMember& member) {
  const auto start = std::chrono::steady_clock::now();
  const Cube& q = member.cube;
  VerificationRecord rec;
  rec.cube_id = member.id;
  rec.level = member.level;
  rec.center.assign(q.center().begin(), q.center().end());
  rec.side = q.side();
  rec.pairing_consistent = b.size() == 1 || b.all_same();
  try {
    const auto bundle = build_bundle(b, cfg, q);
    const std::size_t m = cfg.m(), N = cfg.expansion.truncation();
    rec.companion_center.assign(bundle.qp.center().begin(), bundle.qp.center().end());
    rec.truncation = N;

    std::vector<Complex> centers(bundle.companion_means.begin(), bundle.companion_means.end());
    rec.lhs = joint_oscillation(b, q, centers, cfg.rule).value;

    const NodeSet qn = make_nodes(q.box(), cfg.rule);
    for (std::size_t i = 0; i < m; ++i) {
      const auto v = sample_field(b[i], qn);
      double s = 0.0;
      for (std::size_t t = 0; t < v.size(); ++t)
        s += qn.weights[t] * std::abs(bundle.thresholds[i] - v[t].real());
      rec.step1 += s / q.volume();
    }

    const NodeSet out = make_nodes(bundle.qp.box(), QuadratureRule::tensor(cfg.output_points));
    const double scale = std::pow(cfg.delta, -double(cfg.kernel.total_dimension()));
    const double vol = q.volume();
    const double vol_p = std::pow(vol, 1.0 / cfg.p);

    // Slot order of the split integrand for each i: x first, then y_j, j != i.
    std::vector<std::vector<std::optional<ScalarField>>> paired_beta(m);
    std::vector<std::vector<Complex>> b_out(m);
    for (std::size_t i = 0; i < m; ++i) {
      paired_beta[i].emplace_back(b[i].scaled(-1.0));
      for (std::size_t j = 0; j < m; ++j)
        if (j != i) paired_beta[i].emplace_back(b[j].scaled(-1.0));
      b_out[i] = sample_field(b[i], out);
    }

    Complex step2 = 0.0, step2p = 0.0;
    std::vector<Complex> F(out.size());
    for (std::size_t k = 0; k < N; ++k) {
      const Complex a = cfg.expansion.modes[k].coefficient;
      double factor_k = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const auto tf = build_test_functions(cfg, bundle, i, k);
        OperatorEvaluation ev;
        ev.kernel = cfg.kernel;
        ev.inputs = tf.f;
        ev.policy = cfg.policy;
        ev.rule = cfg.rule;
        Complex pair_g = 0.0, pair_gp = 0.0;
        double l1 = 0.0;
        for (std::size_t t = 0; t < out.size(); ++t) {
          const auto y = out.point(t);
          F[t] = commutator_sum_kernel_form(b, ev, y);
          const Complex fp = integrate_kernel(cfg.kernel, tf.f, y, double(m) * b_out[i][t],
                                              paired_beta[i], cfg.policy, cfg.rule);
          const Complex gw = tf.g(y) * out.weights[t];
          pair_g += gw * F[t];
          pair_gp += gw * fp;
          l1 += out.weights[t] * std::abs(F[t]);
        }
        const double lp = lp_norm_of_values(F, out, cfg.p);
        const double ratio = lp / vol_p;
        step2 += a * pair_g * scale / vol;
        step2p += a * pair_gp * scale / vol;
        rec.step3 += std::abs(a) * scale * l1 / vol;
        rec.rhs += std::abs(a) * scale * ratio;
        factor_k += scale * ratio;
        rec.norm_lower_bound = std::max(rec.norm_lower_bound, ratio);
      }
      rec.max_factor = std::max(rec.max_factor, factor_k);
      rec.partial_sums.push_back(rec.rhs);
    }
    rec.step2 = step2.real();
    rec.step2_paired = step2p.real();
    rec.tail = cfg.expansion.tail_estimate * rec.max_factor;
    rec.identity_residual = std::abs(rec.step2_paired - rec.step1) / std::max(rec.step1, 1e-300);
    const double bound = rec.rhs * (1.0 + cfg.tolerance) + rec.tail;
    rec.ratio = bound > 0.0 ? rec.lhs / bound : (rec.lhs > 0.0 ? INFINITY : 0.0);
    rec.verdict = verdict_of(rec.lhs <= bound);
  } catch (const Error& e) {
    rec.error = e.what();
    rec.verdict = Verdict::fail;
  }
  rec.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

LowerBoundReport bmo_lower_bound_report(const FunctionTuple& b, const TheoremConfig& cfg,
                                        const CubeFamily& family) {
  if (family.empty()) throw DomainError("cube family is empty");
  LowerBoundReport rep;
  const std::size_t m = b.size();
  const double two_m = std::ldexp(1.0, static_cast<int>(m));
  bool first = true;
  for (const auto& member : family.members()) {
    auto rec = theorem_chain_verify(b, cfg, member);
    CubeComparison cmp;
    cmp.cube_id = member.id;
    try {
      const auto own = functional_star2(b, member.cube, cfg.rule.with_stream(member.id));
      const auto s3 = functional_star3(b, member.cube, cfg.rule.with_stream(member.id));
      cmp.star2_own = own.value;
      cmp.star3 = s3.value;
      cmp.star2_companion = rec.lhs;
      if (rec.lhs > 1e-14)
        cmp.constant = own.value / rec.lhs;
      else
        cmp.constant = own.value <= 1e-12 ? 0.0 : INFINITY;
      const double slack = 1e-9 + 3.0 * own.std_error;
      cmp.comparison_holds = !rec.error && own.value <= 2.0 * rec.lhs + slack;
      const double lb = s3.value / two_m;
      if (first || lb > rep.bmo_lower_bound) {
        rep.bmo_lower_bound = lb;
        rep.lower_bound_argmax = member.id;
        first = false;
      }
      if (!rec.error) {
        const double chain = rec.rhs * (1.0 + cfg.tolerance) + rec.tail;
        rep.implied_upper_bound =
            std::max(rep.implied_upper_bound, 2.0 * two_m * cmp.constant * chain);
      }
    } catch (const Error& e) {
      if (!rec.error) rec.error = e.what();
      rec.verdict = Verdict::fail;
      cmp.comparison_holds = false;
    }
    rep.comparison_constant = std::max(rep.comparison_constant, cmp.constant);
    if (rec.verdict == Verdict::pass && cmp.comparison_holds)
      ++rep.passed;
    else
      ++rep.failed;
    rep.records.push_back(std::move(rec));
    rep.comparisons.push_back(cmp);
  }
  rep.all_pass = rep.failed == 0;
  return rep;
}

}  // namespace bmo
