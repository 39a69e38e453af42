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

#include "bmolab/oscillation.hpp"

#include <algorithm>
#include <cmath>

#include "bmolab/error.hpp"
#include "bmolab/random.hpp"

namespace bmo {

FunctionTuple::FunctionTuple(std::vector<ScalarField> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw DomainError("function tuple needs m >= 1 entries");
  for (const auto& e : entries_)
    if (e.dimension() != entries_.front().dimension())
      throw DomainError("function tuple entries must share one dimension");
}

bool FunctionTuple::all_same() const {
  const auto d = entries_.front().describe();
  return std::all_of(entries_.begin(), entries_.end(),
                     [&](const ScalarField& f) { return f.describe() == d; });
}

SignPatternSet::SignPatternSet(std::size_t m) : m_(m) {
  if (m == 0 || m > 30) throw DomainError("sign pattern set needs 1 <= m <= 30");
}

std::vector<int> SignPatternSet::pattern(std::size_t p) const {
  if (p >= size()) throw DomainError("sign pattern index out of range");
  std::vector<int> s(m_);
  for (std::size_t i = 0; i < m_; ++i) s[i] = sign(p, i);
  return s;
}

SignInequality sign_inequality_check(std::span<const double> a, std::size_t n, double slack) {
  if (n == 0 || a.empty() || a.size() % n != 0)
    throw DomainError("sign inequality needs m >= 1 vectors of dimension n");
  const std::size_t m = a.size() / n;
  const SignPatternSet patterns(m);
  SignInequality out;
  for (std::size_t i = 0; i < m; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += a[i * n + k] * a[i * n + k];
    out.lhs += std::sqrt(s);
  }
  std::vector<double> acc(n);
  for (std::size_t p = 0; p < patterns.size(); ++p) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < n; ++k) acc[k] += patterns.sign(p, i) * a[i * n + k];
    double s = 0.0;
    for (double v : acc) s += v * v;
    out.rhs += std::sqrt(s);
  }
  out.holds = out.lhs <= out.rhs + slack;
  return out;
}

SignInequality sign_inequality_check(std::span<const double> a, double slack) {
  return sign_inequality_check(a, 1, slack);
}

double telescoping_residual(std::span<const Complex> values) {
  Complex s{};
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = 0; j < values.size(); ++j)
      if (j != i) s += values[j] - values[i];
  return std::abs(s);
}

double telescoping_residual(const FunctionTuple& b, std::span<const double> points) {
  const std::size_t n = b.dimension();
  if (points.size() != b.size() * n) throw DomainError("telescoping needs m points of R^n");
  std::vector<Complex> v(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) v[i] = b[i](points.subspan(i * n, n));
  return telescoping_residual(v);
}

// ---------------------------------------------------------------------------

namespace {

Complex checked(const ScalarField& f, std::span<const double> x) {
  if (f.has_singular_set() && f.singular_at(x)) throw SingularNodeError({x.begin(), x.end()});
  return f(x);
}

/// Node values of every entry on the shared per-cube tensor node set.
std::vector<std::vector<Complex>> entry_values(const FunctionTuple& b, const Cube& q,
                                               const QuadratureRule& rule) {
  const NodeSet nodes = make_nodes(q.box(), rule);
  if (nodes.size() == 0) throw EmptyRuleError();
  std::vector<std::vector<Complex>> vals;
  vals.reserve(b.size());
  for (const auto& f : b.entries()) vals.push_back(sample_field(f, nodes));
  return vals;
}

/// sum_i vals[i][idx_i] over all index tuples, first index fastest.
std::vector<Complex> tensor_sums(const std::vector<std::vector<Complex>>& vals) {
  std::vector<Complex> out{Complex{}};
  for (std::size_t i = vals.size(); i-- > 0;) {
    std::vector<Complex> next;
    next.reserve(out.size() * vals[i].size());
    for (const auto& prefix : out)
      for (const auto& v : vals[i]) next.push_back(prefix + v);
    out = std::move(next);
  }
  return out;
}

Estimate mc_estimate(double s, double s2, std::size_t count) {
  Estimate e;
  const double c = static_cast<double>(count);
  e.value = s / c;
  e.nodes = count;
  if (count > 1) {
    const double var = std::max(0.0, (s2 / c - e.value * e.value) * c / (c - 1.0));
    e.std_error = std::sqrt(var / c);
  }
  return e;
}

void check_tuple(const FunctionTuple& b, const Cube& q) {
  if (b.dimension() != q.dimension()) throw DomainError("tuple dimension does not match cube");
}

}  // namespace

Estimate functional_star(const FunctionTuple& b, const Cube& q, const QuadratureRule& rule) {
  check_tuple(b, q);
  rule.validate();
  const std::size_t m = b.size(), n = q.dimension();
  if (rule.kind == RuleKind::tensor_midpoint) {
    tensor_node_count(rule.points_per_dim, (m + 1) * n, rule.node_budget);
    const auto vals = entry_values(b, q, rule);
    const std::size_t p = vals.front().size();
    std::vector<Complex> shared(p);
    for (std::size_t x = 0; x < p; ++x)
      for (std::size_t i = 0; i < m; ++i) shared[x] += vals[i][x];
    const auto sums = tensor_sums(vals);
    double s = 0.0;
    for (const auto& fx : shared)
      for (const auto& gy : sums) s += std::abs(fx - gy);
    return Estimate{s / (static_cast<double>(p) * static_cast<double>(sums.size())), 0.0,
                    p * sums.size()};
  }
  Rng rng(rule.seed);
  const Box box = q.box();
  std::vector<double> x(n), y(n);
  double s = 0.0, s2 = 0.0;
  for (std::size_t k = 0; k < rule.sample_count; ++k) {
    for (std::size_t a = 0; a < n; ++a) x[a] = rng.uniform(box.lower(a), box.upper(a));
    Complex acc{};
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t a = 0; a < n; ++a) y[a] = rng.uniform(box.lower(a), box.upper(a));
      acc += checked(b[i], x) - checked(b[i], y);
    }
    const double v = std::abs(acc);
    s += v;
    s2 += v * v;
  }
  return mc_estimate(s, s2, rule.sample_count);
}

Estimate joint_oscillation(const FunctionTuple& b, const Cube& q,
                           std::span<const Complex> centers, const QuadratureRule& rule) {
  check_tuple(b, q);
  rule.validate();
  const std::size_t m = b.size(), n = q.dimension();
  if (centers.size() != m) throw DomainError("joint oscillation needs one center per entry");
  Complex total{};
  for (const auto& c : centers) total += c;
  if (rule.kind == RuleKind::tensor_midpoint) {
    tensor_node_count(rule.points_per_dim, m * n, rule.node_budget);
    const auto sums = tensor_sums(entry_values(b, q, rule));
    double s = 0.0;
    for (const auto& g : sums) s += std::abs(g - total);
    return Estimate{s / static_cast<double>(sums.size()), 0.0, sums.size()};
  }
  Rng rng(rule.seed);
  const Box box = q.box();
  std::vector<double> x(n);
  double s = 0.0, s2 = 0.0;
  for (std::size_t k = 0; k < rule.sample_count; ++k) {
    Complex acc = -total;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t a = 0; a < n; ++a) x[a] = rng.uniform(box.lower(a), box.upper(a));
      acc += checked(b[i], x);
    }
    const double v = std::abs(acc);
    s += v;
    s2 += v * v;
  }
  return mc_estimate(s, s2, rule.sample_count);
}

Estimate functional_star2(const FunctionTuple& b, const Cube& q, const QuadratureRule& rule) {
  check_tuple(b, q);
  std::vector<Complex> centers(b.size());
  if (rule.kind == RuleKind::tensor_midpoint) {
    // Averages on the very nodes of the tensor rule.
    const auto vals = entry_values(b, q, rule);
    for (std::size_t i = 0; i < b.size(); ++i) {
      for (const auto& v : vals[i]) centers[i] += v;
      centers[i] /= static_cast<double>(vals[i].size());
    }
  } else {
    for (std::size_t i = 0; i < b.size(); ++i)
      centers[i] = cube_average(b[i], q, rule.with_stream(1000 + i));
  }
  return joint_oscillation(b, q, centers, rule);
}

Estimate functional_star3(const FunctionTuple& b, const Cube& q, const QuadratureRule& rule) {
  check_tuple(b, q);
  rule.validate();
  const std::size_t m = b.size(), n = q.dimension();
  if (rule.kind == RuleKind::tensor_midpoint) {
    tensor_node_count(rule.points_per_dim, 2 * m * n, rule.node_budget);
    const auto sums = tensor_sums(entry_values(b, q, rule));
    const std::size_t count = sums.size();
    double s = 0.0;
    for (std::size_t a = 0; a < count; ++a) {
      double row = 0.0;
      for (std::size_t c = a + 1; c < count; ++c) row += std::abs(sums[a] - sums[c]);
      s += row;
    }
    const double c = static_cast<double>(count);
    return Estimate{2.0 * s / (c * c), 0.0, count * count};
  }
  Rng rng(rule.seed);
  const Box box = q.box();
  std::vector<double> x(n), y(n);
  double s = 0.0, s2 = 0.0;
  for (std::size_t k = 0; k < rule.sample_count; ++k) {
    Complex acc{};
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t a = 0; a < n; ++a) x[a] = rng.uniform(box.lower(a), box.upper(a));
      for (std::size_t a = 0; a < n; ++a) y[a] = rng.uniform(box.lower(a), box.upper(a));
      acc += checked(b[i], x) - checked(b[i], y);
    }
    const double v = std::abs(acc);
    s += v;
    s2 += v * v;
  }
  return mc_estimate(s, s2, rule.sample_count);
}

// ---------------------------------------------------------------------------

namespace {

ChainCheck make_check(const char* name, double lhs, double lhs_se, double coef, double rhs,
                      double rhs_se, bool monte_carlo, const ChainTolerance& tol) {
  ChainCheck c;
  c.name = name;
  c.lhs = lhs;
  c.rhs = coef * rhs;
  c.allowance = monte_carlo
                    ? tol.sigmas * std::sqrt(lhs_se * lhs_se + coef * coef * rhs_se * rhs_se)
                    : tol.tensor;
  c.holds = c.lhs <= c.rhs + c.allowance;
  return c;
}

}  // namespace

OscillationReport lemma_equivalence_suite(const FunctionTuple& b, const CubeFamily& family,
                                          const QuadratureRule& rule,
                                          const ChainTolerance& tol) {
  if (family.empty()) throw DomainError("cube family is empty");
  const std::size_t m = b.size(), n = b.dimension();
  QuadratureRule effective = rule;
  if (rule.kind == RuleKind::tensor_midpoint && m * n >= 5) effective.kind = RuleKind::monte_carlo;
  const bool mc = effective.kind == RuleKind::monte_carlo;

  OscillationReport rep;
  rep.m = m;
  rep.rule_kind = effective.kind;
  rep.bmo_sup.assign(m, 0.0);
  for (const auto& member : family.members()) {
    CubeOscillation co{member, {}, {}, {}, {}, {}, std::nullopt};
    try {
      const auto base = effective.with_stream(member.id * 16);
      co.star = functional_star(b, member.cube, base.with_stream(1));
      co.star2 = functional_star2(b, member.cube, base.with_stream(2));
      co.star3 = functional_star3(b, member.cube, base.with_stream(3));
      double sum_bmo = 0.0, sum_bmo_var = 0.0;
      std::size_t arg = 0;
      for (std::size_t i = 0; i < m; ++i) {
        co.bmo.push_back(mean_oscillation(b[i], member.cube, base.with_stream(4 + i)));
        sum_bmo += co.bmo[i].value;
        sum_bmo_var += co.bmo[i].std_error * co.bmo[i].std_error;
        if (co.bmo[i].value > co.bmo[arg].value) arg = i;
      }
      const double scale = std::ldexp(1.0, static_cast<int>(m));
      co.chain.push_back(make_check(kChainNames[0], co.star2.value, co.star2.std_error, 1.0,
                                    co.star.value, co.star.std_error, mc, tol));
      co.chain.push_back(make_check(kChainNames[1], co.star3.value, co.star3.std_error, 2.0,
                                    co.star2.value, co.star2.std_error, mc, tol));
      co.chain.push_back(make_check(kChainNames[2], co.bmo[arg].value, co.bmo[arg].std_error,
                                    scale, co.star3.value, co.star3.std_error, mc, tol));
      co.chain.push_back(make_check(kChainNames[3], co.star.value, co.star.std_error, 2.0,
                                    sum_bmo, std::sqrt(sum_bmo_var), mc, tol));
      rep.sup_star = std::max(rep.sup_star, co.star.value);
      rep.sup_star2 = std::max(rep.sup_star2, co.star2.value);
      rep.sup_star3 = std::max(rep.sup_star3, co.star3.value);
      for (std::size_t i = 0; i < m; ++i) rep.bmo_sup[i] = std::max(rep.bmo_sup[i], co.bmo[i].value);
      for (std::size_t c = 0; c < 4; ++c)
        if (!co.chain[c].holds) {
          ++rep.chain_failures[c];
          rep.all_pass = false;
        }
    } catch (const Error& e) {
      co.error = e.what();
      ++rep.cube_errors;
      rep.all_pass = false;
    }
    rep.cubes.push_back(std::move(co));
  }
  return rep;
}

// ---------------------------------------------------------------------------

GrowthSweep classify_growth(std::vector<double> values, int from_level, double grow_factor,
                            double stable_ratio) {
  GrowthSweep g;
  g.values = std::move(values);
  g.ratios.assign(g.values.size(), 0.0);
  for (std::size_t l = 0; l < g.values.size(); ++l) g.levels.push_back(static_cast<int>(l));
  bool grows = true, stable = true, considered = false;
  for (std::size_t l = 1; l < g.values.size(); ++l) {
    const double prev = g.values[l - 1];
    g.ratios[l] = prev > 0.0 ? g.values[l] / prev : (g.values[l] > 0.0 ? INFINITY : 1.0);
    if (static_cast<int>(l) >= from_level) {
      considered = true;
      if (!(g.ratios[l] >= grow_factor)) grows = false;
      if (!(g.ratios[l] <= stable_ratio)) stable = false;
    }
  }
  g.divergent = considered && grows;
  g.stable = considered && stable;
  g.verdict = g.divergent ? Verdict::diverged : Verdict::pass;
  return g;
}

namespace {

CubeFamily scaled_family(const Cube& root, int level, int depth, bool translates) {
  Cube r(std::vector<double>(root.center().begin(), root.center().end()),
         std::ldexp(root.side(), level));
  return CubeFamily(std::move(r), 0, depth, translates);
}

}  // namespace

GrowthSweep bmo_growth_sweep(const ScalarField& f, const Cube& root, int max_level, int depth,
                             bool translates, const QuadratureRule& rule) {
  std::vector<double> values;
  for (int level = 0; level <= max_level; ++level)
    values.push_back(bmo_norm_estimate(f, scaled_family(root, level, depth, translates), rule).value);
  return classify_growth(std::move(values));
}

GrowthSweep oscillation_growth_sweep(const FunctionTuple& b, const Cube& root, int max_level,
                                     int depth, bool translates, const QuadratureRule& rule) {
  std::vector<double> values;
  for (int level = 0; level <= max_level; ++level) {
    const CubeFamily fam = scaled_family(root, level, depth, translates);
    double sup = 0.0;
    for (const auto& member : fam.members())
      sup = std::max(sup, functional_star2(b, member.cube, rule.with_stream(member.id)).value);
    values.push_back(sup);
  }
  return classify_growth(std::move(values));
}

}  // namespace bmo
