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

#include "bmolab/quadrature.hpp"

#include <cmath>
#include <limits>

#include "bmolab/error.hpp"
#include "bmolab/random.hpp"

namespace bmo {

double Rng::normal() {
  const double u = open_uniform();
  const double v = uniform();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
}

std::uint64_t Rng::mix(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t x = seed ^ (stream * 0xd1b54a32d192ed03ULL + 0x8bb84b93962eacc9ULL);
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string to_string(RuleKind kind) {
  return kind == RuleKind::tensor_midpoint ? "tensor" : "monte_carlo";
}

QuadratureRule QuadratureRule::with_stream(std::uint64_t stream) const {
  QuadratureRule r = *this;
  if (kind == RuleKind::monte_carlo) r.seed = Rng::mix(seed, stream);
  return r;
}

void QuadratureRule::validate() const {
  if (kind == RuleKind::tensor_midpoint) {
    if (points_per_dim == 0) throw EmptyRuleError();
    if (points_per_dim < 2) throw DomainError("tensor rule needs points_per_dim >= 2");
  } else if (sample_count == 0) {
    throw EmptyRuleError();
  }
}

std::size_t tensor_node_count(std::size_t points_per_dim, std::size_t dims, std::size_t budget) {
  std::size_t count = 1;
  bool overflow = false;
  for (std::size_t d = 0; d < dims; ++d) {
    if (count > std::numeric_limits<std::size_t>::max() / points_per_dim) {
      overflow = true;
      break;
    }
    count *= points_per_dim;
  }
  if (overflow) throw NodeBudgetError(std::numeric_limits<std::size_t>::max(), budget);
  if (count > budget) throw NodeBudgetError(count, budget);
  return count;
}

NodeSet make_nodes(const Box& box, const QuadratureRule& rule, std::uint64_t stream) {
  rule.validate();
  const std::size_t n = box.dimension();
  NodeSet ns;
  ns.dimension = n;
  if (box.empty()) return ns;
  const double vol = box.volume();

  if (rule.kind == RuleKind::tensor_midpoint) {
    const std::size_t p = rule.points_per_dim;
    const std::size_t count = tensor_node_count(p, n, rule.node_budget);
    ns.coords.resize(count * n);
    ns.weights.assign(count, vol / static_cast<double>(count));
    std::vector<std::size_t> idx(n, 0);
    for (std::size_t k = 0; k < count; ++k) {
      for (std::size_t a = 0; a < n; ++a) {
        const double h = box.width(a) / static_cast<double>(p);
        ns.coords[k * n + a] = box.lower(a) + (static_cast<double>(idx[a]) + 0.5) * h;
      }
      for (std::size_t a = 0; a < n; ++a) {
        if (++idx[a] < p) break;
        idx[a] = 0;
      }
    }
    return ns;
  }

  Rng rng(rule.seed, stream);
  const std::size_t count = rule.sample_count;
  ns.coords.resize(count * n);
  ns.weights.assign(count, vol / static_cast<double>(count));
  for (std::size_t k = 0; k < count; ++k)
    for (std::size_t a = 0; a < n; ++a)
      ns.coords[k * n + a] = rng.uniform(box.lower(a), box.upper(a));
  return ns;
}

std::vector<Complex> sample_field(const ScalarField& f, const NodeSet& nodes) {
  if (f.dimension() != nodes.dimension)
    throw DomainError("field dimension does not match node set");
  const bool check = f.has_singular_set();
  std::vector<Complex> out(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto x = nodes.point(i);
    if (check && f.singular_at(x)) throw SingularNodeError({x.begin(), x.end()});
    out[i] = f(x);
  }
  return out;
}

Complex cube_average(const ScalarField& f, const Cube& q, const QuadratureRule& rule) {
  if (f.dimension() != q.dimension()) throw DomainError("field dimension does not match cube");
  const NodeSet nodes = make_nodes(q.box(), rule);
  if (nodes.size() == 0) throw EmptyRuleError();
  const auto v = sample_field(f, nodes);
  Complex s{};
  for (const auto& x : v) s += x;
  return s / static_cast<double>(v.size());
}

Estimate mean_oscillation(const ScalarField& f, const Cube& q, const QuadratureRule& rule) {
  if (f.dimension() != q.dimension()) throw DomainError("field dimension does not match cube");
  const NodeSet nodes = make_nodes(q.box(), rule);
  if (nodes.size() == 0) throw EmptyRuleError();
  const auto v = sample_field(f, nodes);
  const double count = static_cast<double>(v.size());
  Complex avg{};
  for (const auto& x : v) avg += x;
  avg /= count;
  double s = 0.0, s2 = 0.0;
  for (const auto& x : v) {
    const double d = std::abs(x - avg);
    s += d;
    s2 += d * d;
  }
  Estimate e;
  e.value = s / count;
  e.nodes = v.size();
  if (rule.kind == RuleKind::monte_carlo && v.size() > 1) {
    const double var = std::max(0.0, (s2 / count - e.value * e.value) * count / (count - 1.0));
    e.std_error = std::sqrt(var / count);
  }
  return e;
}

BmoEstimate bmo_norm_estimate(const ScalarField& f, const CubeFamily& family,
                              const QuadratureRule& rule) {
  if (family.empty()) throw DomainError("cube family is empty");
  BmoEstimate out;
  out.per_cube.reserve(family.size());
  for (const auto& member : family.members()) {
    const double v = mean_oscillation(f, member.cube, rule.with_stream(member.id)).value;
    out.per_cube.push_back(v);
    if (out.per_cube.size() == 1 || v > out.value) {
      out.value = v;
      out.argmax = member.id;
    }
  }
  return out;
}

ComplexEstimate integrate_over_cube_power(const MultiPointIntegrand& g, const Cube& q,
                                          std::size_t m, const QuadratureRule& rule,
                                          bool normalized) {
  if (m == 0) throw DomainError("integrate_over_cube_power needs m >= 1");
  rule.validate();
  const std::size_t n = q.dimension();
  const double scale = normalized ? 1.0 : std::pow(q.volume(), static_cast<double>(m));
  std::vector<double> pts(m * n);
  ComplexEstimate out;

  if (rule.kind == RuleKind::tensor_midpoint) {
    const std::size_t total = tensor_node_count(rule.points_per_dim, m * n, rule.node_budget);
    const NodeSet base = make_nodes(q.box(), rule);
    const std::size_t per = base.size();
    std::vector<std::size_t> idx(m, 0);
    Complex s{};
    for (std::size_t k = 0; k < total; ++k) {
      for (std::size_t i = 0; i < m; ++i) {
        const auto p = base.point(idx[i]);
        for (std::size_t a = 0; a < n; ++a) pts[i * n + a] = p[a];
      }
      s += g(pts);
      for (std::size_t i = 0; i < m; ++i) {
        if (++idx[i] < per) break;
        idx[i] = 0;
      }
    }
    out.value = scale * s / static_cast<double>(total);
    out.nodes = total;
    return out;
  }

  Rng rng(rule.seed);
  const std::size_t count = rule.sample_count;
  const Box box = q.box();
  Complex s{};
  double s2 = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t a = 0; a < n; ++a) pts[i * n + a] = rng.uniform(box.lower(a), box.upper(a));
    const Complex v = g(pts);
    s += v;
    s2 += std::norm(v);
  }
  const double c = static_cast<double>(count);
  const Complex mean = s / c;
  out.value = scale * mean;
  out.nodes = count;
  if (count > 1) {
    const double var = std::max(0.0, (s2 / c - std::norm(mean)) * c / (c - 1.0));
    out.std_error = scale * std::sqrt(var / c);
  }
  return out;
}

double lp_norm(const ScalarField& f, double p, const Box& domain, const QuadratureRule& rule) {
  if (!(p > 0.0)) throw DomainError("lp_norm needs p > 0");
  if (f.dimension() != domain.dimension())
    throw DomainError("field dimension does not match domain");
  Box region = domain;
  if (auto s = f.support()) region = region.intersect(*s);
  rule.validate();
  if (region.empty()) return 0.0;
  const NodeSet nodes = make_nodes(region, rule);
  const auto v = sample_field(f, nodes);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += nodes.weights[i] * std::pow(std::abs(v[i]), p);
  return std::pow(s, 1.0 / p);
}

double lp_norm(const ScalarField& f, double p, const Cube& domain, const QuadratureRule& rule) {
  return lp_norm(f, p, domain.box(), rule);
}

}  // namespace bmo
