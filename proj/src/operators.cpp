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

#include "bmolab/operators.hpp"

#include <charconv>
#include <cmath>
#include <cstring>

#include "bmolab/error.hpp"
#include "bmolab/random.hpp"

namespace bmo {

namespace {

struct Slot {
  std::vector<double> coords;
  std::vector<Complex> fw;    // f(y) * weight
  std::vector<Complex> beta;  // beta(y), or empty
  std::vector<char> near;
  std::size_t size() const { return fw.size(); }
};

struct Axis {
  std::vector<double> pos;
  std::vector<double> weight;
  std::vector<char> near;
};

Axis anchored_axis(double x, double lo, double hi, std::size_t cells, double pv_eps) {
  Axis ax;
  const double h = (hi - lo) / double(cells);
  const auto jmin = static_cast<long>(std::floor((lo - x) / h));
  const auto jmax = static_cast<long>(std::ceil((hi - x) / h)) - 1;
  for (long j = jmin; j <= jmax; ++j) {
    const double a = std::max(lo, x + double(j) * h);
    const double b = std::min(hi, x + double(j + 1) * h);
    if (!(b - a > 1e-14 * h)) continue;
    ax.pos.push_back(0.5 * (a + b));
    ax.weight.push_back(b - a);
    ax.near.push_back(std::abs(2.0 * double(j) + 1.0) < 2.0 * pv_eps);
  }
  return ax;
}

Complex checked_value(const ScalarField& f, std::span<const double> y) {
  if (f.singular_at(y)) throw SingularNodeError({y.begin(), y.end()});
  return f(y);
}

std::vector<Box> slot_boxes(std::span<const ScalarField> inputs, const TruncationPolicy& policy) {
  std::vector<Box> boxes;
  for (std::size_t s = 0; s < inputs.size(); ++s) {
    auto support = inputs[s].support();
    if (!support && !policy.integration_box)
      throw DomainError("input slot " + std::to_string(s) +
                        " has unbounded support and no integration box");
    Box b = support ? *support : *policy.integration_box;
    if (support && policy.integration_box) b = b.intersect(*policy.integration_box);
    boxes.push_back(b);
  }
  return boxes;
}

Slot tensor_slot(const ScalarField& f, const std::optional<ScalarField>& beta, const Box& box,
                 std::span<const double> x, std::size_t cells, double pv_eps) {
  const std::size_t n = box.dimension();
  std::vector<Axis> axes;
  for (std::size_t a = 0; a < n; ++a)
    axes.push_back(anchored_axis(x[a], box.lower(a), box.upper(a), cells, pv_eps));
  Slot slot;
  for (const auto& ax : axes)
    if (ax.pos.empty()) return slot;
  std::vector<std::size_t> j(n, 0);
  std::vector<double> y(n);
  for (bool done = false; !done;) {
    double w = 1.0;
    bool near = true;
    for (std::size_t a = 0; a < n; ++a) {
      y[a] = axes[a].pos[j[a]];
      w *= axes[a].weight[j[a]];
      near = near && axes[a].near[j[a]];
    }
    slot.coords.insert(slot.coords.end(), y.begin(), y.end());
    slot.fw.push_back(checked_value(f, y) * w);
    if (beta) slot.beta.push_back(checked_value(*beta, y));
    slot.near.push_back(near);
    std::size_t a = n;
    while (a > 0 && ++j[a - 1] == axes[a - 1].pos.size()) j[--a] = 0;
    done = a == 0;
  }
  return slot;
}

std::uint64_t point_stream(std::span<const double> x) {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (double v : x) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    h = Rng::mix(h, bits);
  }
  return h;
}

Complex integrate_tensor(const HomogeneousKernel& k, std::span<const ScalarField> inputs,
                         const std::vector<Box>& boxes, std::span<const double> x, Complex c0,
                         std::span<const std::optional<ScalarField>> beta,
                         const TruncationPolicy& policy, const QuadratureRule& rule) {
  const std::size_t m = inputs.size(), n = k.dimension();
  std::vector<Slot> slots;
  double required = 1.0;
  for (std::size_t s = 0; s < m; ++s) {
    const std::optional<ScalarField> bs = beta.empty() ? std::nullopt : beta[s];
    slots.push_back(tensor_slot(inputs[s], bs, boxes[s], x, rule.points_per_dim,
                                policy.pv_epsilon));
    if (slots.back().size() == 0) return 0.0;
    required *= double(slots.back().size());
  }
  if (required > double(rule.node_budget))
    throw NodeBudgetError(static_cast<std::size_t>(std::min(required, 1e18)), rule.node_budget);

  std::vector<double> u(m * n);
  Complex total = 0.0;
  auto rec = [&](auto&& self, std::size_t s, Complex prod, Complex bsum, bool all_near) -> void {
    if (s == m) {
      if (all_near) return;
      total += (c0 + bsum) * prod * k(u);
      return;
    }
    const Slot& slot = slots[s];
    for (std::size_t t = 0; t < slot.size(); ++t) {
      if (slot.fw[t] == 0.0) continue;
      for (std::size_t a = 0; a < n; ++a) u[s * n + a] = x[a] - slot.coords[t * n + a];
      self(self, s + 1, prod * slot.fw[t], slot.beta.empty() ? bsum : bsum + slot.beta[t],
           all_near && slot.near[t]);
    }
  };
  rec(rec, 0, 1.0, 0.0, true);
  return total;
}

Complex integrate_monte_carlo(const HomogeneousKernel& k, std::span<const ScalarField> inputs,
                              const std::vector<Box>& boxes, std::span<const double> x,
                              Complex c0, std::span<const std::optional<ScalarField>> beta,
                              const TruncationPolicy& policy, const QuadratureRule& rule) {
  const std::size_t m = inputs.size(), n = k.dimension();
  double volume = 1.0;
  for (const auto& b : boxes) {
    if (b.empty()) return 0.0;
    volume *= b.volume();
  }
  const double cells = std::max(1.0, std::pow(double(rule.sample_count), 1.0 / double(m * n)));
  Rng rng(rule.seed, point_stream(x));
  std::vector<double> u(m * n), y(n);
  Complex total = 0.0;
  for (std::size_t t = 0; t < rule.sample_count; ++t) {
    Complex prod = 1.0, bsum = 0.0;
    bool all_near = true;
    for (std::size_t s = 0; s < m; ++s) {
      for (std::size_t a = 0; a < n; ++a) {
        y[a] = rng.uniform(boxes[s].lower(a), boxes[s].upper(a));
        u[s * n + a] = x[a] - y[a];
        all_near = all_near &&
                   std::abs(u[s * n + a]) < policy.pv_epsilon * boxes[s].width(a) / cells;
      }
      prod *= checked_value(inputs[s], y);
      if (!beta.empty() && beta[s]) bsum += checked_value(*beta[s], y);
    }
    if (all_near || prod == 0.0) continue;
    total += (c0 + bsum) * prod * k(u);
  }
  return total * (volume / double(rule.sample_count));
}

Complex integrate_on(const HomogeneousKernel& k, std::span<const ScalarField> inputs,
                     const std::vector<Box>& boxes, std::span<const double> x, Complex c0,
                     std::span<const std::optional<ScalarField>> beta,
                     const TruncationPolicy& policy, const QuadratureRule& rule) {
  if (inputs.size() != k.arity()) throw DomainError("operator needs one input per kernel slot");
  if (x.size() != k.dimension()) throw DomainError("output point has the wrong dimension");
  if (!beta.empty() && beta.size() != inputs.size())
    throw DomainError("beta needs one entry per slot");
  for (const auto& f : inputs)
    if (f.dimension() != k.dimension()) throw DomainError("input dimension mismatch");
  policy.validate();
  rule.validate();
  if (rule.kind == RuleKind::monte_carlo)
    return integrate_monte_carlo(k, inputs, boxes, x, c0, beta, policy, rule);
  return integrate_tensor(k, inputs, boxes, x, c0, beta, policy, rule);
}

}  // namespace

void TruncationPolicy::validate() const {
  if (!(pv_epsilon >= 1.0) || !std::isfinite(pv_epsilon))
    throw DomainError("pv_epsilon must be at least one node spacing");
  if (integration_box && integration_box->empty())
    throw DomainError("integration box is empty");
}

void OperatorEvaluation::validate() const {
  if (inputs.size() != kernel.arity()) throw DomainError("operator needs one input per slot");
  for (const auto& p : points)
    if (p.size() != kernel.dimension()) throw DomainError("output point has the wrong dimension");
  policy.validate();
  rule.validate();
}

Complex integrate_kernel(const HomogeneousKernel& k, std::span<const ScalarField> inputs,
                         std::span<const double> x, Complex c0,
                         std::span<const std::optional<ScalarField>> beta,
                         const TruncationPolicy& policy, const QuadratureRule& rule) {
  return integrate_on(k, inputs, slot_boxes(inputs, policy), x, c0, beta, policy, rule);
}

Complex apply_T(const OperatorEvaluation& eval, std::span<const double> x) {
  return integrate_kernel(eval.kernel, eval.inputs, x, 1.0, {}, eval.policy, eval.rule);
}

std::vector<Complex> apply_T(const OperatorEvaluation& eval) {
  std::vector<Complex> out;
  out.reserve(eval.points.size());
  for (const auto& p : eval.points) out.push_back(apply_T(eval, p));
  return out;
}

CommutatorValue commutator_single(const ScalarField& b, std::size_t i,
                                  const OperatorEvaluation& eval, std::span<const double> x) {
  if (i >= eval.inputs.size()) throw DomainError("commutator slot out of range");
  const Complex bx = checked_value(b, x);
  // Both forms share the lattice of the unmodified inputs.
  const auto boxes = slot_boxes(eval.inputs, eval.policy);
  CommutatorValue v;
  const Complex t = integrate_on(eval.kernel, eval.inputs, boxes, x, 1.0, {}, eval.policy,
                                 eval.rule);
  auto modified = eval.inputs;
  modified[i] = b * modified[i];
  v.difference_form =
      bx * t - integrate_on(eval.kernel, modified, boxes, x, 1.0, {}, eval.policy, eval.rule);
  std::vector<std::optional<ScalarField>> beta(eval.inputs.size());
  beta[i] = b.scaled(-1.0);
  v.kernel_form = integrate_on(eval.kernel, eval.inputs, boxes, x, bx, beta, eval.policy,
                               eval.rule);
  return v;
}

Complex commutator_sum(const FunctionTuple& b, const OperatorEvaluation& eval,
                       std::span<const double> x) {
  if (b.size() != eval.inputs.size()) throw DomainError("need one symbol per slot");
  Complex sum = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i)
    sum += commutator_single(b[i], i, eval, x).difference_form;
  return sum;
}

Complex commutator_sum_kernel_form(const FunctionTuple& b, const OperatorEvaluation& eval,
                                   std::span<const double> x) {
  if (b.size() != eval.inputs.size()) throw DomainError("need one symbol per slot");
  Complex c0 = 0.0;
  std::vector<std::optional<ScalarField>> beta;
  for (std::size_t i = 0; i < b.size(); ++i) {
    c0 += checked_value(b[i], x);
    beta.emplace_back(b[i].scaled(-1.0));
  }
  return integrate_kernel(eval.kernel, eval.inputs, x, c0, beta, eval.policy, eval.rule);
}

double truncation_stability(const OperatorEvaluation& eval, std::span<const double> x) {
  OperatorEvaluation fine = eval;
  fine.rule.points_per_dim *= 2;
  fine.rule.sample_count *= 2;
  return std::abs(apply_T(eval, x) - apply_T(fine, x));
}

double lp_norm_of_values(std::span<const Complex> values, const NodeSet& nodes, double p) {
  if (!(p > 0.0)) throw DomainError("L^p exponent must be positive");
  if (values.size() != nodes.size()) throw DomainError("values and nodes differ in length");
  double s = 0.0;
  for (std::size_t t = 0; t < values.size(); ++t)
    s += nodes.weights[t] * std::pow(std::abs(values[t]), p);
  return std::pow(s, 1.0 / p);
}

void check_holder(std::span<const double> p_list, double p) {
  if (p_list.empty()) throw DomainError("empty exponent list");
  double s = 0.0;
  for (double q : p_list) {
    if (!(q > 0.0)) throw DomainError("exponents must be positive");
    s += 1.0 / q;
  }
  if (!(p > 0.0) || std::abs(s - 1.0 / p) > 1e-12)
    throw DomainError("exponents violate sum 1/p_i = 1/p");
}

NormLowerBound operator_norm_lower_bound(const MultilinearOperator& op,
                                         const std::vector<std::vector<ScalarField>>& tests,
                                         std::span<const double> p_list, double p,
                                         const Box& domain, const QuadratureRule& output_rule,
                                         const QuadratureRule& input_rule) {
  check_holder(p_list, p);
  if (tests.empty()) throw DomainError("no test inputs");
  const NodeSet nodes = make_nodes(domain, output_rule);
  NormLowerBound out;
  for (std::size_t t = 0; t < tests.size(); ++t) {
    const auto& f = tests[t];
    if (f.size() != p_list.size()) throw DomainError("test tuple and exponent list differ");
    double denom = 1.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double nf = lp_norm(f[i], p_list[i], domain, input_rule);
      if (!(nf > 0.0)) throw DomainError("test input " + std::to_string(i) + " has zero norm");
      denom *= nf;
    }
    std::vector<Complex> values(nodes.size());
    for (std::size_t j = 0; j < nodes.size(); ++j) values[j] = op(f, nodes.point(j));
    const double ratio = lp_norm_of_values(values, nodes, p) / denom;
    out.ratios.push_back(ratio);
    if (t == 0 || ratio > out.value) {
      out.value = ratio;
      out.argmax = t;
    }
  }
  return out;
}

void write_evaluation_csv(std::ostream& os, const std::vector<std::vector<double>>& points,
                          std::span<const Complex> values) {
  if (points.size() != values.size()) throw DomainError("points and values differ in length");
  auto num = [](double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
  };
  const std::size_t n = points.empty() ? 1 : points.front().size();
  if (n == 1) {
    os << "x";
  } else {
    for (std::size_t a = 0; a < n; ++a) os << (a ? ",x_" : "x_") << a;
  }
  os << ",re,im\n";
  for (std::size_t t = 0; t < points.size(); ++t) {
    for (std::size_t a = 0; a < points[t].size(); ++a) os << (a ? "," : "") << num(points[t][a]);
    os << ',' << num(values[t].real()) << ',' << num(values[t].imag()) << '\n';
  }
}

}  // namespace bmo
