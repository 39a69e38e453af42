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

#include "bmolab/field.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bmolab/error.hpp"

namespace bmo {

struct ScalarField::Node {
  enum class Kind {
    constant,
    coordinate,
    abs,
    log_abs,
    sign,
    indicator,
    sine,
    modulated,
    random_piecewise,
    threshold_sign,
    dilate,
    scale,
    product,
    sum,
    shift,
  };

  Kind kind = Kind::constant;
  std::size_t dim = 1;
  Complex value{};            // constant, scale, shift
  std::size_t axis = 0;       // coordinate, sign
  double scalar = 1.0;        // coordinate scale, dilation, cell width, threshold
  std::vector<double> vec;    // omega / frequency
  std::optional<Cube> cube;   // indicator, modulated, threshold_sign
  std::uint64_t seed = 0;
  int levels = 0;
  std::vector<std::shared_ptr<const Node>> children;
};

namespace {

using Node = ScalarField::Node;
using Kind = Node::Kind;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

Complex eval(const Node& n, std::span<const double> x) {
  switch (n.kind) {
    case Kind::constant:
      return n.value;
    case Kind::coordinate:
      return n.scalar * x[n.axis];
    case Kind::abs:
      return norm2(x);
    case Kind::log_abs:
      return std::log(norm2(x));
    case Kind::sign:
      return x[n.axis] >= 0.0 ? 1.0 : -1.0;
    case Kind::indicator:
      return n.cube->contains(x) ? 1.0 : 0.0;
    case Kind::sine: {
      double t = 0.0;
      for (std::size_t a = 0; a < x.size(); ++a) t += n.vec[a] * x[a];
      return std::sin(t);
    }
    case Kind::modulated: {
      if (!n.cube->contains(x)) return 0.0;
      double t = 0.0;
      for (std::size_t a = 0; a < x.size(); ++a) t += n.vec[a] * x[a];
      Complex v = std::polar(1.0, t);
      if (!n.children.empty()) v *= eval(*n.children[0], x);
      return v;
    }
    case Kind::random_piecewise: {
      std::uint64_t h = splitmix64(n.seed);
      for (std::size_t a = 0; a < x.size(); ++a) {
        const auto cell = static_cast<std::int64_t>(std::floor(x[a] / n.scalar));
        h = splitmix64(h ^ static_cast<std::uint64_t>(cell));
      }
      const auto level = static_cast<int>(h % static_cast<std::uint64_t>(n.levels));
      return -1.0 + 2.0 * static_cast<double>(level) / static_cast<double>(n.levels - 1);
    }
    case Kind::threshold_sign: {
      if (!n.cube->contains(x)) return 0.0;
      const double d = n.scalar - eval(*n.children[0], x).real();
      return d >= 0.0 ? 1.0 : -1.0;
    }
    case Kind::dilate: {
      std::vector<double> y(x.begin(), x.end());
      for (double& v : y) v /= n.scalar;
      return eval(*n.children[0], y);
    }
    case Kind::scale:
      return n.value * eval(*n.children[0], x);
    case Kind::product:
      return eval(*n.children[0], x) * eval(*n.children[1], x);
    case Kind::sum:
      return eval(*n.children[0], x) + eval(*n.children[1], x);
    case Kind::shift:
      return eval(*n.children[0], x) + n.value;
  }
  return 0.0;
}

bool real_node(const Node& n) {
  switch (n.kind) {
    case Kind::constant:
      return n.value.imag() == 0.0;
    case Kind::modulated:
      return std::all_of(n.vec.begin(), n.vec.end(), [](double w) { return w == 0.0; }) &&
             (n.children.empty() || real_node(*n.children[0]));
    case Kind::scale:
    case Kind::shift:
      return n.value.imag() == 0.0 && real_node(*n.children[0]);
    case Kind::dilate:
    case Kind::product:
    case Kind::sum:
      return std::all_of(n.children.begin(), n.children.end(),
                         [](const auto& c) { return real_node(*c); });
    default:
      return true;
  }
}

std::optional<Box> support_of(const Node& n) {
  switch (n.kind) {
    case Kind::indicator:
    case Kind::threshold_sign:
      return n.cube->box();
    case Kind::modulated: {
      Box b = n.cube->box();
      if (!n.children.empty())
        if (auto w = support_of(*n.children[0])) b = b.intersect(*w);
      return b;
    }
    case Kind::constant:
      return std::nullopt;
    case Kind::dilate: {
      auto s = support_of(*n.children[0]);
      if (!s) return s;
      std::vector<double> lo(s->dimension()), hi(s->dimension());
      for (std::size_t a = 0; a < lo.size(); ++a) {
        const double p = s->lower(a) * n.scalar, q = s->upper(a) * n.scalar;
        lo[a] = std::min(p, q);
        hi[a] = std::max(p, q);
      }
      return Box(lo, hi);
    }
    case Kind::scale:
      return support_of(*n.children[0]);
    case Kind::product: {
      auto a = support_of(*n.children[0]);
      auto b = support_of(*n.children[1]);
      if (a && b) return a->intersect(*b);
      return a ? a : b;
    }
    case Kind::sum: {
      auto a = support_of(*n.children[0]);
      auto b = support_of(*n.children[1]);
      if (a && b) return a->hull(*b);
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

bool singular(const Node& n, std::span<const double> x) {
  switch (n.kind) {
    case Kind::log_abs:
      return std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; });
    case Kind::threshold_sign:
    case Kind::modulated:
      return n.cube->contains(x) && !n.children.empty() && singular(*n.children[0], x);
    case Kind::dilate: {
      std::vector<double> y(x.begin(), x.end());
      for (double& v : y) v /= n.scalar;
      return singular(*n.children[0], y);
    }
    default:
      return std::any_of(n.children.begin(), n.children.end(),
                         [&](const auto& c) { return singular(*c, x); });
  }
}

bool has_singular(const Node& n) {
  if (n.kind == Kind::log_abs) return true;
  return std::any_of(n.children.begin(), n.children.end(),
                     [](const auto& c) { return has_singular(*c); });
}

void put_vec(std::ostream& os, std::span<const double> v) {
  os << '[';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ']';
}

void put_complex(std::ostream& os, Complex c) {
  os << c.real();
  if (c.imag() != 0.0) os << (c.imag() < 0 ? "" : "+") << c.imag() << 'i';
}

void describe(const Node& n, std::ostream& os) {
  switch (n.kind) {
    case Kind::constant:
      os << "constant(";
      put_complex(os, n.value);
      os << ")";
      break;
    case Kind::coordinate:
      os << "coordinate(axis=" << n.axis << ",scale=" << n.scalar << ")";
      break;
    case Kind::abs:
      os << "abs";
      break;
    case Kind::log_abs:
      os << "log_abs";
      break;
    case Kind::sign:
      os << "sign(axis=" << n.axis << ")";
      break;
    case Kind::indicator:
      os << "indicator(center=";
      put_vec(os, n.cube->center());
      os << ",side=" << n.cube->side() << ")";
      break;
    case Kind::sine:
      os << "sin(omega=";
      put_vec(os, n.vec);
      os << ")";
      break;
    case Kind::modulated:
      os << "modulated_indicator(frequency=";
      put_vec(os, n.vec);
      os << ",center=";
      put_vec(os, n.cube->center());
      os << ",side=" << n.cube->side();
      if (!n.children.empty()) {
        os << ",weight=";
        describe(*n.children[0], os);
      }
      os << ")";
      break;
    case Kind::random_piecewise:
      os << "random_piecewise(seed=" << n.seed << ",levels=" << n.levels << ",cell=" << n.scalar
         << ")";
      break;
    case Kind::threshold_sign:
      os << "threshold_sign(t=" << n.scalar << ",center=";
      put_vec(os, n.cube->center());
      os << ",side=" << n.cube->side() << ",base=";
      describe(*n.children[0], os);
      os << ")";
      break;
    case Kind::dilate:
      os << "dilate(" << n.scalar << ",";
      describe(*n.children[0], os);
      os << ")";
      break;
    case Kind::scale:
      os << "scale(";
      put_complex(os, n.value);
      os << ",";
      describe(*n.children[0], os);
      os << ")";
      break;
    case Kind::product:
    case Kind::sum:
      os << (n.kind == Kind::product ? "product(" : "sum(");
      describe(*n.children[0], os);
      os << ",";
      describe(*n.children[1], os);
      os << ")";
      break;
    case Kind::shift:
      os << "shift(";
      put_complex(os, n.value);
      os << ",";
      describe(*n.children[0], os);
      os << ")";
      break;
  }
}

void check_dim(std::size_t d) {
  if (d < 1 || d > 3) throw DomainError("field dimension must be 1, 2 or 3");
}

}  // namespace

ScalarField ScalarField::constant(Complex value, std::size_t dimension) {
  check_dim(dimension);
  auto n = std::make_shared<Node>();
  n->kind = Kind::constant;
  n->dim = dimension;
  n->value = value;
  return ScalarField(std::move(n));
}

ScalarField ScalarField::coordinate(std::size_t dimension, std::size_t axis, double scale) {
  check_dim(dimension);
  if (axis >= dimension) throw DomainError("coordinate axis out of range");
  auto n = std::make_shared<Node>();
  n->kind = Kind::coordinate;
  n->dim = dimension;
  n->axis = axis;
  n->scalar = scale;
  return ScalarField(std::move(n));
}

ScalarField ScalarField::abs(std::size_t dimension) {
  check_dim(dimension);
  auto n = std::make_shared<Node>();
  n->kind = Kind::abs;
  n->dim = dimension;
  return ScalarField(std::move(n));
}

ScalarField ScalarField::log_abs(std::size_t dimension) {
  check_dim(dimension);
  auto n = std::make_shared<Node>();
  n->kind = Kind::log_abs;
  n->dim = dimension;
  return ScalarField(std::move(n));
}

ScalarField ScalarField::sign(std::size_t dimension, std::size_t axis) {
  check_dim(dimension);
  if (axis >= dimension) throw DomainError("sign axis out of range");
  auto n = std::make_shared<Node>();
  n->kind = Kind::sign;
  n->dim = dimension;
  n->axis = axis;
  return ScalarField(std::move(n));
}

ScalarField ScalarField::indicator(Cube cube) {
  check_dim(cube.dimension());
  auto n = std::make_shared<Node>();
  n->kind = Kind::indicator;
  n->dim = cube.dimension();
  n->cube = std::move(cube);
  return ScalarField(std::move(n));
}

ScalarField ScalarField::sine(std::vector<double> omega) {
  check_dim(omega.size());
  auto n = std::make_shared<Node>();
  n->kind = Kind::sine;
  n->dim = omega.size();
  n->vec = std::move(omega);
  return ScalarField(std::move(n));
}

ScalarField ScalarField::modulated_indicator(std::vector<double> frequency, Cube cube,
                                             std::optional<ScalarField> weight) {
  check_dim(cube.dimension());
  if (frequency.size() != cube.dimension())
    throw DomainError("modulation frequency dimension does not match cube");
  if (weight && weight->dimension() != cube.dimension())
    throw DomainError("modulation weight dimension does not match cube");
  auto n = std::make_shared<Node>();
  n->kind = Kind::modulated;
  n->dim = cube.dimension();
  n->vec = std::move(frequency);
  n->cube = std::move(cube);
  if (weight) n->children.push_back(weight->node_);
  return ScalarField(std::move(n));
}

ScalarField ScalarField::random_piecewise(std::size_t dimension, std::uint64_t seed, int levels,
                                          double cell) {
  check_dim(dimension);
  if (levels < 2) throw DomainError("random_piecewise needs at least 2 levels");
  if (!(cell > 0.0)) throw DomainError("random_piecewise cell width must be positive");
  auto n = std::make_shared<Node>();
  n->kind = Kind::random_piecewise;
  n->dim = dimension;
  n->seed = seed;
  n->levels = levels;
  n->scalar = cell;
  return ScalarField(std::move(n));
}

ScalarField ScalarField::threshold_sign(ScalarField base, double threshold, Cube support) {
  if (base.dimension() != support.dimension())
    throw DomainError("threshold_sign base dimension does not match cube");
  auto n = std::make_shared<Node>();
  n->kind = Kind::threshold_sign;
  n->dim = support.dimension();
  n->scalar = threshold;
  n->cube = std::move(support);
  n->children.push_back(base.node_);
  return ScalarField(std::move(n));
}

ScalarField ScalarField::dilated(double lambda) const {
  if (!(lambda > 0.0)) throw DomainError("dilation factor must be positive");
  auto n = std::make_shared<Node>();
  n->kind = Kind::dilate;
  n->dim = dimension();
  n->scalar = lambda;
  n->children.push_back(node_);
  return ScalarField(std::move(n));
}

ScalarField ScalarField::scaled(Complex factor) const {
  auto n = std::make_shared<Node>();
  n->kind = Kind::scale;
  n->dim = dimension();
  n->value = factor;
  n->children.push_back(node_);
  return ScalarField(std::move(n));
}

ScalarField ScalarField::operator*(const ScalarField& other) const {
  if (other.dimension() != dimension()) throw DomainError("field dimension mismatch");
  auto n = std::make_shared<Node>();
  n->kind = Kind::product;
  n->dim = dimension();
  n->children = {node_, other.node_};
  return ScalarField(std::move(n));
}

ScalarField ScalarField::operator+(const ScalarField& other) const {
  if (other.dimension() != dimension()) throw DomainError("field dimension mismatch");
  auto n = std::make_shared<Node>();
  n->kind = Kind::sum;
  n->dim = dimension();
  n->children = {node_, other.node_};
  return ScalarField(std::move(n));
}

ScalarField ScalarField::operator-(const ScalarField& other) const {
  return *this + other.scaled(-1.0);
}

ScalarField ScalarField::operator+(Complex c) const {
  auto n = std::make_shared<Node>();
  n->kind = Kind::shift;
  n->dim = dimension();
  n->value = c;
  n->children.push_back(node_);
  return ScalarField(std::move(n));
}

Complex ScalarField::operator()(std::span<const double> x) const {
  if (x.size() != node_->dim) throw DomainError("evaluation point dimension does not match field");
  return eval(*node_, x);
}

std::size_t ScalarField::dimension() const noexcept { return node_->dim; }
bool ScalarField::is_real() const noexcept { return real_node(*node_); }
std::optional<Box> ScalarField::support() const { return support_of(*node_); }

bool ScalarField::singular_at(std::span<const double> x) const {
  if (x.size() != node_->dim) throw DomainError("evaluation point dimension does not match field");
  return singular(*node_, x);
}

bool ScalarField::has_singular_set() const noexcept { return has_singular(*node_); }

std::string ScalarField::describe() const {
  std::ostringstream os;
  os.precision(17);
  bmo::describe(*node_, os);
  return os.str();
}

}  // namespace bmo
