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

#include "bmolab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bmolab/error.hpp"

namespace bmo {

namespace {

std::string join(const std::vector<double>& v) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << v[i];
  }
  os << ')';
  return os.str();
}

}  // namespace

SingularNodeError::SingularNodeError(std::vector<double> node)
    : Error("quadrature node " + join(node) + " lies on the singular set of the integrand"),
      node_(std::move(node)) {}

NodeBudgetError::NodeBudgetError(std::size_t required, std::size_t budget)
    : Error("tensor rule needs " + std::to_string(required) + " nodes, budget is " +
            std::to_string(budget) + "; select monte-carlo with at least " +
            std::to_string(required) + " samples or reduce points_per_dim"),
      required_(required),
      budget_(budget) {}

KernelVanishesError::KernelVanishesError(std::vector<double> witness)
    : Error("kernel vanishes on the expansion ball near " + join(witness)),
      witness_(std::move(witness)) {}

ToleranceUnreachableError::ToleranceUnreachableError(double achieved, double tolerance,
                                                     std::size_t truncation)
    : Error([&] {
        std::ostringstream os;
        os.precision(6);
        os << "reconstruction error " << achieved << " exceeds tolerance " << tolerance
           << " with " << truncation << " modes";
        return os.str();
      }()),
      achieved_(achieved),
      truncation_(truncation) {}

ContainmentError::ContainmentError(std::vector<double> witness, double value, double bound)
    : Error([&] {
        std::ostringstream os;
        os.precision(17);
        os << "containment violated at " << join(witness) << ": " << value << " > " << bound;
        return os.str();
      }()),
      witness_(std::move(witness)) {}

ConfigError::ConfigError(std::string path, const std::string& message)
    : Error(path + ": " + message), path_(std::move(path)) {}

// ---------------------------------------------------------------------------

Box::Box(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.empty() || lower_.size() != upper_.size())
    throw DomainError("box bounds must be nonempty and of equal dimension");
}

double Box::volume() const {
  double v = 1.0;
  for (std::size_t a = 0; a < dimension(); ++a) v *= std::max(0.0, width(a));
  return v;
}

bool Box::empty() const {
  for (std::size_t a = 0; a < dimension(); ++a)
    if (!(upper_[a] > lower_[a])) return true;
  return false;
}

bool Box::contains(std::span<const double> x) const {
  if (x.size() != dimension()) throw DomainError("point dimension does not match box");
  for (std::size_t a = 0; a < dimension(); ++a)
    if (x[a] < lower_[a] || x[a] > upper_[a]) return false;
  return true;
}

Box Box::intersect(const Box& other) const {
  if (other.dimension() != dimension()) throw DomainError("box dimension mismatch");
  std::vector<double> lo(dimension()), hi(dimension());
  for (std::size_t a = 0; a < dimension(); ++a) {
    lo[a] = std::max(lower_[a], other.lower_[a]);
    hi[a] = std::min(upper_[a], other.upper_[a]);
  }
  return Box(std::move(lo), std::move(hi));
}

Box Box::hull(const Box& other) const {
  if (other.dimension() != dimension()) throw DomainError("box dimension mismatch");
  std::vector<double> lo(dimension()), hi(dimension());
  for (std::size_t a = 0; a < dimension(); ++a) {
    lo[a] = std::min(lower_[a], other.lower_[a]);
    hi[a] = std::max(upper_[a], other.upper_[a]);
  }
  return Box(std::move(lo), std::move(hi));
}

// ---------------------------------------------------------------------------

Cube::Cube(std::vector<double> center, double side) : center_(std::move(center)), side_(side) {
  if (center_.empty()) throw DomainError("cube dimension must be >= 1");
  if (!(side_ > 0.0) || !std::isfinite(side_)) throw DomainError("cube side must be positive");
  for (double c : center_)
    if (!std::isfinite(c)) throw DomainError("cube center must be finite");
}

double Cube::volume() const { return std::pow(side_, static_cast<double>(dimension())); }

bool Cube::contains(std::span<const double> x) const {
  if (x.size() != dimension()) throw DomainError("point dimension does not match cube");
  const double h = 0.5 * side_;
  for (std::size_t a = 0; a < dimension(); ++a)
    if (std::abs(x[a] - center_[a]) > h) return false;
  return true;
}

bool Cube::contains(const Cube& other) const {
  if (other.dimension() != dimension()) throw DomainError("cube dimension mismatch");
  // Small slack absorbs rounding in dyadic centers.
  const double slack = 1e-12 * side_;
  for (std::size_t a = 0; a < dimension(); ++a) {
    if (other.center_[a] - 0.5 * other.side_ < center_[a] - 0.5 * side_ - slack) return false;
    if (other.center_[a] + 0.5 * other.side_ > center_[a] + 0.5 * side_ + slack) return false;
  }
  return true;
}

bool Cube::disjoint(const Cube& other) const {
  if (other.dimension() != dimension()) throw DomainError("cube dimension mismatch");
  for (std::size_t a = 0; a < dimension(); ++a)
    if (std::abs(other.center_[a] - center_[a]) > 0.5 * (side_ + other.side_)) return true;
  return false;
}

Box Cube::box() const {
  std::vector<double> lo(dimension()), hi(dimension());
  for (std::size_t a = 0; a < dimension(); ++a) {
    lo[a] = center_[a] - 0.5 * side_;
    hi[a] = center_[a] + 0.5 * side_;
  }
  return Box(std::move(lo), std::move(hi));
}

Cube Cube::translated(std::span<const double> offset) const {
  if (offset.size() != dimension()) throw DomainError("offset dimension does not match cube");
  std::vector<double> c(center_);
  for (std::size_t a = 0; a < c.size(); ++a) c[a] += offset[a];
  return Cube(std::move(c), side_);
}

// ---------------------------------------------------------------------------

CubeFamily::CubeFamily(Cube root, int level_min, int level_max, bool include_translates,
                       std::size_t max_cubes)
    : root_(std::move(root)),
      level_min_(level_min),
      level_max_(level_max),
      include_translates_(include_translates) {
  if (level_min < 0 || level_max < level_min)
    throw DomainError("cube family needs 0 <= level_min <= level_max");
  if (level_max > 30) throw DomainError("cube family level_max must be <= 30");
  const std::size_t n = root_.dimension();

  for (int level = level_min; level <= level_max; ++level) {
    const long cells = 1L << level;
    const double side = root_.side() / static_cast<double>(cells);
    const std::size_t patterns = include_translates ? (std::size_t{1} << n) : 1;
    for (std::size_t shift = 0; shift < patterns; ++shift) {
      // Shifted lattices contain one cell fewer along every shifted axis.
      std::vector<long> count(n);
      bool any = true;
      for (std::size_t a = 0; a < n; ++a) {
        count[a] = ((shift >> a) & 1U) ? cells - 1 : cells;
        if (count[a] <= 0) any = false;
      }
      if (!any) continue;
      std::vector<long> idx(n, 0);
      while (true) {
        std::vector<double> c(n);
        for (std::size_t a = 0; a < n; ++a) {
          const double offset = ((shift >> a) & 1U) ? 1.0 : 0.5;
          c[a] = root_.center(a) - 0.5 * root_.side() + (static_cast<double>(idx[a]) + offset) * side;
        }
        members_.push_back(FamilyMember{members_.size(), level, shift != 0, Cube(std::move(c), side)});
        if (max_cubes && members_.size() == max_cubes) return;
        std::size_t a = 0;
        for (; a < n; ++a) {
          if (++idx[a] < count[a]) break;
          idx[a] = 0;
        }
        if (a == n) break;
      }
    }
  }
}

CubeFamily CubeFamily::from_cubes(Cube root, std::vector<Cube> cubes) {
  CubeFamily f(std::move(root));
  for (auto& q : cubes) {
    if (!f.root_.contains(q)) throw DomainError("family member is not contained in the root");
    const int level = static_cast<int>(std::lround(std::log2(f.root_.side() / q.side())));
    f.members_.push_back(FamilyMember{f.members_.size(), level, false, std::move(q)});
  }
  if (!f.members_.empty()) {
    f.level_min_ = f.members_.front().level;
    f.level_max_ = f.level_min_;
    for (const auto& m : f.members_) {
      f.level_min_ = std::min(f.level_min_, m.level);
      f.level_max_ = std::max(f.level_max_, m.level);
    }
  }
  return f;
}

}  // namespace bmo
