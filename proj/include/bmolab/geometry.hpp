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

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace bmo {

class Cube;

/// Axis-parallel box [lower, upper] in R^n. Used for supports and node sets;
/// a Cube is the special case of equal side lengths.
class Box {
 public:
  Box(std::vector<double> lower, std::vector<double> upper);

  std::size_t dimension() const noexcept { return lower_.size(); }
  double lower(std::size_t axis) const { return lower_.at(axis); }
  double upper(std::size_t axis) const { return upper_.at(axis); }
  double width(std::size_t axis) const { return upper_.at(axis) - lower_.at(axis); }
  double volume() const;
  bool empty() const;
  bool contains(std::span<const double> x) const;

  /// Intersection; the result may be empty (some width <= 0).
  Box intersect(const Box& other) const;
  /// Smallest box containing both.
  Box hull(const Box& other) const;

  bool operator==(const Box&) const = default;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

/// Axis-parallel cube Q(center, side) in R^n.
class Cube {
 public:
  Cube(std::vector<double> center, double side);

  std::size_t dimension() const noexcept { return center_.size(); }
  std::span<const double> center() const noexcept { return center_; }
  double center(std::size_t axis) const { return center_.at(axis); }
  double side() const noexcept { return side_; }
  double volume() const;

  /// Closed membership: max_j |x_j - c_j| <= side/2.
  bool contains(std::span<const double> x) const;
  bool contains(const Cube& other) const;
  bool disjoint(const Cube& other) const;

  Box box() const;
  Cube translated(std::span<const double> offset) const;

  bool operator==(const Cube&) const = default;

 private:
  std::vector<double> center_;
  double side_;
};

struct FamilyMember {
  std::size_t id = 0;
  int level = 0;
  bool translate = false;
  Cube cube;
};

/// Finite stand-in for "all cubes": dyadic subcubes of a root between two
/// depths, optionally with lattices shifted by half a side. Members are
/// ordered by level, then shift pattern, then lattice index.
class CubeFamily {
 public:
  CubeFamily(Cube root, int level_min, int level_max, bool include_translates,
             std::size_t max_cubes = 0);

  /// Wrap an explicit list (used for ad hoc families in tests and reports).
  static CubeFamily from_cubes(Cube root, std::vector<Cube> cubes);

  const Cube& root() const noexcept { return root_; }
  int level_min() const noexcept { return level_min_; }
  int level_max() const noexcept { return level_max_; }
  bool include_translates() const noexcept { return include_translates_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  const std::vector<FamilyMember>& members() const noexcept { return members_; }
  const FamilyMember& operator[](std::size_t i) const { return members_.at(i); }

 private:
  CubeFamily(Cube root) : root_(std::move(root)) {}

  Cube root_;
  int level_min_ = 0;
  int level_max_ = 0;
  bool include_translates_ = false;
  std::vector<FamilyMember> members_;
};

}  // namespace bmo
