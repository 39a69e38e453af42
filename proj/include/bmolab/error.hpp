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
#include <stdexcept>
#include <string>
#include <vector>

namespace bmo {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or violated precondition (dimension mismatch, bad side, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A quadrature node landed exactly on the singular set of a field.
class SingularNodeError : public Error {
 public:
  explicit SingularNodeError(std::vector<double> node);
  const std::vector<double>& node() const noexcept { return node_; }

 private:
  std::vector<double> node_;
};

class EmptyRuleError : public Error {
 public:
  EmptyRuleError() : Error("quadrature rule produced no nodes") {}
};

/// The tensor rule would need more nodes than the configured budget.
class NodeBudgetError : public Error {
 public:
  NodeBudgetError(std::size_t required, std::size_t budget);
  std::size_t required() const noexcept { return required_; }
  std::size_t budget() const noexcept { return budget_; }

 private:
  std::size_t required_;
  std::size_t budget_;
};

/// Kernel evaluated at the origin (or a configuration on the full diagonal).
class SingularityError : public Error {
 public:
  using Error::Error;
};

class KernelVanishesError : public Error {
 public:
  explicit KernelVanishesError(std::vector<double> witness);
  const std::vector<double>& witness() const noexcept { return witness_; }

 private:
  std::vector<double> witness_;
};

class ToleranceUnreachableError : public Error {
 public:
  ToleranceUnreachableError(double achieved, double tolerance, std::size_t truncation);
  double achieved() const noexcept { return achieved_; }
  std::size_t truncation() const noexcept { return truncation_; }

 private:
  double achieved_;
  std::size_t truncation_;
};

/// Geometric containment failed; carries the offending configuration.
class ContainmentError : public Error {
 public:
  ContainmentError(std::vector<double> witness, double value, double bound);
  const std::vector<double>& witness() const noexcept { return witness_; }

 private:
  std::vector<double> witness_;
};

/// Configuration validation failure; `path` names the offending field.
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& message);
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace bmo
