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
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "bmolab/geometry.hpp"
#include "bmolab/verdict.hpp"
#include "json.hpp"

namespace bmo {

/// One (cube, quantity) pair. Rows without a cube leave the cube columns
/// empty; rows without a verdict are informational.
struct ReportRow {
  std::optional<std::size_t> cube_id;
  std::optional<int> level;
  std::vector<double> center;
  std::optional<double> side;
  std::string name;
  double value = 0.0;
  std::optional<Verdict> verdict;

  static ReportRow cube(const FamilyMember& member, std::string name, double value,
                        std::optional<Verdict> verdict = std::nullopt);
  static ReportRow global(std::string name, double value,
                          std::optional<Verdict> verdict = std::nullopt);

  bool operator==(const ReportRow&) const = default;
};

struct ReportBundle {
  std::string subcommand;
  nlohmann::json config = nlohmann::json::object();
  std::string config_hash;
  std::size_t dimension = 1;  ///< number of center columns in the CSV
  nlohmann::json results = nlohmann::json::object();
  std::vector<ReportRow> rows;
  std::vector<std::pair<std::string, double>> timing;  ///< seconds per stage

  std::size_t count(Verdict v) const;
  bool any_fail() const { return count(Verdict::fail) > 0; }

  nlohmann::json to_json(bool with_timing = true) const;
  static ReportBundle from_json(const nlohmann::json& j);
};

/// 17 significant digits, '.' as decimal point; "inf", "-inf" and "nan" for
/// non-finite values.
std::string format_number(double v);
/// JSON number, or one of the strings above for non-finite values.
nlohmann::json json_number(double v);
double number_from_json(const nlohmann::json& j);

void write_json(const ReportBundle& bundle, std::ostream& os);
/// Columns cube_id, level, center_0.., side, name, value, verdict.
void write_csv(const ReportBundle& bundle, std::ostream& os);

enum class EmitFormat { json, csv, both };
EmitFormat parse_format(const std::string& s);

/// Writes <dir>/<subcommand>.json and/or .csv; returns the paths written.
std::vector<std::filesystem::path> emit(const ReportBundle& bundle, EmitFormat format,
                                        const std::filesystem::path& dir);

}  // namespace bmo
