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

#include "bmolab/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "bmolab/error.hpp"

namespace bmo {

using nlohmann::json;

namespace {

Verdict verdict_from_string(const std::string& s) {
  if (s == "pass") return Verdict::pass;
  if (s == "fail") return Verdict::fail;
  if (s == "diverged") return Verdict::diverged;
  throw DomainError("unknown verdict '" + s + "'");
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out + "\"";
}

}  // namespace

ReportRow ReportRow::cube(const FamilyMember& member, std::string name, double value,
                          std::optional<Verdict> verdict) {
  ReportRow r;
  r.cube_id = member.id;
  r.level = member.level;
  r.center.assign(member.cube.center().begin(), member.cube.center().end());
  r.side = member.cube.side();
  r.name = std::move(name);
  r.value = value;
  r.verdict = verdict;
  return r;
}

ReportRow ReportRow::global(std::string name, double value, std::optional<Verdict> verdict) {
  ReportRow r;
  r.name = std::move(name);
  r.value = value;
  r.verdict = verdict;
  return r;
}

std::size_t ReportBundle::count(Verdict v) const {
  std::size_t c = 0;
  for (const auto& r : rows)
    if (r.verdict == v) ++c;
  return c;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

double number_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    if (s == "nan") return NAN;
  }
  throw DomainError("expected a number");
}

json ReportBundle::to_json(bool with_timing) const {
  json rs = json::array();
  for (const auto& r : rows) {
    json e = {{"name", r.name}, {"value", json_number(r.value)}};
    if (r.cube_id) e["cube_id"] = *r.cube_id;
    if (r.level) e["level"] = *r.level;
    if (!r.center.empty()) e["center"] = r.center;
    if (r.side) e["side"] = *r.side;
    e["verdict"] = r.verdict ? json(to_string(*r.verdict)) : json(nullptr);
    rs.push_back(e);
  }
  json j = {{"tool", "bmolab"},
            {"subcommand", subcommand},
            {"config", config},
            {"config_hash", config_hash},
            {"dimension", dimension},
            {"results", results},
            {"rows", rs},
            {"summary",
             {{"pass", count(Verdict::pass)},
              {"fail", count(Verdict::fail)},
              {"diverged", count(Verdict::diverged)},
              {"all_pass", !any_fail()}}}};
  if (with_timing) {
    json t = json::object();
    for (const auto& [stage, seconds] : timing) t[stage] = seconds;
    j["timing"] = t;
  }
  return j;
}

ReportBundle ReportBundle::from_json(const json& j) {
  try {
    ReportBundle b;
    b.subcommand = j.at("subcommand").get<std::string>();
    b.config = j.at("config");
    b.config_hash = j.at("config_hash").get<std::string>();
    b.dimension = j.at("dimension").get<std::size_t>();
    b.results = j.at("results");
    for (const auto& e : j.at("rows")) {
      ReportRow r;
      r.name = e.at("name").get<std::string>();
      r.value = number_from_json(e.at("value"));
      if (e.contains("cube_id")) r.cube_id = e["cube_id"].get<std::size_t>();
      if (e.contains("level")) r.level = e["level"].get<int>();
      if (e.contains("center")) r.center = e["center"].get<std::vector<double>>();
      if (e.contains("side")) r.side = e["side"].get<double>();
      if (!e.at("verdict").is_null()) r.verdict = verdict_from_string(e["verdict"].get<std::string>());
      b.rows.push_back(std::move(r));
    }
    if (j.contains("timing"))
      for (const auto& [stage, seconds] : j["timing"].items())
        b.timing.emplace_back(stage, seconds.get<double>());
    return b;
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed report JSON: ") + e.what());
  }
}

void write_json(const ReportBundle& bundle, std::ostream& os) {
  os << bundle.to_json(true).dump(2) << '\n';
}

void write_csv(const ReportBundle& bundle, std::ostream& os) {
  os << "cube_id,level";
  for (std::size_t a = 0; a < bundle.dimension; ++a) os << ",center_" << a;
  os << ",side,name,value,verdict\n";
  for (const auto& r : bundle.rows) {
    if (r.cube_id) os << *r.cube_id;
    os << ',';
    if (r.level) os << *r.level;
    for (std::size_t a = 0; a < bundle.dimension; ++a) {
      os << ',';
      if (a < r.center.size()) os << format_number(r.center[a]);
    }
    os << ',';
    if (r.side) os << format_number(*r.side);
    os << ',' << csv_field(r.name) << ',' << format_number(r.value) << ','
       << (r.verdict ? to_string(*r.verdict) : "info") << '\n';
  }
}

EmitFormat parse_format(const std::string& s) {
  if (s == "json") return EmitFormat::json;
  if (s == "csv") return EmitFormat::csv;
  if (s == "both") return EmitFormat::both;
  throw ConfigError("--format", "must be json, csv or both");
}

std::vector<std::filesystem::path> emit(const ReportBundle& bundle, EmitFormat format,
                                        const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  auto open = [&](const std::string& ext) {
    auto path = dir / (bundle.subcommand + ext);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot write " + path.string());
    written.push_back(path);
    return os;
  };
  if (format != EmitFormat::csv) {
    auto os = open(".json");
    write_json(bundle, os);
    if (!os) throw Error("write failed: " + written.back().string());
  }
  if (format != EmitFormat::json) {
    auto os = open(".csv");
    write_csv(bundle, os);
    if (!os) throw Error("write failed: " + written.back().string());
  }
  return written;
}

}  // namespace bmo
