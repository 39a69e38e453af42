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

#include "bmolab/config.hpp"

#include <openssl/sha.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "bmolab/error.hpp"

namespace bmo {

using nlohmann::json;

namespace {

// Field reader that tracks the dotted path and rejects unknown keys.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }
  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key, double def) {
    if (!has(key)) return def;
    const auto& v = j_.at(key);
    if (!v.is_number()) throw ConfigError(at(key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(at(key), "must be finite");
    return d;
  }
  std::uint64_t unsigned_int(const std::string& key, std::uint64_t def) {
    if (!has(key)) return def;
    return as_unsigned(j_.at(key), at(key));
  }
  int integer(const std::string& key, int def) {
    if (!has(key)) return def;
    const auto& v = j_.at(key);
    if (!v.is_number_integer()) throw ConfigError(at(key), "expected an integer");
    return v.get<int>();
  }
  bool boolean(const std::string& key, bool def) {
    if (!has(key)) return def;
    const auto& v = j_.at(key);
    if (!v.is_boolean()) throw ConfigError(at(key), "expected true or false");
    return v.get<bool>();
  }
  std::string string(const std::string& key, const std::string& def) {
    if (!has(key)) return def;
    const auto& v = j_.at(key);
    if (!v.is_string()) throw ConfigError(at(key), "expected a string");
    return v.get<std::string>();
  }
  std::vector<double> vector(const std::string& key, std::vector<double> def) {
    if (!has(key)) return def;
    const auto& v = j_.at(key);
    if (!v.is_array()) throw ConfigError(at(key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number())
        throw ConfigError(at(key) + "[" + std::to_string(i) + "]", "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  void finish() const {
    for (const auto& [key, value] : j_.items())
      if (!seen_.count(key)) throw ConfigError(at(key), "unknown field");
  }

  static std::uint64_t as_unsigned(const json& v, const std::string& path) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
      return static_cast<std::uint64_t>(v.get<std::int64_t>());
    throw ConfigError(path, "expected a nonnegative integer");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& path, const std::string& message) {
  if (!ok) throw ConfigError(path, message);
}

const std::set<std::string> kDescriptors = {"constant", "coordinate",      "abs",
                                            "log_abs",  "sign",            "indicator",
                                            "sin",      "random_piecewise"};

FunctionSpec parse_function(const json& j, const std::string& path, std::size_t n) {
  Reader r(j, path);
  FunctionSpec f;
  f.descriptor = r.string("descriptor", "");
  if (!kDescriptors.count(f.descriptor))
    throw ConfigError(r.at("descriptor"), "unknown descriptor '" + f.descriptor + "'");
  if (r.has("seed")) f.seed = Reader::as_unsigned(r.raw("seed"), r.at("seed"));
  json empty = json::object();
  const json& pj = r.has("params") ? r.raw("params") : empty;
  Reader p(pj, r.at("params"));
  json& out = f.params;
  const auto& d = f.descriptor;
  if (d == "constant") {
    out["value"] = p.number("value", 1.0);
  } else if (d == "coordinate" || d == "sign") {
    const auto axis = p.unsigned_int("axis", 0);
    require(axis < n, p.at("axis"), "axis out of range");
    out["axis"] = axis;
    if (d == "coordinate") out["scale"] = p.number("scale", 1.0);
  } else if (d == "indicator") {
    auto c = p.vector("center", std::vector<double>(n, 0.0));
    require(c.size() == n, p.at("center"), "center must have n entries");
    const double side = p.number("side", 1.0);
    require(side > 0.0, p.at("side"), "side must be positive");
    out["center"] = c;
    out["side"] = side;
  } else if (d == "sin") {
    auto w = p.vector("omega", std::vector<double>(n, 1.0));
    require(w.size() == n, p.at("omega"), "omega must have n entries");
    out["omega"] = w;
  } else if (d == "random_piecewise") {
    require(f.seed.has_value(), r.at("seed"), "random_piecewise requires a seed");
    const int levels = p.integer("levels", 5);
    require(levels >= 2, p.at("levels"), "levels must be at least 2");
    const double cell = p.number("cell", 0.25);
    require(cell > 0.0, p.at("cell"), "cell must be positive");
    out["levels"] = levels;
    out["cell"] = cell;
  }
  p.finish();
  r.finish();
  return f;
}

}  // namespace

ScalarField FunctionSpec::build(std::size_t n) const {
  const auto& p = params;
  if (descriptor == "constant") return ScalarField::constant(p.at("value").get<double>(), n);
  if (descriptor == "coordinate")
    return ScalarField::coordinate(n, p.at("axis").get<std::size_t>(), p.at("scale").get<double>());
  if (descriptor == "abs") return ScalarField::abs(n);
  if (descriptor == "log_abs") return ScalarField::log_abs(n);
  if (descriptor == "sign") return ScalarField::sign(n, p.at("axis").get<std::size_t>());
  if (descriptor == "indicator")
    return ScalarField::indicator(
        Cube(p.at("center").get<std::vector<double>>(), p.at("side").get<double>()));
  if (descriptor == "sin") return ScalarField::sine(p.at("omega").get<std::vector<double>>());
  if (descriptor == "random_piecewise")
    return ScalarField::random_piecewise(n, seed.value(), p.at("levels").get<int>(),
                                         p.at("cell").get<double>());
  throw DomainError("unknown descriptor " + descriptor);
}

std::string FunctionSpec::label(std::size_t index) const {
  return descriptor + "#" + std::to_string(index);
}

ExperimentConfig ExperimentConfig::parse(const json& j) {
  Reader r(j, "");
  ExperimentConfig c;
  require(r.has("seed"), "seed", "required (all randomness is seeded in-config)");
  c.seed = Reader::as_unsigned(r.raw("seed"), "seed");
  c.m = r.unsigned_int("m", 1);
  c.n = r.unsigned_int("n", 1);
  require(c.m >= 1 && c.m <= 6, "m", "must lie in 1..6");
  require(c.n >= 1 && c.n <= 3, "n", "must lie in 1..3");
  c.p = r.number("p", 2.0);
  require(c.p > 0.0, "p", "must be positive");
  c.p_list = r.vector("p_list", std::vector<double>(c.m, c.p * double(c.m)));
  require(c.p_list.size() == c.m, "p_list", "must have m entries");
  double s = 0.0;
  for (std::size_t i = 0; i < c.m; ++i) {
    require(c.p_list[i] > 0.0, "p_list[" + std::to_string(i) + "]", "must be positive");
    s += 1.0 / c.p_list[i];
  }
  require(std::abs(s - 1.0 / c.p) <= 1e-12, "p_list", "sum of 1/p_i must equal 1/p");

  if (r.has("functions")) {
    const auto& fs = r.raw("functions");
    require(fs.is_array(), "functions", "expected an array");
    for (std::size_t i = 0; i < fs.size(); ++i)
      c.functions.push_back(parse_function(fs[i], "functions[" + std::to_string(i) + "]", c.n));
  }
  c.tuple_mode = r.string("tuple_mode", c.tuple_mode);
  require(c.tuple_mode == "replicate" || c.tuple_mode == "tuple", "tuple_mode",
          "must be 'replicate' or 'tuple'");
  if (c.tuple_mode == "tuple")
    require(c.functions.size() == c.m, "functions", "tuple mode needs exactly m functions");

  if (r.has("root_box")) {
    Reader rb(r.raw("root_box"), "root_box");
    c.root_center = rb.vector("center", {});
    c.root_side = rb.number("side", c.root_side);
    rb.finish();
  }
  if (c.root_center.empty()) c.root_center.assign(c.n, 0.0);
  require(c.root_center.size() == c.n, "root_box.center", "must have n entries");
  require(c.root_side > 0.0, "root_box.side", "must be positive");
  c.level_min = r.integer("level_min", c.level_min);
  c.level_max = r.integer("level_max", c.level_max);
  require(c.level_min >= 0, "level_min", "must be nonnegative");
  require(c.level_max >= c.level_min && c.level_max <= 12, "level_max",
          "must lie in level_min..12");
  c.include_translates = r.boolean("include_translates", c.include_translates);
  c.max_cubes = r.unsigned_int("max_cubes", 0);

  c.quadrature.seed = c.seed;
  if (r.has("quadrature")) {
    Reader q(r.raw("quadrature"), "quadrature");
    auto& d = c.quadrature;
    d.kind = q.string("kind", d.kind);
    require(d.kind == "tensor" || d.kind == "monte_carlo", "quadrature.kind",
            "must be 'tensor' or 'monte_carlo'");
    d.points_per_dim = q.unsigned_int("points_per_dim", d.points_per_dim);
    require(d.points_per_dim >= 2, "quadrature.points_per_dim", "must be at least 2");
    d.mc_samples = q.unsigned_int("mc_samples", d.mc_samples);
    require(d.mc_samples >= 2, "quadrature.mc_samples", "must be at least 2");
    const bool seeded = q.has("seed");
    if (seeded) d.seed = Reader::as_unsigned(q.raw("seed"), "quadrature.seed");
    require(seeded || d.kind != "monte_carlo", "quadrature.seed",
            "monte_carlo quadrature requires a seed");
    d.node_budget = q.unsigned_int("node_budget", d.node_budget);
    require(d.node_budget >= 1, "quadrature.node_budget", "must be positive");
    q.finish();
  }

  if (r.has("kernel")) {
    Reader k(r.raw("kernel"), "kernel");
    c.kernel.omega_component = k.unsigned_int("omega_component", 0);
    c.kernel.scale = k.number("scale", 1.0);
    k.finish();
  }
  require(c.kernel.omega_component < c.m * c.n, "kernel.omega_component", "must be below m n");
  require(c.kernel.scale != 0.0, "kernel.scale", "must be nonzero");

  if (r.has("fourier")) {
    Reader f(r.raw("fourier"), "fourier");
    auto& d = c.fourier;
    d.z0_scale = f.number("z0_scale", d.z0_scale);
    d.z0 = f.vector("z0", {});
    d.delta = f.number("delta", d.delta);
    d.n_coeffs = f.unsigned_int("n_coeffs", d.n_coeffs);
    d.tolerance = f.number("tolerance", d.tolerance);
    d.margin = f.number("margin", d.margin);
    d.smoothstep_order = f.integer("smoothstep_order", d.smoothstep_order);
    d.transition_fraction = f.number("transition_fraction", d.transition_fraction);
    d.grid_points = f.unsigned_int("grid_points", d.grid_points);
    d.probes = f.unsigned_int("probes", d.probes);
    f.finish();
  }
  {
    const auto& d = c.fourier;
    require(d.z0.empty() || d.z0.size() == c.n, "fourier.z0", "must have n entries");
    double norm = 0.0;
    for (double v : c.z0()) norm += v * v;
    require(std::sqrt(norm) - double(c.m) * std::sqrt(double(c.n)) >= 1e-6,
            d.z0.empty() ? "fourier.z0_scale" : "fourier.z0", "|z0| must exceed m sqrt(n)");
    require(d.delta > 0.0 && d.delta < 1.0, "fourier.delta", "must lie in (0, 1)");
    require(d.n_coeffs >= 1, "fourier.n_coeffs", "must be positive");
    require(d.tolerance > 0.0, "fourier.tolerance", "must be positive");
    require(d.margin > 0.0, "fourier.margin", "must be positive");
    require(d.smoothstep_order >= 0 && d.smoothstep_order <= 8, "fourier.smoothstep_order",
            "must lie in 0..8");
    require(d.transition_fraction > 0.0 && d.transition_fraction <= 1.0,
            "fourier.transition_fraction", "must lie in (0, 1]");
    require(d.grid_points == 0 || (d.grid_points >= 8 && d.grid_points % 2 == 0),
            "fourier.grid_points", "must be 0 or an even number >= 8");
    require(d.probes >= 1, "fourier.probes", "must be positive");
  }

  if (r.has("truncation")) {
    Reader t(r.raw("truncation"), "truncation");
    c.truncation.pv_epsilon_factor = t.number("pv_epsilon_factor", 1.5);
    t.finish();
  }
  require(c.truncation.pv_epsilon_factor >= 1.0, "truncation.pv_epsilon_factor",
          "must be at least 1");

  if (r.has("tolerances")) {
    Reader t(r.raw("tolerances"), "tolerances");
    auto& d = c.tolerances;
    d.chain_tol = t.number("chain_tol", d.chain_tol);
    d.sigmas = t.number("sigmas", d.sigmas);
    d.theorem_tol = t.number("theorem_tol", d.theorem_tol);
    d.machine_tol = t.number("machine_tol", d.machine_tol);
    d.sphere_tol = t.number("sphere_tol", d.sphere_tol);
    d.stability_tol = t.number("stability_tol", d.stability_tol);
    t.finish();
    for (const char* key :
         {"chain_tol", "sigmas", "theorem_tol", "machine_tol", "sphere_tol", "stability_tol"})
      require(j.at("tolerances").value(key, 0.0) >= 0.0, std::string("tolerances.") + key,
              "must be nonnegative");
  }

  if (r.has("kernel_check")) {
    Reader k(r.raw("kernel_check"), "kernel_check");
    auto& d = c.kernel_check;
    d.samples = k.unsigned_int("samples", d.samples);
    d.stability_factor = k.unsigned_int("stability_factor", d.stability_factor);
    d.epsilon = k.number("epsilon", d.epsilon);
    d.homogeneity_trials = k.unsigned_int("homogeneity_trials", d.homogeneity_trials);
    d.sphere_points = k.unsigned_int("sphere_points", d.sphere_points);
    k.finish();
    require(d.samples >= 1, "kernel_check.samples", "must be positive");
    require(d.stability_factor >= 2, "kernel_check.stability_factor", "must be at least 2");
    require(d.epsilon > 0.0 && d.epsilon <= 1.0, "kernel_check.epsilon", "must lie in (0, 1]");
    require(d.sphere_points >= 2, "kernel_check.sphere_points", "must be at least 2");
  }

  if (r.has("theorem")) {
    Reader t(r.raw("theorem"), "theorem");
    c.theorem.output_points = t.unsigned_int("output_points", c.theorem.output_points);
    c.theorem.containment_probes =
        t.unsigned_int("containment_probes", c.theorem.containment_probes);
    t.finish();
    require(c.theorem.output_points >= 1, "theorem.output_points", "must be positive");
  }

  if (r.has("growth")) {
    Reader g(r.raw("growth"), "growth");
    auto& d = c.growth;
    d.enabled = g.boolean("enabled", true);
    d.max_level = g.integer("max_level", d.max_level);
    d.depth = g.integer("depth", d.depth);
    d.base_side = g.number("base_side", d.base_side);
    d.translates = g.boolean("translates", d.translates);
    g.finish();
    require(d.max_level >= 0 && d.max_level <= 16, "growth.max_level", "must lie in 0..16");
    require(d.depth >= 0 && d.depth <= 10, "growth.depth", "must lie in 0..10");
    require(d.base_side > 0.0, "growth.base_side", "must be positive");
  }
  r.finish();
  return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("--config", std::string("invalid JSON: ") + e.what());
  }
  return parse(j);
}

json ExperimentConfig::canonical() const {
  json fs = json::array();
  for (const auto& f : functions) {
    json e = {{"descriptor", f.descriptor}, {"params", f.params}};
    if (f.seed) e["seed"] = *f.seed;
    fs.push_back(e);
  }
  return {
      {"seed", seed},
      {"m", m},
      {"n", n},
      {"p", p},
      {"p_list", p_list},
      {"functions", fs},
      {"tuple_mode", tuple_mode},
      {"root_box", {{"center", root_center}, {"side", root_side}}},
      {"level_min", level_min},
      {"level_max", level_max},
      {"include_translates", include_translates},
      {"max_cubes", max_cubes},
      {"quadrature",
       {{"kind", quadrature.kind},
        {"points_per_dim", quadrature.points_per_dim},
        {"mc_samples", quadrature.mc_samples},
        {"seed", quadrature.seed},
        {"node_budget", quadrature.node_budget}}},
      {"kernel", {{"omega_component", kernel.omega_component}, {"scale", kernel.scale}}},
      {"fourier",
       {{"z0", z0()},
        {"delta", fourier.delta},
        {"n_coeffs", fourier.n_coeffs},
        {"tolerance", fourier.tolerance},
        {"margin", fourier.margin},
        {"smoothstep_order", fourier.smoothstep_order},
        {"transition_fraction", fourier.transition_fraction},
        {"grid_points", fourier.grid_points},
        {"probes", fourier.probes}}},
      {"truncation", {{"pv_epsilon_factor", truncation.pv_epsilon_factor}}},
      {"tolerances",
       {{"chain_tol", tolerances.chain_tol},
        {"sigmas", tolerances.sigmas},
        {"theorem_tol", tolerances.theorem_tol},
        {"machine_tol", tolerances.machine_tol},
        {"sphere_tol", tolerances.sphere_tol},
        {"stability_tol", tolerances.stability_tol}}},
      {"kernel_check",
       {{"samples", kernel_check.samples},
        {"stability_factor", kernel_check.stability_factor},
        {"epsilon", kernel_check.epsilon},
        {"homogeneity_trials", kernel_check.homogeneity_trials},
        {"sphere_points", kernel_check.sphere_points}}},
      {"theorem",
       {{"output_points", theorem.output_points},
        {"containment_probes", theorem.containment_probes}}},
      {"growth",
       {{"enabled", growth.enabled},
        {"max_level", growth.max_level},
        {"depth", growth.depth},
        {"base_side", growth.base_side},
        {"translates", growth.translates}}},
  };
}

std::string ExperimentConfig::hash() const { return git_blob_sha1(canonical().dump()); }

QuadratureRule ExperimentConfig::rule() const {
  QuadratureRule r = quadrature.kind == "monte_carlo"
                         ? QuadratureRule::monte_carlo(quadrature.mc_samples, quadrature.seed)
                         : QuadratureRule::tensor(quadrature.points_per_dim);
  r.points_per_dim = quadrature.points_per_dim;
  r.sample_count = quadrature.mc_samples;
  r.seed = quadrature.seed;
  r.node_budget = quadrature.node_budget;
  return r;
}

CubeFamily ExperimentConfig::family() const {
  return CubeFamily(Cube(root_center, root_side), level_min, level_max, include_translates,
                    max_cubes);
}

std::vector<FunctionTuple> ExperimentConfig::tuples() const {
  std::vector<FunctionTuple> out;
  if (tuple_mode == "tuple") {
    std::vector<ScalarField> entries;
    for (const auto& f : functions) entries.push_back(f.build(n));
    out.emplace_back(std::move(entries));
    return out;
  }
  for (const auto& f : functions) out.emplace_back(std::vector<ScalarField>(m, f.build(n)));
  return out;
}

std::vector<std::string> ExperimentConfig::tuple_labels() const {
  std::vector<std::string> out;
  if (tuple_mode == "tuple") {
    std::string s = "(";
    for (std::size_t i = 0; i < functions.size(); ++i)
      s += (i ? "," : "") + functions[i].label(i);
    out.push_back(s + ")");
    return out;
  }
  for (std::size_t i = 0; i < functions.size(); ++i) out.push_back(functions[i].label(i));
  return out;
}

TruncationPolicy ExperimentConfig::policy() const {
  TruncationPolicy p;
  p.pv_epsilon = truncation.pv_epsilon_factor;
  return p;
}

HomogeneousKernel ExperimentConfig::make_kernel() const {
  return HomogeneousKernel(m, n, kernel.omega_component, kernel.scale);
}

ExpansionOptions ExperimentConfig::expansion_options() const {
  ExpansionOptions o;
  o.margin = fourier.margin;
  o.smoothstep_order = fourier.smoothstep_order;
  o.transition_fraction = fourier.transition_fraction;
  o.grid_points = fourier.grid_points;
  return o;
}

std::vector<double> ExperimentConfig::z0() const {
  if (!fourier.z0.empty()) return fourier.z0;
  return default_z0(m, n, fourier.z0_scale);
}

std::string git_blob_sha1(std::string_view content) {
  std::string blob = "blob " + std::to_string(content.size());
  blob.push_back('\0');
  blob.append(content);
  unsigned char digest[SHA_DIGEST_LENGTH];
  SHA1(reinterpret_cast<const unsigned char*>(blob.data()), blob.size(), digest);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned char c : digest) {
    out.push_back(hex[c >> 4]);
    out.push_back(hex[c & 15]);
  }
  return out;
}

}  // namespace bmo
