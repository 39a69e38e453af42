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

// bmolab <subcommand> --config <path> [--out <dir>] [--format json|csv|both]
//
// Exit status: 0 when no verdict failed, 1 when some verdict failed, 2 on a
// configuration or runtime error.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "bmolab/config.hpp"
#include "bmolab/error.hpp"
#include "bmolab/pipelines.hpp"
#include "bmolab/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"bmolab: oscillation, commutator and expansion checks"};
  app.require_subcommand(1);
  std::string config_path, out_dir = ".", format = "json";
  for (const auto& name : bmo::subcommand_names()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " pipeline");
    sub->add_option("--config", config_path, "experiment configuration (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    sub->add_option("--format", format, "json, csv or both")
        ->check(CLI::IsMember({"json", "csv", "both"}))
        ->capture_default_str();
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string name = app.get_subcommands().front()->get_name();
  try {
    const auto cfg = bmo::ExperimentConfig::from_file(config_path);
    const auto bundle = bmo::run_subcommand(name, cfg);
    const auto paths = bmo::emit(bundle, bmo::parse_format(format), out_dir);
    std::cout << "bmolab " << name << ": " << bundle.count(bmo::Verdict::pass) << " pass, "
              << bundle.count(bmo::Verdict::fail) << " fail, "
              << bundle.count(bmo::Verdict::diverged) << " diverged (config "
              << bundle.config_hash.substr(0, 12) << ")\n";
    for (const auto& p : paths) std::cout << "  wrote " << p.string() << '\n';
    return bundle.any_fail() ? 1 : 0;
  } catch (const bmo::ConfigError& e) {
    std::cerr << "bmolab: config error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "bmolab: " << e.what() << '\n';
  }
  return 2;
}
