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

#include <string>
#include <vector>

#include "bmolab/config.hpp"
#include "bmolab/error.hpp"
#include "bmolab/report.hpp"

namespace bmo {

/// Module error raised inside a pipeline, prefixed by the stage that failed.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what)
      : Error("stage " + stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

const std::vector<std::string>& subcommand_names();

/// Dispatch onto one of bmo, lemma, kernel-check, fourier, theorem.
ReportBundle run_subcommand(const std::string& name, const ExperimentConfig& cfg);

}  // namespace bmo
