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

namespace bmo {

/// Outcome of one check. `diverged` marks quantities that grew without bound
/// on the probed scales, for which no inequality verdict is issued.
enum class Verdict { pass, fail, diverged };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::diverged:
      return "diverged";
  }
  return "fail";
}

inline Verdict verdict_of(bool ok) { return ok ? Verdict::pass : Verdict::fail; }

}  // namespace bmo
