/*
   Copyright 2026 The conic-fibres Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

// Numbered verification criteria shared by `conic verify` and the acceptance
// test binary. Every tolerance lives in verify.cpp.

#include <string>
#include <string_view>
#include <vector>

#include "conic/common.hpp"

namespace conic {

inline constexpr int kCriteriaCount = 13;
inline constexpr u64 kDefaultSeed = 20261019;

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;  // measured vs expected
};

struct CriterionReport {
  int id = 0;
  std::string title;
  bool binding = true;
  double seconds = 0;
  double time_limit = 0;
  std::vector<CheckResult> checks;

  bool passed() const;
};

CriterionReport run_criterion(int id, u64 seed = kDefaultSeed);

/// Criteria making up a named suite (arith, sieve, expsums, padic,
/// archimedean, constant, all). Unknown names throw DomainError.
std::vector<int> suite_criteria(std::string_view suite);

/// One summary line followed by one indented line per check.
std::string format_report(const CriterionReport& report);

}  // namespace conic
