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

// Acceptance gate: `acceptance` runs every criterion, `acceptance N` runs
// one. Prints one PASS/FAIL/INFO line per criterion and exits nonzero when a
// binding criterion fails.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "conic/verify.hpp"

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  if (ids.empty()) {
    for (int i = 1; i <= conic::kCriteriaCount; ++i) ids.push_back(i);
  }
  bool ok = true;
  for (int id : ids) {
    const conic::CriterionReport r = conic::run_criterion(id);
    std::fputs(conic::format_report(r).c_str(), stdout);
    std::fflush(stdout);
    ok = ok && r.passed();
  }
  return ok ? 0 : 1;
}
