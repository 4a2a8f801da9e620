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

#include <doctest.h>

#include <cstdlib>
#include <filesystem>

#include "conic/report.hpp"
#include "conic/verify.hpp"

using namespace conic;

TEST_CASE("fnv1a reference values") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cull);
  CHECK(hex64(0xabc) == "0000000000000abc");
}

TEST_CASE("manifest hash tracks parameters, not outputs") {
  RunManifest m;
  m.command = "count";
  m.instance_label = "demo";
  m.parameters = {{"t", "50"}};
  const std::string h = m.hash();
  m.outputs = {"a.csv"};
  CHECK(m.hash() == h);
  m.parameters["t"] = "51";
  CHECK(m.hash() != h);
  const std::string doc = csv_document(m, "x,y", {"1,2"});
  CHECK(doc.rfind("# manifest " + m.hash() + " count demo\nx,y\n1,2\n", 0) == 0);
}

TEST_CASE("result cache round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "conic-unit-cache";
  std::filesystem::remove_all(dir);
  const ResultCache cache(dir);
  const std::string k1 = ResultCache::key("cfg1", "count", {{"t", "5"}});
  const std::string k2 = ResultCache::key("cfg2", "count", {{"t", "5"}});
  CHECK(k1 != k2);
  CHECK_FALSE(cache.get(k1).has_value());
  cache.put(k1, "payload\n");
  CHECK(cache.get(k1).value() == "payload\n");
  CHECK_FALSE(ResultCache().get(k1).has_value());
  std::filesystem::remove_all(dir);
}

TEST_CASE("cache directory precedence") {
  ::setenv("CONIC_CACHE_DIR", "/tmp/from-env", 1);
  CHECK(resolve_cache_dir(std::string("/tmp/flag")).value() == "/tmp/flag");
  CHECK(resolve_cache_dir(std::nullopt).value() == "/tmp/from-env");
  ::unsetenv("CONIC_CACHE_DIR");
  CHECK_FALSE(resolve_cache_dir(std::nullopt).has_value());
}

TEST_CASE("verify suites") {
  CHECK(suite_criteria("arith") == std::vector<int>{1, 2});
  CHECK(suite_criteria("all").size() == static_cast<std::size_t>(kCriteriaCount));
  CHECK_THROWS_AS(suite_criteria("bogus"), DomainError);
  const CriterionReport r = run_criterion(1);
  CHECK(r.passed());
  CHECK(format_report(r).rfind("criterion 1: PASS", 0) == 0);
}
