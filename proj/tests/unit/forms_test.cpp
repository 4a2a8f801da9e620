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

#include <random>
#include <string>

#include "conic/forms.hpp"

using namespace conic;

namespace {

const char* kBinary = R"({
  "label": "binary",
  "n": 2,
  "d": 2,
  "f1": [{"coeff": 1, "exps": [2, 0]}, {"coeff": 1, "exps": [0, 2]}],
  "f2": [{"coeff": 1, "exps": [2, 0]}, {"coeff": -1, "exps": [0, 2]}]
})";

Form sq(int n, std::initializer_list<std::pair<i64, std::vector<int>>> terms) {
  std::vector<Monomial> m;
  for (const auto& [c, e] : terms) m.push_back({c, e});
  return Form::create(n, m);
}

}  // namespace

TEST_CASE("parse_instance: binary config") {
  const Instance inst = parse_instance(kBinary);
  CHECK(inst.n == 2);
  CHECK(inst.d == 2);
  CHECK(inst.box_max_m == 2);
  CHECK(inst.label == "binary");
}

TEST_CASE("parse_instance: odd degree is rejected") {
  std::string text = kBinary;
  text.replace(text.find("\"d\": 2"), 6, "\"d\": 3");
  try {
    parse_instance(text);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("degree must be even") != std::string::npos);
  }
}

TEST_CASE("parse_instance: homogeneity, unknown fields and syntax errors") {
  std::string bad = kBinary;
  bad.replace(bad.find("[0, 2]}]\n}"), 6, "[0, 3]");
  CHECK_THROWS_AS(parse_instance(bad), ValidationError);

  std::string extra = kBinary;
  extra.insert(1, "\"colour\": 1,");
  CHECK_THROWS_AS(parse_instance(extra), ParseError);

  try {
    parse_instance("{\n  \"label\": \"x\",\n  \"n\": ,\n}");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("canonical_json round-trips") {
  const Instance a = instances::split_product();
  const Instance b = parse_instance(canonical_json(a));
  CHECK(canonical_json(a) == canonical_json(b));
}

TEST_CASE("evaluate: examples") {
  const Form f = sq(2, {{1, {2, 0}}, {1, {0, 2}}});
  const i64 x[] = {3, 4};
  CHECK(evaluate(f, std::span<const i64>(x)) == 25);
  const Form g = instances::split_product().f2;
  const i64 y[] = {2, 3, 1, 6};
  CHECK(evaluate(g, std::span<const i64>(y)) == 0);
  const Form h = sq(1, {{1, {2}}});
  const u64 z[] = {3};
  CHECK(evaluate_mod(h, z, 7) == 2);
}

TEST_CASE("evaluate: homogeneity, reduction and periodicity") {
  const Instance inst = instances::quaternary();
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    std::vector<i64> x(4);
    for (auto& v : x) v = static_cast<i64>(rng() % 2001) - 1000;
    const i64 lambda = static_cast<i64>(rng() % 11) - 5;
    std::vector<i64> lx(4);
    for (int j = 0; j < 4; ++j) lx[j] = lambda * x[j];
    for (const Form* f : {&inst.f1, &inst.f2}) {
      CHECK(evaluate(*f, std::span<const i64>(lx)) == lambda * lambda * evaluate(*f, std::span<const i64>(x)));
    }
    const u64 q = rng() % 1000 + 1;
    std::vector<u64> xm(4), shifted(4);
    for (int j = 0; j < 4; ++j) {
      xm[j] = static_cast<u64>(((x[j] % static_cast<i64>(q)) + static_cast<i64>(q)) % static_cast<i64>(q));
      shifted[j] = xm[j] + (j == i % 4 ? q : 0);
    }
    const i128 exact = evaluate(inst.f2, std::span<const i64>(x));
    const i128 Q = static_cast<i128>(q);
    CHECK(static_cast<i128>(evaluate_mod(inst.f2, xm, q)) == ((exact % Q) + Q) % Q);
    CHECK(evaluate_mod(inst.f2, shifted, q) == evaluate_mod(inst.f2, xm, q));
  }
}

TEST_CASE("evaluate: overflow is reported") {
  const Form f = sq(1, {{1, {4}}});
  const i128 x[] = {static_cast<i128>(1) << 40};
  CHECK_THROWS_AS(evaluate(f, std::span<const i128>(x)), RangeError);
}

TEST_CASE("default_box_max: examples") {
  CHECK(default_box_max(sq(2, {{1, {2, 0}}, {1, {0, 2}}})) == 2);
  CHECK(default_box_max(instances::split_product().f2) == 2);
  CHECK(default_box_max(sq(2, {{3, {2, 0}}, {-1, {0, 2}}})) == 4);
}

TEST_CASE("variable_components splits diagonal forms") {
  const Instance q = instances::quaternary();
  const Form* forms[] = {&q.f1, &q.f2};
  CHECK(variable_components(forms).size() == 4);
  const Instance s = instances::split_product();
  const Form* sforms[] = {&s.f1, &s.f2};
  CHECK(variable_components(sforms).size() == 2);
}
