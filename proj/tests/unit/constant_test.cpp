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

#include <cmath>
#include <numbers>

#include "conic/constant.hpp"

using namespace conic;

namespace {

McEstimate exact(double v) {
  McEstimate e;
  e.value = v;
  return e;
}

TruncatedValue truncated(cplx v) {
  TruncatedValue t;
  t.value = v;
  return t;
}

}  // namespace

TEST_CASE("zeta and epsilon_d") {
  constexpr double pi = std::numbers::pi;
  CHECK(zeta(2) == doctest::Approx(pi * pi / 6).epsilon(1e-13));
  CHECK(zeta(4) == doctest::Approx(pi * pi * pi * pi / 90).epsilon(1e-13));
  CHECK(zeta(1.5) == doctest::Approx(2.612375348685488).epsilon(1e-12));
  CHECK(epsilon_d(2) == 1.0 / 640);
  CHECK(epsilon_d(4) == 1.0 / (5 * 3 * 512));
  CHECK(epsilon_d(6) == 1.0 / (5 * 5 * 2048));
  CHECK_THROWS_AS(epsilon_d(1), DomainError);
}

TEST_CASE("route 1: synthetic inputs") {
  const Instance inst = instances::quaternary();
  ArithConstants c0;
  c0.c0 = 1;
  const ConstantBreakdown c = c_phi_route1(inst, exact(1), truncated(2.0), c0);
  CHECK(c.c_phi == doctest::Approx(1 / zeta(2)).epsilon(1e-14));
  CHECK(c.c_phi == doctest::Approx(0.6079271018540267).epsilon(1e-12));
  CHECK(c.warnings.empty());
  const ConstantBreakdown w = c_phi_route1(inst, exact(1), truncated(cplx(2.0, 0.1)), c0);
  CHECK(w.warnings.size() == 1);
  const Instance bin = instances::demo_binary();
  CHECK_THROWS_AS(c_phi_route1(bin, exact(1), truncated(2.0), c0), DomainError);
}

TEST_CASE("route 2: synthetic inputs") {
  const Instance inst = instances::quaternary();
  const ConstantBreakdown c = c_phi_route2(inst, exact(std::sqrt(std::numbers::pi)), truncated(std::sqrt(2.0)));
  CHECK(c.c_phi == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(c.epsilon_d == 1.0 / 640);
}

TEST_CASE("predict_N: value and scaling") {
  const Instance inst = instances::quaternary();
  ConstantBreakdown c;
  c.c_phi = 1;
  CHECK(predict_N(c, inst, 3) == doctest::Approx(9 / std::sqrt(std::log(3.0))).epsilon(1e-14));
  for (u64 t : {10, 100, 1000}) {
    const double ratio = predict_N(c, inst, 2 * t) / predict_N(c, inst, t);
    CHECK(ratio == doctest::Approx(4 * std::sqrt(std::log(t) / std::log(2.0 * t))).epsilon(1e-14));
  }
  CHECK_THROWS_AS(predict_N(c, inst, 1), DomainError);
}

TEST_CASE("compare_routes") {
  ConstantBreakdown a, b;
  a.c_phi = 1.0;
  b.c_phi = 1.05;
  CHECK(compare_routes(a, b).agree);
  CHECK(compare_routes(a, b).relative_difference == doctest::Approx(0.05 / 1.05));
  b.c_phi = 1.2;
  CHECK_FALSE(compare_routes(a, b).agree);
}
