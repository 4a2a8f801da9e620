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

#include "conic/archimedean.hpp"

using namespace conic;

namespace {

// Density of t0^2 + t1^2 - t2^2 - t3^2 = 0 on [-1, 1]^4: for r^2 = t0^2 + t1^2
// the inner integral over (t2, t3) is pi when r <= 1 and
// 2 (asin(1/r) - asin(sqrt(r^2 - 1)/r)) when 1 < r <= sqrt 2. The outer
// integral runs over the triangle 0 <= t1 <= t0 <= 1 in polar coordinates
// (eight copies fill the square [-1, 1]^2) by the midpoint rule.
double quaternary_J() {
  auto inner = [](double a) {
    if (a <= 1) return std::numbers::pi;
    if (a >= 2) return 0.0;
    return 2 * (std::asin(1 / std::sqrt(a)) - std::asin(std::sqrt((a - 1) / a)));
  };
  const int n = 4000;
  double total = 0;
  for (int i = 0; i < n; ++i) {
    const double th = (i + 0.5) * (std::numbers::pi / 4) / n;
    const double rmax = 1 / std::cos(th);
    // r in [0, 1] contributes pi / 2.
    double s = std::numbers::pi / 2;
    const int m = 4000;
    const double h = (rmax - 1) / m;
    for (int j = 0; j < m; ++j) {
      const double r = 1 + (j + 0.5) * h;
      s += inner(r * r) * r * h;
    }
    total += s * (std::numbers::pi / 4) / n;
  }
  return 8 * total;
}

Instance slice(int n) {
  std::vector<Monomial> sq;
  for (int i = 0; i < n; ++i) {
    std::vector<int> e(n, 0);
    e[i] = 2;
    sq.push_back({1, e});
  }
  std::vector<int> e(n, 0);
  e[0] = 1;
  return make_instance(Form::create(n, sq), Form::create(n, {{1, e}}), "slice", std::nullopt,
                       {.allow_odd_degree = true, .allow_mixed_degree = true});
}

}  // namespace

TEST_CASE("counter_uniform is a pure function of its arguments") {
  CHECK(counter_uniform(1, 2, 3) == counter_uniform(1, 2, 3));
  CHECK(counter_uniform(1, 2, 3) != counter_uniform(1, 2, 4));
  double mean = 0;
  for (u64 i = 0; i < 100000; ++i) {
    const double u = counter_uniform(9, i, 0);
    REQUIRE(u >= 0);
    REQUIRE(u < 1);
    mean += u;
  }
  CHECK(mean / 100000 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("I_gamma: origin, conjugation and decay") {
  const Instance inst = instances::quaternary();
  const McEstimate zero = I_gamma(inst, 0, 0, 1000, 1);
  CHECK(zero.value == std::complex<double>(16, 0));
  CHECK(zero.std_error == 0);
  const McEstimate a = I_gamma(inst, 0.7, 0.3, 200000, 5);
  const McEstimate b = I_gamma(inst, -0.7, -0.3, 200000, 5);
  CHECK(std::abs(a.value - std::conj(b.value)) <= 3 * (a.std_error + b.std_error));
  const McEstimate one = I_gamma(inst, 1, 0, 1000000, 6);
  const McEstimate ten = I_gamma(inst, 10, 0, 1000000, 6);
  CHECK(std::abs(ten.value) < std::abs(one.value));
  CHECK_THROWS_AS(I_gamma(inst, 1, 0, 10, 1), DomainError);
}

TEST_CASE("J_density: linear slice") {
  for (int n : {2, 4}) {
    const JResult r = J_density(slice(n), default_epsilon_schedule(), 200000, 3);
    const double want = std::ldexp(1.0, n - 1);
    CHECK(std::abs(r.shell.value.real() - want) <= 3 * r.shell.std_error + 1e-9);
    CHECK(std::abs(r.gradient.value.real() - want) <= 3 * r.gradient.std_error + 1e-9);
  }
}

TEST_CASE("J_density: quaternary against quadrature") {
  const double J = quaternary_J();
  CHECK(J == doctest::Approx(11.0903799810).epsilon(1e-5));
  const JResult r = J_density(instances::quaternary(), default_epsilon_schedule(), 1000000, 20261019);
  CHECK(r.shell.value.real() > 0);
  CHECK(std::abs(r.shell.value.real() - J) <= 3 * r.shell.std_error);
  CHECK(std::abs(r.gradient.value.real() - J) <= 3 * r.gradient.std_error);
  for (const auto& s : r.shells) CHECK(s.samples >= 1000000);
}

TEST_CASE("J_density: deterministic across worker counts") {
  const Instance inst = instances::quaternary();
  const unsigned saved = worker_threads();
  set_worker_threads(1);
  const JResult a = J_density(inst, default_epsilon_schedule(), 100000, 77);
  set_worker_threads(3);
  const JResult b = J_density(inst, default_epsilon_schedule(), 100000, 77);
  set_worker_threads(saved);
  CHECK(a.shell.value == b.shell.value);
  CHECK(a.gradient.value == b.gradient.value);
  for (std::size_t i = 0; i < a.shells.size(); ++i) CHECK(shell_csv_row(a.shells[i]) == shell_csv_row(b.shells[i]));
}

TEST_CASE("J_density: schedule validation") {
  const Instance inst = instances::quaternary();
  CHECK_THROWS_AS(J_density(inst, {0.1, 0.05}, 10000, 1), DomainError);
  CHECK_THROWS_AS(J_density(inst, {0.1, 0.1, 0.05}, 10000, 1), DomainError);
  CHECK_THROWS_AS(J_density(inst, {0.1, 0.05, -0.01}, 10000, 1), DomainError);
  CHECK_THROWS_AS(J_density(inst, default_epsilon_schedule(), 10, 1), DomainError);
}
