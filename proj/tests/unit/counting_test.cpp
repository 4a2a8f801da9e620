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

#include <numeric>
#include <random>

#include "conic/arith.hpp"
#include "conic/counting.hpp"
#include "oracles.hpp"

using namespace conic;

namespace {

u64 brute_theta_count(const Instance& inst, i64 P, bool include_zero) {
  u64 c = 0;
  oracle::for_box(inst.n, -P, P, [&](const std::vector<i64>& x) {
    if (evaluate(inst.f2, std::span<const i64>(x)) != 0) return;
    const i128 m = evaluate(inst.f1, std::span<const i64>(x));
    if (m == 0 ? include_zero : oracle::theta(static_cast<i64>(m))) ++c;
  });
  return c;
}

u64 brute_count_N(const Instance& inst, i64 t, bool include_zero) {
  u64 c = 0;
  oracle::for_box(inst.n, -t, t, [&](const std::vector<i64>& x) {
    i64 g = 0;
    for (i64 v : x) g = std::gcd(g, v);
    if (g != 1 || evaluate(inst.f2, std::span<const i64>(x)) != 0) return;
    const i128 m = evaluate(inst.f1, std::span<const i64>(x));
    if (m == 0 ? include_zero : oracle::theta(static_cast<i64>(m))) ++c;
  });
  return c / 2;
}

Instance random_diagonal(std::mt19937_64& rng, int n) {
  std::vector<i64> a(n), b(n);
  auto pick = [&] {
    i64 v = 0;
    while (v == 0) v = static_cast<i64>(rng() % 7) - 3;
    return v;
  };
  for (int i = 0; i < n; ++i) {
    a[i] = pick();
    b[i] = pick();
  }
  return instances::diagonal(a, b, "random");
}

}  // namespace

TEST_CASE("theta_count: binary examples") {
  const Instance inst = instances::demo_binary();
  CHECK(theta_count(inst, 1, false) == 4);
  CHECK(theta_count(inst, 1, true) == 5);
}

TEST_CASE("theta_count: agrees with the box oracle") {
  for (const Instance& inst : {instances::demo_binary(), instances::quaternary(), instances::split_product()}) {
    for (i64 P : {1, 3, 5}) {
      for (bool z : {false, true}) {
        CHECK(theta_count(inst, static_cast<u64>(P), z) == brute_theta_count(inst, P, z));
      }
    }
  }
}

TEST_CASE("theta_count: monotone in P and even without the origin") {
  const Instance inst = instances::split_product();
  u64 prev = 0;
  for (u64 P = 1; P <= 12; ++P) {
    const u64 c = theta_count(inst, P, false);
    CHECK(c >= prev);
    CHECK(c % 2 == 0);
    prev = c;
  }
}

TEST_CASE("enumerate_box: root solving equals the full scan") {
  for (const Instance& inst : {instances::quaternary(), instances::split_product()}) {
    const ZeroTally a = enumerate_box(inst, 9, {}, LineMethod::automatic);
    const ZeroTally b = enumerate_box(inst, 9, {}, LineMethod::scan);
    CHECK(a.zeros == b.zeros);
    CHECK(a.soluble_nonzero_f1 == b.soluble_nonzero_f1);
    CHECK(a.zero_f1 == b.zero_f1);
    CHECK(a.primitive_soluble == b.primitive_soluble);
    CHECK(a.primitive_zero_f1 == b.primitive_zero_f1);
  }
}

TEST_CASE("count_N: examples and oracle") {
  const Instance bin = instances::demo_binary();
  CHECK(count_N(bin, 1).raw_count == 2);
  const i64 a[] = {1, 1, 1}, b[] = {1, 1, 3};
  CHECK(count_N(instances::diagonal(a, b, "anisotropic"), 6).raw_count == 0);
  for (const Instance& inst : {instances::quaternary(), instances::split_product()}) {
    for (i64 t : {1, 2, 4, 6}) {
      for (bool z : {false, true}) {
        CHECK(count_N(inst, static_cast<u64>(t), {}, z).raw_count == brute_count_N(inst, t, z));
      }
    }
  }
}

TEST_CASE("count_N: normalization") {
  const Instance inst = instances::quaternary();
  const CountRecord r = count_N(inst, 20);
  CHECK(r.normalized == doctest::Approx(static_cast<double>(r.raw_count) * std::sqrt(std::log(20.0)) / 400.0));
  CHECK_THROWS_AS(count_N(inst, 0), DomainError);
}

TEST_CASE("mobius_identity_residual vanishes") {
  const Instance bin = instances::demo_binary();
  CHECK(mobius_identity_residual(bin, 1) == 0);
  CHECK(mobius_identity_residual(bin, 3) == 0);
  std::mt19937_64 rng(17);
  for (int i = 0; i < 12; ++i) {
    const Instance inst = random_diagonal(rng, 3);
    for (u64 t = 1; t <= 10; ++t) CHECK(mobius_identity_residual(inst, t) == 0);
  }
}

TEST_CASE("two_squares_count: examples and pair oracle") {
  CHECK(two_squares_count(10) == 7);
  u64 c = 0;
  for (i64 m = 1; m <= 3000; ++m) {
    c += oracle::sum_of_two_squares(m) ? 1 : 0;
    if (m % 250 == 0 || m == 100) CHECK(two_squares_count(static_cast<u64>(m)) == c);
  }
}

TEST_CASE("varpi_progression_count: example, oracle and hypotheses") {
  CHECK(varpi_progression_count(100, 1, 4) == 15);
  for (auto [Q, a] : std::vector<std::pair<u64, i64>>{{4, 1}, {12, 1}, {8, 5}, {20, 9}}) {
    u64 c = 0;
    for (u64 r = 1; r <= 5000; ++r) {
      if (r % Q == static_cast<u64>(a) && varpi(static_cast<i64>(r))) ++c;
    }
    CHECK(varpi_progression_count(5000, a, Q) == c);
  }
  CHECK_THROWS_AS(varpi_progression_count(100, 1, 6), DomainError);
  CHECK_THROWS_AS(varpi_progression_count(100, 3, 4), DomainError);
  CHECK_THROWS_AS(varpi_progression_count(100, 5, 20), DomainError);
  CHECK_THROWS_AS(varpi_progression_count(3, 1, 4), DomainError);
}

TEST_CASE("budget refusal") {
  CHECK_THROWS_AS(count_N(instances::quaternary(), 1000, Budget{1e3}), BudgetExceeded);
  CHECK_THROWS_AS(two_squares_count(1000000, Budget{10}), BudgetExceeded);
}
