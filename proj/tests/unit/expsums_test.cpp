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

#include "conic/arith.hpp"
#include "conic/expsums.hpp"
#include "oracles.hpp"

using namespace conic;

namespace {

Instance squares_pair() {
  Form f1 = Form::create(2, {{1, {2, 0}}});
  Form f2 = Form::create(2, {{1, {0, 2}}});
  return make_instance(std::move(f1), std::move(f2), "t0^2, t1^2");
}

bool near(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_CASE("birch_sum: examples") {
  const Instance inst = squares_pair();
  CHECK(near(birch_sum(inst, {0, 0, 1}), 1.0, 1e-12));
  CHECK(near(birch_sum(inst, {1, 1, 2}), 0.0, 1e-12));
  CHECK(near(birch_sum(inst, {1, 0, 3}), cplx(0, 3 * std::sqrt(3.0)), 1e-12));
  CHECK(near(birch_sum_direct(inst, {1, 0, 3}), cplx(0, 3 * std::sqrt(3.0)), 1e-12));
}

TEST_CASE("birch_sum: table, CRT and direct paths agree with the oracle") {
  std::mt19937_64 rng(23);
  for (const Instance& inst : {instances::quaternary(), instances::split_product()}) {
    for (int i = 0; i < 25; ++i) {
      const u64 q = rng() % 14 + 1;
      const i64 a1 = static_cast<i64>(rng() % 40) - 20;
      const i64 a2 = static_cast<i64>(rng() % 40) - 20;
      const cplx want = oracle::birch(inst, a1, a2, q);
      const double tol = 1e-9 * std::pow(static_cast<double>(q), 4.0);
      CHECK(near(birch_sum(inst, {a1, a2, q}), want, tol));
      CHECK(near(birch_sum_direct(inst, {a1, a2, q}), want, tol));
      const u64 u1 = static_cast<u64>(((a1 % static_cast<i64>(q)) + static_cast<i64>(q)) % static_cast<i64>(q));
      const u64 u2 = static_cast<u64>(((a2 % static_cast<i64>(q)) + static_cast<i64>(q)) % static_cast<i64>(q));
      CHECK(near(BirchTable(inst, q).sum(u1, u2), want, tol));
    }
  }
}

TEST_CASE("birch_sum: orthogonality against residue counts") {
  const Instance inst = instances::split_product();
  for (u64 q = 1; q <= 12; ++q) {
    cplx s = 0;
    for (u64 a2 = 0; a2 < q; ++a2) s += birch_sum(inst, {0, static_cast<i64>(a2), q});
    CHECK(near(s, static_cast<double>(q * oracle::residue_zeros(inst, q)), 1e-8 * std::pow(q, 5.0)));
  }
}

TEST_CASE("birch_sum: conjugation") {
  const Instance inst = instances::quaternary();
  for (u64 q : {5, 7, 8, 9}) {
    for (i64 a1 = 0; a1 < static_cast<i64>(q); ++a1) {
      const cplx s = birch_sum(inst, {a1, 1, q});
      const cplx t = birch_sum(inst, {-a1, -1, q});
      CHECK(near(s, std::conj(t), 1e-8 * std::pow(q, 4.0)));
    }
  }
}

TEST_CASE("exp_sum_thetaQ: example and oracle") {
  CHECK(near(exp_sum_thetaQ(10, 0, 1, 0.0), 7.0, 1e-12));
  std::mt19937_64 rng(29);
  for (int i = 0; i < 20; ++i) {
    const u64 q = rng() % 12 + 1;
    const i64 a = static_cast<i64>(rng() % q);
    const double beta = (i % 2) ? 0.0 : 1e-4 * static_cast<double>(rng() % 100);
    cplx want = 0;
    for (i64 m = 1; m <= 2000; ++m) {
      if (oracle::theta(m)) want += oracle::e((static_cast<double>(a) / q + beta) * m);
    }
    CHECK(near(exp_sum_thetaQ(2000, a, q, beta), want, 1e-8));
  }
}

TEST_CASE("frak_F: anchor and bounds") {
  const double c0 = landau_c0(1000000).c0;
  const TruncatedValue f = frak_F(0, 1, 1e14);
  CHECK(f.value.real() == doctest::Approx(1.0 / (2 * c0 * c0)).epsilon(1e-4));
  CHECK(std::abs(f.value.real() - 1.0 / (2 * c0 * c0)) <= f.error_bound + 1e-6);
  for (u64 q = 1; q <= 50; ++q) {
    for (const TruncatedValue& v : frak_F_all(q, 1 << 16)) {
      CHECK(std::abs(v.value) <= v.params.at("triangle_bound"));
    }
  }
}

TEST_CASE("frak_F: tail bound covers the change to a larger U") {
  for (u64 q : {1, 3, 4, 12}) {
    const auto coarse = frak_F_all(q, 1 << 12);
    const auto fine = frak_F_all(q, 1 << 22);
    for (u64 a = 0; a < q; ++a) CHECK(std::abs(coarse[a].value - fine[a].value) <= coarse[a].error_bound);
  }
}

TEST_CASE("W_helper: examples and direct sum") {
  CHECK(near(W_helper(0, 1, 1), 1.0, 1e-12));
  // Units l contribute e(-l/p) = -1 in total, each weighted by (1 - 1/p)^{-1}.
  for (u64 p : {3, 5, 7, 11}) {
    const double pd = static_cast<double>(p);
    CHECK(near(W_helper(1, p, 1), -pd / (pd - 1), 1e-12));
  }
  CHECK(near(W_helper(1, 9, 3), W_helper_direct(1, 9, 3), 1e-10));
  std::mt19937_64 rng(31);
  for (int i = 0; i < 300; ++i) {
    const u64 q = rng() % 60 + 1;
    const i64 a = static_cast<i64>(rng() % 200) - 100;
    const u64 k = rng() % 30 + 1;
    CHECK(near(W_helper(a, q, k), W_helper_direct(a, q, k), 1e-9 * q));
  }
}

TEST_CASE("E_phi: partial sums") {
  const Instance inst = instances::quaternary();
  CHECK(E_phi_p(inst, 3, 0, 0).value.real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(E_phi_2(inst, 60, 0).value.real() == doctest::Approx(0.5).epsilon(1e-12));
  const TruncatedValue e3 = E_phi_p(inst, 3);
  for (std::size_t m = 3; m < e3.shells.size(); ++m) {
    CHECK(std::abs(e3.shells[m]) < std::abs(e3.shells[m - 1]));
  }
  const TruncatedValue e2 = E_phi_2(inst);
  for (std::size_t r = 4; r < e2.shells.size(); ++r) {
    CHECK(std::abs(e2.shells[r]) < std::abs(e2.shells[r - 1]));
  }
  CHECK_THROWS_AS(E_phi_p(inst, 5), DomainError);
}

TEST_CASE("L_phi_truncated: Q = 1 and reality") {
  const Instance inst = instances::quaternary();
  const double c0 = landau_c0(1000000).c0;
  const TruncatedValue L1 = L_phi_truncated(inst, 1, 1e12);
  CHECK(L1.value.real() == doctest::Approx(1.0 / (2 * c0 * c0)).epsilon(1e-5));
  const TruncatedValue L = L_phi_truncated(inst, 12, 1 << 12);
  CHECK(std::abs(L.value.imag()) < 1e-6);
}
