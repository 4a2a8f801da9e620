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

#include "conic/arith.hpp"
#include "conic/expsums.hpp"
#include "conic/padic.hpp"
#include "oracles.hpp"

using namespace conic;

namespace {

i64 ipow_i(i64 b, int e) {
  i64 r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// Solubility of x^2 + y^2 = m z^2 at p = 3 (mod 4) from m mod p^k.
int verdict3(i64 m_mod, i64 p, int k) {
  if (m_mod == 0) return -1;
  int v = 0;
  while (m_mod % p == 0) {
    m_mod /= p;
    ++v;
  }
  (void)k;
  return v % 2 == 0 ? 1 : 0;
}

// Nested-loop version of the lifted count at odd p = 3 (mod 4): soluble mass
// and undecided mass in level-N units.
void lifted(const Instance& inst, i64 p, const std::vector<i64>& x, int k, int ceiling, double mass, double& sol,
            double& und) {
  if (k == ceiling) {
    und += mass;
    return;
  }
  const i64 step = ipow_i(p, k);
  const i64 next = step * p;
  oracle::for_box(inst.n, 0, p - 1, [&](const std::vector<i64>& s) {
    std::vector<i64> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + step * s[i];
    if (evaluate(inst.f2, std::span<const i64>(y)) % next != 0) return;
    const i64 m = static_cast<i64>(((evaluate(inst.f1, std::span<const i64>(y)) % next) + next) % next);
    const double child = mass / std::pow(static_cast<double>(p), inst.n - 1.0);
    switch (verdict3(m, p, k + 1)) {
      case 1: sol += child; break;
      case 0: break;
      default: lifted(inst, p, y, k + 1, ceiling, child, sol, und);
    }
  });
}

}  // namespace

TEST_CASE("tau_f2: split product at p = 3") {
  const Instance inst = instances::split_product();
  const LocalDensity d1 = tau_f2(inst, 3, 1);
  CHECK(d1.raw_count == 33);
  CHECK(d1.density == doctest::Approx(33.0 / 27.0).epsilon(1e-15));
  CHECK(tau_f2(inst, 3, 2).raw_count == oracle::residue_zeros(inst, 9));
  CHECK(tau_f2(instances::quaternary(), 5, 2).raw_count == oracle::residue_zeros(instances::quaternary(), 25));
}

TEST_CASE("tau_f2: linear slice has density one") {
  Form f1 = Form::create(1, {{1, {2}}});
  Form f2 = Form::create(1, {{1, {1}}});
  const Instance inst =
      make_instance(std::move(f1), std::move(f2), "slice", std::nullopt, {.allow_odd_degree = true, .allow_mixed_degree = true});
  for (u64 p : {2, 3, 7}) {
    for (int N : {1, 2, 3}) {
      const LocalDensity d = tau_f2(inst, p, N);
      CHECK(d.raw_count == 1);
      CHECK(d.density == 1.0);
    }
  }
}

TEST_CASE("tau_f2 agrees with orthogonality of Birch sums") {
  const Instance inst = instances::quaternary();
  for (u64 q : {3, 9, 27, 4, 8}) {
    cplx s = 0;
    for (u64 a2 = 0; a2 < q; ++a2) s += birch_sum(inst, {0, static_cast<i64>(a2), q});
    CHECK(s.real() / static_cast<double>(q) == doctest::Approx(static_cast<double>(residue_count_f2(inst, q))));
  }
}

TEST_CASE("ell_p: p = 1 (mod 4) equals tau_f2") {
  const Instance inst = instances::quaternary();
  for (u64 p : {5, 13}) {
    const int N = p == 5 ? 2 : 1;
    CHECK(ell_p(inst, p, N).density == doctest::Approx(tau_f2(inst, p, N).density).epsilon(1e-14));
  }
  CHECK(ell_p_level1(inst, 13).density == doctest::Approx(tau_f2(inst, 13, 1).density).epsilon(1e-14));
}

TEST_CASE("ell_p: nested-loop oracle at p = 3, N = 3") {
  const Instance inst = instances::quaternary();
  const int N = 3;
  const int ceiling = N + EllOptions{}.lift_extra;
  const i64 p = 3, q = 27;
  double decided = 0, sol = 0, und = 0;
  u64 literal = 0, undecided_residues = 0;
  oracle::for_box(4, 0, q - 1, [&](const std::vector<i64>& x) {
    if (evaluate(inst.f2, std::span<const i64>(x)) % q != 0) return;
    const i128 value = evaluate(inst.f1, std::span<const i64>(x));
    if (value == 0 || conic_soluble_local(value, Place::at(3))) ++literal;
    const i64 m = static_cast<i64>(value % q);
    switch (verdict3(m, p, N)) {
      case 1: decided += 1; break;
      case 0: break;
      default:
        ++undecided_residues;
        lifted(inst, p, x, N, ceiling, 1.0, sol, und);
    }
  });
  const double scale = std::pow(3.0, -N * 3.0);
  const LocalDensity d = ell_p(inst, 3, N);
  CHECK(d.density_low == doctest::Approx((decided + sol) * scale).epsilon(1e-12));
  CHECK(d.density_high == doctest::Approx((decided + sol + und) * scale).epsilon(1e-12));
  // The residue count with integer representatives lies between the counts
  // with undecided residues dropped and kept.
  EllOptions strict;
  strict.undecided_soluble = false;
  CHECK(ell_p(inst, 3, N, strict).raw_count <= literal);
  CHECK(literal <= d.raw_count);
  CHECK(d.raw_count == static_cast<u64>(decided) + undecided_residues);
}

TEST_CASE("ell_p: bounded by tau_f2 and the undecided mass shrinks") {
  const Instance inst = instances::quaternary();
  // Solubility is a sub-condition: exact for integer representatives, and
  // for the lifted count against tau_f2 at the lift ceiling.
  for (int N = 1; N <= 3; ++N) {
    const i64 q = ipow_i(3, N);
    u64 literal = 0;
    oracle::for_box(4, 0, q - 1, [&](const std::vector<i64>& x) {
      if (evaluate(inst.f2, std::span<const i64>(x)) % q != 0) return;
      const i128 value = evaluate(inst.f1, std::span<const i64>(x));
      if (value == 0 || conic_soluble_local(value, Place::at(3))) ++literal;
    });
    CHECK(literal <= tau_f2(inst, 3, N).raw_count);
    CHECK(ell_p(inst, 3, N).density_low <= tau_f2(inst, 3, N + EllOptions{}.lift_extra).density);
  }
  CHECK(ell_p(inst, 3, 4).density_high <= 4.0 / 3.0);
  // The undecided set at ceiling C is t = 0 (mod 3^ceil(C/2)), so the mass
  // falls along ceilings of equal parity.
  const double u2 = ell_p(inst, 3, 2).undecided_fraction;
  const double u3 = ell_p(inst, 3, 3).undecided_fraction;
  const double u4 = ell_p(inst, 3, 4).undecided_fraction;
  CHECK(u4 < u2);
  CHECK(u3 < u2);
  CHECK(u2 == doctest::Approx(std::pow(3.0, -4.0) / ell_p(inst, 3, 2).density_high).epsilon(1e-9));
}

TEST_CASE("tau_p_weighted: relation and lambda") {
  const Instance inst = instances::quaternary();
  const LocalFactor f = tau_p_weighted(inst, 3, 2);
  CHECK(f.tau_p * (1 - 1.0 / 3) / (1 - 1.0 / 9) == doctest::Approx(f.ell.density).epsilon(1e-14));
  CHECK(f.lambda_p == doctest::Approx(std::sqrt(1.5)).epsilon(1e-15));
  CHECK(tau_p_weighted(inst, 5, 1).lambda_p == doctest::Approx(1.118033988749895).epsilon(1e-14));
  CHECK(f.ratio == doctest::Approx(f.tau_p / f.lambda_p));
}

TEST_CASE("ell_p against E_phi at p = 3") {
  const Instance inst = instances::quaternary();
  const double ell = ell_p(inst, 3, 4).density;
  CHECK(ell / (1 - 1.0 / 3) == doctest::Approx(E_phi_p(inst, 3).value.real()).epsilon(0.05));
}

TEST_CASE("local_product: positive factors and the unweighted drift") {
  const Instance inst = instances::quaternary();
  const TruncatedValue w30 = local_product(inst, 30);
  const TruncatedValue w60 = local_product(inst, 60);
  for (const cplx& s : w60.shells) CHECK(s.real() > 0);
  const TruncatedValue u30 = local_product(inst, 30, {}, false);
  const TruncatedValue u60 = local_product(inst, 60, {}, false);
  const double drift_weighted = w60.value.real() / w30.value.real();
  const double drift_unweighted = u60.value.real() / u30.value.real();
  CHECK(drift_unweighted > drift_weighted);
  CHECK(w60.value.real() > 0);
}
