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

// Exact integer arithmetic: factorization, the solubility indicators of the
// conic x0^2 + x1^2 = m x2^2, Ramanujan sums and the constant C0.

#include <climits>
#include <cstdint>
#include <vector>

#include "conic/common.hpp"

namespace conic {

/// Valuation reported for zero.
inline constexpr int kInfiniteValuation = INT_MAX;

struct PrimeFactor {
  u128 prime;
  int exponent;
};

/// value = sign * prod prime^exponent, primes strictly increasing.
struct Factorization {
  i128 value = 1;
  int sign = 1;
  std::vector<PrimeFactor> factors;

  int valuation(u128 p) const;
};

/// Deterministic factorization: wheel trial division up to 1e6, then
/// Miller-Rabin and Brent's variant of Pollard rho. Throws DomainError on 0.
Factorization factor(i128 m);

bool is_prime(u128 n);

/// v_p(m); kInfiniteValuation for m == 0.
int valuation(i128 m, u64 p);

/// 1 iff x0^2 + x1^2 = m x2^2 has a nontrivial rational point, i.e. m > 0 and
/// every prime p = 3 (mod 4) divides m to an even power.
bool theta_q(i128 m);

/// 1 iff every prime factor of m is 1 (mod 4). Completely multiplicative.
bool varpi(i128 m);

/// c_q(a) through the prime-power closed form, multiplied over q's primes.
i64 ramanujan_sum(u64 q, i64 a);

/// c_q(a) straight from the sum over units, rounded (used as oracle).
i64 ramanujan_sum_direct(u64 q, i64 a);

/// A place of Q: a prime, or the real place (prime == 0).
struct Place {
  u64 prime = 0;

  static constexpr Place infinity() { return Place{0}; }
  static constexpr Place at(u64 p) { return Place{p}; }
  constexpr bool is_infinite() const { return prime == 0; }
};

/// Local solubility of x0^2 + x1^2 = m x2^2 over the completion at `place`.
bool conic_soluble_local(i128 m, Place place);

struct ArithConstants {
  double c0 = 1.0;             // truncated product over p = 3 (mod 4)
  u64 c0_prime_cutoff = 0;
  double c0_error = 0.0;       // true C0 lies in [c0 - c0_error, c0]
  double landau_k = 0.0;       // 1 / (sqrt(2) c0)
};

ArithConstants landau_c0(u64 prime_cutoff);

/// prod_{p < D, p = 3 (mod 4)} (1 - 1/p).
double mertens_3mod4(double bound);

/// sqrt(pi) / sqrt(2 e^gamma) * C0 / sqrt(log D).
double mertens_3mod4_main_term(double bound, double c0);

struct DotDdot {
  u64 dot = 1;    // p = 1 (mod 4) part
  u64 ddot = 1;   // p = 3 (mod 4) part
};

DotDdot split_dot_ddot(u64 q);

u64 euler_phi(u64 m);
u64 divisor_tau(u64 m);
int mobius(u64 m);

/// Primes <= limit (sieve of Eratosthenes).
std::vector<u32> primes_up_to(u64 limit);

/// Read-only table of primes below 1e6, built once on first use.
const std::vector<u32>& small_primes();

/// mu(1..n) by a linear sieve; index 0 unused.
std::vector<signed char> mobius_table(u64 n);

/// theta_q(m) for 0 <= m <= limit via a parity sieve over v_p for
/// p = 3 (mod 4); entry 0 is 0. No per-m factorization.
std::vector<std::uint8_t> theta_q_table(u64 limit);

/// varpi(m) for 0 <= m <= limit (sieve out 2 and p = 3 (mod 4)); entry 0 is 0.
std::vector<std::uint8_t> varpi_table(u64 limit);

/// a^e mod m with 128-bit intermediates.
u64 pow_mod(u64 a, u64 e, u64 m);

/// Inverse of a modulo m; requires gcd(a, m) == 1.
u64 inverse_mod(u64 a, u64 m);

/// Integer power with overflow check.
u64 ipow(u64 base, unsigned exp);

}  // namespace conic
