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

#include "conic/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace conic {

// ---------------------------------------------------------------------------
// common.hpp odds and ends

BudgetExceeded::BudgetExceeded(std::string_view what, double estimated_ops,
                               double max_ops)
    : std::runtime_error(std::string(what) + ": estimated " +
                         std::to_string(static_cast<long double>(estimated_ops)) +
                         " operations exceeds budget of " +
                         std::to_string(static_cast<long double>(max_ops))),
      estimated_ops_(estimated_ops) {}

std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

std::string to_string(i128 v) {
  if (v < 0) return "-" + to_string(abs_u128(v));
  return to_string(static_cast<u128>(v));
}

i128 parse_i128(std::string_view text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
    negative = text[i] == '-';
    ++i;
  }
  if (i == text.size()) throw ParseError("empty integer literal");
  u128 limit = negative ? (u128(1) << 127) : (u128(1) << 127) - 1;
  u128 v = 0;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (c < '0' || c > '9') throw ParseError("invalid digit in integer literal '" + std::string(text) + "'");
    const u128 next = v * 10 + static_cast<unsigned>(c - '0');
    if (next / 10 != v || next > limit) throw RangeError("integer literal exceeds 128-bit range");
    v = next;
  }
  return negative ? static_cast<i128>(u128(0) - v) : static_cast<i128>(v);
}

namespace {
std::atomic<unsigned> g_threads{0};
}

unsigned worker_threads() {
  const unsigned n = g_threads.load();
  if (n != 0) return n;
  return std::max(1u, std::thread::hardware_concurrency());
}

void set_worker_threads(unsigned n) { g_threads.store(n); }

// ---------------------------------------------------------------------------
// modular helpers

namespace {

u128 mul_mod(u128 a, u128 b, u128 m) {
  if (m <= u128(UINT64_MAX)) return (a % m) * (b % m) % m;
  // Shift-and-add; only reached for moduli above 2^64.
  a %= m;
  b %= m;
  u128 r = 0;
  while (b > 0) {
    if (b & 1) {
      r = (r >= m - a) ? r - (m - a) : r + a;
    }
    a = (a >= m - a) ? a - (m - a) : a + a;
    b >>= 1;
  }
  return r;
}

u128 pow_mod_128(u128 a, u128 e, u128 m) {
  u128 r = 1 % m;
  a %= m;
  while (e > 0) {
    if (e & 1) r = mul_mod(r, a, m);
    a = mul_mod(a, a, m);
    e >>= 1;
  }
  return r;
}

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    const u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// Brent's cycle finding with batched gcds; c varies deterministically on
// failure.
u128 pollard_rho(u128 n) {
  if (n % 2 == 0) return 2;
  for (u128 c = 1;; ++c) {
    auto f = [&](u128 x) {
      const u128 y = mul_mod(x, x, n);
      return y >= n - c ? y - (n - c) : y + c;
    };
    u128 y = 2, x = 2, g = 1, q = 1, ys = 2;
    std::size_t r = 1;
    constexpr std::size_t kBatch = 128;
    while (g == 1) {
      x = y;
      for (std::size_t i = 0; i < r; ++i) y = f(y);
      std::size_t k = 0;
      while (k < r && g == 1) {
        ys = y;
        const std::size_t lim = std::min(kBatch, r - k);
        for (std::size_t i = 0; i < lim; ++i) {
          y = f(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = gcd128(q, n);
        k += kBatch;
      }
      r *= 2;
    }
    if (g == n) {
      // Backtrack one step at a time from the last saved position.
      do {
        ys = f(ys);
        g = gcd128(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_rec(u128 n, std::vector<u128>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  const u128 d = pollard_rho(n);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

}  // namespace

u64 pow_mod(u64 a, u64 e, u64 m) {
  return static_cast<u64>(pow_mod_128(a, e, m));
}

u64 inverse_mod(u64 a, u64 m) {
  if (m == 1) return 0;
  i128 t = 0, new_t = 1;
  i128 r = m, new_r = a % m;
  while (new_r != 0) {
    const i128 q = r / new_r;
    std::tie(t, new_t) = std::pair{new_t, t - q * new_t};
    std::tie(r, new_r) = std::pair{new_r, r - q * new_r};
  }
  if (r != 1) throw DomainError("inverse_mod: argument not invertible");
  if (t < 0) t += m;
  return static_cast<u64>(t);
}

u64 ipow(u64 base, unsigned exp) {
  u64 r = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (__builtin_mul_overflow(r, base, &r)) throw RangeError("ipow overflow");
  }
  return r;
}

bool is_prime(u128 n) {
  if (n < 2) return false;
  static constexpr u64 kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
  for (u64 p : kBases) {
    if (n % p == 0) return n == p;
  }
  u128 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // The first 12 bases are a proof below 3.3e24; above that the test is
  // probabilistic in principle but deterministic in execution.
  for (u64 a : kBases) {
    u128 x = pow_mod_128(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// primes

std::vector<u32> primes_up_to(u64 limit) {
  std::vector<u32> primes;
  if (limit < 2) return primes;
  std::vector<std::uint8_t> composite(limit + 1, 0);
  for (u64 i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<u32>(i));
    for (u64 j = i * i; j <= limit; j += i) composite[j] = 1;
  }
  return primes;
}

const std::vector<u32>& small_primes() {
  static const std::vector<u32> table = primes_up_to(1'000'000);
  return table;
}

std::vector<signed char> mobius_table(u64 n) {
  std::vector<signed char> mu(n + 1, 1);
  std::vector<u32> primes;
  std::vector<std::uint8_t> composite(n + 1, 0);
  if (n >= 1) mu[1] = 1;
  for (u64 i = 2; i <= n; ++i) {
    if (!composite[i]) {
      primes.push_back(static_cast<u32>(i));
      mu[i] = -1;
    }
    for (u32 p : primes) {
      const u64 ip = i * p;
      if (ip > n) break;
      composite[ip] = 1;
      if (i % p == 0) {
        mu[ip] = 0;
        break;
      }
      mu[ip] = static_cast<signed char>(-mu[i]);
    }
  }
  mu[0] = 0;
  return mu;
}

std::vector<std::uint8_t> theta_q_table(u64 limit) {
  std::vector<std::uint8_t> good(limit + 1, 1);
  good[0] = 0;
  if (limit < 3) return good;
  for (u32 p : primes_up_to(limit)) {
    if (p % 4 != 3) continue;
    // Strike m with v_p(m) = e for every odd e.
    u64 pe = p;
    for (int e = 1;; ++e) {
      if (e % 2 == 1) {
        u64 j = 1;
        for (u64 m = pe; m <= limit; m += pe, ++j) {
          if (j % p != 0) good[m] = 0;
        }
      }
      if (pe > limit / p) break;
      pe *= p;
    }
  }
  return good;
}

std::vector<std::uint8_t> varpi_table(u64 limit) {
  std::vector<std::uint8_t> good(limit + 1, 1);
  good[0] = 0;
  for (u32 p : primes_up_to(limit)) {
    if (p % 4 == 1) continue;
    for (u64 m = p; m <= limit; m += p) good[m] = 0;
  }
  return good;
}

// ---------------------------------------------------------------------------
// factorization

int Factorization::valuation(u128 p) const {
  for (const auto& f : factors) {
    if (f.prime == p) return f.exponent;
  }
  return 0;
}

Factorization factor(i128 m) {
  if (m == 0) throw DomainError("factor: zero has no factorization");
  Factorization out;
  out.value = m;
  out.sign = m < 0 ? -1 : 1;
  u128 n = abs_u128(m);

  auto take = [&](u128 p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) out.factors.push_back({p, e});
  };
  take(2);
  take(3);
  take(5);
  // Wheel mod 30 over the residues coprime to 30.
  static constexpr unsigned kWheel[] = {4, 2, 4, 2, 4, 6, 2, 6};
  u64 d = 7;
  for (std::size_t i = 0; d <= 1'000'000; d += kWheel[i++ % 8]) {
    if (u128(d) * d > n) break;
    take(d);
  }
  if (n > 1) {
    std::vector<u128> rest;
    if (u128(d) * d > n) {
      rest.push_back(n);
    } else {
      factor_rec(n, rest);
    }
    std::sort(rest.begin(), rest.end());
    for (u128 p : rest) {
      if (!out.factors.empty() && out.factors.back().prime == p) {
        ++out.factors.back().exponent;
      } else {
        out.factors.push_back({p, 1});
      }
    }
  }
  return out;
}

int valuation(i128 m, u64 p) {
  if (m == 0) return kInfiniteValuation;
  u128 n = abs_u128(m);
  int e = 0;
  while (n % p == 0) {
    n /= p;
    ++e;
  }
  return e;
}

// ---------------------------------------------------------------------------
// indicators

bool theta_q(i128 m) {
  if (m == 0) throw DomainError("theta_q: m = 0 is outside the domain");
  if (m < 0) return false;
  for (const auto& f : factor(m).factors) {
    if (f.prime % 4 == 3 && f.exponent % 2 == 1) return false;
  }
  return true;
}

bool varpi(i128 m) {
  if (m < 1) throw DomainError("varpi: requires m >= 1");
  for (const auto& f : factor(m).factors) {
    if (f.prime % 4 != 1) return false;
  }
  return true;
}

bool conic_soluble_local(i128 m, Place place) {
  if (m == 0) throw DomainError("conic_soluble_local: m = 0 is outside the domain");
  if (place.is_infinite()) return m > 0;
  const u64 p = place.prime;
  if (p == 2) {
    i128 odd = m;
    while (odd % 2 == 0) odd /= 2;
    i128 r = odd % 4;
    if (r < 0) r += 4;
    return r == 1;
  }
  if (p % 4 == 1) return true;
  return valuation(m, p) % 2 == 0;
}

// ---------------------------------------------------------------------------
// Ramanujan sums

i64 ramanujan_sum(u64 q, i64 a) {
  if (q == 0) throw DomainError("ramanujan_sum: q must be positive");
  i64 result = 1;
  for (const auto& f : factor(static_cast<i128>(q)).factors) {
    const u64 p = static_cast<u64>(f.prime);
    const int m = f.exponent;
    const int v = valuation(a, p);
    const i64 pm1 = static_cast<i64>(ipow(p, m - 1));
    const i64 term = pm1 * ((v >= m ? static_cast<i64>(p) : 0) - (v >= m - 1 ? 1 : 0));
    result *= term;
    if (result == 0) return 0;
  }
  return result;
}

i64 ramanujan_sum_direct(u64 q, i64 a) {
  if (q == 0) throw DomainError("ramanujan_sum_direct: q must be positive");
  const i64 ar = ((a % static_cast<i64>(q)) + static_cast<i64>(q)) % static_cast<i64>(q);
  long double re = 0;
  for (u64 x = 0; x < q; ++x) {
    if (std::gcd(x, q) != 1) continue;
    const u64 k = static_cast<u64>((static_cast<u128>(ar) * x) % q);
    re += std::cos(2 * std::numbers::pi_v<long double> * static_cast<long double>(k) /
                   static_cast<long double>(q));
  }
  return static_cast<i64>(std::llround(re));
}

// ---------------------------------------------------------------------------
// constants

ArithConstants landau_c0(u64 prime_cutoff) {
  if (prime_cutoff < 3) throw DomainError("landau_c0: cutoff must be >= 3");
  const auto primes = prime_cutoff <= 1'000'000 ? small_primes() : primes_up_to(prime_cutoff);
  long double log_c0 = 0;
  for (u32 p : primes) {
    if (p > prime_cutoff) break;
    if (p % 4 != 3) continue;
    const long double pp = static_cast<long double>(p) * p;
    log_c0 += 0.5L * std::log1p(-1.0L / pp);
  }
  ArithConstants out;
  out.c0_prime_cutoff = prime_cutoff;
  out.c0 = static_cast<double>(std::exp(log_c0));
  // sum_{p > c} p^-2 <= 1/(c - 1); -log(1 - x) <= x / (1 - x).
  const double c = static_cast<double>(prime_cutoff);
  const double tail = 1.0 / (c - 1.0);
  const double delta = 0.5 * tail / (1.0 - 1.0 / (c * c));
  out.c0_error = out.c0 * (1.0 - std::exp(-delta));
  out.landau_k = 1.0 / (std::numbers::sqrt2 * out.c0);
  return out;
}

double mertens_3mod4(double bound) {
  if (!(bound >= 3)) throw DomainError("mertens_3mod4: bound must be >= 3");
  const u64 lim = static_cast<u64>(std::ceil(bound));
  const auto primes = lim <= 1'000'000 ? small_primes() : primes_up_to(lim);
  long double log_prod = 0;
  for (u32 p : primes) {
    if (static_cast<double>(p) >= bound) break;
    if (p % 4 == 3) log_prod += std::log1p(-1.0L / p);
  }
  return static_cast<double>(std::exp(log_prod));
}

double mertens_3mod4_main_term(double bound, double c0) {
  const double gamma = std::numbers::egamma;
  return std::sqrt(std::numbers::pi) / std::sqrt(2.0 * std::exp(gamma)) * c0 /
         std::sqrt(std::log(bound));
}

DotDdot split_dot_ddot(u64 q) {
  if (q == 0) throw DomainError("split_dot_ddot: Q must be positive");
  DotDdot out;
  for (const auto& f : factor(static_cast<i128>(q)).factors) {
    const u64 pe = ipow(static_cast<u64>(f.prime), f.exponent);
    if (f.prime % 4 == 1) out.dot *= pe;
    if (f.prime % 4 == 3) out.ddot *= pe;
  }
  return out;
}

u64 euler_phi(u64 m) {
  if (m == 0) throw DomainError("euler_phi: m must be positive");
  u64 r = m;
  for (const auto& f : factor(static_cast<i128>(m)).factors) {
    const u64 p = static_cast<u64>(f.prime);
    r = r / p * (p - 1);
  }
  return r;
}

u64 divisor_tau(u64 m) {
  if (m == 0) throw DomainError("divisor_tau: m must be positive");
  u64 r = 1;
  for (const auto& f : factor(static_cast<i128>(m)).factors) r *= static_cast<u64>(f.exponent + 1);
  return r;
}

int mobius(u64 m) {
  if (m == 0) throw DomainError("mobius: m must be positive");
  int r = 1;
  for (const auto& f : factor(static_cast<i128>(m)).factors) {
    if (f.exponent > 1) return 0;
    r = -r;
  }
  return r;
}

}  // namespace conic
