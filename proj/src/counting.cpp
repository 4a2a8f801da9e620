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

#include "conic/counting.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <unordered_map>

#include "conic/arith.hpp"

namespace conic {

namespace {

constexpr u64 kThetaTableLimit = u64(1) << 24;

// theta_q on f1 values: sieve table for small |v|, memoized factorization
// beyond it. One per task; nothing shared.
class ThetaCache {
 public:
  explicit ThetaCache(const std::vector<std::uint8_t>* table) : table_(table) {}

  bool soluble(i128 v) {
    if (v < 0) return false;
    const u128 a = static_cast<u128>(v);
    if (a < table_->size()) return (*table_)[static_cast<std::size_t>(a)] != 0;
    auto it = memo_.find(a);
    if (it != memo_.end()) return it->second;
    const bool r = theta_q(v);
    memo_.emplace(a, r);
    return r;
  }

 private:
  struct Hash {
    std::size_t operator()(u128 v) const {
      return std::hash<u64>{}(static_cast<u64>(v) ^ static_cast<u64>(v >> 64) * 0x9e3779b97f4a7c15ull);
    }
  };
  const std::vector<std::uint8_t>* table_;
  std::unordered_map<u128, bool, Hash> memo_;
};

// Univariate coefficients of f2 in the last variable for a fixed prefix.
struct LineKernel {
  int n = 0;
  int d = 0;
  // (coeff, prefix exponents, last exponent) per monomial
  struct Term {
    i128 coeff;
    std::vector<int> exps;
    int last;
  };
  std::vector<Term> terms;

  int max_last = 0;

  explicit LineKernel(const Form& f) : n(f.n_vars()), d(f.degree()) {
    for (const auto& m : f.monomials()) {
      terms.push_back({m.coeff, std::vector<int>(m.exps.begin(), m.exps.end() - 1), m.exps.back()});
      max_last = std::max(max_last, m.exps.back());
    }
  }

  void coefficients(std::span<const i64> prefix, std::span<i128> coef) const {
    std::fill(coef.begin(), coef.end(), 0);
    for (const auto& t : terms) {
      i128 v = t.coeff;
      for (int i = 0; i + 1 < n; ++i) {
        for (int e = 0; e < t.exps[i]; ++e) v = checked_mul(v, prefix[i]);
      }
      coef[t.last] = checked_add(coef[t.last], v);
    }
  }
};

template <int D>
void scan_line_fixed(const i64* c, i64 box, std::vector<i64>& roots) {
  for (i64 y = -box; y <= box; ++y) {
    i64 v = c[D];
    for (int k = D - 1; k >= 0; --k) v = v * y + c[k];
    if (v == 0) roots.push_back(y);
  }
}

void scan_line_small(const i64* c, int d, i64 box, std::vector<i64>& roots) {
  switch (d) {
    case 1: scan_line_fixed<1>(c, box, roots); return;
    case 2: scan_line_fixed<2>(c, box, roots); return;
    case 3: scan_line_fixed<3>(c, box, roots); return;
    case 4: scan_line_fixed<4>(c, box, roots); return;
    case 6: scan_line_fixed<6>(c, box, roots); return;
    default:
      for (i64 y = -box; y <= box; ++y) {
        i64 v = c[d];
        for (int k = d - 1; k >= 0; --k) v = v * y + c[k];
        if (v == 0) roots.push_back(y);
      }
  }
}

void scan_line_wide(std::span<const i128> c, int d, i64 box, std::vector<i64>& roots) {
  for (i64 y = -box; y <= box; ++y) {
    i128 v = c[d];
    for (int k = d - 1; k >= 0; --k) v = checked_add(checked_mul(v, y), c[k]);
    if (v == 0) roots.push_back(y);
  }
}

u128 isqrt(u128 v) {
  u128 r = static_cast<u128>(std::sqrt(static_cast<long double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

// Integer roots in [-box, box] of c2 y^2 + c1 y + c0, or every y when all
// coefficients vanish.
void solve_line(std::span<const i128> c, i64 box, std::vector<i64>& roots) {
  const i128 c0 = c[0];
  const i128 c1 = c.size() > 1 ? c[1] : 0;
  const i128 c2 = c.size() > 2 ? c[2] : 0;
  auto take = [&](i128 num, i128 den) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    if (num % den != 0) return;
    const i128 y = num / den;
    if (y >= -box && y <= box) roots.push_back(static_cast<i64>(y));
  };
  if (c2 == 0) {
    if (c1 == 0) {
      if (c0 == 0) {
        for (i64 y = -box; y <= box; ++y) roots.push_back(y);
      }
      return;
    }
    take(-c0, c1);
    return;
  }
  const i128 disc = checked_add(checked_mul(c1, c1), -checked_mul(checked_mul(4, c2), c0));
  if (disc < 0) return;
  const i128 r = static_cast<i128>(isqrt(static_cast<u128>(disc)));
  if (r * r != disc) return;
  take(-c1 - r, 2 * c2);
  if (r != 0) take(-c1 + r, 2 * c2);
  std::sort(roots.begin(), roots.end());
}

u64 gcd_of(std::span<const i64> x) {
  u64 g = 0;
  for (i64 v : x) g = std::gcd(g, static_cast<u64>(v < 0 ? -v : v));
  return g;
}

}  // namespace

ZeroTally enumerate_box(const Instance& inst, u64 box, const Budget& budget, LineMethod method) {
  const int n = inst.n;
  const LineKernel kernel(inst.f2);
  const bool solve = method == LineMethod::automatic && kernel.max_last <= 2;
  const double side = 2.0 * static_cast<double>(box) + 1.0;
  budget.require(solve ? std::pow(side, n - 1) * 8 : std::pow(side, n), "box enumeration");
  const i64 P = static_cast<i64>(box);

  // Every |f| on the box is at most ||f||_1 * P^d.
  const double f2_bound = static_cast<double>(inst.f2.coefficient_norm()) * std::pow(static_cast<double>(P), inst.f2.degree());
  const bool narrow = f2_bound < 4.0e18;
  const double f1_bound = static_cast<double>(inst.f1.coefficient_norm()) * std::pow(static_cast<double>(P), inst.f1.degree());
  const auto table = theta_q_table(static_cast<u64>(std::min(f1_bound, static_cast<double>(kThetaTableLimit))));

  const int d2 = inst.f2.degree();
  // Tasks are the values of x0 (for n = 1 a single task covers the line).
  const std::size_t tasks = n == 1 ? 1 : static_cast<std::size_t>(2 * P + 1);

  auto run = [&](std::size_t task) {
    ZeroTally tally;
    ThetaCache cache(&table);
    std::vector<i64> x(n, 0);
    std::vector<i128> coef(d2 + 1);
    std::vector<i64> coef64(d2 + 1);
    std::vector<i64> roots;
    if (n >= 2) x[0] = static_cast<i64>(task) - P;
    // Odometer over x1..x_{n-2}.
    for (int i = 1; i + 1 < n; ++i) x[i] = -P;
    for (;;) {
      kernel.coefficients(std::span<const i64>(x.data(), n - 1), coef);
      roots.clear();
      if (solve) {
        solve_line(coef, P, roots);
      } else if (narrow) {
        for (int k = 0; k <= d2; ++k) coef64[k] = static_cast<i64>(coef[k]);
        scan_line_small(coef64.data(), d2, P, roots);
      } else {
        scan_line_wide(coef, d2, P, roots);
      }
      for (i64 y : roots) {
        x[n - 1] = y;
        ++tally.zeros;
        const i128 v = evaluate(inst.f1, std::span<const i64>(x));
        const bool primitive = gcd_of(x) == 1;
        if (v == 0) {
          ++tally.zero_f1;
          if (primitive) {
            ++tally.primitive_soluble;
            ++tally.primitive_zero_f1;
          }
        } else if (cache.soluble(v)) {
          ++tally.soluble_nonzero_f1;
          if (primitive) ++tally.primitive_soluble;
        }
      }
      int i = n - 2;
      while (i >= 1 && x[i] == P) {
        x[i] = -P;
        --i;
      }
      if (i < 1) break;
      ++x[i];
    }
    return tally;
  };

  const auto parts = parallel_map<ZeroTally>(tasks, run);
  ZeroTally total;
  for (const auto& p : parts) {
    total.soluble_nonzero_f1 += p.soluble_nonzero_f1;
    total.zero_f1 += p.zero_f1;
    total.primitive_soluble += p.primitive_soluble;
    total.primitive_zero_f1 += p.primitive_zero_f1;
    total.zeros += p.zeros;
  }
  return total;
}

u64 theta_count(const Instance& inst, u64 box, bool include_zero, const Budget& budget) {
  if (box < 1) throw DomainError("theta_count: P must be >= 1");
  const ZeroTally t = enumerate_box(inst, box, budget);
  return t.soluble_nonzero_f1 + (include_zero ? t.zero_f1 : 0);
}

CountRecord count_N(const Instance& inst, u64 t, const Budget& budget, bool include_zero) {
  if (t < 1) throw DomainError("count_N: t must be >= 1");
  const auto start = std::chrono::steady_clock::now();
  const ZeroTally tally = enumerate_box(inst, t, budget);
  CountRecord rec;
  rec.label = inst.label;
  rec.t = t;
  rec.raw_count = (tally.primitive_soluble - (include_zero ? 0 : tally.primitive_zero_f1)) / 2;
  const double td = static_cast<double>(t);
  rec.normalized = static_cast<double>(rec.raw_count) * std::sqrt(std::log(td)) / std::pow(td, inst.n - inst.d);
  rec.include_zero = include_zero;
  rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

i64 mobius_identity_residual(const Instance& inst, u64 t, const Budget& budget) {
  if (t < 1) throw DomainError("mobius_identity_residual: t must be >= 1");
  const auto mu = mobius_table(t);
  i64 rhs = 0;
  for (u64 l = 1; l <= t; ++l) {
    if (mu[l] == 0) continue;
    const i64 nonzero = static_cast<i64>(theta_count(inst, t / l, true, budget)) - 1;
    rhs += mu[l] * nonzero;
  }
  const i64 lhs = 2 * static_cast<i64>(count_N(inst, t, budget).raw_count);
  return lhs - rhs;
}

u64 two_squares_count(u64 x, const Budget& budget) {
  budget.require(static_cast<double>(x), "two-squares sieve");
  constexpr u64 kMemoryLimit = 1'000'000'000;
  if (x > kMemoryLimit) throw BudgetExceeded("two-squares sieve memory", static_cast<double>(x), kMemoryLimit);
  if (x == 0) return 0;
  const auto table = theta_q_table(x);
  u64 count = 0;
  for (u64 m = 1; m <= x; ++m) count += table[m];
  return count;
}

u64 varpi_progression_count(u64 z, i64 a, u64 modulus) {
  if (modulus == 0 || modulus % 4 != 0) throw DomainError("varpi_progression_count: Q must be a positive multiple of 4");
  const i64 qi = static_cast<i64>(modulus);
  const u64 ar = static_cast<u64>(((a % qi) + qi) % qi);
  if (std::gcd(ar, modulus) != 1) throw DomainError("varpi_progression_count: gcd(a, Q) must be 1");
  if (ar % 4 != 1) throw DomainError("varpi_progression_count: a must be 1 (mod 4)");
  if (z < modulus) throw DomainError("varpi_progression_count: z must be >= Q");
  const auto table = varpi_table(z);
  u64 count = 0;
  for (u64 r = ar == 0 ? modulus : ar; r <= z; r += modulus) count += table[r];
  return count;
}

double varpi_progression_main_term(u64 z, u64 modulus, double c0) {
  const u64 ddot = split_dot_ddot(modulus).ddot;
  const double ratio = static_cast<double>(ddot) / static_cast<double>(euler_phi(ddot));
  const double zd = static_cast<double>(z);
  return std::numbers::sqrt2 * c0 * ratio * zd / (static_cast<double>(modulus) * std::sqrt(std::log(zd)));
}

std::string count_csv_header() { return "label,t,raw_count,normalized,include_zero,wall_time_s"; }

std::string to_csv_row(const CountRecord& rec) {
  char buf[256];
  std::snprintf(buf, sizeof buf, ",%llu,%llu,%.12g,%d,%.6f", static_cast<unsigned long long>(rec.t),
                static_cast<unsigned long long>(rec.raw_count), rec.normalized, rec.include_zero ? 1 : 0,
                rec.wall_time);
  return rec.label + buf;
}

}  // namespace conic
