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

#include "conic/expsums.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <unordered_map>

#include "conic/arith.hpp"

namespace conic {

const char* to_string(ErrorKind kind) { return kind == ErrorKind::rigorous ? "rigorous" : "heuristic"; }

RootTable::RootTable(u64 q) : q_(q), roots_(q) {
  if (q == 0) throw DomainError("RootTable: modulus must be positive");
  const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  for (u64 k = 0; k < q; ++k) {
    const long double angle = two_pi * static_cast<long double>(k) / static_cast<long double>(q);
    roots_[k] = cplx(static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle)));
  }
}

namespace {

u64 reduce(i64 a, u64 q) {
  const i64 qi = static_cast<i64>(q);
  return static_cast<u64>(((a % qi) + qi) % qi);
}

// Phase e(x) for a real x, reduced to [0, 1) in long double first.
cplx expi(long double x) {
  x -= std::floor(x);
  const long double angle = 2.0L * std::numbers::pi_v<long double> * x;
  return {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
}

std::vector<u64> prime_power_factors(u64 q) {
  std::vector<u64> out;
  for (const auto& f : factor(static_cast<i128>(q)).factors) {
    out.push_back(ipow(static_cast<u64>(f.prime), static_cast<unsigned>(f.exponent)));
  }
  return out;
}

}  // namespace

ComponentHistograms component_histograms(const Instance& inst, u64 q, const Budget& budget) {
  if (q == 0 || q >= (u64(1) << 32)) throw DomainError("component_histograms: modulus out of range");
  const Form* forms[] = {&inst.f1, &inst.f2};
  const auto comps = variable_components(forms);
  double work = 0;
  for (const auto& c : comps) work += std::pow(static_cast<double>(q), static_cast<double>(c.size()));
  budget.require(work, "residue histograms q^|block|");

  ComponentHistograms out;
  out.q = q;
  for (const auto& vars : comps) {
    const Form g1 = inst.f1.restrict_to(vars);
    const Form g2 = inst.f2.restrict_to(vars);
    const int k = static_cast<int>(vars.size());
    std::unordered_map<u64, u64> counts;
    std::vector<u64> x(k, 0);
    for (;;) {
      const u64 v1 = evaluate_mod(g1, x, q);
      const u64 v2 = evaluate_mod(g2, x, q);
      ++counts[v1 * q + v2];
      int i = k - 1;
      while (i >= 0 && x[i] == q - 1) {
        x[i] = 0;
        --i;
      }
      if (i < 0) break;
      ++x[i];
    }
    std::vector<ComponentHistograms::Entry> block;
    block.reserve(counts.size());
    for (const auto& [key, c] : counts) block.push_back({key / q, key % q, c});
    std::sort(block.begin(), block.end(),
              [](const auto& a, const auto& b) { return a.v1 != b.v1 ? a.v1 < b.v1 : a.v2 < b.v2; });
    out.blocks.push_back(std::move(block));
  }
  return out;
}

BirchTable::BirchTable(const Instance& inst, u64 q, const Budget& budget)
    : q_(q), hist_(component_histograms(inst, q, budget)), roots_(q) {}

cplx BirchTable::sum(u64 a1, u64 a2) const {
  a1 %= q_;
  a2 %= q_;
  cplx total(1.0, 0.0);
  for (const auto& block : hist_.blocks) {
    cplx s(0.0, 0.0);
    for (const auto& e : block) s += static_cast<double>(e.count) * roots_((a1 * e.v1 + a2 * e.v2) % q_);
    total *= s;
  }
  return total;
}

std::vector<cplx> BirchTable::primitive_row_sums() const {
  const u64 q = q_;
  return parallel_map<cplx>(q, [&](std::size_t a1_index) {
    const u64 a1 = a1_index;
    // Fold each block over v1 first: G[v2] = sum count e(a1 v1 / q).
    std::vector<std::vector<std::pair<u64, cplx>>> folded;
    std::vector<cplx> acc(q);
    std::vector<char> used(q);
    for (const auto& block : hist_.blocks) {
      std::fill(acc.begin(), acc.end(), cplx(0, 0));
      std::fill(used.begin(), used.end(), 0);
      for (const auto& e : block) {
        acc[e.v2] += static_cast<double>(e.count) * roots_((a1 * e.v1) % q);
        used[e.v2] = 1;
      }
      std::vector<std::pair<u64, cplx>> sparse;
      for (u64 v = 0; v < q; ++v) {
        if (used[v]) sparse.emplace_back(v, acc[v]);
      }
      folded.push_back(std::move(sparse));
    }
    const u64 g1 = std::gcd(a1, q);
    cplx row(0, 0);
    for (u64 a2 = 0; a2 < q; ++a2) {
      if (std::gcd(g1, a2) != 1) continue;
      cplx s(1, 0);
      for (const auto& sparse : folded) {
        cplx b(0, 0);
        for (const auto& [v2, w] : sparse) b += w * roots_((a2 * v2) % q);
        s *= b;
      }
      row += s;
    }
    return row;
  });
}

cplx birch_sum_direct(const Instance& inst, const ModularPhase& phase, const Budget& budget) {
  const u64 q = phase.q;
  if (q == 0 || q >= (u64(1) << 32)) throw DomainError("birch_sum: modulus out of range");
  budget.require(std::pow(static_cast<double>(q), inst.n), "direct Birch sum q^n");
  const u64 a1 = reduce(phase.a1, q);
  const u64 a2 = reduce(phase.a2.value_or(0), q);
  const RootTable roots(q);
  std::vector<u64> x(inst.n, 0);
  cplx total(0, 0);
  for (;;) {
    const u64 v = (a1 * evaluate_mod(inst.f1, x, q) + a2 * evaluate_mod(inst.f2, x, q)) % q;
    total += roots(v);
    int i = inst.n - 1;
    while (i >= 0 && x[i] == q - 1) {
      x[i] = 0;
      --i;
    }
    if (i < 0) break;
    ++x[i];
  }
  return total;
}

std::vector<ModularPhase> crt_phases(const ModularPhase& phase) {
  std::vector<ModularPhase> out;
  if (phase.q == 1) return out;
  const u64 a1 = reduce(phase.a1, phase.q);
  const u64 a2 = reduce(phase.a2.value_or(0), phase.q);
  for (u64 qi : prime_power_factors(phase.q)) {
    const u64 u = inverse_mod((phase.q / qi) % qi, qi);
    ModularPhase p;
    p.q = qi;
    p.a1 = static_cast<i64>(static_cast<u64>((static_cast<u128>(a1 % qi) * u) % qi));
    p.a2 = static_cast<i64>(static_cast<u64>((static_cast<u128>(a2 % qi) * u) % qi));
    out.push_back(p);
  }
  return out;
}

cplx birch_sum(const Instance& inst, const ModularPhase& phase, const Budget& budget) {
  if (phase.q == 0) throw DomainError("birch_sum: modulus must be positive");
  cplx total(1, 0);
  for (const auto& local : crt_phases(phase)) {
    const BirchTable table(inst, local.q, budget);
    total *= table.sum(static_cast<u64>(local.a1), static_cast<u64>(local.a2.value_or(0)));
  }
  return total;
}

std::vector<u64> theta_residue_counts(u64 x, u64 q, const Budget& budget) {
  if (q == 0) throw DomainError("theta_residue_counts: modulus must be positive");
  budget.require(static_cast<double>(x), "two-squares sieve");
  std::vector<u64> counts(q, 0);
  if (x == 0) return counts;
  const auto table = theta_q_table(x);
  for (u64 m = 1, r = 1 % q; m <= x; ++m) {
    counts[r] += table[m];
    if (++r == q) r = 0;
  }
  return counts;
}

cplx exp_sum_thetaQ(u64 x, i64 a1, u64 q, double beta, const Budget& budget) {
  if (q == 0) throw DomainError("exp_sum_thetaQ: modulus must be positive");
  if (beta == 0.0) {
    const auto counts = theta_residue_counts(x, q, budget);
    const RootTable roots(q);
    const u64 a = reduce(a1, q);
    cplx total(0, 0);
    for (u64 r = 0; r < q; ++r) total += static_cast<double>(counts[r]) * roots((a * r) % q);
    return total;
  }
  budget.require(static_cast<double>(x), "two-squares sieve");
  const auto table = theta_q_table(x);
  const long double alpha = static_cast<long double>(reduce(a1, q)) / static_cast<long double>(q) +
                            static_cast<long double>(beta);
  cplx total(0, 0);
  for (u64 m = 1; m <= x; ++m) {
    if (table[m]) total += expi(alpha * static_cast<long double>(m));
  }
  return total;
}

namespace {

// Weights w[l] with F(a1, q) = sum_l w[l] e(a1 l / q).
std::vector<double> frak_weights(u64 q, double U) {
  if (q == 0) throw DomainError("frak_F: modulus must be positive");
  if (!(U >= 4)) throw DomainError("frak_F: U must be >= 4");
  const u64 kmax = static_cast<u64>(std::floor(std::sqrt(U)));
  // k whose prime factors are all 3 (mod 4).
  std::vector<std::uint8_t> good(kmax + 1, 1);
  for (u32 p : primes_up_to(kmax)) {
    if (p % 4 == 3) continue;
    for (u64 m = p; m <= kmax; m += p) good[m] = 0;
  }

  struct LTerm {
    u64 G;
    u64 mod;
    u64 residue;  // l / G mod `mod`
    double base;
  };
  std::vector<LTerm> lterm(q);
  for (u64 l = 0; l < q; ++l) {
    const u64 G = l == 0 ? q : std::gcd(l, q);
    const u64 qq = q / G;
    double p3 = 1;
    for (const auto& f : factor(static_cast<i128>(qq)).factors) {
      const double p = static_cast<double>(f.prime);
      if (f.prime % 4 == 3) p3 /= 1.0 - 1.0 / p;
    }
    const u64 lcm = std::lcm<u64>(4, qq);
    const u64 mod = std::gcd<u64>(4, qq);
    lterm[l] = {G, mod, (l / G) % mod, p3 / (static_cast<double>(G) * static_cast<double>(lcm))};
  }

  std::vector<double> w(q, 0.0);
  for (u64 k = 1; k <= kmax; ++k) {
    if (!good[k]) continue;
    for (u64 m = k * k; static_cast<double>(m) <= U; m *= 2) {
      const u64 g = std::gcd(m, q);
      const u64 r = m / g;
      const double weight = static_cast<double>(g) / static_cast<double>(m);
      for (u64 l = 0; l < q; l += g) {
        const LTerm& L = lterm[l];
        if (r % L.mod != L.residue) continue;
        if (!varpi(static_cast<i128>(L.G / g))) continue;
        w[l] += weight * L.base;
      }
      if (m > (u64(1) << 62)) break;
    }
  }
  return w;
}

double p3_factor(u64 q) {
  double p3 = 1;
  for (const auto& f : factor(static_cast<i128>(q)).factors) {
    if (f.prime % 4 == 3) p3 /= 1.0 - 1.0 / static_cast<double>(f.prime);
  }
  return p3;
}

TruncatedValue frak_from_weights(const std::vector<double>& w, u64 q, u64 a1, double U,
                                 const RootTable& roots) {
  TruncatedValue out;
  double abs_sum = 0;
  for (u64 l = 0; l < q; ++l) {
    out.value += w[l] * roots((a1 * l) % q);
    abs_sum += std::abs(w[l]);
  }
  out.error_bound = 1.5 * static_cast<double>(q) * p3_factor(q) / std::sqrt(U);
  out.error_kind = ErrorKind::rigorous;
  out.params["q"] = static_cast<double>(q);
  out.params["a1"] = static_cast<double>(a1);
  out.params["U"] = U;
  out.params["triangle_bound"] = abs_sum + out.error_bound;
  return out;
}

}  // namespace

TruncatedValue frak_F(i64 a1, u64 q, double U) {
  const auto w = frak_weights(q, U);
  return frak_from_weights(w, q, reduce(a1, q), U, RootTable(q));
}

std::vector<TruncatedValue> frak_F_all(u64 q, double U) {
  const auto w = frak_weights(q, U);
  const RootTable roots(q);
  std::vector<TruncatedValue> out;
  out.reserve(q);
  for (u64 a1 = 0; a1 < q; ++a1) out.push_back(frak_from_weights(w, q, a1, U, roots));
  return out;
}

cplx W_helper(i64 a, u64 q, u64 k) {
  if (q == 0) throw DomainError("W_helper: modulus must be positive");
  const u64 kr = k % q;
  const u64 g = std::gcd(static_cast<u64>((static_cast<u128>(kr) * kr) % q), q);
  const u64 r = q / g;
  const double c = static_cast<double>(ramanujan_sum(r, a));
  return {c * static_cast<double>(r) / static_cast<double>(euler_phi(r)), 0.0};
}

cplx W_helper_direct(i64 a, u64 q, u64 k) {
  if (q == 0) throw DomainError("W_helper: modulus must be positive");
  const u64 kr = k % q;
  const u64 g = std::gcd(static_cast<u64>((static_cast<u128>(kr) * kr) % q), q);
  const auto qf = factor(static_cast<i128>(q)).factors;
  const RootTable roots(q);
  const u64 ar = reduce(a, q);
  cplx total(0, 0);
  for (u64 l = 0; l < q; ++l) {
    if ((l == 0 ? q : std::gcd(l, q)) != g) continue;
    double weight = 1;
    for (const auto& f : qf) {
      const int vl = l == 0 ? kInfiniteValuation : valuation(static_cast<i128>(l), static_cast<u64>(f.prime));
      if (f.exponent > vl) weight /= 1.0 - 1.0 / static_cast<double>(f.prime);
    }
    total += weight * roots((q - (ar * l) % q) % q);
  }
  return total;
}

int default_shell_depth(u64 p, int n) {
  int m = 0;
  while (std::pow(static_cast<double>(p), 3.0 * (m + 1)) * n <= 5e8) ++m;
  return m;
}

namespace {

// Tail estimate from the last two shells, assuming geometric decay.
double shell_tail(const std::vector<cplx>& shells) {
  if (shells.empty()) return 0;
  const double last = std::abs(shells.back());
  if (shells.size() < 2) return last;
  const double prev = std::abs(shells[shells.size() - 2]);
  const double ratio = prev > 0 ? std::min(last / prev, 0.9) : 0.9;
  return last * ratio / (1.0 - ratio);
}

std::vector<cplx> row_sums_for(const Instance& inst, u64 q, const Budget& budget) {
  if (q == 1) return {cplx(1, 0)};
  return BirchTable(inst, q, budget).primitive_row_sums();
}

}  // namespace

TruncatedValue E_phi_p(const Instance& inst, u64 p, int kappa_max, int m_max, const Budget& budget) {
  if (!is_prime(p) || p % 4 != 3) throw DomainError("E_phi_p: p must be a prime = 3 (mod 4)");
  if (kappa_max < 0) throw DomainError("E_phi_p: kappa_max must be >= 0");
  if (m_max < 0) m_max = default_shell_depth(p, inst.n);
  const double pd = static_cast<double>(p);
  budget.require(std::pow(pd, 3.0 * m_max) * inst.n, "E_phi(p) shells p^(3m) n");

  TruncatedValue out;
  u64 q = 1;
  for (int m = 0; m <= m_max; ++m, q *= p) {
    const auto rows = row_sums_for(inst, q, budget);
    cplx shell(0, 0);
    for (int kappa = 0; kappa <= kappa_max; ++kappa) {
      const u64 pk = ipow(p, static_cast<unsigned>(kappa));
      const double factor = std::pow(pd, std::min(2 * kappa, m)) / std::pow(pd, 2.0 * kappa + m * (inst.n + 1.0));
      cplx inner(0, 0);
      for (u64 a1 = 0; a1 < q; ++a1) inner += rows[a1] * W_helper(static_cast<i64>(a1), q, pk);
      shell += factor * inner;
    }
    out.shells.push_back(shell);
    out.value += shell;
  }
  out.error_bound = shell_tail(out.shells);
  out.error_kind = ErrorKind::heuristic;
  out.params["p"] = pd;
  out.params["kappa_max"] = kappa_max;
  out.params["m_max"] = m_max;
  return out;
}

TruncatedValue E_phi_2(const Instance& inst, int t_max, int rho_max, const Budget& budget) {
  if (t_max < 0) throw DomainError("E_phi_2: t_max must be >= 0");
  if (rho_max < 0) rho_max = default_shell_depth(2, inst.n);
  budget.require(std::pow(2.0, 3.0 * rho_max) * inst.n, "E_phi(2) shells 2^(3 rho) n");

  TruncatedValue out;
  u64 q = 1;
  for (int rho = 0; rho <= rho_max; ++rho, q *= 2) {
    const auto rows = row_sums_for(inst, q, budget);
    const RootTable roots(q);
    cplx shell(0, 0);
    for (int t = 0; t <= t_max; ++t) {
      cplx inner(0, 0);
      for (u64 b1 = 0; b1 < q; ++b1) {
        const int v = b1 == 0 ? kInfiniteValuation : std::countr_zero(b1);
        if (v != kInfiniteValuation && v < rho - t - 2) continue;
        // e(-b1 2^t / 2^rho)
        const u64 shift = t >= 63 ? 0 : static_cast<u64>((static_cast<u128>(b1) << t) % q);
        inner += rows[b1] * roots((q - shift) % q);
      }
      shell += inner / std::pow(2.0, t + rho * static_cast<double>(inst.n));
    }
    shell *= 0.25;
    out.shells.push_back(shell);
    out.value += shell;
  }
  // Geometric tail of the t-sum: the t > t_max terms of the rho = 0 shell.
  out.error_bound = shell_tail(out.shells) + 0.5 * std::pow(2.0, -t_max);
  out.error_kind = ErrorKind::heuristic;
  out.params["t_max"] = t_max;
  out.params["rho_max"] = rho_max;
  return out;
}

TruncatedValue L_phi_truncated(const Instance& inst, u64 Q, double U, const Budget& budget) {
  if (Q < 1) throw DomainError("L_phi_truncated: Q must be >= 1");
  TruncatedValue out;
  double frak_tail = 0;
  cplx block(0, 0);
  u64 block_end = 1;
  for (u64 q = 1; q <= Q; ++q) {
    budget.require(std::pow(static_cast<double>(q), 3.0) * inst.n, "singular series q^3 n");
    const auto frak = frak_F_all(q, U);
    cplx term(0, 0);
    double abs_sum = 0;
    if (q == 1) {
      term = std::conj(frak[0].value);
      abs_sum = 1;
    } else {
      // sum_a S_{a,q} conj(F(a1,q)) needs S per a, so sum rows with conj(F).
      const BirchTable table(inst, q, budget);
      for (u64 a1 = 0; a1 < q; ++a1) {
        const u64 g1 = std::gcd(a1, q);
        for (u64 a2 = 0; a2 < q; ++a2) {
          if (std::gcd(g1, a2) != 1) continue;
          const cplx s = table.sum(a1, a2);
          term += s * std::conj(frak[a1].value);
          abs_sum += std::abs(s);
        }
      }
    }
    const double scale = std::pow(static_cast<double>(q), -static_cast<double>(inst.n));
    term *= scale;
    frak_tail += scale * abs_sum * frak[0].error_bound;
    out.value += term;
    block += term;
    if (q == block_end || q == Q) {
      out.shells.push_back(block);
      block = 0;
      block_end *= 2;
    }
  }
  const auto l0 = lambda0(inst);
  if (l0 && *l0 > 0) {
    out.error_bound = std::pow(static_cast<double>(Q), -*l0) + frak_tail;
    out.error_kind = ErrorKind::rigorous;
  } else {
    out.error_bound = std::abs(out.shells.back()) + frak_tail;
    out.error_kind = ErrorKind::heuristic;
  }
  out.params["Q"] = static_cast<double>(Q);
  out.params["U"] = U;
  return out;
}

std::string birch_csv_header() { return "q,a1,a2,re,im"; }

std::string birch_csv_row(u64 q, u64 a1, u64 a2, cplx s) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%llu,%llu,%llu,%.12g,%.12g", static_cast<unsigned long long>(q),
                static_cast<unsigned long long>(a1), static_cast<unsigned long long>(a2), s.real(), s.imag());
  return buf;
}

}  // namespace conic
