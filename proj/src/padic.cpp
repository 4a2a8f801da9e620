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

#include "conic/padic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>

#include "conic/arith.hpp"

namespace conic {

const char* to_string(DensityKind kind) {
  switch (kind) {
    case DensityKind::tau_f2: return "tau_f2";
    case DensityKind::ell: return "ell";
    case DensityKind::tau_weighted: return "tau_weighted";
  }
  return "?";
}

namespace {

constexpr u64 kModLimit = u64(1) << 32;

// Form evaluation mod q < 2^32 in plain 64-bit arithmetic.
class ModEvaluator {
 public:
  ModEvaluator(const Form& f, u64 q) : q_(q) {
    for (const auto& m : f.monomials()) {
      const i128 c = m.coeff % static_cast<i128>(q);
      terms_.push_back({static_cast<u64>(c < 0 ? c + static_cast<i128>(q) : c), m.exps});
    }
  }

  u64 operator()(const u64* x) const {
    u64 total = 0;
    for (const auto& t : terms_) {
      u64 v = t.coeff;
      for (std::size_t i = 0; i < t.exps.size(); ++i) {
        for (int e = 0; e < t.exps[i]; ++e) v = v * x[i] % q_;
      }
      total += v;
      if (total >= q_) total -= q_;
    }
    return total;
  }

 private:
  struct Term {
    u64 coeff;
    std::vector<int> exps;
  };
  u64 q_;
  std::vector<Term> terms_;
};

enum class Verdict { soluble, insoluble, undecided };

// Solubility of x^2 + y^2 = m z^2 over Q_p from m mod p^k.
Verdict decide(u64 p, u64 m_mod, int k) {
  if (p % 4 == 1) return Verdict::soluble;
  if (m_mod == 0) return Verdict::undecided;
  int v = 0;
  u64 m = m_mod;
  while (m % p == 0) {
    m /= p;
    ++v;
  }
  if (p == 2) {
    // The odd part mod 4 is known only when v + 2 <= k.
    if (v + 2 > k) return Verdict::undecided;
    return m % 4 == 1 ? Verdict::soluble : Verdict::insoluble;
  }
  return v % 2 == 0 ? Verdict::soluble : Verdict::insoluble;
}

struct LiftResult {
  u64 zeros = 0;           // residues mod p^N with f2 = 0
  u64 decided_soluble = 0; // of which decided soluble at level N
  u64 undecided = 0;       // undecided at level N
  double refined_soluble = 0;   // level-N units, from lifting undecided residues
  double refined_undecided = 0; // level-N units, still undecided at the ceiling
};

class LiftTree {
 public:
  LiftTree(const Instance& inst, u64 p, int level, int ceiling, bool want_ell)
      : n_(inst.n), p_(p), level_(level), ceiling_(ceiling), want_ell_(want_ell) {
    u64 q = 1;
    for (int k = 0; k <= ceiling; ++k) {
      powers_.push_back(q);
      f1_.emplace_back(inst.f1, q);
      f2_.emplace_back(inst.f2, q);
      if (k < ceiling) q *= p;
    }
    mass_step_ = std::pow(static_cast<double>(p), -(n_ - 1.0));
  }

  // Level-1 zeros of f2 (the task roots).
  std::vector<std::vector<u64>> roots() const {
    std::vector<std::vector<u64>> out;
    std::vector<u64> x(n_, 0);
    for (;;) {
      if (f2_[1](x.data()) == 0) out.push_back(x);
      int i = n_ - 1;
      while (i >= 0 && x[i] == p_ - 1) {
        x[i] = 0;
        --i;
      }
      if (i < 0) break;
      ++x[i];
    }
    return out;
  }

  LiftResult run(const std::vector<u64>& root) const {
    LiftResult r;
    std::vector<u64> x = root;
    visit(x, 1, r);
    return r;
  }

 private:
  void leaf(const std::vector<u64>& x, LiftResult& r) const {
    ++r.zeros;
    if (!want_ell_) return;
    switch (decide(p_, f1_[level_](x.data()), level_)) {
      case Verdict::soluble: ++r.decided_soluble; break;
      case Verdict::insoluble: break;
      case Verdict::undecided: {
        ++r.undecided;
        std::vector<u64> y = x;
        refine(y, level_, 1.0, r);
        break;
      }
    }
  }

  // x is a zero mod p^k; children are x + p^k s.
  template <class Fn>
  void for_children(std::vector<u64>& x, int k, Fn&& fn) const {
    const u64 step = powers_[k];
    const ModEvaluator& f2 = f2_[k + 1];
    std::vector<u64> base = x;
    std::vector<u64> s(n_, 0);
    for (;;) {
      for (int i = 0; i < n_; ++i) x[i] = base[i] + step * s[i];
      if (f2(x.data()) == 0) fn(x);
      int i = n_ - 1;
      while (i >= 0 && s[i] == p_ - 1) {
        s[i] = 0;
        --i;
      }
      if (i < 0) break;
      ++s[i];
    }
    x = base;
  }

  void visit(std::vector<u64>& x, int k, LiftResult& r) const {
    if (k == level_) {
      leaf(x, r);
      return;
    }
    for_children(x, k, [&](std::vector<u64>& y) { visit(y, k + 1, r); });
  }

  // Lift an undecided zero at level k carrying `mass` (level-N units).
  void refine(std::vector<u64>& x, int k, double mass, LiftResult& r) const {
    if (k == ceiling_) {
      r.refined_undecided += mass;
      return;
    }
    const double child_mass = mass * mass_step_;
    for_children(x, k, [&](std::vector<u64>& y) {
      switch (decide(p_, f1_[k + 1](y.data()), k + 1)) {
        case Verdict::soluble: r.refined_soluble += child_mass; break;
        case Verdict::insoluble: break;
        case Verdict::undecided: refine(y, k + 1, child_mass, r); break;
      }
    });
  }

  int n_;
  u64 p_;
  int level_;
  int ceiling_;
  bool want_ell_;
  double mass_step_;
  std::vector<u64> powers_;
  std::vector<ModEvaluator> f1_;
  std::vector<ModEvaluator> f2_;
};

LiftResult lift(const Instance& inst, u64 p, int level, int ceiling, bool want_ell, const Budget& budget) {
  if (!is_prime(p)) throw DomainError("local density: p must be prime");
  if (level < 1) throw DomainError("local density: level must be >= 1");
  const double pd = static_cast<double>(p);
  if (std::pow(pd, ceiling) >= static_cast<double>(kModLimit)) throw DomainError("local density: p^level too large");
  budget.require(std::pow(pd, (level - 1.0) * (inst.n - 1.0) + inst.n), "lift tree p^((N-1)(n-1)+n)");
  const LiftTree tree(inst, p, level, ceiling, want_ell);
  const auto roots = tree.roots();
  const auto parts = parallel_map<LiftResult>(roots.size(), [&](std::size_t i) { return tree.run(roots[i]); });
  LiftResult total;
  for (const auto& r : parts) {
    total.zeros += r.zeros;
    total.decided_soluble += r.decided_soluble;
    total.undecided += r.undecided;
    total.refined_soluble += r.refined_soluble;
    total.refined_undecided += r.refined_undecided;
  }
  return total;
}

// Joint distribution H[v1] = #{t mod q : f2(t) = 0, f1(t) = v1}.
std::vector<u64> joint_f1_on_zeros(const Instance& inst, u64 q, const Budget& budget) {
  const auto hist = component_histograms(inst, q, budget);
  budget.require(static_cast<double>(q) * q * hist.blocks.size() * q, "joint distribution q^3");
  std::vector<u64> H(q * q, 0);
  H[0] = 1;
  for (const auto& block : hist.blocks) {
    std::vector<u64> next(q * q, 0);
    for (u64 u1 = 0; u1 < q; ++u1) {
      for (u64 u2 = 0; u2 < q; ++u2) {
        const u64 c = H[u1 * q + u2];
        if (c == 0) continue;
        for (const auto& e : block) {
          next[((u1 + e.v1) % q) * q + (u2 + e.v2) % q] += c * e.count;
        }
      }
    }
    H.swap(next);
  }
  std::vector<u64> out(q);
  for (u64 v1 = 0; v1 < q; ++v1) out[v1] = H[v1 * q];
  return out;
}

}  // namespace

u64 residue_count_f2(const Instance& inst, u64 q, const Budget& budget) {
  if (q == 0) throw DomainError("residue_count_f2: modulus must be positive");
  const auto hist = component_histograms(inst, q, budget);
  std::vector<u128> dist(q, 0);
  dist[0] = 1;
  for (const auto& block : hist.blocks) {
    std::vector<u64> marginal(q, 0);
    for (const auto& e : block) marginal[e.v2] += e.count;
    std::vector<u128> next(q, 0);
    for (u64 u = 0; u < q; ++u) {
      if (dist[u] == 0) continue;
      for (u64 v = 0; v < q; ++v) {
        if (marginal[v]) next[(u + v) % q] += dist[u] * marginal[v];
      }
    }
    dist.swap(next);
  }
  if (dist[0] > static_cast<u128>(~u64(0))) throw RangeError("residue_count_f2: count exceeds 64 bits");
  return static_cast<u64>(dist[0]);
}

namespace {

LocalDensity tau_f2_single(const Instance& inst, u64 p, int level, const Budget& budget) {
  const double pd = static_cast<double>(p);
  const double q = std::pow(pd, level);
  const Form* forms[] = {&inst.f1, &inst.f2};
  double hist_work = 0;
  for (const auto& c : variable_components(forms)) hist_work += std::pow(q, static_cast<double>(c.size()));
  LocalDensity d;
  d.p = p;
  d.level = level;
  d.kind = DensityKind::tau_f2;
  if (q < static_cast<double>(kModLimit) && hist_work + q * q * inst.n <= budget.max_ops &&
      hist_work + q * q * inst.n < 5e9) {
    d.raw_count = residue_count_f2(inst, static_cast<u64>(q), budget);
  } else {
    d.raw_count = lift(inst, p, level, level, false, budget).zeros;
  }
  d.density = static_cast<double>(d.raw_count) / std::pow(pd, level * (inst.n - 1.0));
  d.density_low = d.density_high = d.density;
  return d;
}

LocalDensity ell_single(const Instance& inst, u64 p, int level, const EllOptions& options, const Budget& budget) {
  const LiftResult r = lift(inst, p, level, level + std::max(0, options.lift_extra), true, budget);
  LocalDensity d;
  d.p = p;
  d.level = level;
  d.kind = DensityKind::ell;
  const double scale = std::pow(static_cast<double>(p), -level * (inst.n - 1.0));
  const double low = static_cast<double>(r.decided_soluble) + r.refined_soluble;
  const double high = low + r.refined_undecided;
  d.raw_count = r.decided_soluble + (options.undecided_soluble ? r.undecided : 0);
  d.density_low = low * scale;
  d.density_high = high * scale;
  d.density = options.undecided_soluble ? d.density_high : d.density_low;
  d.undecided_fraction = high > 0 ? (high - low) / high : 0;
  return d;
}

bool close(double a, double b, double tol) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0 || std::abs(a - b) <= tol * scale;
}

}  // namespace

LocalDensity tau_f2(const Instance& inst, u64 p, int level, const Budget& budget) {
  if (!is_prime(p)) throw DomainError("tau_f2: p must be prime");
  if (level < 1) throw DomainError("tau_f2: level must be >= 1");
  LocalDensity d = tau_f2_single(inst, p, level, budget);
  if (level >= 2) d.stabilized = close(d.density, tau_f2_single(inst, p, level - 1, budget).density, 0.02);
  return d;
}

LocalDensity ell_p(const Instance& inst, u64 p, int level, const EllOptions& options, const Budget& budget) {
  LocalDensity d = ell_single(inst, p, level, options, budget);
  if (level >= 2) {
    const LocalDensity prev = ell_single(inst, p, level - 1, options, budget);
    d.stabilized = close(d.density, prev.density, options.stabilization_tol);
  }
  return d;
}

LocalDensity ell_p_level1(const Instance& inst, u64 p, const Budget& budget) {
  if (!is_prime(p) || p == 2) throw DomainError("ell_p_level1: p must be an odd prime");
  if (p >= kModLimit) throw DomainError("ell_p_level1: p too large");
  const auto H = joint_f1_on_zeros(inst, p, budget);
  u64 soluble = 0;
  u64 undecided = 0;
  for (u64 v1 = 0; v1 < p; ++v1) {
    switch (decide(p, v1, 1)) {
      case Verdict::soluble: soluble += H[v1]; break;
      case Verdict::insoluble: break;
      case Verdict::undecided: undecided += H[v1]; break;
    }
  }
  LocalDensity d;
  d.p = p;
  d.level = 1;
  d.kind = DensityKind::ell;
  const double scale = std::pow(static_cast<double>(p), -(inst.n - 1.0));
  d.raw_count = soluble + undecided;
  d.density_low = static_cast<double>(soluble) * scale;
  d.density_high = static_cast<double>(soluble + undecided) * scale;
  d.density = d.density_high;
  d.undecided_fraction = soluble + undecided > 0 ? static_cast<double>(undecided) / static_cast<double>(soluble + undecided) : 0;
  return d;
}

LocalFactor local_factor_from(const Instance& inst, const LocalDensity& ell) {
  const double p = static_cast<double>(ell.p);
  LocalFactor f;
  f.p = ell.p;
  f.ell = ell;
  f.tau_p = (1.0 - std::pow(p, -(inst.n - inst.d))) / (1.0 - 1.0 / p) * ell.density;
  f.lambda_p = 1.0 / std::sqrt(1.0 - 1.0 / p);
  f.ratio = f.tau_p / f.lambda_p;
  return f;
}

LocalFactor tau_p_weighted(const Instance& inst, u64 p, int level, const EllOptions& options, const Budget& budget) {
  return local_factor_from(inst, ell_p(inst, p, level, options, budget));
}

int default_level(u64 p, int n) {
  if (p == 2) return 6;
  int level = 1;
  const double pd = static_cast<double>(p);
  while (level < 6 && std::pow(pd, level * (n - 1.0) + n) <= 2e7) ++level;
  return level;
}

TruncatedValue local_product(const Instance& inst, u64 p_max, const std::function<int(u64)>& level_for,
                             bool weighted, const Budget& budget) {
  if (p_max < 2) throw DomainError("local_product: p_max must be >= 2");
  const auto primes = primes_up_to(p_max);
  std::vector<double> factors(primes.size());
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const u64 p = primes[i];
    const int level = level_for ? level_for(p) : default_level(p, inst.n);
    LocalDensity ell;
    if (level <= 1 && p != 2) {
      ell = ell_p_level1(inst, p, budget);
    } else {
      EllOptions options;
      options.lift_extra = p <= 3 ? 2 : 1;
      ell = ell_single(inst, p, std::max(level, 1), options, budget);
    }
    const LocalFactor f = local_factor_from(inst, ell);
    factors[i] = weighted ? f.ratio : ell.density / (1.0 - 1.0 / static_cast<double>(p));
  }

  TruncatedValue out;
  double product = 1;
  for (double f : factors) {
    product *= f;
    out.shells.emplace_back(product, 0.0);
  }
  out.value = product;
  // |log factor| ~ C / p^2 fitted over (p_max / 10, p_max]; sum_{p > P} p^-2 <= 1 / (P log P).
  double C = 0;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const double p = primes[i];
    if (p * 10 > static_cast<double>(p_max)) C = std::max(C, std::abs(std::log(factors[i])) * p * p);
  }
  const double P = static_cast<double>(p_max);
  const double tail = C / (P * std::log(std::max(P, 3.0)));
  out.error_bound = std::abs(product) * (std::exp(tail) - 1.0);
  out.error_kind = ErrorKind::heuristic;
  out.params["p_max"] = P;
  out.params["tail_C"] = C;
  out.params["weighted"] = weighted ? 1 : 0;
  return out;
}

std::string density_csv_header() { return "p,kind,level,raw_count,density,stabilized,undecided_fraction"; }

std::string density_csv_row(const LocalDensity& d) {
  char buf[200];
  std::snprintf(buf, sizeof buf, "%llu,%s,%d,%llu,%.12g,%d,%.6g", static_cast<unsigned long long>(d.p),
                to_string(d.kind), d.level, static_cast<unsigned long long>(d.raw_count), d.density,
                d.stabilized ? 1 : 0, d.undecided_fraction);
  return buf;
}

}  // namespace conic
