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

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "conic/common.hpp"
#include "conic/forms.hpp"

namespace conic {

using cplx = std::complex<double>;

struct ModularPhase {
  i64 a1 = 0;
  std::optional<i64> a2;
  u64 q = 1;
};

enum class ErrorKind { rigorous, heuristic };
const char* to_string(ErrorKind kind);

/// A truncated series together with its truncation parameters and an error
/// bound. `shells` holds the successive partial contributions when the series
/// is organised in shells (one per modulus exponent, dyadic block, ...).
struct TruncatedValue {
  cplx value;
  std::map<std::string, double> params;
  double error_bound = 0;
  ErrorKind error_kind = ErrorKind::heuristic;
  std::vector<cplx> shells;
};

/// e(k/q) for k in [0, q), computed in long double.
class RootTable {
 public:
  explicit RootTable(u64 q);
  u64 modulus() const { return q_; }
  cplx operator()(u64 k) const { return roots_[k % q_]; }

 private:
  u64 q_;
  std::vector<cplx> roots_;
};

/// Joint value distribution of (f1, f2) mod q on each independent variable
/// block: entries (v1, v2, multiplicity). The full distribution is the
/// additive convolution of the blocks.
struct ComponentHistograms {
  u64 q = 1;
  struct Entry {
    u64 v1;
    u64 v2;
    u64 count;
  };
  std::vector<std::vector<Entry>> blocks;
};

ComponentHistograms component_histograms(const Instance& inst, u64 q, const Budget& budget = {});

/// Birch sums S_{(a1,a2),q} for one modulus, evaluated from the component
/// histograms.
class BirchTable {
 public:
  BirchTable(const Instance& inst, u64 q, const Budget& budget = {});

  u64 modulus() const { return q_; }
  cplx sum(u64 a1, u64 a2) const;

  /// T[a1] = sum over a2 in [0, q) with gcd(a1, a2, q) = 1 of S_{(a1,a2),q}.
  std::vector<cplx> primitive_row_sums() const;

 private:
  u64 q_;
  ComponentHistograms hist_;
  RootTable roots_;
};

/// S_{a,q} by the plain q^n loop (oracle path).
cplx birch_sum_direct(const Instance& inst, const ModularPhase& phase, const Budget& budget = {});

/// S_{a,q}: prime-power factors through BirchTable, glued by CRT.
cplx birch_sum(const Instance& inst, const ModularPhase& phase, const Budget& budget = {});

/// The CRT phases (q_i, a * (q/q_i)^{-1} mod q_i) whose sums multiply to S_{a,q}.
std::vector<ModularPhase> crt_phases(const ModularPhase& phase);

/// Counts of {1 <= m <= x : theta_q(m) = 1} in each residue class mod q.
std::vector<u64> theta_residue_counts(u64 x, u64 q, const Budget& budget = {});

/// sum_{m <= x} theta_q(m) e((a1/q + beta) m).
cplx exp_sum_thetaQ(u64 x, i64 a1, u64 q, double beta, const Budget& budget = {});

/// Arc factor F(a1, q) truncated at 2^t k^2 <= U; error_bound is the rigorous
/// tail bound 1.5 q P3(q) / sqrt(U), P3(q) = prod_{p | q, p = 3 (4)} (1 - 1/p)^{-1}.
/// params["triangle_bound"] holds the sum of absolute values of the terms
/// plus the tail.
TruncatedValue frak_F(i64 a1, u64 q, double U);

/// frak_F(a1, q, U) for every a1 in [0, q), sharing one weight vector.
std::vector<TruncatedValue> frak_F_all(u64 q, double U);

/// W_{a,q}(k) through c_{q/g}(a) (q/g)/phi(q/g), g = gcd(k^2, q).
cplx W_helper(i64 a, u64 q, u64 k);

/// W_{a,q}(k) by the defining sum over l in [0, q).
cplx W_helper_direct(i64 a, u64 q, u64 k);

/// Largest m with p^(3m) n <= 5e8, the default shell depth.
int default_shell_depth(u64 p, int n);

/// E_phi(p) for p = 3 (mod 4); shells[m] is the m-th modulus shell.
TruncatedValue E_phi_p(const Instance& inst, u64 p, int kappa_max = 8, int m_max = -1,
                       const Budget& budget = {});

/// E_phi(2); shells[rho] is the 2^rho shell.
TruncatedValue E_phi_2(const Instance& inst, int t_max = 64, int rho_max = -1,
                       const Budget& budget = {});

/// Truncated singular series sum_{q <= Q} q^{-n} sum_a S_{a,q} conj(F(a1, q, U)).
/// The error is rigorous (implied constant 1) when the instance carries a
/// sigma bound giving lambda_0 > 0; otherwise it is the magnitude of the last
/// dyadic block of moduli.
TruncatedValue L_phi_truncated(const Instance& inst, u64 Q, double U, const Budget& budget = {});

std::string birch_csv_header();
std::string birch_csv_row(u64 q, u64 a1, u64 a2, cplx s);

}  // namespace conic
