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

// Local densities from residue counts mod p^N. Residues are enumerated with
// a lift tree (only zeros of f2 are stored and lifted); for large p a single
// level is read off the joint (f1, f2) value distribution instead.

#include <functional>
#include <string>
#include <vector>

#include "conic/common.hpp"
#include "conic/expsums.hpp"
#include "conic/forms.hpp"

namespace conic {

enum class DensityKind { tau_f2, ell, tau_weighted };
const char* to_string(DensityKind kind);

struct LocalDensity {
  u64 p = 0;
  int level = 0;            // N
  u64 raw_count = 0;        // residues mod p^N counted at level N
  double density = 0;       // reported value (undecided mass counted as soluble unless asked otherwise)
  double density_low = 0;   // undecided mass counted as insoluble
  double density_high = 0;  // undecided mass counted as soluble
  double undecided_fraction = 0;  // (high - low) / high
  bool stabilized = false;
  DensityKind kind = DensityKind::tau_f2;
};

struct LocalFactor {
  u64 p = 0;
  double tau_p = 0;
  double lambda_p = 0;
  double ratio = 0;
  LocalDensity ell;
};

struct EllOptions {
  int lift_extra = 2;              // undecided residues are lifted up to level N + lift_extra
  bool undecided_soluble = true;   // policy for residues still undecided at the ceiling
  double stabilization_tol = 0.02; // relative gap between levels N and N - 1
};

/// #{t mod q : f2(t) = 0 (mod q)} for any q, by convolving block histograms.
u64 residue_count_f2(const Instance& inst, u64 q, const Budget& budget = {});

/// tau_{f2}(p) at level N.
LocalDensity tau_f2(const Instance& inst, u64 p, int level, const Budget& budget = {});

/// ell_p at level N: residues with f2 = 0 (mod p^N) whose fibre is
/// Q_p-soluble. Residues whose f1-valuation is not yet determined are lifted
/// further (mass p^{-j(n-1)} per lift); those left at the ceiling form the
/// bracket [density_low, density_high].
LocalDensity ell_p(const Instance& inst, u64 p, int level, const EllOptions& options = {},
                   const Budget& budget = {});

/// ell_p at level 1 from the joint value distribution (large primes). No
/// deeper lifting; residues with f1 = 0 (mod p) stay undecided.
LocalDensity ell_p_level1(const Instance& inst, u64 p, const Budget& budget = {});

/// tau_p = (1 - p^{-(n-d)}) / (1 - 1/p) ell_p, lambda_p = (1 - 1/p)^{-1/2}.
LocalFactor tau_p_weighted(const Instance& inst, u64 p, int level, const EllOptions& options = {},
                           const Budget& budget = {});
LocalFactor local_factor_from(const Instance& inst, const LocalDensity& ell);

/// Default level per prime: the deepest level whose lift tree fits ~2e7 node
/// evaluations, capped at 6; 1 means the distribution path.
int default_level(u64 p, int n);

/// prod_{p <= p_max} tau_p / lambda_p. error_bound is a C/p^2 tail fitted to
/// the factors of the last decade of primes. shells[i] is the partial
/// product after the i-th prime. With `weighted` false the factors are
/// ell_p / (1 - 1/p) without lambda_p (divergence witness).
TruncatedValue local_product(const Instance& inst, u64 p_max,
                             const std::function<int(u64)>& level_for = {}, bool weighted = true,
                             const Budget& budget = {});

std::string density_csv_header();
std::string density_csv_row(const LocalDensity& d);

}  // namespace conic
