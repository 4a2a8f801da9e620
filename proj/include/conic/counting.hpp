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

// Brute-force ground truth: lattice points on f2 = 0 in a box whose fibre
// conic has a rational point, primitive projective counts, and the sieve
// counts behind the sum-of-two-squares asymptotics.

#include <string>

#include "conic/common.hpp"
#include "conic/forms.hpp"

namespace conic {

struct CountRecord {
  std::string label;
  u64 t = 0;
  u64 raw_count = 0;
  double normalized = 0;  // raw_count * sqrt(log t) / t^(n - d)
  bool include_zero = false;
  double wall_time = 0;   // seconds
};

/// Tallies of one box enumeration of f2(x) = 0, x in [-P, P]^n.
struct ZeroTally {
  u64 soluble_nonzero_f1 = 0;   // f1(x) != 0 and theta_q(f1(x)) = 1
  u64 zero_f1 = 0;              // f1(x) = 0, origin included
  u64 primitive_soluble = 0;    // gcd(x) = 1 and (f1(x) = 0 or theta_q(f1(x)) = 1)
  u64 primitive_zero_f1 = 0;    // gcd(x) = 1 and f1(x) = 0
  u64 zeros = 0;                // all x with f2(x) = 0
};

enum class LineMethod {
  automatic,  // exact integer root solving when f2 has degree <= 2 in the last variable
  scan,       // test every value of the last coordinate
};

/// Slab-parallel enumeration over the outermost coordinate. Refuses with
/// BudgetExceeded when the work estimate exceeds the budget.
ZeroTally enumerate_box(const Instance& inst, u64 box, const Budget& budget = {},
                        LineMethod method = LineMethod::automatic);

/// Number of x in [-P, P]^n with f2(x) = 0, f1(x) != 0 and theta_q(f1(x)) = 1;
/// with include_zero the x with f1(x) = 0 (origin included) are added.
u64 theta_count(const Instance& inst, u64 box, bool include_zero, const Budget& budget = {});

/// Projective points of height <= t on f2 = 0 whose fibre has a rational point.
/// f1 = 0 fibres count (via the point (0:0:1)) unless include_zero is false.
CountRecord count_N(const Instance& inst, u64 t, const Budget& budget = {}, bool include_zero = true);

/// 2 count_N(t) - sum_{l <= t} mu(l) (theta_count(t/l, include_zero) - 1).
/// The -1 removes the origin, so the contract value is 0.
i64 mobius_identity_residual(const Instance& inst, u64 t, const Budget& budget = {});

/// #{1 <= m <= x : theta_q(m) = 1} via the v_p parity sieve.
u64 two_squares_count(u64 x, const Budget& budget = {});

/// #{1 <= r <= z : r = a (mod Q), varpi(r) = 1}. Requires 4 | Q, gcd(a, Q) = 1,
/// a = 1 (mod 4) and z >= Q; a violated hypothesis throws DomainError.
u64 varpi_progression_count(u64 z, i64 a, u64 modulus);

/// sqrt(2) C0 (Q''/phi(Q'')) z / (Q sqrt(log z)).
double varpi_progression_main_term(u64 z, u64 modulus, double c0);

std::string count_csv_header();
std::string to_csv_row(const CountRecord& rec);

}  // namespace conic
