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

// Slow reference implementations used only by the unit tests. None of them
// shares code with the library beyond Form evaluation.

#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <vector>

#include "conic/forms.hpp"

namespace oracle {

using conic::i64;
using conic::u64;

// Calls fn(x) for every x in [lo, hi]^n.
template <class Fn>
void for_box(int n, i64 lo, i64 hi, Fn&& fn) {
  std::vector<i64> x(n, lo);
  for (;;) {
    fn(x);
    int i = n - 1;
    while (i >= 0 && x[i] == hi) x[i--] = lo;
    if (i < 0) return;
    ++x[i];
  }
}

inline bool sum_of_two_squares(i64 m) {
  if (m < 0) return false;
  for (i64 a = 0; a * a <= m; ++a) {
    const i64 r = m - a * a;
    const i64 b = static_cast<i64>(std::llround(std::sqrt(static_cast<double>(r))));
    for (i64 c = std::max<i64>(0, b - 1); c <= b + 1; ++c) {
      if (c * c == r) return true;
    }
  }
  return false;
}

// m != 0 is a norm from Q(i) times a square, i.e. m z^2 = x^2 + y^2 solvable.
inline bool theta(i64 m) {
  if (m <= 0) return false;
  for (i64 z = 1; z * z <= m; ++z) {
    if (m % (z * z) == 0 && sum_of_two_squares(m / (z * z))) return true;
  }
  return false;
}

inline std::complex<double> e(double x) {
  const double a = 2 * std::numbers::pi * x;
  return {std::cos(a), std::sin(a)};
}

inline std::complex<double> birch(const conic::Instance& inst, i64 a1, i64 a2, u64 q) {
  std::complex<double> s = 0;
  const i64 Q = static_cast<i64>(q);
  for_box(inst.n, 0, Q - 1, [&](const std::vector<i64>& x) {
    const i64 v1 = static_cast<i64>(conic::evaluate(inst.f1, std::span<const i64>(x)) % Q);
    const i64 v2 = static_cast<i64>(conic::evaluate(inst.f2, std::span<const i64>(x)) % Q);
    s += e(static_cast<double>(((a1 * v1 + a2 * v2) % Q + Q) % Q) / static_cast<double>(q));
  });
  return s;
}

inline u64 residue_zeros(const conic::Instance& inst, u64 q) {
  u64 c = 0;
  const i64 Q = static_cast<i64>(q);
  for_box(inst.n, 0, Q - 1, [&](const std::vector<i64>& x) {
    if (conic::evaluate(inst.f2, std::span<const i64>(x)) % Q == 0) ++c;
  });
  return c;
}

}  // namespace oracle
