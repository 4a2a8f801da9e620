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

#include <string>
#include <vector>

#include "conic/archimedean.hpp"
#include "conic/arith.hpp"
#include "conic/expsums.hpp"
#include "conic/forms.hpp"

namespace conic {

enum class Route { singular_series, tamagawa };
const char* to_string(Route route);

struct ConstantBreakdown {
  Route route = Route::singular_series;
  double J = 0;
  double J_error = 0;
  double C0 = 0;
  cplx L_phi;               // route 1
  double local_product = 0; // route 2
  double zeta_ndmd = 0;     // zeta(n - d), route 1
  int d = 0;
  double c_phi = 0;
  double combined_error = 0;
  double epsilon_d = 0;
  ErrorKind error_kind = ErrorKind::heuristic;
  std::vector<std::string> warnings;
};

/// Riemann zeta for real s > 1, direct series plus integral tail, |error| < 1e-12.
double zeta(double s);

/// 1 / (5 (d - 1) 2^(d + 5)); requires d >= 2.
double epsilon_d(int d);

/// (J / sqrt d) (sqrt 2 / zeta(n - d)) (Re L / 2) C0. Refuses n - d <= 1.
/// |Im L| above imag_tol records a warning.
ConstantBreakdown c_phi_route1(const Instance& inst, const McEstimate& J, const TruncatedValue& L,
                               const ArithConstants& c0, double imag_tol = 1e-6);

/// (1 / sqrt pi) (J / sqrt d) prod.
ConstantBreakdown c_phi_route2(const Instance& inst, const McEstimate& J, const TruncatedValue& prod);

/// c t^(n - d) / sqrt(log t); refuses t < 2.
double predict_N(const ConstantBreakdown& c, const Instance& inst, u64 t);

struct RouteAgreement {
  double relative_difference = 0;  // |c1 - c2| / max(|c1|, |c2|)
  double relative_error = 0;       // (err1 + err2) / max(|c1|, |c2|)
  bool agree = false;              // relative_difference <= tolerance
};

RouteAgreement compare_routes(const ConstantBreakdown& a, const ConstantBreakdown& b, double tolerance = 0.10);

std::string breakdown_csv_header();
std::string breakdown_csv_row(const ConstantBreakdown& c);

}  // namespace conic
