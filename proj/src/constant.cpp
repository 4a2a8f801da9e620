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

#include "conic/constant.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace conic {

const char* to_string(Route route) { return route == Route::singular_series ? "singular_series" : "tamagawa"; }

double zeta(double s) {
  if (!(s > 1)) throw DomainError("zeta: s must be > 1");
  // Trapezoid tail: sum_{k >= N} k^-s = N^{1-s}/(s-1) + N^-s/2 + O(s N^{-s-1}/12).
  double N = 16;
  while (s * std::pow(N, -s - 1) / 12 > 1e-13) N *= 2;
  long double sum = 0;
  for (double k = N - 1; k >= 1; k -= 1) sum += std::pow(static_cast<long double>(k), -static_cast<long double>(s));
  sum += std::pow(N, 1 - s) / (s - 1) + 0.5 * std::pow(N, -s);
  return static_cast<double>(sum);
}

double epsilon_d(int d) {
  if (d < 2) throw DomainError("epsilon_d: d must be >= 2");
  return 1.0 / (5.0 * (d - 1) * std::ldexp(1.0, d + 5));
}

namespace {

double relative(double err, double value) { return value != 0 ? std::abs(err / value) : 0; }

}  // namespace

ConstantBreakdown c_phi_route1(const Instance& inst, const McEstimate& J, const TruncatedValue& L,
                               const ArithConstants& c0, double imag_tol) {
  if (inst.n - inst.d <= 1) throw DomainError("c_phi_route1: requires n - d >= 2 (zeta(n - d) finite)");
  ConstantBreakdown c;
  c.route = Route::singular_series;
  c.J = J.value.real();
  c.J_error = J.std_error;
  c.C0 = c0.c0;
  c.L_phi = L.value;
  c.zeta_ndmd = zeta(inst.n - inst.d);
  c.d = inst.d;
  c.epsilon_d = inst.d >= 2 ? epsilon_d(inst.d) : 0;
  const double sd = std::sqrt(static_cast<double>(inst.d));
  c.c_phi = (c.J / sd) * (std::numbers::sqrt2 / c.zeta_ndmd) * (L.value.real() / 2) * c.C0;
  if (std::abs(L.value.imag()) > imag_tol) c.warnings.push_back("imaginary part of L exceeds tolerance");
  const double rel = relative(J.std_error, c.J) + relative(L.error_bound, L.value.real()) + relative(c0.c0_error, c0.c0);
  c.combined_error = std::abs(c.c_phi) * rel;
  c.error_kind = L.error_kind == ErrorKind::rigorous && J.std_error == 0 ? ErrorKind::rigorous : ErrorKind::heuristic;
  return c;
}

ConstantBreakdown c_phi_route2(const Instance& inst, const McEstimate& J, const TruncatedValue& prod) {
  ConstantBreakdown c;
  c.route = Route::tamagawa;
  c.J = J.value.real();
  c.J_error = J.std_error;
  c.local_product = prod.value.real();
  c.d = inst.d;
  c.epsilon_d = inst.d >= 2 ? epsilon_d(inst.d) : 0;
  const double sd = std::sqrt(static_cast<double>(inst.d));
  c.c_phi = c.J / sd * c.local_product / std::sqrt(std::numbers::pi);
  const double rel = relative(J.std_error, c.J) + relative(prod.error_bound, c.local_product);
  c.combined_error = std::abs(c.c_phi) * rel;
  c.error_kind = ErrorKind::heuristic;
  return c;
}

double predict_N(const ConstantBreakdown& c, const Instance& inst, u64 t) {
  if (t < 2) throw DomainError("predict_N: t must be >= 2");
  const double td = static_cast<double>(t);
  return c.c_phi * std::pow(td, inst.n - inst.d) / std::sqrt(std::log(td));
}

RouteAgreement compare_routes(const ConstantBreakdown& a, const ConstantBreakdown& b, double tolerance) {
  RouteAgreement r;
  const double scale = std::max(std::abs(a.c_phi), std::abs(b.c_phi));
  if (scale == 0) return r;
  r.relative_difference = std::abs(a.c_phi - b.c_phi) / scale;
  r.relative_error = (a.combined_error + b.combined_error) / scale;
  r.agree = r.relative_difference <= tolerance;
  return r;
}

std::string breakdown_csv_header() {
  return "route,J,J_error,C0,L_re,L_im,local_product,zeta_n_minus_d,d,c_phi,combined_error,epsilon_d,error_kind";
}

std::string breakdown_csv_row(const ConstantBreakdown& c) {
  char buf[400];
  std::snprintf(buf, sizeof buf, "%s,%.10g,%.4g,%.12g,%.10g,%.4g,%.10g,%.12g,%d,%.10g,%.4g,%.10g,%s", to_string(c.route),
                c.J, c.J_error, c.C0, c.L_phi.real(), c.L_phi.imag(), c.local_product, c.zeta_ndmd, c.d, c.c_phi,
                c.combined_error, c.epsilon_d, to_string(c.error_kind));
  return buf;
}

}  // namespace conic
