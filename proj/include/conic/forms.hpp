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

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "conic/common.hpp"

namespace conic {

struct Monomial {
  i128 coeff = 0;
  std::vector<int> exps;
};

/// Sparse homogeneous integer polynomial. Immutable once created; monomials
/// are kept sorted by exponent vector.
class Form {
 public:
  Form() = default;

  /// Validates homogeneity, exponent arity and coefficients; rejects the
  /// zero form and duplicate exponent vectors.
  static Form create(int n_vars, std::vector<Monomial> monomials);

  int n_vars() const { return n_vars_; }
  int degree() const { return degree_; }
  std::span<const Monomial> monomials() const { return monomials_; }

  /// Sub-form made of the monomials whose variables all lie in `vars`,
  /// re-indexed to vars.size() variables. May be empty (degree 0, no terms).
  Form restrict_to(std::span<const int> vars) const;

  /// Sum of |coefficients|.
  i128 coefficient_norm() const;

  /// Human-readable rendering, e.g. "t0^2 + t1^2 - t2*t3".
  std::string to_string() const;

 private:
  int n_vars_ = 0;
  int degree_ = 0;
  std::vector<Monomial> monomials_;
};

/// Exact value; throws RangeError on 128-bit overflow.
i128 evaluate(const Form& f, std::span<const i128> x);

/// Exact value with 64-bit inputs.
i128 evaluate(const Form& f, std::span<const i64> x);

/// f(x) mod q with every intermediate reduced mod q (q < 2^63).
u64 evaluate_mod(const Form& f, std::span<const u64> x, u64 q);

double evaluate_real(const Form& f, std::span<const double> x);

/// Gradient at a real point; grad.size() == n_vars.
void gradient_real(const Form& f, std::span<const double> x, std::span<double> grad);

/// Sum of |coefficients|, an upper bound for max f on [-1, 1]^n.
i128 default_box_max(const Form& f);

/// Coarsest partition of the variables such that every monomial of every
/// given form lives inside one block. Blocks are sorted.
std::vector<std::vector<int>> variable_components(std::span<const Form* const> forms);

struct InstanceOptions {
  bool allow_odd_degree = false;   // test-only slices such as f2 = t0
  bool allow_mixed_degree = false;
};

struct Instance {
  Form f1;
  Form f2;
  int n = 0;
  int d = 0;
  i128 box_max_m = 0;
  std::string label;
  bool birch_condition_asserted = false;
  std::optional<i64> sigma_bound;
};

Instance make_instance(Form f1, Form f2, std::string label,
                       std::optional<i128> box_max_m = std::nullopt,
                       InstanceOptions options = {});

/// Parses the JSON instance schema (see README). Unknown fields are rejected.
Instance parse_instance(std::string_view text);
Instance load_instance(const std::filesystem::path& path);

/// Canonical JSON rendering; the config hash is taken over this text.
std::string canonical_json(const Instance& inst);

/// lambda_0 = 1/2 min{1, ((n - sigma)/(2^d (d - 1)) - 3)/2}, available when a
/// sigma bound is supplied; may be <= 0 when the Birch condition fails.
std::optional<double> lambda0(const Instance& inst);

/// Built-in instances used by tests, the verify suite and the CLI demo.
namespace instances {
/// f1 = t0^2 + t1^2, f2 = t0^2 - t1^2 (n = 2).
Instance demo_binary();
/// f1 = t0^2 + t1^2 + t2^2 + t3^2, f2 = t0^2 + t1^2 - t2^2 - t3^2.
Instance quaternary();
/// f1 = t0^2 + t1^2 + t2^2 + t3^2, f2 = t0 t1 - t2 t3.
Instance split_product();
/// Diagonal forms sum a_i t_i^2, sum b_i t_i^2.
Instance diagonal(std::span<const i64> a, std::span<const i64> b, std::string label);
}  // namespace instances

}  // namespace conic
