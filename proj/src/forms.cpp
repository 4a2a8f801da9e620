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

#include "conic/forms.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

namespace conic {

using nlohmann::json;

Form Form::create(int n_vars, std::vector<Monomial> monomials) {
  if (n_vars < 1) throw ValidationError("form must have at least one variable");
  if (monomials.empty()) throw ValidationError("form has no monomials (zero form)");
  int degree = -1;
  for (const auto& m : monomials) {
    if (static_cast<int>(m.exps.size()) != n_vars) {
      throw ValidationError("monomial exponent vector has " + std::to_string(m.exps.size()) +
                            " entries, expected n = " + std::to_string(n_vars));
    }
    if (m.coeff == 0) throw ValidationError("monomial with zero coefficient");
    int sum = 0;
    for (int e : m.exps) {
      if (e < 0) throw ValidationError("negative exponent");
      sum += e;
    }
    if (degree < 0) degree = sum;
    if (sum != degree) {
      throw ValidationError("form is not homogeneous: monomial degree " + std::to_string(sum) +
                            " differs from " + std::to_string(degree));
    }
  }
  if (degree == 0) throw ValidationError("form must have positive degree");
  std::sort(monomials.begin(), monomials.end(),
            [](const Monomial& a, const Monomial& b) { return a.exps > b.exps; });
  for (std::size_t i = 1; i < monomials.size(); ++i) {
    if (monomials[i].exps == monomials[i - 1].exps) {
      throw ValidationError("duplicate exponent vector in form");
    }
  }
  Form f;
  f.n_vars_ = n_vars;
  f.degree_ = degree;
  f.monomials_ = std::move(monomials);
  return f;
}

Form Form::restrict_to(std::span<const int> vars) const {
  Form out;
  out.n_vars_ = static_cast<int>(vars.size());
  out.degree_ = 0;
  for (const auto& m : monomials_) {
    bool inside = true;
    for (int i = 0; i < n_vars_ && inside; ++i) {
      if (m.exps[i] != 0 && std::find(vars.begin(), vars.end(), i) == vars.end()) inside = false;
    }
    if (!inside) continue;
    Monomial r;
    r.coeff = m.coeff;
    for (int v : vars) r.exps.push_back(m.exps[v]);
    out.monomials_.push_back(std::move(r));
    out.degree_ = degree_;
  }
  return out;
}

i128 Form::coefficient_norm() const {
  i128 s = 0;
  for (const auto& m : monomials_) s = checked_add(s, m.coeff < 0 ? -m.coeff : m.coeff);
  return s;
}

std::string Form::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& m : monomials_) {
    const bool neg = m.coeff < 0;
    const i128 mag = neg ? -m.coeff : m.coeff;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    bool wrote = false;
    if (mag != 1) {
      os << conic::to_string(mag);
      wrote = true;
    }
    for (int i = 0; i < n_vars_; ++i) {
      if (m.exps[i] == 0) continue;
      if (wrote) os << "*";
      os << "t" << i;
      if (m.exps[i] > 1) os << "^" << m.exps[i];
      wrote = true;
    }
    if (!wrote) os << "1";
  }
  return os.str();
}

namespace {

template <class T>
i128 evaluate_exact(const Form& f, std::span<const T> x) {
  if (static_cast<int>(x.size()) != f.n_vars()) throw DomainError("evaluate: wrong arity");
  i128 total = 0;
  for (const auto& m : f.monomials()) {
    i128 term = m.coeff;
    for (int i = 0; i < f.n_vars(); ++i) {
      for (int e = 0; e < m.exps[i]; ++e) term = checked_mul(term, static_cast<i128>(x[i]));
    }
    total = checked_add(total, term);
  }
  return total;
}

}  // namespace

i128 evaluate(const Form& f, std::span<const i128> x) { return evaluate_exact(f, x); }
i128 evaluate(const Form& f, std::span<const i64> x) { return evaluate_exact(f, x); }

u64 evaluate_mod(const Form& f, std::span<const u64> x, u64 q) {
  if (q == 0) throw DomainError("evaluate_mod: q must be positive");
  if (static_cast<int>(x.size()) != f.n_vars()) throw DomainError("evaluate_mod: wrong arity");
  if (q == 1) return 0;
  u128 total = 0;
  for (const auto& m : f.monomials()) {
    i128 c = m.coeff % static_cast<i128>(q);
    if (c < 0) c += q;
    u128 term = static_cast<u128>(c);
    for (int i = 0; i < f.n_vars(); ++i) {
      const u128 xi = x[i] % q;
      for (int e = 0; e < m.exps[i]; ++e) term = term * xi % q;
    }
    total += term;
    if (total >= q) total -= q;
  }
  return static_cast<u64>(total);
}

double evaluate_real(const Form& f, std::span<const double> x) {
  double total = 0;
  for (const auto& m : f.monomials()) {
    double term = static_cast<double>(m.coeff);
    for (int i = 0; i < f.n_vars(); ++i) {
      for (int e = 0; e < m.exps[i]; ++e) term *= x[i];
    }
    total += term;
  }
  return total;
}

void gradient_real(const Form& f, std::span<const double> x, std::span<double> grad) {
  std::fill(grad.begin(), grad.end(), 0.0);
  for (const auto& m : f.monomials()) {
    for (int j = 0; j < f.n_vars(); ++j) {
      if (m.exps[j] == 0) continue;
      double term = static_cast<double>(m.coeff) * m.exps[j];
      for (int i = 0; i < f.n_vars(); ++i) {
        const int e = i == j ? m.exps[i] - 1 : m.exps[i];
        for (int k = 0; k < e; ++k) term *= x[i];
      }
      grad[j] += term;
    }
  }
}

i128 default_box_max(const Form& f) { return f.coefficient_norm(); }

std::vector<std::vector<int>> variable_components(std::span<const Form* const> forms) {
  if (forms.empty()) return {};
  const int n = forms.front()->n_vars();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const Form* f : forms) {
    for (const auto& m : f->monomials()) {
      int first = -1;
      for (int i = 0; i < n; ++i) {
        if (m.exps[i] == 0) continue;
        if (first < 0) {
          first = i;
        } else {
          parent[find(i)] = find(first);
        }
      }
    }
  }
  std::map<int, std::vector<int>> blocks;
  for (int i = 0; i < n; ++i) blocks[find(i)].push_back(i);
  std::vector<std::vector<int>> out;
  for (auto& [root, vars] : blocks) out.push_back(std::move(vars));
  std::sort(out.begin(), out.end());
  return out;
}

Instance make_instance(Form f1, Form f2, std::string label, std::optional<i128> box_max_m,
                       InstanceOptions options) {
  if (f1.n_vars() != f2.n_vars()) {
    throw ValidationError("f1 and f2 have different numbers of variables");
  }
  if (!options.allow_mixed_degree && f1.degree() != f2.degree()) {
    throw ValidationError("f1 and f2 must have equal degree");
  }
  if (!options.allow_odd_degree && f1.degree() % 2 != 0) {
    throw ValidationError("degree must be even");
  }
  Instance inst;
  inst.n = f1.n_vars();
  inst.d = f1.degree();
  inst.box_max_m = box_max_m.value_or(default_box_max(f1));
  if (inst.box_max_m <= 0) throw ValidationError("box_max_m must be positive");
  inst.label = std::move(label);
  inst.f1 = std::move(f1);
  inst.f2 = std::move(f2);
  return inst;
}

// ---------------------------------------------------------------------------
// JSON config

namespace {

// Line/column of a byte offset.
std::pair<std::size_t, std::size_t> locate(std::string_view text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

i128 read_integer(const json& j, const std::string& field) {
  if (j.is_number_integer()) return j.is_number_unsigned() ? static_cast<i128>(j.get<u64>()) : j.get<i64>();
  if (j.is_string()) {
    try {
      return parse_i128(j.get<std::string>());
    } catch (const std::exception& e) {
      throw ParseError("field '" + field + "': " + e.what());
    }
  }
  throw ParseError("field '" + field + "' must be an integer");
}

Form read_form(const json& j, const std::string& name, int n) {
  if (!j.is_array()) throw ParseError("field '" + name + "' must be a list of monomial records");
  std::vector<Monomial> monos;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string where = name + "[" + std::to_string(k) + "]";
    const json& rec = j[k];
    if (!rec.is_object()) throw ParseError("'" + where + "' must be an object {coeff, exps}");
    for (const auto& [key, _] : rec.items()) {
      if (key != "coeff" && key != "exps") throw ParseError("unknown field '" + where + "." + key + "'");
    }
    if (!rec.contains("coeff")) throw ParseError("'" + where + "' is missing 'coeff'");
    if (!rec.contains("exps")) throw ParseError("'" + where + "' is missing 'exps'");
    Monomial m;
    m.coeff = read_integer(rec["coeff"], where + ".coeff");
    const json& ex = rec["exps"];
    if (!ex.is_array()) throw ParseError("'" + where + ".exps' must be a list of integers");
    for (const auto& e : ex) {
      if (!e.is_number_integer()) throw ParseError("'" + where + ".exps' must contain integers");
      m.exps.push_back(e.get<int>());
    }
    if (static_cast<int>(m.exps.size()) != n) {
      throw ValidationError("'" + where + ".exps' has " + std::to_string(m.exps.size()) +
                            " entries, expected n = " + std::to_string(n));
    }
    monos.push_back(std::move(m));
  }
  try {
    return Form::create(n, std::move(monos));
  } catch (const ValidationError& e) {
    throw ValidationError(name + ": " + e.what());
  }
}

json form_json(const Form& f) {
  json arr = json::array();
  for (const auto& m : f.monomials()) {
    json rec;
    const i128 c = m.coeff;
    if (c >= INT64_MIN && c <= INT64_MAX) {
      rec["coeff"] = static_cast<i64>(c);
    } else {
      rec["coeff"] = to_string(c);
    }
    rec["exps"] = m.exps;
    arr.push_back(rec);
  }
  return arr;
}

}  // namespace

Instance parse_instance(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = locate(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError("config parse error at line " + std::to_string(line) + ", column " +
                         std::to_string(col) + ": " + e.what(),
                     line, col);
  }
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  static const std::set<std::string> kKnown = {"label", "n",         "d",           "f1",
                                               "f2",    "box_max_m", "sigma_bound", "birch_condition_asserted"};
  for (const auto& [key, _] : j.items()) {
    if (!kKnown.contains(key)) throw ParseError("unknown field '" + key + "'");
  }
  for (const char* required : {"label", "n", "d", "f1", "f2"}) {
    if (!j.contains(required)) throw ParseError(std::string("missing required field '") + required + "'");
  }
  if (!j["label"].is_string()) throw ParseError("field 'label' must be a string");
  if (!j["n"].is_number_integer() || j["n"].get<i64>() < 1) {
    throw ParseError("field 'n' must be a positive integer");
  }
  if (!j["d"].is_number_integer() || j["d"].get<i64>() < 1) {
    throw ParseError("field 'd' must be a positive integer");
  }
  const int n = j["n"].get<int>();
  const int d = j["d"].get<int>();
  if (d % 2 != 0) throw ValidationError("degree must be even (d = " + std::to_string(d) + ")");
  Form f1 = read_form(j["f1"], "f1", n);
  Form f2 = read_form(j["f2"], "f2", n);
  if (f1.degree() != d) {
    throw ValidationError("f1 is homogeneous of degree " + std::to_string(f1.degree()) +
                          " but d = " + std::to_string(d) + " (homogeneity)");
  }
  if (f2.degree() != d) {
    throw ValidationError("f2 is homogeneous of degree " + std::to_string(f2.degree()) +
                          " but d = " + std::to_string(d) + " (homogeneity)");
  }
  std::optional<i128> box;
  if (j.contains("box_max_m")) {
    box = read_integer(j["box_max_m"], "box_max_m");
    if (*box <= 0) throw ValidationError("box_max_m must be positive");
  }
  Instance inst = make_instance(std::move(f1), std::move(f2), j["label"].get<std::string>(), box);
  if (j.contains("sigma_bound")) {
    if (!j["sigma_bound"].is_number_integer()) throw ParseError("field 'sigma_bound' must be an integer");
    inst.sigma_bound = j["sigma_bound"].get<i64>();
  }
  if (j.contains("birch_condition_asserted")) {
    if (!j["birch_condition_asserted"].is_boolean()) {
      throw ParseError("field 'birch_condition_asserted' must be a boolean");
    }
    inst.birch_condition_asserted = j["birch_condition_asserted"].get<bool>();
  }
  return inst;
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

std::string canonical_json(const Instance& inst) {
  json j;
  j["label"] = inst.label;
  j["n"] = inst.n;
  j["d"] = inst.d;
  j["f1"] = form_json(inst.f1);
  j["f2"] = form_json(inst.f2);
  j["box_max_m"] = to_string(inst.box_max_m);
  if (inst.sigma_bound) j["sigma_bound"] = *inst.sigma_bound;
  j["birch_condition_asserted"] = inst.birch_condition_asserted;
  return j.dump();
}

std::optional<double> lambda0(const Instance& inst) {
  if (!inst.sigma_bound) return std::nullopt;
  const double n = inst.n, d = inst.d;
  const double ratio = (n - static_cast<double>(*inst.sigma_bound)) / (std::pow(2.0, d) * (d - 1.0));
  return 0.5 * std::min(1.0, 0.5 * (ratio - 3.0));
}

namespace instances {

namespace {
Form diagonal_form(std::span<const i64> coeffs) {
  const int n = static_cast<int>(coeffs.size());
  std::vector<Monomial> monos;
  for (int i = 0; i < n; ++i) {
    if (coeffs[i] == 0) continue;
    Monomial m;
    m.coeff = coeffs[i];
    m.exps.assign(n, 0);
    m.exps[i] = 2;
    monos.push_back(std::move(m));
  }
  return Form::create(n, std::move(monos));
}
}  // namespace

Instance diagonal(std::span<const i64> a, std::span<const i64> b, std::string label) {
  return make_instance(diagonal_form(a), diagonal_form(b), std::move(label));
}

Instance demo_binary() {
  const i64 a[] = {1, 1}, b[] = {1, -1};
  return diagonal(a, b, "demo-binary");
}

Instance quaternary() {
  const i64 a[] = {1, 1, 1, 1}, b[] = {1, 1, -1, -1};
  return diagonal(a, b, "quaternary");
}

Instance split_product() {
  const i64 a[] = {1, 1, 1, 1};
  Form f2 = Form::create(4, {{1, {1, 1, 0, 0}}, {-1, {0, 0, 1, 1}}});
  return make_instance(diagonal_form(a), std::move(f2), "split-product");
}

}  // namespace instances

}  // namespace conic
