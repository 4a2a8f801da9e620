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

// conic: command-line front end. Every subcommand writes one CSV document
// (manifest comment, header, rows) to stdout or --output.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "conic/arith.hpp"
#include "conic/archimedean.hpp"
#include "conic/constant.hpp"
#include "conic/counting.hpp"
#include "conic/expsums.hpp"
#include "conic/forms.hpp"
#include "conic/padic.hpp"
#include "conic/report.hpp"
#include "conic/verify.hpp"

namespace {

using namespace conic;

struct Globals {
  std::string config;
  std::string instance = "quaternary";
  u64 seed = kDefaultSeed;
  unsigned threads = 0;
  std::string cache_dir;
  bool no_cache = false;
  double budget = Budget{}.max_ops;
  std::string output;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
std::string join(const std::vector<T>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ';';
    if constexpr (std::is_floating_point_v<T>) {
      s += num(xs[i]);
    } else {
      s += std::to_string(xs[i]);
    }
  }
  return s;
}

std::string cplx_cols(cplx v) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "%.15g,%.15g", v.real(), v.imag());
  return buf;
}

Instance load(const Globals& g) {
  if (!g.config.empty()) return load_instance(g.config);
  if (g.instance == "quaternary" || g.instance == "test") return instances::quaternary();
  if (g.instance == "binary" || g.instance == "demo") return instances::demo_binary();
  if (g.instance == "split") return instances::split_product();
  throw DomainError("unknown built-in instance '" + g.instance + "' (expected quaternary, binary or split)");
}

std::optional<std::filesystem::path> cache_dir(const Globals& g) {
  if (g.no_cache) return std::nullopt;
  if (auto dir = resolve_cache_dir(g.cache_dir.empty() ? std::nullopt : std::optional(g.cache_dir))) return dir;
  if (const char* home = std::getenv("HOME"); home && *home) {
    return std::filesystem::path(home) / ".cache" / "conic";
  }
  return std::nullopt;
}

void emit(const Globals& g, RunManifest manifest, const std::string& document) {
  if (g.output.empty()) {
    std::cout << document;
    std::cout.flush();
    return;
  }
  {
    std::ofstream out(g.output, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + g.output);
    out << document;
  }
  manifest.outputs = {g.output};
  std::ofstream m(g.output + ".manifest.json", std::ios::binary | std::ios::trunc);
  m << manifest.to_json() << '\n';
}

// A command body: fills header and rows. Trailing comment lines go in `notes`.
struct Table {
  std::string header;
  std::vector<std::string> rows;
  std::vector<std::string> notes;
};

void run_cached(const Globals& g, const std::string& command, std::map<std::string, std::string> params,
                const std::function<Table(const Instance&, const Budget&)>& body) {
  const Instance inst = load(g);
  params["budget"] = num(g.budget);
  RunManifest manifest;
  manifest.command = command;
  manifest.instance_label = inst.label;
  manifest.parameters = params;
  manifest.seed = g.seed;
  manifest.config_hash = hex64(fnv1a(canonical_json(inst)));

  std::map<std::string, std::string> key_params = params;
  key_params["seed"] = std::to_string(g.seed);
  ResultCache cache;
  if (auto dir = cache_dir(g)) cache = ResultCache(*dir);
  const std::string key = ResultCache::key(manifest.config_hash, command, key_params);
  if (auto hit = cache.get(key)) {
    emit(g, manifest, *hit);
    return;
  }
  const Budget budget{g.budget};
  const Table t = body(inst, budget);
  std::string doc = csv_document(manifest, t.header, t.rows);
  for (const auto& note : t.notes) doc += "# " + note + "\n";
  cache.put(key, doc);
  emit(g, manifest, doc);
}

std::string truncated_header() { return "part,index,re,im,error_bound,error_kind"; }

void truncated_rows(const TruncatedValue& v, Table& t) {
  for (std::size_t i = 0; i < v.shells.size(); ++i) {
    t.rows.push_back("shell," + std::to_string(i) + "," + cplx_cols(v.shells[i]) + ",,");
  }
  char buf[60];
  std::snprintf(buf, sizeof buf, ",%.6g,", v.error_bound);
  t.rows.push_back("total,," + cplx_cols(v.value) + buf + to_string(v.error_kind));
  for (const auto& [k, x] : v.params) t.notes.push_back(k + " = " + num(x));
}

// ---------------------------------------------------------------------------

struct CountArgs {
  std::vector<u64> t;
  bool include_zero = true;
};

void cmd_count(const Globals& g, const CountArgs& a) {
  run_cached(g, "count", {{"t", join(a.t)}, {"include_zero", a.include_zero ? "1" : "0"}},
             [&](const Instance& inst, const Budget& budget) {
               Table t{count_csv_header(), {}, {}};
               for (u64 v : a.t) t.rows.push_back(to_csv_row(count_N(inst, v, budget, a.include_zero)));
               return t;
             });
}

struct ThetaArgs {
  std::vector<i64> m;
  u64 x = 0;
  u64 box = 0;
  bool include_zero = true;
};

void cmd_theta(const Globals& g, const ThetaArgs& a) {
  if (a.box > 0) {
    run_cached(g, "theta-box", {{"box", std::to_string(a.box)}, {"include_zero", a.include_zero ? "1" : "0"}},
               [&](const Instance& inst, const Budget& budget) {
                 Table t{"box,include_zero,count", {}, {}};
                 t.rows.push_back(std::to_string(a.box) + "," + (a.include_zero ? "1" : "0") + "," +
                                  std::to_string(theta_count(inst, a.box, a.include_zero, budget)));
                 return t;
               });
    return;
  }
  if (a.x > 0) {
    run_cached(g, "two-squares", {{"x", std::to_string(a.x)}}, [&](const Instance&, const Budget& budget) {
      Table t{"x,count,normalized", {}, {}};
      const u64 c = two_squares_count(a.x, budget);
      const double x = static_cast<double>(a.x);
      t.rows.push_back(std::to_string(a.x) + "," + std::to_string(c) + "," +
                       num(static_cast<double>(c) * std::sqrt(std::log(x)) / x));
      return t;
    });
    return;
  }
  if (a.m.empty()) throw DomainError("theta: give --m values, --x or --box");
  run_cached(g, "theta", {{"m", join(a.m)}}, [&](const Instance&, const Budget&) {
    Table t{"m,theta_q,varpi", {}, {}};
    for (i64 m : a.m) {
      t.rows.push_back(std::to_string(m) + "," + (theta_q(m) ? "1" : "0") + "," + (m > 0 && varpi(m) ? "1" : "0"));
    }
    return t;
  });
}

struct ExpsumArgs {
  std::string kind;
  u64 q = 1;
  std::optional<i64> a1, a2;
  u64 k = 1;
  u64 x = 1000000;
  double beta = 0;
  double U = 1 << 20;
  u64 p = 3;
  u64 Q = 16;
  int kappa_max = 8;
  int depth = -1;
  int t_max = 64;
};

void cmd_expsum(const Globals& g, const ExpsumArgs& a) {
  std::map<std::string, std::string> params{{"kind", a.kind}};
  if (a.kind == "birch") {
    params["q"] = std::to_string(a.q);
    if (a.a1) params["a1"] = std::to_string(*a.a1);
    if (a.a2) params["a2"] = std::to_string(*a.a2);
    run_cached(g, "expsum", params, [&](const Instance& inst, const Budget& budget) {
      Table t{birch_csv_header(), {}, {}};
      const auto mod = [&](i64 v) { return static_cast<u64>(((v % static_cast<i64>(a.q)) + a.q) % a.q); };
      if (a.a1 && a.a2) {
        t.rows.push_back(birch_csv_row(a.q, mod(*a.a1), mod(*a.a2), birch_sum(inst, {*a.a1, *a.a2, a.q}, budget)));
        return t;
      }
      const BirchTable table(inst, a.q, budget);
      for (u64 u1 = 0; u1 < a.q; ++u1) {
        if (a.a1 && mod(*a.a1) != u1) continue;
        for (u64 u2 = 0; u2 < a.q; ++u2) {
          if (a.a2 && mod(*a.a2) != u2) continue;
          t.rows.push_back(birch_csv_row(a.q, u1, u2, table.sum(u1, u2)));
        }
      }
      return t;
    });
  } else if (a.kind == "thetaq") {
    params["q"] = std::to_string(a.q);
    params["x"] = std::to_string(a.x);
    params["beta"] = num(a.beta);
    if (a.a1) params["a1"] = std::to_string(*a.a1);
    run_cached(g, "expsum", params, [&](const Instance&, const Budget& budget) {
      Table t{"x,q,a1,beta,re,im,normalized_re", {}, {}};
      const double x = static_cast<double>(a.x);
      const double scale = x / std::sqrt(std::log(x));
      for (u64 u = 0; u < a.q; ++u) {
        if (a.a1 && static_cast<u64>(((*a.a1 % static_cast<i64>(a.q)) + a.q) % a.q) != u) continue;
        const cplx s = exp_sum_thetaQ(a.x, static_cast<i64>(u), a.q, a.beta, budget);
        t.rows.push_back(std::to_string(a.x) + "," + std::to_string(a.q) + "," + std::to_string(u) + "," +
                         num(a.beta) + "," + cplx_cols(s) + "," + num(s.real() / scale));
      }
      return t;
    });
  } else if (a.kind == "frak") {
    params["q"] = std::to_string(a.q);
    params["U"] = num(a.U);
    run_cached(g, "expsum", params, [&](const Instance&, const Budget&) {
      Table t{"q,a1,re,im,error_bound,triangle_bound", {}, {}};
      const auto all = frak_F_all(a.q, a.U);
      for (u64 u = 0; u < a.q; ++u) {
        const auto& v = all[u];
        char buf[80];
        std::snprintf(buf, sizeof buf, ",%.6g,%.6g", v.error_bound, v.params.at("triangle_bound"));
        t.rows.push_back(std::to_string(a.q) + "," + std::to_string(u) + "," + cplx_cols(v.value) + buf);
      }
      return t;
    });
  } else if (a.kind == "W") {
    if (!a.a1) throw DomainError("expsum W: --a1 is required");
    params["q"] = std::to_string(a.q);
    params["a1"] = std::to_string(*a.a1);
    params["k"] = std::to_string(a.k);
    run_cached(g, "expsum", params, [&](const Instance&, const Budget&) {
      Table t{"a,q,k,re,im", {}, {}};
      t.rows.push_back(std::to_string(*a.a1) + "," + std::to_string(a.q) + "," + std::to_string(a.k) + "," +
                       cplx_cols(W_helper(*a.a1, a.q, a.k)));
      return t;
    });
  } else if (a.kind == "ephi") {
    params["p"] = std::to_string(a.p);
    params["depth"] = std::to_string(a.depth);
    params[a.p == 2 ? "t_max" : "kappa_max"] = std::to_string(a.p == 2 ? a.t_max : a.kappa_max);
    run_cached(g, "expsum", params, [&](const Instance& inst, const Budget& budget) {
      Table t{truncated_header(), {}, {}};
      truncated_rows(a.p == 2 ? E_phi_2(inst, a.t_max, a.depth, budget)
                              : E_phi_p(inst, a.p, a.kappa_max, a.depth, budget),
                     t);
      return t;
    });
  } else if (a.kind == "lphi") {
    params["Q"] = std::to_string(a.Q);
    params["U"] = num(a.U);
    run_cached(g, "expsum", params, [&](const Instance& inst, const Budget& budget) {
      Table t{truncated_header(), {}, {}};
      truncated_rows(L_phi_truncated(inst, a.Q, a.U, budget), t);
      return t;
    });
  } else {
    throw DomainError("unknown expsum kind '" + a.kind + "'");
  }
}

struct DensityArgs {
  std::vector<u64> p;
  int level = 0;
  std::string kind = "ell";
  int lift_extra = EllOptions{}.lift_extra;
  bool undecided_insoluble = false;
  u64 product = 0;
};

void cmd_local_density(const Globals& g, const DensityArgs& a) {
  if (a.product > 0) {
    run_cached(g, "local-product", {{"p_max", std::to_string(a.product)}}, [&](const Instance& inst, const Budget& budget) {
      Table t{truncated_header(), {}, {}};
      truncated_rows(local_product(inst, a.product, {}, true, budget), t);
      return t;
    });
    return;
  }
  if (a.p.empty()) throw DomainError("local-density: give --p or --product");
  std::map<std::string, std::string> params{{"p", join(a.p)},
                                            {"level", std::to_string(a.level)},
                                            {"kind", a.kind},
                                            {"lift_extra", std::to_string(a.lift_extra)},
                                            {"undecided", a.undecided_insoluble ? "insoluble" : "soluble"}};
  run_cached(g, "local-density", params, [&](const Instance& inst, const Budget& budget) {
    Table t{density_csv_header(), {}, {}};
    EllOptions opts;
    opts.lift_extra = a.lift_extra;
    opts.undecided_soluble = !a.undecided_insoluble;
    for (u64 p : a.p) {
      const int level = a.level > 0 ? a.level : default_level(p, inst.n);
      if (a.kind == "tau") {
        t.rows.push_back(density_csv_row(tau_f2(inst, p, level, budget)));
      } else if (a.kind == "ell") {
        t.rows.push_back(density_csv_row(level == 1 ? ell_p_level1(inst, p, budget) : ell_p(inst, p, level, opts, budget)));
      } else if (a.kind == "weighted") {
        const LocalFactor f = tau_p_weighted(inst, p, level, opts, budget);
        LocalDensity d = f.ell;
        d.kind = DensityKind::tau_weighted;
        d.density = f.ratio;
        t.rows.push_back(density_csv_row(d));
      } else {
        throw DomainError("unknown density kind '" + a.kind + "' (expected tau, ell or weighted)");
      }
    }
    return t;
  });
}

struct IntegralArgs {
  u64 samples = 1000000;
  std::vector<double> schedule = default_epsilon_schedule();
  bool open_f1 = false;
  std::string estimator = "shell";
};

void cmd_singular_integral(const Globals& g, const IntegralArgs& a) {
  if (a.estimator != "shell" && a.estimator != "gradient") {
    throw DomainError("unknown estimator '" + a.estimator + "' (expected shell or gradient)");
  }
  std::map<std::string, std::string> params{{"samples", std::to_string(a.samples)},
                                            {"schedule", join(a.schedule)},
                                            {"open_f1", a.open_f1 ? "1" : "0"},
                                            {"estimator", a.estimator}};
  run_cached(g, "singular-integral", params, [&](const Instance& inst, const Budget&) {
    const bool gradient = a.estimator == "gradient";
    const JResult r = J_density(inst, a.schedule, a.samples, g.seed, {.closed_f1 = !a.open_f1, .run_gradient = gradient});
    Table t{shell_csv_header(), {}, {}};
    for (const auto& s : gradient ? r.gradient_shells : r.shells) t.rows.push_back(shell_csv_row(s));
    const McEstimate& e = gradient ? r.gradient : r.shell;
    ShellEstimate limit;
    limit.volume = e.value.real();
    limit.volume_error = e.std_error;
    limit.samples = e.samples;
    limit.seed = e.seed;
    t.rows.push_back(shell_csv_row(limit));
    return t;
  });
}

struct ConstantArgs {
  std::string route = "both";
  u64 samples = 1000000;
  u64 Q = 16;
  double U = 1 << 14;
  u64 p_max = 50;
  u64 c0_cutoff = 1000000;
  std::vector<u64> t;
};

std::map<std::string, std::string> constant_params(const ConstantArgs& a) {
  return {{"route", a.route},
          {"samples", std::to_string(a.samples)},
          {"Q", std::to_string(a.Q)},
          {"U", num(a.U)},
          {"p_max", std::to_string(a.p_max)},
          {"c0_cutoff", std::to_string(a.c0_cutoff)}};
}

std::vector<ConstantBreakdown> constants(const Instance& inst, const ConstantArgs& a, u64 seed, const Budget& budget) {
  if (a.route != "1" && a.route != "2" && a.route != "both") {
    throw DomainError("unknown route '" + a.route + "' (expected 1, 2 or both)");
  }
  const JResult j =
      J_density(inst, default_epsilon_schedule(), a.samples, seed, {.closed_f1 = true, .run_gradient = false});
  std::vector<ConstantBreakdown> out;
  if (a.route != "2") {
    out.push_back(c_phi_route1(inst, j.shell, L_phi_truncated(inst, a.Q, a.U, budget), landau_c0(a.c0_cutoff)));
  }
  if (a.route != "1") out.push_back(c_phi_route2(inst, j.shell, local_product(inst, a.p_max, {}, true, budget)));
  return out;
}

void cmd_constant(const Globals& g, const ConstantArgs& a) {
  run_cached(g, "constant", constant_params(a), [&](const Instance& inst, const Budget& budget) {
    Table t{breakdown_csv_header(), {}, {}};
    const auto rows = constants(inst, a, g.seed, budget);
    for (const auto& c : rows) {
      t.rows.push_back(breakdown_csv_row(c));
      for (const auto& w : c.warnings) t.notes.push_back(std::string("warning ") + to_string(c.route) + ": " + w);
    }
    if (rows.size() == 2) {
      const RouteAgreement ag = compare_routes(rows[0], rows[1]);
      char buf[160];
      std::snprintf(buf, sizeof buf, "agreement relative_difference=%.6g relative_error=%.6g agree=%d",
                    ag.relative_difference, ag.relative_error, ag.agree ? 1 : 0);
      t.notes.push_back(buf);
    }
    return t;
  });
}

void cmd_compare(const Globals& g, ConstantArgs a) {
  if (a.t.empty()) a.t = {100, 200};
  a.route = "both";
  auto params = constant_params(a);
  params["t"] = join(a.t);
  run_cached(g, "compare", params, [&](const Instance& inst, const Budget& budget) {
    const auto rows = constants(inst, a, g.seed, budget);
    Table t{"t,raw_count,normalized,c_route1,c_route2,predict_route1,predict_route2,ratio_route1,ratio_route2", {}, {}};
    for (u64 v : a.t) {
      const CountRecord rec = count_N(inst, v, budget);
      const double p1 = predict_N(rows[0], inst, v);
      const double p2 = predict_N(rows[1], inst, v);
      const double n = static_cast<double>(rec.raw_count);
      char buf[300];
      std::snprintf(buf, sizeof buf, "%llu,%llu,%.12g,%.10g,%.10g,%.10g,%.10g,%.6g,%.6g",
                    static_cast<unsigned long long>(v), static_cast<unsigned long long>(rec.raw_count),
                    rec.normalized, rows[0].c_phi, rows[1].c_phi, p1, p2, n / p1, n / p2);
      t.rows.push_back(buf);
    }
    if (!inst.birch_condition_asserted) t.notes.push_back("Birch condition not asserted for this instance");
    return t;
  });
}

int cmd_verify(const Globals& g, const std::string& suite) {
  bool ok = true;
  std::string text;
  for (int id : suite_criteria(suite)) {
    const CriterionReport r = run_criterion(id, g.seed);
    const std::string block = format_report(r);
    std::cout << block;
    std::cout.flush();
    text += block;
    if (r.binding && !r.passed()) ok = false;
  }
  if (!g.output.empty()) {
    std::ofstream out(g.output, std::ios::binary | std::ios::trunc);
    out << text;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fibre-solubility counting, exponential sums and local densities"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kVersion));

  Globals g;
  app.add_option("--config", g.config, "Instance JSON file")->check(CLI::ExistingFile);
  app.add_option("--instance", g.instance, "Built-in instance: quaternary, binary or split")->capture_default_str();
  app.add_option("--seed", g.seed, "Seed for every random stream")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (default: hardware concurrency)");
  app.add_option("--cache", g.cache_dir, "Cache directory (overrides CONIC_CACHE_DIR)");
  app.add_flag("--no-cache", g.no_cache, "Disable the result cache");
  app.add_option("--budget", g.budget, "Maximum elementary operations per enumeration")->capture_default_str();
  app.add_option("-o,--output", g.output, "Write the CSV here (and a .manifest.json beside it)");

  CountArgs count;
  auto* c_count = app.add_subcommand("count", "Projective points of bounded height with a soluble fibre");
  c_count->add_option("--t", count.t, "Heights")->delimiter(',')->required();
  c_count->add_flag("--include-zero,!--exclude-zero", count.include_zero, "Count fibres with f1 = 0 (default on)");

  ThetaArgs theta;
  auto* c_theta = app.add_subcommand("theta", "Sum-of-two-squares indicator, sieve counts and box counts");
  c_theta->add_option("--m", theta.m, "Integers to classify")->delimiter(',');
  c_theta->add_option("--x", theta.x, "Count m <= x that are sums of two squares");
  c_theta->add_option("--box", theta.box, "theta_count over the box [-P, P]^n");
  c_theta->add_flag("--include-zero,!--exclude-zero", theta.include_zero, "With --box, count f1 = 0 points");

  ExpsumArgs ex;
  auto* c_ex = app.add_subcommand("expsum", "Exponential sums and truncated series");
  c_ex->add_option("kind", ex.kind, "birch, thetaq, frak, W, ephi or lphi")
      ->required()
      ->check(CLI::IsMember({"birch", "thetaq", "frak", "W", "ephi", "lphi"}));
  c_ex->add_option("--q", ex.q, "Modulus")->check(CLI::PositiveNumber);
  c_ex->add_option("--a1", ex.a1, "First phase coefficient (W: the residue a)");
  c_ex->add_option("--a2", ex.a2, "Second phase coefficient");
  c_ex->add_option("--k", ex.k, "W: the integer k");
  c_ex->add_option("--x", ex.x, "thetaq: length of the sum")->check(CLI::Range(u64(3), u64(1) << 40));
  c_ex->add_option("--beta", ex.beta, "thetaq: real frequency offset");
  c_ex->add_option("--U", ex.U, "Truncation of the arc-factor weights");
  c_ex->add_option("--p", ex.p, "ephi: the prime (2 or 3 mod 4)");
  c_ex->add_option("--Q", ex.Q, "lphi: largest modulus");
  c_ex->add_option("--kappa-max", ex.kappa_max, "ephi, p odd: largest kappa");
  c_ex->add_option("--depth", ex.depth, "ephi: shell depth m_max / rho_max (-1 = default)");
  c_ex->add_option("--t-max", ex.t_max, "ephi, p = 2: largest t");

  DensityArgs dens;
  auto* c_dens = app.add_subcommand("local-density", "p-adic densities and their product");
  c_dens->add_option("--p", dens.p, "Primes")->delimiter(',');
  c_dens->add_option("--level", dens.level, "Level N (0 = default per prime)");
  c_dens->add_option("--kind", dens.kind, "tau, ell or weighted")->capture_default_str();
  c_dens->add_option("--lift-extra", dens.lift_extra, "Extra lifting levels for undecided residues")
      ->capture_default_str();
  c_dens->add_flag("--undecided-insoluble", dens.undecided_insoluble, "Count residues undecided at the ceiling as insoluble");
  c_dens->add_option("--product", dens.product, "Emit prod_{p <= P} tau_p / lambda_p instead");

  IntegralArgs integ;
  auto* c_int = app.add_subcommand("singular-integral", "Monte Carlo real density J");
  c_int->add_option("--samples", integ.samples, "Samples at the widest shell")->capture_default_str();
  c_int->add_option("--schedule", integ.schedule, "Strictly decreasing epsilon values")->delimiter(',');
  c_int->add_flag("--open-f1", integ.open_f1, "Require f1 > 0 instead of f1 >= 0");
  c_int->add_option("--estimator", integ.estimator, "shell or gradient")->capture_default_str();

  ConstantArgs cons;
  auto add_constant_options = [&](CLI::App* sub) {
    sub->add_option("--samples", cons.samples, "Monte Carlo samples for J")->capture_default_str();
    sub->add_option("--Q", cons.Q, "Route 1: largest modulus of the singular series")->capture_default_str();
    sub->add_option("--U", cons.U, "Route 1: arc-factor truncation")->capture_default_str();
    sub->add_option("--p-max", cons.p_max, "Route 2: largest prime in the product")->capture_default_str();
    sub->add_option("--c0-cutoff", cons.c0_cutoff, "Prime cutoff for C0")->capture_default_str();
  };
  auto* c_const = app.add_subcommand("constant", "Leading constant by either route");
  c_const->add_option("--route", cons.route, "1, 2 or both")->capture_default_str();
  add_constant_options(c_const);
  auto* c_cmp = app.add_subcommand("compare", "Both routes against brute-force counts");
  add_constant_options(c_cmp);
  c_cmp->add_option("--t", cons.t, "Heights (default 100,200)")->delimiter(',');

  std::string suite;
  auto* c_verify = app.add_subcommand("verify", "Run a verification suite");
  c_verify->add_option("suite", suite, "arith, sieve, expsums, padic, archimedean, constant or all")->required();

  CLI11_PARSE(app, argc, argv);

  set_worker_threads(g.threads > 0 ? g.threads : std::max(1u, std::thread::hardware_concurrency()));
  try {
    if (*c_count) cmd_count(g, count);
    if (*c_theta) cmd_theta(g, theta);
    if (*c_ex) cmd_expsum(g, ex);
    if (*c_dens) cmd_local_density(g, dens);
    if (*c_int) cmd_singular_integral(g, integ);
    if (*c_const) cmd_constant(g, cons);
    if (*c_cmp) cmd_compare(g, cons);
    if (*c_verify) return cmd_verify(g, suite);
  } catch (const BudgetExceeded& e) {
    std::cerr << "conic: budget refused: " << e.what() << "\n";
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "conic: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "conic: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
