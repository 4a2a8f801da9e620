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

#include "conic/archimedean.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace conic {

namespace {

constexpr u64 kChunk = u64(1) << 15;

u64 mix(u64 z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

struct Moments {
  double sum = 0;
  double sum_sq = 0;
  double sum_im = 0;
  double sum_im_sq = 0;
};

// Runs fn(point) -> (re, im) over `samples` points of [-1, 1]^n in fixed
// chunks; chunk partials are folded in chunk order.
template <class Fn>
Moments sample_moments(int n, u64 samples, u64 seed, Fn&& fn) {
  const std::size_t chunks = static_cast<std::size_t>((samples + kChunk - 1) / kChunk);
  const auto parts = parallel_map<Moments>(chunks, [&](std::size_t c) {
    Moments m;
    std::vector<double> x(n);
    const u64 begin = c * kChunk;
    const u64 end = std::min(samples, begin + kChunk);
    for (u64 i = begin; i < end; ++i) {
      for (int j = 0; j < n; ++j) x[j] = 2.0 * counter_uniform(seed, i, static_cast<u32>(j)) - 1.0;
      const std::complex<double> v = fn(x);
      m.sum += v.real();
      m.sum_sq += v.real() * v.real();
      m.sum_im += v.imag();
      m.sum_im_sq += v.imag() * v.imag();
    }
    return m;
  });
  Moments total;
  for (const auto& m : parts) {
    total.sum += m.sum;
    total.sum_sq += m.sum_sq;
    total.sum_im += m.sum_im;
    total.sum_im_sq += m.sum_im_sq;
  }
  return total;
}

// Standard error of the mean of a real sample from its moments.
double mean_error(double sum, double sum_sq, u64 count) {
  const double N = static_cast<double>(count);
  const double mean = sum / N;
  const double var = std::max(0.0, sum_sq / N - mean * mean);
  return std::sqrt(var / std::max(1.0, N - 1.0));
}

// Weighted least squares y = J + c1 eps + c2 eps^2; returns (J, se(J)).
std::pair<double, double> extrapolate(const std::vector<ShellEstimate>& shells) {
  double A[3][3] = {}, b[3] = {};
  for (const auto& s : shells) {
    const double w = 1.0 / std::max(s.density_error * s.density_error, 1e-300);
    const double basis[3] = {1.0, s.epsilon, s.epsilon * s.epsilon};
    for (int i = 0; i < 3; ++i) {
      b[i] += w * basis[i] * s.density;
      for (int j = 0; j < 3; ++j) A[i][j] += w * basis[i] * basis[j];
    }
  }
  // Inverse by cofactors; only the first row is needed.
  const double c00 = A[1][1] * A[2][2] - A[1][2] * A[2][1];
  const double c01 = A[1][2] * A[2][0] - A[1][0] * A[2][2];
  const double c02 = A[1][0] * A[2][1] - A[1][1] * A[2][0];
  const double det = A[0][0] * c00 + A[0][1] * c01 + A[0][2] * c02;
  if (!(det > 0)) return {b[0] / A[0][0], std::sqrt(1.0 / A[0][0])};
  const double J = (c00 * b[0] + c01 * b[1] + c02 * b[2]) / det;
  return {J, std::sqrt(c00 / det)};
}

void check_schedule(const std::vector<double>& schedule) {
  if (schedule.size() < 3) throw DomainError("J_density: epsilon schedule needs at least 3 entries");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!(schedule[i] > 0)) throw DomainError("J_density: epsilon values must be positive");
    if (i > 0 && !(schedule[i] < schedule[i - 1])) {
      throw DomainError("J_density: epsilon schedule must be strictly decreasing");
    }
  }
}

}  // namespace

double counter_uniform(u64 seed, u64 index, u32 dim) {
  const u64 h = mix(mix(seed ^ mix(index)) ^ (static_cast<u64>(dim) * 0xd1b54a32d192ed03ull));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

u64 substream_seed(u64 seed, u64 stream) { return mix(seed ^ mix(stream + 0x632be59bd9b4e019ull)); }

McEstimate I_gamma(const Instance& inst, double g1, double g2, u64 samples, u64 seed) {
  if (samples < 1000) throw DomainError("I_gamma: at least 1000 samples required");
  McEstimate est;
  est.samples = samples;
  est.seed = seed;
  const double volume = std::ldexp(1.0, inst.n);
  if (g1 == 0 && g2 == 0) {
    est.value = volume;
    return est;
  }
  const Moments m = sample_moments(inst.n, samples, seed, [&](const std::vector<double>& x) {
    const double phase = g1 * evaluate_real(inst.f1, x) + g2 * evaluate_real(inst.f2, x);
    const double angle = 2.0 * std::numbers::pi * (phase - std::floor(phase));
    return std::complex<double>(std::cos(angle), std::sin(angle));
  });
  const double N = static_cast<double>(samples);
  est.value = volume * std::complex<double>(m.sum / N, m.sum_im / N);
  const double er = mean_error(m.sum, m.sum_sq, samples);
  const double ei = mean_error(m.sum_im, m.sum_im_sq, samples);
  est.std_error = volume * std::sqrt(er * er + ei * ei);
  return est;
}

std::vector<double> default_epsilon_schedule() { return {0.1, 0.05, 0.025, 0.0125}; }

JResult J_density(const Instance& inst, const std::vector<double>& schedule, u64 samples, u64 seed,
                  const JOptions& options) {
  check_schedule(schedule);
  if (samples < 1000) throw DomainError("J_density: at least 1000 samples required");
  const int n = inst.n;
  const double volume = std::ldexp(1.0, n);
  const bool closed = options.closed_f1;
  auto fibre_ok = [&](const std::vector<double>& x) {
    const double v = evaluate_real(inst.f1, x);
    return closed ? v >= 0 : v > 0;
  };

  JResult out;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const double eps = schedule[i];
    ShellEstimate s;
    s.epsilon = eps;
    s.samples = static_cast<u64>(std::llround(static_cast<double>(samples) * schedule[0] / eps));
    s.seed = substream_seed(seed, i);
    const Moments m = sample_moments(n, s.samples, s.seed, [&](const std::vector<double>& x) {
      const bool hit = std::abs(evaluate_real(inst.f2, x)) <= eps && fibre_ok(x);
      return std::complex<double>(hit ? 1.0 : 0.0, 0.0);
    });
    const double N = static_cast<double>(s.samples);
    s.volume = volume * m.sum / N;
    s.volume_error = volume * mean_error(m.sum, m.sum_sq, s.samples);
    s.density = s.volume / (2 * eps);
    s.density_error = s.volume_error / (2 * eps);
    out.shells.push_back(s);
  }
  const auto [J, se] = extrapolate(out.shells);
  out.shell.value = J;
  out.shell.std_error = se;
  out.shell.seed = seed;
  out.shell.epsilon = 0;
  for (const auto& s : out.shells) out.shell.samples += s.samples;

  if (options.run_gradient) {
    for (std::size_t i = 0; i < schedule.size(); ++i) {
      const double h = schedule[i];
      ShellEstimate s;
      s.epsilon = h;
      s.samples = static_cast<u64>(std::llround(static_cast<double>(samples) * schedule[0] / h));
      s.seed = substream_seed(seed, 1000 + i);
      const Moments m = sample_moments(n, s.samples, s.seed, [&](const std::vector<double>& x) {
        thread_local std::vector<double> g;
        g.resize(n);
        gradient_real(inst.f2, x, g);
        double norm = 0;
        for (double v : g) norm += v * v;
        norm = std::sqrt(norm);
        if (norm == 0) return std::complex<double>(0, 0);
        const bool hit = std::abs(evaluate_real(inst.f2, x)) <= h * norm && fibre_ok(x);
        return std::complex<double>(hit ? 1.0 / norm : 0.0, 0.0);
      });
      const double N = static_cast<double>(s.samples);
      s.volume = volume * m.sum / N;
      s.volume_error = volume * mean_error(m.sum, m.sum_sq, s.samples);
      s.density = s.volume / (2 * h);
      s.density_error = s.volume_error / (2 * h);
      out.gradient_shells.push_back(s);
    }
    const auto [Jg, seg] = extrapolate(out.gradient_shells);
    out.gradient.value = Jg;
    out.gradient.std_error = seg;
    out.gradient.seed = seed;
    for (const auto& s : out.gradient_shells) out.gradient.samples += s.samples;
  }
  return out;
}

std::string shell_csv_header() { return "epsilon,volume_estimate,std_error,samples,seed"; }

std::string shell_csv_row(const ShellEstimate& s) {
  char buf[200];
  std::snprintf(buf, sizeof buf, "%.6g,%.12g,%.6g,%llu,%llu", s.epsilon, s.volume, s.volume_error,
                static_cast<unsigned long long>(s.samples), static_cast<unsigned long long>(s.seed));
  return buf;
}

}  // namespace conic
