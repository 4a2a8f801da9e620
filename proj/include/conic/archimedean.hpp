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
#include <string>
#include <vector>

#include "conic/common.hpp"
#include "conic/forms.hpp"

namespace conic {

struct McEstimate {
  std::complex<double> value;
  double std_error = 0;
  u64 samples = 0;
  u64 seed = 0;
  double epsilon = 0;
};

/// Counter-based uniform stream: the value depends only on (seed, index, dim).
double counter_uniform(u64 seed, u64 index, u32 dim);
/// Derived seed for an independent sub-stream.
u64 substream_seed(u64 seed, u64 stream);

/// Monte Carlo estimate of the integral of e(g1 f1 + g2 f2) over [-1, 1]^n.
/// gamma = (0, 0) returns 2^n exactly.
McEstimate I_gamma(const Instance& inst, double g1, double g2, u64 samples, u64 seed);

struct ShellEstimate {
  double epsilon = 0;
  double volume = 0;          // vol{t in [-1,1]^n : |f2| <= eps, f1 >= 0}
  double volume_error = 0;
  double density = 0;         // volume / (2 eps)
  double density_error = 0;
  u64 samples = 0;
  u64 seed = 0;
};

struct JOptions {
  bool closed_f1 = true;   // f1 >= 0; false uses f1 > 0
  bool run_gradient = true;
};

struct JResult {
  McEstimate shell;               // eps-shell volumes extrapolated to eps = 0
  McEstimate gradient;            // gradient-weighted coarea estimator, extrapolated
  std::vector<ShellEstimate> shells;
  std::vector<ShellEstimate> gradient_shells;
};

std::vector<double> default_epsilon_schedule();

/// Real density of f2 = 0 on {f1 >= 0} in the unit box. Shell i draws
/// samples * eps_0 / eps_i points; the limit is a weighted least-squares fit
/// of density(eps) = J + c1 eps + c2 eps^2. The gradient estimator counts points with
/// |f2| <= h |grad f2| weighted by 1 / |grad f2| on an independent stream.
JResult J_density(const Instance& inst, const std::vector<double>& schedule, u64 samples, u64 seed,
                  const JOptions& options = {});

std::string shell_csv_header();
std::string shell_csv_row(const ShellEstimate& s);

}  // namespace conic
