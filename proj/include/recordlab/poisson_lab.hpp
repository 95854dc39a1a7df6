// Copyright 2026 The recordlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "recordlab/boundaries.hpp"
#include "recordlab/core_model.hpp"
#include "recordlab/rng.hpp"

namespace recordlab {

/// Realization of the Poisson process with intensity n e^{-|x|} dx restricted
/// to the l1-shell lo < |x| <= hi of the positive orthant.
struct ShellProcessSample {
  int d = 2;
  double lo = 0.0;
  double hi = 0.0;
  double n_rate = 0.0;
  std::vector<double> coords;  // row-major, size() * d
  std::vector<double> norms;

  std::size_t size() const noexcept { return norms.size(); }
  std::span<const double> point(std::size_t i) const noexcept {
    return {coords.data() + i * static_cast<std::size_t>(d), static_cast<std::size_t>(d)};
  }
  std::vector<Point> points() const;
};

/// Inverse distribution function of Gamma(d, 1) truncated to (lo, hi]:
/// returns r with P(lo < R <= r) = u P(lo < R <= hi), solved on the log
/// upper tail by safeguarded Newton steps.
double truncated_gamma_quantile(int d, double lo, double hi, double u);

/// Throws when lo > hi or lo < 0; hi == lo gives an empty sample, hi may be
/// +infinity. n is real so that rates beyond 2^64 are allowed.
ShellProcessSample sample_shell_process(double n, double lo, double hi, int d, RngStream& rng);

/// Number of points that no other point of the sample strictly dominates and
/// whose norm lies in (w_lo, w_hi]. Requires lo <= w_lo < w_hi <= hi.
std::uint64_t count_window_maxima(const ShellProcessSample& sample, double w_lo, double w_hi);

/// P(the intensity-n process has a point beyond b_upper)
/// = 1 - exp(-n P(Gamma(d,1) > b_upper)).
///
/// Points and maxima beyond b_upper exist together: the largest-norm point
/// beyond b_upper cannot be dominated, since domination strictly increases
/// the norm.
double prob_En(double n, int d);

/// Poissonized count: maxima in (b_lower, b] of the process on
/// (b_lower, b_upper + 40]. The omitted mass n P(Gamma(d,1) > b_upper + 40)
/// is below 1e-15 n.
std::uint64_t sample_N(double n, double a, int d, RngStream& rng, const OmegaRule& rule = {});

/// Conditioned count: maxima in (b_lower, b] of the process on
/// (b_lower, b_upper].
std::uint64_t sample_Nbar(double n, double a, int d, RngStream& rng, const OmegaRule& rule = {});

struct NuPoint {
  std::vector<double> coords;
  double norm;
};

/// Minimum-norm point of the process with intensity
/// n e^{-|x|} exp(-n e^{-|x|}) dx on lo < |x| <= hi, by thinning the shell
/// process with acceptance probability exp(-n e^{-|x|}). Empty when the
/// thinned process has no points.
std::optional<NuPoint> sample_smallest_nu_point(double n, int d, double lo, double hi,
                                                RngStream& rng);

struct GapEstimate {
  double gap;  // sample variance minus sample mean
  double se;   // from the influence function of the gap
  double mean;
  double variance;
};

/// Var - mean of a sample of counts. Throws on fewer than two values.
GapEstimate dispersion_gap(std::span<const std::uint64_t> counts);

/// dispersion_gap of `trials` conditioned shell counts. Requires |a| <= a_n
/// and trials >= 1e4.
GapEstimate variance_mean_gap(double n, double a, int d, std::uint64_t trials, RngStream& rng,
                              const OmegaRule& rule = {});

}  // namespace recordlab
