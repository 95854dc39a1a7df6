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

#include "recordlab/poisson_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "recordlab/analytics.hpp"
#include "recordlab/error.hpp"
#include "recordlab/pareto_front.hpp"

namespace recordlab {

std::vector<Point> ShellProcessSample::points() const {
  std::vector<Point> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) {
    const auto p = point(i);
    out.emplace_back(std::vector<double>(p.begin(), p.end()));
  }
  return out;
}

namespace {

// ln P(Gamma(d,1) > x) without underflow.
double log_gamma_tail(int d, double x) {
  if (!(x > 0.0)) {
    return 0.0;
  }
  if (std::isinf(x)) {
    return -std::numeric_limits<double>::infinity();
  }
  double term = 1.0;
  double sum = 1.0;
  for (int j = 1; j < d; ++j) {
    term *= x / j;
    sum += term;
  }
  return -x + std::log(sum);
}

}  // namespace

double truncated_gamma_quantile(int d, double lo, double hi, double u) {
  if (!(lo >= 0.0) || !(hi > lo)) {
    throw_invalid("truncated gamma requires 0 <= lo < hi");
  }
  if (!(u >= 0.0 && u <= 1.0)) {
    throw_invalid("truncated gamma requires u in [0, 1]");
  }
  const double lg_lo = log_gamma_tail(d, lo);
  const double lg_hi = log_gamma_tail(d, hi);
  // ln T with T = G(lo) - u (G(lo) - G(hi)) = G(lo) [1 - u (1 - G(hi)/G(lo))].
  const double shrink = -std::expm1(lg_hi - lg_lo);
  const double log_t = lg_lo + std::log1p(-u * shrink);
  if (!std::isfinite(log_t)) {
    return hi;
  }
  const double lgd = std::lgamma(static_cast<double>(d));

  double left = lo;
  double right = hi;
  if (std::isinf(right)) {
    double step = 1.0;
    right = lo + step;
    while (log_gamma_tail(d, right) > log_t) {
      left = right;
      step *= 2.0;
      right = lo + step;
    }
  }
  // Exact for d == 1 and a good start in the tail.
  double r = std::clamp(lo - (log_t - lg_lo), left, right);
  for (int it = 0; it < 200; ++it) {
    const double g = log_gamma_tail(d, r) - log_t;
    if (g > 0.0) {
      left = r;
    } else {
      right = r;
    }
    if (g == 0.0) {
      break;
    }
    // d/dr ln G(r) = -pdf(r) / G(r)
    const double slope =
        -std::exp((d - 1) * std::log(r) - r - lgd - log_gamma_tail(d, r));
    double next = r - g / slope;
    if (!(next > left && next < right) || !std::isfinite(next)) {
      next = 0.5 * (left + right);
    }
    if (std::fabs(next - r) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, r) ||
        right - left <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, r)) {
      r = next;
      break;
    }
    r = next;
  }
  return std::clamp(r, std::nextafter(lo, hi), hi);
}

ShellProcessSample sample_shell_process(double n, double lo, double hi, int d, RngStream& rng) {
  check_dimension(d);
  if (!(n >= 1.0) || !std::isfinite(n)) {
    throw_invalid("shell process requires finite n >= 1");
  }
  if (!(lo >= 0.0) || std::isnan(hi) || lo > hi) {
    throw_invalid("shell process requires 0 <= lo <= hi");
  }
  ShellProcessSample s;
  s.d = d;
  s.lo = lo;
  s.hi = hi;
  s.n_rate = n;
  if (hi == lo) {
    return s;
  }
  const double mass = gamma_tail(d, lo) - gamma_tail(d, hi);
  const std::uint64_t count = poisson_variate(rng, n * mass);
  const auto du = static_cast<std::size_t>(d);
  s.coords.resize(count * du);
  s.norms.resize(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const double r = truncated_gamma_quantile(d, lo, hi, rng.uniform());
    std::span<double> c(s.coords.data() + i * du, du);
    fill_simplex_uniform(c, rng);
    for (double& x : c) {
      x *= r;
    }
    s.norms[i] = r;
  }
  return s;
}

std::uint64_t count_window_maxima(const ShellProcessSample& sample, double w_lo, double w_hi) {
  if (!(w_lo >= sample.lo && w_lo < w_hi && w_hi <= sample.hi)) {
    throw_invalid("window must satisfy lo <= w_lo < w_hi <= hi");
  }
  std::vector<std::size_t> order;
  order.reserve(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    if (sample.norms[i] > w_lo) {
      order.push_back(i);
    }
  }
  // Domination strictly increases the norm, so a point is a maximum of the
  // whole sample iff no point visited before it (larger norm) dominates it,
  // and points at or below w_lo never matter.
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return sample.norms[a] > sample.norms[b];
  });
  ParetoFront front(sample.d);
  std::uint64_t count = 0;
  for (std::size_t i : order) {
    const bool survives = front.insert_unchecked(sample.point(i));
    if (survives && sample.norms[i] <= w_hi) {
      ++count;
    }
  }
  return count;
}

double prob_En(double n, int d) {
  return -std::expm1(-n * gamma_tail(d, b_upper_of(n, d)));
}

namespace {

ShellBoundaries admissible_shell(double n, double a, int d, const OmegaRule& rule) {
  ShellBoundaries s = shell(n, a, d, rule);
  if (std::fabs(a) > s.a_n) {
    throw_domain("offset a must satisfy |a| <= a_n");
  }
  return s;
}

std::uint64_t shell_count(const ShellBoundaries& s, double hi, RngStream& rng) {
  if (!(s.b > s.b_lower)) {
    return 0;
  }
  const ShellProcessSample sample = sample_shell_process(s.n, s.b_lower, hi, s.d, rng);
  return count_window_maxima(sample, s.b_lower, s.b);
}

}  // namespace

std::uint64_t sample_N(double n, double a, int d, RngStream& rng, const OmegaRule& rule) {
  const ShellBoundaries s = admissible_shell(n, a, d, rule);
  return shell_count(s, s.b_upper + 40.0, rng);
}

std::uint64_t sample_Nbar(double n, double a, int d, RngStream& rng, const OmegaRule& rule) {
  const ShellBoundaries s = admissible_shell(n, a, d, rule);
  return shell_count(s, s.b_upper, rng);
}

std::optional<NuPoint> sample_smallest_nu_point(double n, int d, double lo, double hi,
                                                RngStream& rng) {
  if (!(lo < hi)) {
    throw_invalid("nu sampler requires lo < hi");
  }
  const ShellProcessSample s = sample_shell_process(n, lo, hi, d, rng);
  std::optional<NuPoint> best;
  const double log_n = std::log(n);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double r = s.norms[i];
    const double keep = std::exp(-std::exp(log_n - r));
    // The uniform is drawn for every proposal so the stream layout does not
    // depend on earlier outcomes.
    const bool accepted = rng.uniform() < keep;
    if (accepted && (!best || r < best->norm)) {
      const auto p = s.point(i);
      best = NuPoint{std::vector<double>(p.begin(), p.end()), r};
    }
  }
  return best;
}

GapEstimate dispersion_gap(std::span<const std::uint64_t> counts) {
  if (counts.size() < 2) {
    throw_invalid("dispersion_gap requires at least two values");
  }
  const auto t = static_cast<double>(counts.size());
  double mean = 0.0;
  for (auto c : counts) mean += static_cast<double>(c);
  mean /= t;
  double m2 = 0.0;
  for (auto c : counts) {
    const double z = static_cast<double>(c) - mean;
    m2 += z * z;
  }
  const double var = m2 / (t - 1.0);
  const double pop_var = m2 / t;
  // Influence function of (variance - mean): (x - m)^2 - var - (x - m).
  double ss = 0.0;
  for (auto c : counts) {
    const double z = static_cast<double>(c) - mean;
    const double psi = z * z - pop_var - z;
    ss += psi * psi;
  }
  return {var - mean, std::sqrt(ss / (t - 1.0) / t), mean, var};
}

GapEstimate variance_mean_gap(double n, double a, int d, std::uint64_t trials, RngStream& rng,
                              const OmegaRule& rule) {
  admissible_shell(n, a, d, rule);
  if (trials < 10000) {
    throw_invalid("variance_mean_gap requires at least 1e4 trials");
  }
  std::vector<std::uint64_t> counts(trials);
  for (auto& c : counts) {
    c = sample_Nbar(n, a, d, rng, rule);
  }
  return dispersion_gap(counts);
}

}  // namespace recordlab
