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

#include "recordlab/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "recordlab/core_model.hpp"
#include "recordlab/error.hpp"
#include "recordlab/pareto_front.hpp"

namespace recordlab {

Bracket::Bracket(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
    throw_invalid("bracket requires finite lo <= hi");
  }
}

double gamma_tail(int d, double x) {
  if (d < 1) {
    throw_invalid("gamma_tail requires d >= 1");
  }
  if (!(x >= 0.0)) {
    throw_domain("gamma_tail requires x >= 0");
  }
  if (std::isinf(x)) {
    return 0.0;
  }
  if (x < 700.0) {
    double term = std::exp(-x);
    double sum = term;
    for (int j = 1; j < d; ++j) {
      term *= x / j;
      sum += term;
    }
    return sum;
  }
  const double lx = std::log(x);
  double sum = 0.0;
  for (int j = 0; j < d; ++j) {
    sum += std::exp(j * lx - x - std::lgamma(j + 1.0));
  }
  return sum;
}

namespace {

// Cutoffs outside which the record-intensity integrands are below ~1e-19 of
// their peak: z = n e^{-y} > 48 on the left, z < e^{-50} on the right.
struct EpochWindow {
  double lo;
  double hi;
};

EpochWindow epoch_window(double log_n) {
  return {std::max(0.0, log_n - std::log(48.0)), std::max(0.0, log_n) + 50.0};
}

void check_epoch(double n) {
  if (!(n >= 1.0) || !std::isfinite(n)) {
    throw_invalid("epoch n must be a finite number >= 1");
  }
}

}  // namespace

double expected_rho_between(double n, double lo, double hi, int d,
                            const QuadratureOptions& opts) {
  check_dimension(d);
  check_epoch(n);
  const double log_n = std::log(n);
  const EpochWindow w = epoch_window(log_n);
  const double a = std::max({lo, w.lo, 0.0});
  const double b = std::min(hi, w.hi);
  if (!(b > a)) {
    return 0.0;
  }
  const double lgd = std::lgamma(static_cast<double>(d));
  const double nm1 = n - 1.0;
  auto integrand = [=](double y) {
    if (y <= 0.0) {
      return 0.0;
    }
    double lp = log_n + (d - 1) * std::log(y) - y - lgd;
    if (nm1 > 0.0) {
      lp += nm1 * std::log1p(-std::exp(-y));
    }
    return std::exp(lp);
  };
  QuadratureOptions o = opts;
  o.panels = std::max(o.panels, 32);
  return integrate(integrand, a, b, o);
}

double expected_rho(double n, double b, int d, const QuadratureOptions& opts) {
  if (!(b > 0.0)) {
    return 0.0;
  }
  return expected_rho_between(n, 0.0, b, d, opts);
}

double delta_mean(double n, double a, int d) {
  const ShellBoundaries s = shell(n, a, d);
  if (std::fabs(a) > s.a_n) {
    throw_domain("delta_mean requires |a| <= a_n");
  }
  return expected_rho_between(n, s.b_star, s.b, d);
}

double J_j(int j, double x) {
  if (j < 0) {
    throw_invalid("J_j requires j >= 0");
  }
  if (!(x > 1.0) || !std::isfinite(x)) {
    throw_domain("J_j requires finite x > 1");
  }
  auto integrand = [=](double t) { return std::pow(std::log(x + t), j) * std::exp(-t); };
  QuadratureOptions o;
  o.abs_tol = 0.0;
  o.rel_tol = 1e-13;
  o.panels = 32;
  return std::exp(-x) * integrate(integrand, 0.0, 60.0, o);
}

namespace {

void check_admissible_a(const ShellBoundaries& s) {
  if (std::fabs(s.a) > s.a_n) {
    throw_domain("offset a must satisfy |a| <= a_n");
  }
}

// n int_lo^hi y^{d-1}/(d-1)! e^{-y} exp(-(1 - u(y)) n e^{-y}) dy
double thinned_shell_integral(double n, double lo, double hi, int d,
                              const std::function<double(double)>& u) {
  const double log_n = std::log(n);
  const EpochWindow w = epoch_window(log_n);
  const double a = std::max(lo, 0.0);
  const double b = std::min(hi, w.hi);
  if (!(b > a)) {
    return 0.0;
  }
  const double lgd = std::lgamma(static_cast<double>(d));
  auto integrand = [&](double y) {
    if (y <= 0.0) {
      return 0.0;
    }
    const double z = std::exp(log_n - y);
    return std::exp(log_n + (d - 1) * std::log(y) - lgd - y - (1.0 - u(y)) * z);
  };
  QuadratureOptions o;
  o.panels = 32;
  return integrate(integrand, a, b, o);
}

}  // namespace

Bracket expected_Nbar_bracket(double n, double a, int d, const OmegaRule& rule) {
  const ShellBoundaries s = shell(n, a, d, rule);
  check_admissible_a(s);
  if (!(s.b > s.b_lower)) {
    return Bracket(0.0, 0.0);
  }
  const double h = gamma_tail(d, s.b_upper - s.b);
  const double lo = thinned_shell_integral(n, s.b_lower, s.b, d, [](double) { return 0.0; });
  const double hi = thinned_shell_integral(n, s.b_lower, s.b, d, [h](double) { return h; });
  return Bracket(lo, std::max(lo, hi));
}

double expected_Nbar_exact(double n, double a, int d, const OmegaRule& rule) {
  const ShellBoundaries s = shell(n, a, d, rule);
  check_admissible_a(s);
  if (!(s.b > s.b_lower)) {
    return 0.0;
  }
  const double top = s.b_upper;
  return thinned_shell_integral(n, s.b_lower, s.b, d,
                                [top, d](double y) { return gamma_tail(d, top - y); });
}

double nu_mass(double n, double lo, double hi, int d) {
  check_dimension(d);
  check_epoch(n);
  if (!(hi > lo)) {
    return 0.0;
  }
  return thinned_shell_integral(n, lo, hi, d, [](double) { return 0.0; });
}

double p_n(double n, int d, const OmegaRule& rule) {
  return gamma_tail(d, b_lower_of(n, d, rule));
}

QnResult qn_bound_and_estimate(int d, double eps, std::uint64_t trials, RngStream& rng) {
  check_dimension(d);
  if (!(eps > 0.0)) {
    throw_invalid("qn requires eps > 0");
  }
  if (trials < 10000) {
    throw_invalid("qn requires at least 1e4 trials");
  }
  std::vector<double> u(static_cast<std::size_t>(d)), v(static_cast<std::size_t>(d));
  std::uint64_t hits = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    fill_simplex_uniform(u, rng);
    fill_simplex_uniform(v, rng);
    double s = 0.0;
    for (int j = 0; j < d; ++j) {
      s += std::max(u[static_cast<std::size_t>(j)], v[static_cast<std::size_t>(j)]);
    }
    if (s < 1.0 + eps) {
      ++hits;
    }
  }
  const double p = static_cast<double>(hits) / static_cast<double>(trials);
  const double bound = (std::ldexp(1.0, d) - 2.0) * std::pow(eps, d - 1);
  return {bound, p, std::sqrt(p * (1.0 - p) / static_cast<double>(trials))};
}

namespace {

double gumbel_kernel_cdf(double s) { return std::exp(-std::exp(-s)); }

}  // namespace

McEstimate chen_stein_Jn(double n, double a, int d, std::uint64_t trials, RngStream& rng,
                         const OmegaRule& rule) {
  const ShellBoundaries s = shell(n, a, d, rule);
  check_admissible_a(s);
  if (trials == 0) {
    throw_invalid("chen_stein_Jn requires trials > 0");
  }
  const double log_n = std::log(n);
  const double s_lo = s.b_lower - log_n;
  const double s_hi = s.b - log_n;
  if (!(s_hi > s_lo)) {
    return {0.0, 0.0};
  }
  const double g_lo = gumbel_kernel_cdf(s_lo);
  const double mass = gumbel_kernel_cdf(s_hi) - g_lo;
  const double lgd = std::lgamma(static_cast<double>(d));
  const double scale = mass * mass * std::exp(-2.0 * lgd);

  std::vector<double> u(static_cast<std::size_t>(d)), v(static_cast<std::size_t>(d));
  CompensatedSum sum, sum_sq;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const double ss = -std::log(-std::log(g_lo + rng.uniform() * mass));
    const double tt = -std::log(-std::log(g_lo + rng.uniform() * mass));
    fill_simplex_uniform(u, rng);
    fill_simplex_uniform(v, rng);
    const double z = log_n + ss;
    const double w = log_n + tt;
    double reach = 0.0;
    for (int j = 0; j < d; ++j) {
      const auto k = static_cast<std::size_t>(j);
      reach += std::max(u[k] * z, v[k] * w);
    }
    if (reach < s.b_upper) {
      const double weight = std::pow(z, d - 1) * std::pow(w, d - 1);
      sum.add(weight);
      sum_sq.add(weight * weight);
    }
  }
  const double tn = static_cast<double>(trials);
  const double mean = sum.value() / tn;
  const double var = std::max(0.0, sum_sq.value() / tn - mean * mean);
  return {scale * mean, scale * std::sqrt(var / tn)};
}

double jn_upper_chain(double n, double a, int d, const OmegaRule& rule) {
  const ShellBoundaries s = shell(n, a, d, rule);
  check_admissible_a(s);
  const double log_n = std::log(n);
  const double s_lo = s.b_lower - log_n;
  const double s_hi = s.b - log_n;
  if (!(s_hi > s_lo)) {
    return 0.0;
  }
  const double mass = gumbel_kernel_cdf(s_hi) - gumbel_kernel_cdf(s_lo);
  const double eps = s.b_upper / s.b_lower - 1.0;
  const double q = std::min(1.0, (std::ldexp(1.0, d) - 2.0) * std::pow(eps, d - 1));
  const double lgd = std::lgamma(static_cast<double>(d));
  return std::pow(s.b, 2.0 * (d - 1)) * mass * mass * std::exp(-2.0 * lgd) * q;
}

ErhoLowerResult erho_blower_bound(double n, int d, const OmegaRule& rule) {
  const double bl = b_lower_of(n, d, rule);
  const double w = omega_n(n, d, rule);
  const double l1 = std::log(n);
  return {expected_rho(n, bl, d),
          std::exp((d - 1.0 - w) * std::log(l1) - std::lgamma(static_cast<double>(d)))};
}

MomentBounds moment_bounds(double n, double c_tilde, int d) {
  check_dimension(d);
  if (!(c_tilde > 0.0)) {
    throw_invalid("moment_bounds requires c > 0");
  }
  const IteratedLogs l = iterated_logs(n);
  const double e = (d - 1.0 - c_tilde) * static_cast<double>(std::log(l.l1));
  const double lgd = std::lgamma(static_cast<double>(d));
  return {std::exp(e - lgd), std::exp(lgd - e)};
}

double moment_boundary(double n, double c_tilde) {
  if (!(c_tilde > 0.0)) {
    throw_invalid("moment boundary requires c > 0");
  }
  const IteratedLogs l = iterated_logs(n);
  return static_cast<double>(l.l1 - l.l3 - std::log(static_cast<long double>(c_tilde)));
}

namespace {

// Integral of g over the unit simplex {u > 0, sum u = 1} in the first d-1
// coordinates (Lebesgue measure, total volume 1/(d-1)!).
double simplex_integral(const std::function<double(std::span<const double>)>& g, int d) {
  std::vector<double> u(static_cast<std::size_t>(d));
  QuadratureOptions o;
  o.abs_tol = 1e-12;
  o.rel_tol = 1e-11;
  o.panels = 4;
  std::function<double(int, double)> level = [&](int j, double remaining) -> double {
    if (j == d - 1) {
      u[static_cast<std::size_t>(j)] = remaining;
      return g(u);
    }
    return integrate(
        [&, j, remaining](double x) {
          u[static_cast<std::size_t>(j)] = x;
          return level(j + 1, remaining - x);
        },
        0.0, remaining, o);
  };
  return level(0, 1.0);
}

}  // namespace

SmallestMaxNormLaw::SmallestMaxNormLaw(int d, double r_max, double step) : d_(d), step_(step) {
  check_dimension(d);
  if (!(step > 0.0) || !(r_max > step)) {
    throw_invalid("SmallestMaxNormLaw requires 0 < step < r_max");
  }
  const auto k = static_cast<std::size_t>(std::ceil(r_max / step));
  dens_.resize(k + 1);
  cum_.resize(k + 1);
  dens_[0] = radial_density(0.0);
  cum_[0] = 0.0;
  CompensatedSum acc;
  for (std::size_t i = 1; i <= k; ++i) {
    const double r0 = step * static_cast<double>(i - 1);
    dens_[i] = radial_density(r0 + step);
    const double mid = radial_density(r0 + 0.5 * step);
    acc.add(step / 6.0 * (dens_[i - 1] + 4.0 * mid + dens_[i]));
    cum_[i] = acc.value();
  }
}

double SmallestMaxNormLaw::radial_density(double r) const {
  if (!(r > 0.0)) {
    return 0.0;
  }
  const int d = d_;
  std::vector<double> s(static_cast<std::size_t>(d));
  const double inner = simplex_integral(
      [&](std::span<const double> u) {
        for (std::size_t j = 0; j < s.size(); ++j) {
          s[j] = r * u[j];
        }
        return smallest_max_density_n2(s);
      },
      d);
  return std::pow(r, d - 1) * inner;
}

double SmallestMaxNormLaw::cdf(double r) const noexcept {
  if (!(r > 0.0)) {
    return 0.0;
  }
  const double pos = r / step_;
  const auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= cum_.size()) {
    return std::min(1.0, cum_.back());
  }
  // Cubic Hermite on (cum, dens) at the two bracketing nodes.
  const double t = pos - static_cast<double>(i);
  const double h = step_;
  const double t2 = t * t, t3 = t2 * t;
  const double v = (2 * t3 - 3 * t2 + 1) * cum_[i] + (t3 - 2 * t2 + t) * h * dens_[i] +
                   (-2 * t3 + 3 * t2) * cum_[i + 1] + (t3 - t2) * h * dens_[i + 1];
  return std::clamp(v, 0.0, 1.0);
}

}  // namespace recordlab
