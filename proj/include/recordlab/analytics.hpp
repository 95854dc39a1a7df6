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
#include <vector>

#include "recordlab/boundaries.hpp"
#include "recordlab/quadrature.hpp"
#include "recordlab/rng.hpp"

namespace recordlab {

/// Closed interval enclosure [lo, hi] with lo <= hi.
class Bracket {
 public:
  Bracket(double lo, double hi);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double mid() const noexcept { return 0.5 * (lo_ + hi_); }
  double width() const noexcept { return hi_ - lo_; }
  bool contains(double v, double margin = 0.0) const noexcept {
    return v >= lo_ - margin && v <= hi_ + margin;
  }

 private:
  double lo_;
  double hi_;
};

/// P(Gamma(d, 1) > x) = P(Poisson(x) < d) = e^{-x} sum_{j<d} x^j / j!.
double gamma_tail(int d, double x);

/// E rho_n(b) = n / (d-1)! * int_0^b y^{d-1} e^{-y} (1 - e^{-y})^{n-1} dy.
/// n is real so that analytic epochs beyond 2^64 are allowed.
double expected_rho(double n, double b, int d, const QuadratureOptions& opts = {});

/// Same integrand over (lo, hi].
double expected_rho_between(double n, double lo, double hi, int d,
                            const QuadratureOptions& opts = {});

/// E[rho_n(b_n(a)) - rho_n(b*_n(a))]; requires |a| <= a_n.
double delta_mean(double n, double a, int d);

/// int_x^inf (ln z)^j e^{-z} dz for x > 1.
double J_j(int j, double x);

/// Enclosure of the mean of the conditioned shell count: the integrand
/// exp(-(1 - u) n e^{-y}) is evaluated with u = 0 (lower end) and with u at
/// its largest value P(Gamma(d,1) > b_upper - b) (upper end).
Bracket expected_Nbar_bracket(double n, double a, int d, const OmegaRule& rule = {});

/// Exact mean of the conditioned shell count, using
/// u(y) = P(Gamma(d,1) > b_upper - y) pointwise. Lies inside the bracket.
double expected_Nbar_exact(double n, double a, int d, const OmegaRule& rule = {});

/// n int_lo^hi y^{d-1}/(d-1)! e^{-y} exp(-n e^{-y}) dy: total intensity of
/// the thinned process on the shell lo < |x| <= hi.
double nu_mass(double n, double lo, double hi, int d);

/// Fraction of the Poissonized intensity beyond the lower boundary:
/// P(Gamma(d,1) > b_lower).
double p_n(double n, int d, const OmegaRule& rule = {});

struct QnResult {
  double bound;     // (2^d - 2) eps^{d-1}
  double estimate;  // Monte-Carlo P(sum_j max(U_j, V_j) < 1 + eps)
  double se;
};

/// U, V independent uniform on the simplex. Requires eps > 0, trials >= 1e4.
QnResult qn_bound_and_estimate(int d, double eps, std::uint64_t trials, RngStream& rng);

struct McEstimate {
  double estimate;
  double se;
};

/// Importance-sampled double shell integral J_n in the (s, t, u, v)
/// coordinates: s, t from the Gumbel kernel e^{-s} exp(-e^{-s}) restricted
/// to the shell, u, v uniform simplex directions, rejected when
/// sum_j max(u_j (ln n + s), v_j (ln n + t)) >= b_upper.
McEstimate chen_stein_Jn(double n, double a, int d, std::uint64_t trials, RngStream& rng,
                         const OmegaRule& rule = {});

/// Upper-bound chain for J_n:
/// b_n^{2(d-1)} [(ln n)^{-c_n} - (ln n)^{-omega_n}]^2 * vol * q_bound,
/// where vol = 1/((d-1)!)^2 is the simplex-pair volume and q_bound is the
/// (2^d - 2) eps^{d-1} bound on the constrained direction probability,
/// evaluated at eps = b_upper / b_lower - 1 (the constraint relaxation
/// valid for every pair of radii in the shell).
double jn_upper_chain(double n, double a, int d, const OmegaRule& rule = {});

struct ErhoLowerResult {
  double value;    // E rho_n(b_lower) by quadrature
  double leading;  // (ln n)^{d-1-omega_n} / (d-1)!
};

ErhoLowerResult erho_blower_bound(double n, int d, const OmegaRule& rule = {});

struct MomentBounds {
  double upper_leq;  // (ln n)^{d-1-c} / (d-1)!
  double upper_geq;  // (d-1)! (ln n)^{-(d-1-c)}
};

/// Leading terms of the moment-method bounds at b~ = ln n - L3 n - ln c.
MomentBounds moment_bounds(double n, double c_tilde, int d);

/// b~ = ln n - L3 n - ln c.
double moment_boundary(double n, double c_tilde);

/// Law of the norm of the minimum-norm maximum for a sample of size two,
/// obtained by integrating smallest_max_density_n2 over simplex slices and
/// tabulating the radial distribution function.
class SmallestMaxNormLaw {
 public:
  explicit SmallestMaxNormLaw(int d, double r_max = 45.0, double step = 0.02);

  int dim() const noexcept { return d_; }
  /// Radial density: r^{d-1} times the integral of the density over the
  /// unit simplex scaled by r.
  double radial_density(double r) const;
  double cdf(double r) const noexcept;
  /// Tabulated total mass (should be 1).
  double total_mass() const noexcept { return cum_.back(); }

 private:
  int d_;
  double step_;
  std::vector<double> dens_;
  std::vector<double> cum_;
};

}  // namespace recordlab
