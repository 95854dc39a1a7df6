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

#include <cmath>
#include <vector>

#include <boost/math/distributions/poisson.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <doctest.h>

#include "recordlab/analytics.hpp"
#include "recordlab/error.hpp"
#include "recordlab/pareto_front.hpp"
#include "recordlab/quadrature.hpp"

using recordlab::Error;
using recordlab::OmegaRule;
using recordlab::RngStream;

namespace {

template <typename F>
double gk(F f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14);
}

double harmonic(int n) {
  double h = 0.0;
  for (int k = 1; k <= n; ++k) h += 1.0 / k;
  return h;
}

}  // namespace

TEST_CASE("adaptive quadrature on known integrals") {
  CHECK(recordlab::integrate([](double x) { return std::sin(x); }, 0.0, M_PI) ==
        doctest::Approx(2.0).epsilon(1e-11));
  CHECK(recordlab::integrate([](double x) { return std::exp(-x); }, 0.0, 40.0) ==
        doctest::Approx(1.0 - std::exp(-40.0)).epsilon(1e-11));
  CHECK(recordlab::integrate([](double x) { return x * x * x; }, -1.0, 2.0) ==
        doctest::Approx(3.75).epsilon(1e-13));
  CHECK(recordlab::integrate([](double) { return 1.0; }, 3.0, 3.0) == 0.0);
  recordlab::CompensatedSum s;
  s.add(1.0);
  for (int i = 0; i < 1000; ++i) s.add(1e-16);
  s.add(-1.0);
  CHECK(s.value() == doctest::Approx(1e-13).epsilon(1e-9));
}

TEST_CASE("gamma tail examples and oracles") {
  using recordlab::gamma_tail;
  CHECK(gamma_tail(1, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(gamma_tail(2, 1.0) == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-15));
  const double quad = gk([](double y) { return y * y / 2.0 * std::exp(-y); }, 10.0, INFINITY);
  CHECK(std::fabs(gamma_tail(3, 10.0) - quad) <= 1e-12);
  CHECK(gamma_tail(3, 0.0) == 1.0);
  CHECK(gamma_tail(3, INFINITY) == 0.0);
  CHECK(gamma_tail(2, 700.0) > 0.0);
  CHECK(gamma_tail(2, 700.0) == doctest::Approx(boost::math::gamma_q(2.0, 700.0)).epsilon(1e-12));
  CHECK(gamma_tail(2, 800.0) == 0.0);
  CHECK_THROWS_AS(gamma_tail(2, -1.0), Error);
  CHECK_THROWS_AS(gamma_tail(0, 1.0), Error);
  for (int d = 1; d <= 6; ++d) {
    for (int k = 0; k < 100; ++k) {
      const double x = 0.05 + 0.4 * k;
      const double v = gamma_tail(d, x);
      CHECK(std::fabs(v - boost::math::gamma_q(static_cast<double>(d), x)) <= 1e-12);
      boost::math::poisson_distribution<double> po(x);
      CHECK(std::fabs(v - boost::math::cdf(po, d - 1.0)) <= 1e-12);
      CHECK(std::fabs(v + boost::math::cdf(boost::math::complement(po, d - 1.0)) - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("expected rho identities") {
  using recordlab::expected_rho;
  for (int d : {2, 3, 4}) {
    for (double b : {0.5, 2.0, 7.0}) {
      CHECK(std::fabs(expected_rho(1, b, d) - (1.0 - recordlab::gamma_tail(d, b))) < 1e-11);
    }
  }
  CHECK(expected_rho(3, INFINITY, 2) == doctest::Approx(11.0 / 6.0).epsilon(1e-10));
  for (int n = 1; n <= 50; ++n) {
    CHECK(std::fabs(expected_rho(n, INFINITY, 2) - harmonic(n)) <= 1e-8);
  }
  CHECK(expected_rho(100, 0.0, 2) == 0.0);
  CHECK(expected_rho(100, -3.0, 2) == 0.0);
}

TEST_CASE("expected rho against direct quadrature of the original integrand") {
  for (int d : {2, 3}) {
    for (double n : {10.0, 1000.0}) {
      for (double b : {2.0, 5.0, 9.0}) {
        const double lg = std::lgamma(static_cast<double>(d));
        const double ref = gk(
            [&](double y) {
              return n * std::exp((d - 1) * std::log(y) - y - lg) *
                     std::pow(1.0 - std::exp(-y), n - 1.0);
            },
            0.0, b);
        CHECK(recordlab::expected_rho(n, b, d) == doctest::Approx(ref).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("expected rho monotonicity and self-consistency") {
  double prev = 0.0;
  for (double b = 0.0; b < 40.0; b += 0.25) {
    const double v = recordlab::expected_rho(1e6, b, 3);
    CHECK(v >= prev - 1e-15);
    prev = v;
  }
  // For fixed b the count eventually falls as n grows; far below ln n the
  // integrand is truncated to exactly zero.
  double last = recordlab::expected_rho(1e4, 8.0, 2);
  for (double n : {1e5, 1e6, 1e7}) {
    const double v = recordlab::expected_rho(n, 8.0, 2);
    CHECK((v < last || v == 0.0));
    last = v;
  }
  CHECK(last == 0.0);
  recordlab::QuadratureOptions fine;
  fine.max_depth = 80;
  fine.panels = 64;
  for (double n : {1e3, 1e8, 1e10}) {
    const double b = recordlab::b_star_of(n, 0.0, 2);
    const double base = recordlab::expected_rho(n, b, 2);
    CHECK(std::fabs(recordlab::expected_rho(n, b, 2, fine) - base) <= 1e-9 * base);
  }
}

TEST_CASE("expected rho matches simulation at the centring boundary") {
  const double n = 1e6;
  const double b = recordlab::b_star_of(n, 0.0, 2);
  const int trials = 10000;
  double s = 0.0, s2 = 0.0;
  for (int t = 0; t < trials; ++t) {
    RngStream r(101, static_cast<std::uint64_t>(t));
    const double v = static_cast<double>(rho(recordlab::simulate_front_record_skip_2d(1000000, r), b));
    s += v;
    s2 += v * v;
  }
  const double m = s / trials;
  const double se = std::sqrt((s2 / trials - m * m) / trials);
  CHECK(std::fabs(m - recordlab::expected_rho(n, b, 2)) <= 3.0 * se);
}

TEST_CASE("delta mean") {
  using recordlab::delta_mean;
  CHECK(delta_mean(1e8, 0.0, 2) == 0.0);
  const double n = 1e8;
  const double an = recordlab::a_n_of(n, 2);
  const auto l = recordlab::iterated_logs(n);
  const double scale = 1.0 / 8.0 * static_cast<double>(l.l3) / std::sqrt(static_cast<double>(l.l2));
  const double ratio = delta_mean(n, an, 2) / scale;
  CHECK(ratio > 1.0 / 3.0);
  CHECK(ratio < 3.0);
  double prev = 0.0;
  for (int k = 1; k <= 10; ++k) {
    const double v = delta_mean(n, an * k / 10.0, 2);
    CHECK(v >= prev);
    CHECK(delta_mean(n, -an * k / 10.0, 2) >= 0.0);
    prev = v;
  }
  CHECK_THROWS_AS(delta_mean(n, 1.01 * an, 2), Error);
}

TEST_CASE("J_j integrals") {
  using recordlab::J_j;
  for (double x : {1.5, 3.0, 20.0}) {
    CHECK(J_j(0, x) == doctest::Approx(std::exp(-x)).epsilon(1e-12));
  }
  CHECK(J_j(1, 100.0) / (std::log(100.0) * std::exp(-100.0)) == doctest::Approx(1.0).epsilon(0.05));
  // Importance sampling: z = x + Exp(1).
  RngStream rng(7, 0);
  const int m = 10000000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < m; ++i) {
    const double v = std::pow(std::log(50.0 + rng.exponential()), 2);
    s += v;
    s2 += v * v;
  }
  const double mean = s / m;
  const double se = std::sqrt((s2 / m - mean * mean) / m) * std::exp(-50.0);
  CHECK(std::fabs(J_j(2, 50.0) - mean * std::exp(-50.0)) <= 3.0 * se);
  CHECK_THROWS_AS(J_j(1, 1.0), Error);
  CHECK_THROWS_AS(J_j(-1, 3.0), Error);
}

TEST_CASE("bracket type") {
  recordlab::Bracket b(0.2, 0.5);
  CHECK(b.mid() == doctest::Approx(0.35));
  CHECK(b.width() == doctest::Approx(0.3));
  CHECK(b.contains(0.2));
  CHECK_FALSE(b.contains(0.55));
  CHECK(b.contains(0.55, 0.06));
  CHECK_THROWS_AS(recordlab::Bracket(1.0, 0.0), Error);
  CHECK_THROWS_AS(recordlab::Bracket(0.0, INFINITY), Error);
}

TEST_CASE("conditioned mean bracket") {
  for (int d : {2, 3}) {
    double prev_rel = INFINITY;
    for (double n : {1e4, 1e6, 1e8, 1e12, 1e20}) {
      const double an = recordlab::a_n_of(n, d);
      for (double a : {-an, 0.0, an}) {
        const auto br = recordlab::expected_Nbar_bracket(n, a, d);
        const double exact = recordlab::expected_Nbar_exact(n, a, d);
        CHECK(br.lo() <= br.hi());
        CHECK(br.contains(exact, 1e-12));
      }
      const auto br = recordlab::expected_Nbar_bracket(n, 0.0, d);
      const double rel = br.width() / br.mid();
      CHECK(rel < prev_rel);
      prev_rel = rel;
    }
  }
  const double n = 1e6;
  const auto low = recordlab::expected_Nbar_bracket(n, -recordlab::a_n_of(n, 2), 2);
  CHECK(low.mid() < recordlab::lambda_of(0.0, 2));
  CHECK_THROWS_AS(recordlab::expected_Nbar_bracket(n, 2.0, 2), Error);
}

TEST_CASE("nu mass and the lower-boundary fraction") {
  const double n = 1e6;
  const double bl = recordlab::b_lower_of(n, 2);
  CHECK(recordlab::nu_mass(n, bl, bl, 2) == 0.0);
  // Closed form: n int f(y) exp(-n e^-y) dy over y for d = 2 has no elementary
  // antiderivative; compare with Gauss-Kronrod.
  const double ref =
      gk([&](double y) { return n * y * std::exp(-y) * std::exp(-n * std::exp(-y)); }, bl, 30.0);
  CHECK(recordlab::nu_mass(n, bl, 30.0, 2) == doctest::Approx(ref).epsilon(1e-9));

  for (int d : {2, 3}) {
    for (double m : {1e4, 1e6}) {
      CHECK(std::fabs(recordlab::p_n(m, d) -
                      recordlab::gamma_tail(d, recordlab::b_lower_of(m, d))) <= 1e-15);
    }
  }
  const auto l = recordlab::iterated_logs(n);
  const double asym = static_cast<double>(l.l1) / n * static_cast<double>(l.l2) *
                      recordlab::omega_n(n, 2, OmegaRule{});
  const double r = recordlab::p_n(n, 2) / asym;
  CHECK(r > 1.0 / 1.2);
  CHECK(r < 1.2);
  double prev = 1.0;
  for (double m : {1e3, 1e4, 1e5, 1e6, 1e8, 1e10}) {
    const double v = recordlab::p_n(m, 2);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("direction constraint probability") {
  RngStream rng(13, 0);
  const auto big = recordlab::qn_bound_and_estimate(2, 1.0, 100000, rng);
  CHECK(big.estimate > 0.999);
  CHECK(big.bound == 2.0);
  const auto small = recordlab::qn_bound_and_estimate(2, 0.01, 10000000, rng);
  CHECK(small.bound == doctest::Approx(0.02));
  CHECK(small.estimate <= small.bound + 3.0 * small.se);
  // For d = 2 the probability is exactly 2 eps - eps^2.
  CHECK(std::fabs(small.estimate - (0.02 - 1e-4)) <= 4.0 * small.se);
  const auto tiny = recordlab::qn_bound_and_estimate(3, 1e-4, 100000, rng);
  CHECK(tiny.estimate <= 1e-4);
  const auto q3 = recordlab::qn_bound_and_estimate(3, 0.05, 1000000, rng);
  CHECK(q3.estimate <= q3.bound + 3.0 * q3.se);
  // Beyond d = 3 the small-eps constant is binom(2d-2, d-1) > 2^d - 2, so the
  // bound is only checked at the shell ratios that actually occur.
  for (int d : {2, 3, 4}) {
    for (double n : {1e4, 1e6, 1e8}) {
      const auto s = recordlab::shell(n, 0.0, d);
      const auto q = recordlab::qn_bound_and_estimate(d, s.epsilon_n, 100000, rng);
      CHECK(q.estimate <= q.bound + 3.0 * q.se);
    }
  }
  const auto q4 = recordlab::qn_bound_and_estimate(4, 0.05, 1000000, rng);
  CHECK(q4.estimate > q4.bound);
  CHECK_THROWS_AS(recordlab::qn_bound_and_estimate(2, 0.0, 100000, rng), Error);
  CHECK_THROWS_AS(recordlab::qn_bound_and_estimate(2, 0.1, 100, rng), Error);
}

TEST_CASE("double shell integral") {
  for (int d : {2, 3}) {
    for (double n : {1e4, 1e6, 1e8, 1e10}) {
      const double an = recordlab::a_n_of(n, d);
      RngStream r1(17, 0), r2(17, 1);
      const auto lo = recordlab::chen_stein_Jn(n, -an, d, 200000, r1);
      const auto hi = recordlab::chen_stein_Jn(n, an, d, 200000, r2);
      CHECK(lo.estimate < hi.estimate);
      for (const auto& [a, est] : {std::pair{-an, lo}, std::pair{an, hi}}) {
        CHECK(est.estimate >= 0.0);
        CHECK(est.estimate <= recordlab::jn_upper_chain(n, a, d) + 3.0 * est.se);
      }
    }
  }
  RngStream r(1, 0);
  CHECK_THROWS_AS(recordlab::chen_stein_Jn(1e6, 5.0, 2, 1000, r), Error);
}

TEST_CASE("expected count below the lower boundary") {
  for (double n : {1e6, 1e8, 1e10}) {
    const auto e = recordlab::erho_blower_bound(n, 2);
    const double ratio = e.value / e.leading;
    CHECK(ratio >= 0.5);
    CHECK(ratio <= 2.0);
  }
  CHECK(recordlab::erho_blower_bound(1e8, 2).value < 1e-2);
  const double n = 1e5;
  const double bl = recordlab::b_lower_of(n, 2);
  const int trials = 100000;
  double hits = 0.0;
  for (int t = 0; t < trials; ++t) {
    RngStream r(19, static_cast<std::uint64_t>(t));
    hits += rho(recordlab::simulate_front_record_skip_2d(100000, r), bl) >= 1 ? 1.0 : 0.0;
  }
  const double p = hits / trials;
  CHECK(p <= recordlab::erho_blower_bound(n, 2).value + 3.0 * std::sqrt(p * (1 - p) / trials));
}

TEST_CASE("moment-method bounds") {
  for (int d : {2, 3, 4}) {
    const auto m = recordlab::moment_bounds(1e6, d - 1.0, d);
    const double f = std::tgamma(static_cast<double>(d));
    CHECK(m.upper_leq == doctest::Approx(1.0 / f).epsilon(1e-14));
    CHECK(m.upper_geq == doctest::Approx(f).epsilon(1e-14));
    double pl = INFINITY, pg = 0.0;
    for (double c = 0.25; c < 6.0; c += 0.25) {
      const auto b = recordlab::moment_bounds(1e6, c, d);
      CHECK(b.upper_leq < pl);
      CHECK(b.upper_geq > pg);
      pl = b.upper_leq;
      pg = b.upper_geq;
    }
  }
  CHECK_THROWS_AS(recordlab::moment_bounds(1e6, 0.0, 2), Error);

  const double n = 1e6;
  const double bt = recordlab::moment_boundary(n, 2.0);
  const int trials = 100000;
  double hits = 0.0;
  for (int t = 0; t < trials; ++t) {
    RngStream r(23, static_cast<std::uint64_t>(t));
    hits += record_stats(recordlab::simulate_front_record_skip_2d(1000000, r)).phi <= bt ? 1.0 : 0.0;
  }
  CHECK(hits / trials <= 1.5 * recordlab::moment_bounds(n, 2.0, 2).upper_leq);
}

TEST_CASE("two-point smallest-maximum norm law") {
  for (int d : {2, 3}) {
    const recordlab::SmallestMaxNormLaw law(d);
    CHECK(std::fabs(law.total_mass() - 1.0) <= 1e-6);
    CHECK(law.cdf(0.0) == 0.0);
    CHECK(law.cdf(1e3) <= 1.0);
    double prev = 0.0;
    for (double r = 0.0; r < 20.0; r += 0.013) {
      const double c = law.cdf(r);
      CHECK(c >= prev - 1e-15);
      prev = c;
    }
  }
  // Independent 2-d check: integrate the density over the triangle s1 + s2 <= r.
  const recordlab::SmallestMaxNormLaw law(2);
  for (double r : {0.7, 2.0, 4.5}) {
    const double ref = gk(
        [&](double x) {
          return gk([&](double y) {
            return recordlab::smallest_max_density_n2(std::vector<double>{x, y});
          }, 0.0, r - x);
        },
        0.0, r);
    CHECK(law.cdf(r) == doctest::Approx(ref).epsilon(1e-7));
  }
  const double total = gk(
      [&](double x) {
        return gk([&](double y) {
          return recordlab::smallest_max_density_n2(std::vector<double>{x, y});
        }, 0.0, INFINITY);
      },
      0.0, INFINITY);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}
