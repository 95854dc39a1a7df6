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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/poisson.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <doctest.h>

#include "oracles.hpp"
#include "recordlab/analytics.hpp"
#include "recordlab/distances.hpp"
#include "recordlab/error.hpp"
#include "recordlab/poisson_lab.hpp"

using recordlab::Error;
using recordlab::RngStream;
using recordlab::ShellProcessSample;

namespace {

double truncated_gamma_cdf(int d, double lo, double hi, double r) {
  const double qlo = boost::math::gamma_q(static_cast<double>(d), lo);
  const double qhi = std::isinf(hi) ? 0.0 : boost::math::gamma_q(static_cast<double>(d), hi);
  if (r <= lo) return 0.0;
  if (r >= hi) return 1.0;
  return (qlo - boost::math::gamma_q(static_cast<double>(d), r)) / (qlo - qhi);
}

ShellProcessSample make_sample(int d, double lo, double hi, const std::vector<std::vector<double>>& pts) {
  ShellProcessSample s;
  s.d = d;
  s.lo = lo;
  s.hi = hi;
  s.n_rate = 1.0;
  for (const auto& p : pts) {
    double norm = 0.0;
    for (double x : p) {
      s.coords.push_back(x);
      norm += x;
    }
    s.norms.push_back(norm);
  }
  return s;
}

}  // namespace

TEST_CASE("shell sampler argument handling") {
  RngStream rng(1, 0);
  CHECK(recordlab::sample_shell_process(100.0, 2.0, 2.0, 2, rng).size() == 0);
  CHECK_THROWS_AS(recordlab::sample_shell_process(100.0, 3.0, 2.0, 2, rng), Error);
  CHECK_THROWS_AS(recordlab::sample_shell_process(100.0, -1.0, 2.0, 2, rng), Error);
  const auto s = recordlab::sample_shell_process(1000.0, 1.0, INFINITY, 3, rng);
  CHECK(s.size() > 0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    double sum = 0.0;
    for (double x : s.point(i)) {
      CHECK(x >= 0.0);
      sum += x;
    }
    CHECK(sum == doctest::Approx(s.norms[i]).epsilon(1e-12));
    CHECK(s.norms[i] > 1.0);
  }
  CHECK(s.points().size() == s.size());
}

TEST_CASE("shell count is Poisson with the shell mass") {
  const double n = 50.0, lo = 1.0, hi = 4.0;
  const int d = 2;
  const double mean = n * (recordlab::gamma_tail(d, lo) - recordlab::gamma_tail(d, hi));
  const int reps = 100000;
  std::vector<std::uint64_t> counts(reps);
  std::vector<double> radii;
  RngStream rng(2, 0);
  for (auto& c : counts) {
    const auto s = recordlab::sample_shell_process(n, lo, hi, d, rng);
    c = s.size();
    if (radii.size() < 200000) radii.insert(radii.end(), s.norms.begin(), s.norms.end());
    for (double r : s.norms) {
      CHECK(r > lo);
      CHECK(r <= hi);
    }
  }
  double s1 = 0.0, s2 = 0.0;
  for (auto c : counts) {
    s1 += static_cast<double>(c);
    s2 += static_cast<double>(c) * static_cast<double>(c);
  }
  const double m = s1 / reps;
  CHECK(std::fabs(m - mean) <= 3.0 * std::sqrt((s2 / reps - m * m) / reps));

  // Chi-square on bins with expected count >= 5, tails pooled.
  boost::math::poisson_distribution<double> po(mean);
  std::vector<double> obs, exp;
  int k0 = 0;
  while (reps * boost::math::cdf(po, k0) < 5.0) ++k0;
  int k1 = k0;
  while (reps * boost::math::cdf(boost::math::complement(po, k1)) >= 5.0) ++k1;
  for (int k = k0; k <= k1; ++k) {
    exp.push_back(k == k0   ? reps * boost::math::cdf(po, k)
                  : k == k1 ? reps * boost::math::cdf(boost::math::complement(po, k - 1))
                            : reps * boost::math::pdf(po, k));
    obs.push_back(static_cast<double>(std::count_if(counts.begin(), counts.end(), [&](auto c) {
      const auto ci = static_cast<int>(c);
      return k == k0 ? ci <= k : k == k1 ? ci >= k : ci == k;
    })));
  }
  double chi = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) chi += (obs[i] - exp[i]) * (obs[i] - exp[i]) / exp[i];
  boost::math::chi_squared_distribution<double> cs(static_cast<double>(obs.size() - 1));
  CHECK(chi < boost::math::quantile(cs, 1.0 - 1e-3));

  // Radii: KS against the truncated Gamma law.
  const auto ks = recordlab::testing::ks_continuous(
      radii, [&](double r) { return truncated_gamma_cdf(d, lo, hi, r); });
  CHECK(recordlab::ks_pvalue(ks, static_cast<double>(radii.size())) > 1e-3);
}

TEST_CASE("truncated gamma quantile") {
  for (int d : {1, 2, 3, 5}) {
    for (auto [lo, hi] : {std::pair{0.0, 3.0}, std::pair{2.0, double(INFINITY)}, std::pair{30.0, 31.0},
                          std::pair{225.0, 260.0}, std::pair{5.0, 5.001}}) {
      double prev = lo;
      for (double u : {1e-12, 1e-6, 0.01, 0.3, 0.5, 0.9, 0.999999, 1.0 - 1e-12}) {
        const double r = recordlab::truncated_gamma_quantile(d, lo, hi, u);
        CHECK(r > lo);
        CHECK(r <= hi);
        CHECK(r >= prev);
        prev = r;
        if (lo < 200.0) {
          CHECK(truncated_gamma_cdf(d, lo, hi, r) == doctest::Approx(u).epsilon(1e-8));
        }
      }
    }
  }
  // Far tail: compare on the log scale where Boost's regularized value underflows.
  const double lo = 225.0, hi = 260.0;
  const double r = recordlab::truncated_gamma_quantile(2, lo, hi, 0.5);
  // For d = 2 the truncated law is (1 + r) e^{-r} normalized; the median solves
  // (1 + r) e^{lo - r} = ((1 + lo) + (1 + hi) e^{lo - hi}) / 2.
  const double rhs = 0.5 * ((1.0 + lo) + (1.0 + hi) * std::exp(lo - hi));
  CHECK((1.0 + r) * std::exp(lo - r) == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("window maxima counting") {
  const auto empty = make_sample(2, 0.0, 10.0, {});
  CHECK(recordlab::count_window_maxima(empty, 0.0, 10.0) == 0);
  const auto single = make_sample(2, 0.0, 10.0, {{1.0, 2.0}});
  CHECK(recordlab::count_window_maxima(single, 2.0, 4.0) == 1);
  CHECK(recordlab::count_window_maxima(single, 3.0, 4.0) == 0);
  const auto s = make_sample(2, 0.0, 10.0, {{1.0, 3.0}, {2.0, 2.0}, {3.0, 1.0}, {1.0, 1.0}, {0.5, 0.4}});
  CHECK(recordlab::count_window_maxima(s, 3.0, 4.0) == 3);
  CHECK(recordlab::count_window_maxima(s, 0.0, 10.0) == 3);
  CHECK(recordlab::count_window_maxima(s, 0.0, 3.0) == 0);
  // Equal coordinates do not dominate.
  const auto tie = make_sample(2, 0.0, 10.0, {{1.0, 1.0}, {1.0, 1.0}});
  CHECK(recordlab::count_window_maxima(tie, 0.0, 10.0) == 2);
  CHECK_THROWS_AS(recordlab::count_window_maxima(s, -1.0, 4.0), Error);
  CHECK_THROWS_AS(recordlab::count_window_maxima(s, 4.0, 4.0), Error);
  CHECK_THROWS_AS(recordlab::count_window_maxima(s, 1.0, 11.0), Error);
}

TEST_CASE("window maxima match brute force") {
  RngStream rng(3, 0);
  for (int d : {2, 3, 4}) {
    for (int rep = 0; rep < 50; ++rep) {
      const auto s = recordlab::sample_shell_process(2000.0, 2.0, 14.0, d, rng);
      const auto front = recordlab::testing::brute_force_front(s.points());
      for (auto [wl, wh] : {std::pair{2.0, 14.0}, std::pair{5.0, 9.0}, std::pair{8.0, 8.5}}) {
        std::uint64_t want = 0;
        for (const auto& p : front) {
          const double r = recordlab::l1_norm(p);
          want += (r > wl && r <= wh) ? 1 : 0;
        }
        CHECK(recordlab::count_window_maxima(s, wl, wh) == want);
      }
    }
  }
}

TEST_CASE("probability of a point beyond the upper boundary") {
  for (double n : {1e6, 1e8}) {
    const double asym = 1.0 / std::log(n);
    const double r = recordlab::prob_En(n, 2) / asym;
    CHECK(r > 1.0 / 1.5);
    CHECK(r < 1.5);
  }
  double prev = 1.0;
  for (double n = 1e3; n < 1e30; n *= 10.0) {
    const double v = recordlab::prob_En(n, 2);
    CHECK(v < prev);
    prev = v;
  }
  const double n = 1e4;
  const int d = 2;
  const double bu = recordlab::b_upper_of(n, d);
  RngStream rng(4, 0);
  const int reps = 100000;
  int hits = 0;
  for (int i = 0; i < reps; ++i) {
    const auto s = recordlab::sample_shell_process(n, bu - 3.0, INFINITY, d, rng);
    hits += recordlab::count_window_maxima(s, bu, INFINITY) > 0 ? 1 : 0;
  }
  const double p = static_cast<double>(hits) / reps;
  const double pe = recordlab::prob_En(n, d);
  CHECK(std::fabs(p - pe) <= 3.0 * std::sqrt(pe * (1 - pe) / reps));
}

TEST_CASE("smallest point of the thinned process") {
  const double n = 1e6;
  const int d = 2;
  const double lo = recordlab::b_lower_of(n, d);
  const double hi = recordlab::b_star_of(n, 0.0, d);
  const double mass = recordlab::nu_mass(n, lo, hi, d);
  RngStream rng(5, 0);
  const int reps = 100000;
  int nonempty = 0;
  for (int i = 0; i < reps; ++i) {
    const auto p = recordlab::sample_smallest_nu_point(n, d, lo, hi, rng);
    if (p) {
      ++nonempty;
      CHECK(p->norm > lo);
      CHECK(p->norm <= hi);
      CHECK(p->coords.size() == 2);
      CHECK(p->coords[0] + p->coords[1] == doctest::Approx(p->norm).epsilon(1e-12));
    }
  }
  const double want = -std::expm1(-mass);
  const double f = static_cast<double>(nonempty) / reps;
  CHECK(std::fabs(f - want) <= 3.0 * std::sqrt(want * (1 - want) / reps));
}

TEST_CASE("dispersion gap") {
  const std::vector<std::uint64_t> flat{1, 1, 1, 1};
  CHECK(recordlab::dispersion_gap(flat).gap == doctest::Approx(-1.0));
  const std::vector<std::uint64_t> two{0, 2};
  const auto g = recordlab::dispersion_gap(two);
  CHECK(g.mean == doctest::Approx(1.0));
  CHECK(g.variance == doctest::Approx(2.0));
  CHECK(g.gap == doctest::Approx(1.0));
  CHECK_THROWS_AS(recordlab::dispersion_gap(std::vector<std::uint64_t>{3}), Error);

  // Pure Poisson control.
  RngStream rng(6, 0);
  for (double lo : {8.0, 6.0, 3.0}) {
    std::vector<std::uint64_t> c(200000);
    for (auto& x : c) x = recordlab::sample_shell_process(100.0, lo, INFINITY, 2, rng).size();
    const auto e = recordlab::dispersion_gap(c);
    CHECK(std::fabs(e.gap) <= 4.0 * e.se);
  }
  CHECK_THROWS_AS(recordlab::variance_mean_gap(1e6, 0.0, 2, 100, rng), Error);
  CHECK_THROWS_AS(recordlab::variance_mean_gap(1e6, 3.0, 2, 10000, rng), Error);
}

TEST_CASE("superposition of shells") {
  const double n = 1e4;
  const int d = 2;
  const auto sh = recordlab::shell(n, 0.0, d);
  const double mid = 0.5 * (sh.b_lower + sh.b_upper);
  const int reps = 20000;
  std::vector<std::uint64_t> direct(reps), merged(reps);
  RngStream r1(7, 0), r2(7, 1);
  for (int i = 0; i < reps; ++i) {
    direct[i] = recordlab::count_window_maxima(
        recordlab::sample_shell_process(n, sh.b_lower, sh.b_upper, d, r1), sh.b_lower, sh.b);
    auto lo = recordlab::sample_shell_process(n, sh.b_lower, mid, d, r2);
    const auto hi = recordlab::sample_shell_process(n, mid, sh.b_upper, d, r2);
    lo.coords.insert(lo.coords.end(), hi.coords.begin(), hi.coords.end());
    lo.norms.insert(lo.norms.end(), hi.norms.begin(), hi.norms.end());
    lo.hi = sh.b_upper;
    merged[i] = recordlab::count_window_maxima(lo, sh.b_lower, sh.b);
  }
  RngStream rb(7, 2);
  const auto tv = recordlab::empirical_tv(direct, merged, 500, 0.99, rb);
  CHECK(tv.estimate <= tv.band);
}

TEST_CASE("conditioned and unconditioned counts") {
  const double n = 1e4;
  const int d = 3;
  const auto br = recordlab::expected_Nbar_bracket(n, 0.0, d);
  RngStream rng(8, 0);
  const int reps = 20000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < reps; ++i) {
    const double v = static_cast<double>(recordlab::sample_Nbar(n, 0.0, d, rng));
    s += v;
    s2 += v * v;
  }
  const double m = s / reps;
  const double se = std::sqrt((s2 / reps - m * m) / reps);
  CHECK(br.contains(m, 3.0 * se));

  // N_n and the conditioned count differ only on the rare event of a point
  // beyond the upper boundary.
  std::vector<std::uint64_t> a(reps), b(reps);
  RngStream r1(8, 1), r2(8, 2);
  for (int i = 0; i < reps; ++i) {
    a[i] = recordlab::sample_N(n, 0.0, d, r1);
    b[i] = recordlab::sample_Nbar(n, 0.0, d, r2);
  }
  RngStream rb(8, 3);
  const auto tv = recordlab::empirical_tv(a, b, 500, 0.99, rb);
  CHECK(tv.estimate <= recordlab::prob_En(n, d) + tv.band);
  CHECK_THROWS_AS(recordlab::sample_N(n, 5.0, d, rng), Error);
  CHECK(recordlab::sample_Nbar(n, 0.0, d, rng, recordlab::OmegaRule{}) >= 0);
}
