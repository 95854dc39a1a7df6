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

#include "recordlab/distances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "recordlab/error.hpp"
#include "recordlab/quadrature.hpp"

namespace recordlab {

namespace {

constexpr double kNormTol = 1e-12;
constexpr double kTruncation = 1e-12;

}  // namespace

DiscretePMF::DiscretePMF(std::vector<double> probs, double tail_mass)
    : probs_(std::move(probs)), tail_(tail_mass) {
  if (!(tail_ >= 0.0) || !std::isfinite(tail_)) {
    throw_invalid("pmf tail mass must be finite and nonnegative");
  }
  CompensatedSum s;
  for (double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw_invalid("pmf entries must be finite and nonnegative");
    }
    s.add(p);
  }
  s.add(tail_);
  if (std::fabs(s.value() - 1.0) > kNormTol) {
    throw_invalid("pmf is not normalized");
  }
}

double DiscretePMF::mean() const noexcept {
  CompensatedSum s;
  for (std::size_t k = 0; k < probs_.size(); ++k) {
    s.add(static_cast<double>(k) * probs_[k]);
  }
  return s.value();
}

namespace {

// Evaluates log-pmf values from k = 0 upward until the cumulative mass
// reaches 1 - kTruncation past the mode, or the support ends.
template <typename LogPmf>
DiscretePMF truncated_pmf(LogPmf log_pmf, double mode, double last) {
  std::vector<double> probs;
  CompensatedSum cum;
  for (double k = 0.0; k <= last; k += 1.0) {
    const double p = std::exp(log_pmf(k));
    probs.push_back(p);
    cum.add(p);
    if (k >= mode && cum.value() >= 1.0 - kTruncation) {
      break;
    }
  }
  return DiscretePMF(std::move(probs), std::max(0.0, 1.0 - cum.value()));
}

}  // namespace

DiscretePMF poisson_pmf(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw_invalid("poisson mean must be finite and nonnegative");
  }
  if (mean == 0.0) {
    return DiscretePMF({1.0});
  }
  const double lm = std::log(mean);
  return truncated_pmf([=](double k) { return -mean + k * lm - std::lgamma(k + 1.0); }, mean,
                       std::numeric_limits<double>::infinity());
}

DiscretePMF binomial_pmf(std::uint64_t n, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw_invalid("binomial p must lie in [0, 1]");
  }
  const auto nd = static_cast<double>(n);
  if (p == 0.0 || n == 0) {
    return DiscretePMF({1.0});
  }
  if (p == 1.0) {
    std::vector<double> probs(static_cast<std::size_t>(n) + 1, 0.0);
    probs.back() = 1.0;
    return DiscretePMF(std::move(probs));
  }
  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  const double lgn = std::lgamma(nd + 1.0);
  return truncated_pmf(
      [=](double k) {
        return lgn - std::lgamma(k + 1.0) - std::lgamma(nd - k + 1.0) + k * lp + (nd - k) * lq;
      },
      nd * p, nd);
}

double tv_discrete(const DiscretePMF& p, const DiscretePMF& q) {
  // Identical laws, including their unresolved tails, are at distance zero.
  if (p.tail_mass() == q.tail_mass() &&
      std::ranges::equal(p.probs(), q.probs())) {
    return 0.0;
  }
  const std::size_t m = std::max(p.support_size(), q.support_size());
  CompensatedSum s;
  for (std::size_t k = 0; k < m; ++k) {
    s.add(std::fabs(p.at(k) - q.at(k)));
  }
  s.add(p.tail_mass());
  s.add(q.tail_mass());
  return std::clamp(0.5 * s.value(), 0.0, 1.0);
}

double tv_binomial_poisson(std::uint64_t n, double p) {
  if (n < 1) {
    throw_invalid("tv_binomial_poisson requires n >= 1");
  }
  return tv_discrete(binomial_pmf(n, p), poisson_pmf(static_cast<double>(n) * p));
}

double tv_poisson_poisson(double l1, double l2) {
  if (!(l1 > 0.0) || !(l2 > 0.0)) {
    throw_invalid("poisson means must be positive");
  }
  return tv_discrete(poisson_pmf(l1), poisson_pmf(l2));
}

DiscretePMF empirical_pmf(std::span<const std::uint64_t> counts) {
  if (counts.empty()) {
    throw_invalid("empirical_pmf requires a nonempty sample");
  }
  const std::uint64_t top = *std::max_element(counts.begin(), counts.end());
  std::vector<std::uint64_t> hist(static_cast<std::size_t>(top) + 1, 0);
  for (std::uint64_t c : counts) {
    ++hist[static_cast<std::size_t>(c)];
  }
  const auto total = static_cast<double>(counts.size());
  std::vector<double> probs(hist.size());
  for (std::size_t k = 0; k < hist.size(); ++k) {
    probs[k] = static_cast<double>(hist[k]) / total;
  }
  return DiscretePMF(std::move(probs));
}

EmpiricalSample::EmpiricalSample(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (std::isnan(v)) {
      throw_invalid("empirical sample contains NaN");
    }
  }
  std::sort(values_.begin(), values_.end());
}

double EmpiricalSample::cdf(double x) const noexcept {
  if (values_.empty()) {
    return 0.0;
  }
  const auto it = std::upper_bound(values_.begin(), values_.end(), x);
  return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
}

double kolmogorov_distance(const EmpiricalSample& sample,
                           const std::function<double(double)>& cdf) {
  if (sample.empty()) {
    throw_invalid("kolmogorov_distance requires a nonempty sample");
  }
  const auto v = sample.values();
  const auto total = static_cast<double>(v.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < v.size()) {
    std::size_t j = i;
    while (j < v.size() && v[j] == v[i]) {
      ++j;
    }
    const double below = static_cast<double>(i) / total;
    const double at = static_cast<double>(j) / total;
    const double left = cdf(std::nextafter(v[i], -std::numeric_limits<double>::infinity()));
    d = std::max({d, std::fabs(left - below), std::fabs(cdf(v[i]) - at)});
    i = j;
  }
  return std::min(d, 1.0);
}

double kolmogorov_distance(const EmpiricalSample& a, const EmpiricalSample& b) {
  if (a.empty() || b.empty()) {
    throw_invalid("kolmogorov_distance requires nonempty samples");
  }
  const auto x = a.values();
  const auto y = b.values();
  const auto nx = static_cast<double>(x.size());
  const auto ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() || j < y.size()) {
    double t;
    if (j == y.size() || (i < x.size() && x[i] <= y[j])) {
      t = x[i];
    } else {
      t = y[j];
    }
    while (i < x.size() && x[i] == t) {
      ++i;
    }
    while (j < y.size() && y[j] == t) {
      ++j;
    }
    d = std::max(d, std::fabs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return d;
}

double kolmogorov_survival(double lambda) noexcept {
  if (!(lambda > 0.0)) {
    return 1.0;
  }
  if (lambda < 0.3) {
    // Dual (theta-function) form converges fast for small arguments.
    const double c = M_PI * M_PI / (8.0 * lambda * lambda);
    double s = 0.0;
    for (int k = 1; k <= 50; k += 2) {
      s += std::exp(-k * k * c);
    }
    return 1.0 - std::sqrt(2.0 * M_PI) / lambda * s;
  }
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    s += (k % 2 == 1) ? term : -term;
    if (term < 1e-18) {
      break;
    }
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

double ks_pvalue(double statistic, double n_eff) {
  if (!(n_eff > 0.0)) {
    throw_invalid("ks_pvalue requires a positive sample size");
  }
  const double rn = std::sqrt(n_eff);
  return kolmogorov_survival((rn + 0.12 + 0.11 / rn) * statistic);
}

double dkw_radius(std::uint64_t n_trials, double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw_invalid("confidence must lie in (0, 1)");
  }
  if (n_trials == 0) {
    throw_invalid("dkw_radius requires n > 0");
  }
  return std::sqrt(std::log(2.0 / (1.0 - confidence)) / (2.0 * static_cast<double>(n_trials)));
}

namespace {

std::vector<double> average_ranks(std::vector<double> x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && x[idx[j]] == x[idx[i]]) {
      ++j;
    }
    const double avg = 0.5 * static_cast<double>(i + j - 1);
    for (std::size_t k = i; k < j; ++k) {
      r[idx[k]] = avg;
    }
    i = j;
  }
  return r;
}

// Centers and scales to unit Euclidean norm so that correlation is a dot product.
void standardize(std::vector<double>& v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double& x : v) {
    x -= mean;
    ss += x * x;
  }
  const double scale = ss > 0.0 ? 1.0 / std::sqrt(ss) : 0.0;
  for (double& x : v) {
    x *= scale;
  }
}

}  // namespace

double independence_test(std::span<const std::pair<double, double>> pairs,
                         std::uint32_t permutations, RngStream& rng) {
  if (pairs.size() < 100) {
    throw_invalid("independence_test requires at least 100 pairs");
  }
  if (permutations == 0) {
    throw_invalid("independence_test requires permutations > 0");
  }
  std::vector<double> x(pairs.size()), y(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    x[i] = pairs[i].first;
    y[i] = pairs[i].second;
  }
  std::vector<double> rx = average_ranks(std::move(x));
  std::vector<double> ry = average_ranks(std::move(y));
  standardize(rx);
  standardize(ry);
  auto corr = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
      s += rx[i] * ry[i];
    }
    return std::fabs(s);
  };
  const double observed = corr();
  const double tol = 1e-12;
  std::uint64_t extreme = 0;
  for (std::uint32_t p = 0; p < permutations; ++p) {
    for (std::size_t i = ry.size() - 1; i > 0; --i) {
      const auto j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i + 1));
      std::swap(ry[i], ry[std::min(j, i)]);
    }
    if (corr() >= observed - tol) {
      ++extreme;
    }
  }
  return static_cast<double>(1 + extreme) / static_cast<double>(1 + permutations);
}

namespace {

double histogram_tv(std::span<const std::uint64_t> ca, double na,
                    std::span<const std::uint64_t> cb, double nb) {
  double s = 0.0;
  for (std::size_t k = 0; k < ca.size(); ++k) {
    s += std::fabs(static_cast<double>(ca[k]) / na - static_cast<double>(cb[k]) / nb);
  }
  return 0.5 * s;
}

}  // namespace

TvEstimate empirical_tv(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                        std::uint32_t resamples, double level, RngStream& rng) {
  if (a.empty() || b.empty()) {
    throw_invalid("empirical_tv requires nonempty samples");
  }
  if (!(level > 0.0 && level < 1.0)) {
    throw_invalid("band level must lie in (0, 1)");
  }
  std::uint64_t top = 0;
  for (auto v : a) top = std::max(top, v);
  for (auto v : b) top = std::max(top, v);
  const auto width = static_cast<std::size_t>(top) + 1;
  std::vector<std::uint64_t> ha(width, 0), hb(width, 0);
  for (auto v : a) ++ha[static_cast<std::size_t>(v)];
  for (auto v : b) ++hb[static_cast<std::size_t>(v)];
  const auto na = static_cast<double>(a.size());
  const auto nb = static_cast<double>(b.size());
  TvEstimate out{histogram_tv(ha, na, hb, nb), 0.0};
  if (resamples == 0) {
    return out;
  }

  std::vector<std::uint64_t> pool(a.begin(), a.end());
  pool.insert(pool.end(), b.begin(), b.end());
  const auto np = static_cast<double>(pool.size());
  auto draw = [&](std::vector<std::uint64_t>& h, std::size_t count) {
    std::fill(h.begin(), h.end(), 0);
    for (std::size_t i = 0; i < count; ++i) {
      const auto j = std::min(static_cast<std::size_t>(rng.uniform() * np), pool.size() - 1);
      ++h[static_cast<std::size_t>(pool[j])];
    }
  };
  std::vector<double> stats(resamples);
  for (std::uint32_t r = 0; r < resamples; ++r) {
    draw(ha, a.size());
    draw(hb, b.size());
    stats[r] = histogram_tv(ha, na, hb, nb);
  }
  std::sort(stats.begin(), stats.end());
  const auto q = static_cast<std::size_t>(std::ceil(level * resamples));
  out.band = stats[std::clamp<std::size_t>(q, 1, resamples) - 1];
  return out;
}

}  // namespace recordlab
