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
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "recordlab/rng.hpp"

namespace recordlab {

/// Law on the nonnegative integers with finite explicit support; mass beyond
/// the support is kept as tail_mass and treated conservatively by distances.
class DiscretePMF {
 public:
  /// Throws kInvalidArgument on negative or non-finite entries, or when
  /// sum(probs) + tail_mass differs from 1 by more than 1e-12.
  explicit DiscretePMF(std::vector<double> probs, double tail_mass = 0.0);

  std::span<const double> probs() const noexcept { return probs_; }
  double tail_mass() const noexcept { return tail_; }
  /// P(k); zero beyond the explicit support.
  double at(std::size_t k) const noexcept { return k < probs_.size() ? probs_[k] : 0.0; }
  std::size_t support_size() const noexcept { return probs_.size(); }
  double mean() const noexcept;

 private:
  std::vector<double> probs_;
  double tail_;
};

/// Truncated where the cumulative mass first reaches 1 - 1e-12.
DiscretePMF poisson_pmf(double mean);
DiscretePMF binomial_pmf(std::uint64_t n, double p);

/// Half l1-distance plus half of both tail masses, capped at 1.
double tv_discrete(const DiscretePMF& p, const DiscretePMF& q);
double tv_binomial_poisson(std::uint64_t n, double p);
double tv_poisson_poisson(double l1, double l2);

/// Relative frequencies of the observed counts.
DiscretePMF empirical_pmf(std::span<const std::uint64_t> counts);

class EmpiricalSample {
 public:
  /// Sorts the values. Throws on NaN.
  explicit EmpiricalSample(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  /// Right-continuous empirical distribution function.
  double cdf(double x) const noexcept;

 private:
  std::vector<double> values_;
};

/// sup_t |F_sample(t) - cdf(t)|, evaluated at both one-sided limits of every
/// jump of the empirical function; cdf(x-) is taken as cdf(nextafter(x, -inf)).
/// Throws on an empty sample.
double kolmogorov_distance(const EmpiricalSample& sample,
                           const std::function<double(double)>& cdf);

/// Two-sample sup distance between empirical distribution functions.
double kolmogorov_distance(const EmpiricalSample& a, const EmpiricalSample& b);

/// P(K > lambda) for the Kolmogorov limit law.
double kolmogorov_survival(double lambda) noexcept;

/// Asymptotic p-value of a KS statistic with effective size n_eff, using
/// the (sqrt(n) + 0.12 + 0.11 / sqrt(n)) small-sample scaling.
double ks_pvalue(double statistic, double n_eff);

/// sqrt(ln(2 / (1 - confidence)) / (2 n)).
double dkw_radius(std::uint64_t n_trials, double confidence);

/// Permutation p-value for |Pearson correlation| of the rank-transformed
/// coordinates: (1 + #{|r_perm| >= |r_obs|}) / (1 + permutations).
/// Throws on fewer than 100 pairs or zero permutations.
double independence_test(std::span<const std::pair<double, double>> pairs,
                         std::uint32_t permutations, RngStream& rng);

struct TvEstimate {
  double estimate;  // TV between the two empirical laws
  double band;      // null quantile of the same statistic
};

/// Empirical TV between two integer samples with a pooled bootstrap band:
/// both samples are redrawn (with their original sizes) from the pooled
/// sample, and `band` is the `level` quantile of the resampled TV values.
TvEstimate empirical_tv(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                        std::uint32_t resamples, double level, RngStream& rng);

}  // namespace recordlab
