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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "recordlab/core_model.hpp"
#include "recordlab/rng.hpp"

namespace recordlab {

/// Set of mutually non-dominated points (the maxima, or current records, of
/// everything inserted so far).
///
/// Membership is "not strictly dominated by any other point". For d == 2 the
/// elements are kept sorted by (first coordinate ascending, second
/// descending), which makes the dominance test a binary search; for d >= 3 a
/// linear scan with a norm pre-filter is used.
class ParetoFront {
 public:
  explicit ParetoFront(int d);

  int dim() const noexcept { return d_; }
  std::size_t size() const noexcept { return norms_.size(); }
  bool empty() const noexcept { return norms_.empty(); }

  /// Streaming insertion. Returns true when `p` survives (and evicts the
  /// elements it dominates), false when `p` is dominated and the front is
  /// unchanged. Throws on dimension mismatch.
  bool insert(const Point& p);
  bool insert(std::span<const double> p);

  /// Hot-loop insertion; `p.size()` must equal dim().
  bool insert_unchecked(std::span<const double> p);

  bool is_dominated(std::span<const double> p) const noexcept;

  std::span<const double> coords(std::size_t i) const noexcept {
    return {coords_.data() + i * static_cast<std::size_t>(d_), static_cast<std::size_t>(d_)};
  }
  double norm(std::size_t i) const noexcept { return norms_[i]; }
  std::span<const double> norms() const noexcept { return norms_; }

  /// Elements as points, in lexicographic order (canonical form for set
  /// comparison).
  std::vector<Point> points() const;

 private:
  bool insert_2d(double x, double y);
  bool insert_nd(std::span<const double> p);

  int d_;
  std::vector<double> coords_;  // row-major, size() * d_
  std::vector<double> norms_;
};

/// Non-dominated subset by a norm-descending sweep. Throws on empty input or
/// mixed dimensions.
ParetoFront front_offline(std::span<const Point> points);

/// Number of front elements with l1-norm <= b.
std::size_t rho(const ParetoFront& front, double b) noexcept;

struct RecordStats {
  double phi;       // minimum l1-norm over the front
  double f_plus;    // maximum l1-norm over the front
  std::size_t count;
  Point sigma;            // minimum-norm element
  Point sigma_direction;  // sigma / phi
  Point largest;            // maximum-norm element
  Point largest_direction;  // largest / f_plus
};

/// Norm ties (a measure-zero event) go to the lexicographically smallest
/// coordinate vector. Throws on an empty front.
RecordStats record_stats(const ParetoFront& front);

/// Density of the minimum-norm maximum for a sample of size two:
/// 2 e^{-|s|} [prod_j (1 - e^{-s_j}) + e^{-|s|} sum_{j=1}^{d-1} |s|^j / j!].
double smallest_max_density_n2(const Point& s);
double smallest_max_density_n2(std::span<const double> s) noexcept;

enum class Sampler {
  kDirect,      // generate all n observations and stream them through a front
  kRecordSkip,  // exact d == 2 sampler that only generates the records
  kAuto,        // kRecordSkip when d == 2, kDirect otherwise
};

/// Front of n Model E observations, generating and discarding points one at
/// a time.
ParetoFront simulate_front_direct(std::uint64_t n, int d, RngStream& rng);

/// Front of n Model E observations in d == 2, without generating the
/// dominated points.
///
/// Observations are visited in decreasing order of the first coordinate;
/// such a visit order makes the maxima exactly the upper records of the
/// (i.i.d. Exponential) second coordinates. The number of non-records
/// between two records is geometric, the first coordinate of the next record
/// is an order statistic of the remaining truncated sample (a Beta draw in
/// the uniform scale), and its second coordinate is the current record plus
/// an Exponential(1). Cost is O(number of maxima) = O(log n).
ParetoFront simulate_front_record_skip_2d(std::uint64_t n, RngStream& rng);

ParetoFront simulate_front(std::uint64_t n, int d, Sampler sampler, RngStream& rng);

/// Number of observations a sampler draws for one trial (budget accounting).
double sampled_points_per_trial(std::uint64_t n, int d, Sampler sampler) noexcept;

}  // namespace recordlab
