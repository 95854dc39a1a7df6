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
#include <span>
#include <vector>

#include "recordlab/rng.hpp"

namespace recordlab {

/// Observations are vectors in (0, inf)^d with d >= 2.
inline constexpr int kMinObservationDim = 2;

/// A point of the positive orthant: finite, strictly positive coordinates.
class Point {
 public:
  /// Validates positivity and finiteness; `min_dim` is 2 for observations
  /// and may be lowered to 1 by internal helpers.
  explicit Point(std::vector<double> coords, int min_dim = kMinObservationDim);

  int dim() const noexcept { return static_cast<int>(coords_.size()); }
  std::span<const double> coords() const noexcept { return coords_; }
  double operator[](std::size_t j) const noexcept { return coords_[j]; }

  friend bool operator==(const Point&, const Point&) = default;
  /// Lexicographic order on coordinates; used only for deterministic
  /// tie-breaking and canonical ordering.
  friend auto operator<=>(const Point& a, const Point& b) = default;

 private:
  std::vector<double> coords_;
};

/// True iff x_j < y_j for every j. Throws on dimension mismatch.
bool strictly_dominates(const Point& x, const Point& y);

/// Unchecked variant for hot loops over flat storage.
inline bool strictly_dominates(std::span<const double> x, std::span<const double> y) noexcept {
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!(x[j] < y[j])) {
      return false;
    }
  }
  return true;
}

double l1_norm(const Point& x) noexcept;

inline double l1_norm(std::span<const double> x) noexcept {
  double s = 0.0;
  for (double v : x) {
    s += v;
  }
  return s;
}

/// d i.i.d. Exponential(1) coordinates (Model E observation).
Point sample_exponential_point(int d, RngStream& rng);

/// Uniform point on the probability simplex (normalized exponentials).
Point sample_simplex_uniform(int d, RngStream& rng);

/// Allocation-free forms writing into `out` (size d).
void fill_exponential(std::span<double> out, RngStream& rng) noexcept;
void fill_simplex_uniform(std::span<double> out, RngStream& rng) noexcept;

/// Gumbel law with distribution function exp(-exp(-(x - location) / scale)).
class GumbelLaw {
 public:
  GumbelLaw(double location, double scale);

  static GumbelLaw standard() { return GumbelLaw(0.0, 1.0); }

  double location() const noexcept { return location_; }
  double scale() const noexcept { return scale_; }

 private:
  double location_;
  double scale_;
};

double gumbel_cdf(const GumbelLaw& law, double x) noexcept;

/// Inverse of gumbel_cdf; u must lie in (0, 1).
double gumbel_quantile(const GumbelLaw& law, double u);

/// Law of G in the limit theorem for the minimum-norm maximum:
/// location -ln((d-1)!)/(d-1), scale 1/(d-1).
GumbelLaw min_norm_limit_gumbel(int d);

void check_dimension(int d, int min_dim = kMinObservationDim);

}  // namespace recordlab
