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

#include "recordlab/core_model.hpp"

#include <cmath>
#include <string>

#include "recordlab/error.hpp"

namespace recordlab {

void check_dimension(int d, int min_dim) {
  if (d < min_dim) {
    throw_invalid("dimension " + std::to_string(d) + " below minimum " +
                  std::to_string(min_dim));
  }
}

Point::Point(std::vector<double> coords, int min_dim) : coords_(std::move(coords)) {
  check_dimension(static_cast<int>(coords_.size()), min_dim);
  for (double v : coords_) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw_invalid("point coordinates must be finite and strictly positive");
    }
  }
}

bool strictly_dominates(const Point& x, const Point& y) {
  if (x.dim() != y.dim()) {
    throw_invalid("dimension mismatch in dominance test");
  }
  return strictly_dominates(x.coords(), y.coords());
}

double l1_norm(const Point& x) noexcept { return l1_norm(x.coords()); }

void fill_exponential(std::span<double> out, RngStream& rng) noexcept {
  for (double& v : out) {
    v = rng.exponential();
  }
}

void fill_simplex_uniform(std::span<double> out, RngStream& rng) noexcept {
  fill_exponential(out, rng);
  const double s = l1_norm(out);
  for (double& v : out) {
    v /= s;
  }
}

Point sample_exponential_point(int d, RngStream& rng) {
  check_dimension(d);
  std::vector<double> c(static_cast<std::size_t>(d));
  fill_exponential(c, rng);
  return Point(std::move(c));
}

Point sample_simplex_uniform(int d, RngStream& rng) {
  check_dimension(d);
  std::vector<double> c(static_cast<std::size_t>(d));
  fill_simplex_uniform(c, rng);
  return Point(std::move(c));
}

GumbelLaw::GumbelLaw(double location, double scale) : location_(location), scale_(scale) {
  if (!(scale > 0.0) || !std::isfinite(scale) || !std::isfinite(location)) {
    throw_invalid("Gumbel scale must be positive and parameters finite");
  }
}

double gumbel_cdf(const GumbelLaw& law, double x) noexcept {
  return std::exp(-std::exp(-(x - law.location()) / law.scale()));
}

double gumbel_quantile(const GumbelLaw& law, double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw_domain("Gumbel quantile requires u in (0, 1)");
  }
  return law.location() - law.scale() * std::log(-std::log(u));
}

GumbelLaw min_norm_limit_gumbel(int d) {
  check_dimension(d);
  const double k = d - 1.0;
  return GumbelLaw(-std::lgamma(static_cast<double>(d)) / k, 1.0 / k);
}

}  // namespace recordlab
