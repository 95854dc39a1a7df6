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

#include "recordlab/pareto_front.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "recordlab/error.hpp"

namespace recordlab {

ParetoFront::ParetoFront(int d) : d_(d) { check_dimension(d); }

bool ParetoFront::insert(const Point& p) { return insert(p.coords()); }

bool ParetoFront::insert(std::span<const double> p) {
  if (static_cast<int>(p.size()) != d_) {
    throw_invalid("dimension mismatch in front insertion");
  }
  return insert_unchecked(p);
}

bool ParetoFront::insert_unchecked(std::span<const double> p) {
  return d_ == 2 ? insert_2d(p[0], p[1]) : insert_nd(p);
}

bool ParetoFront::is_dominated(std::span<const double> p) const noexcept {
  const std::size_t m = size();
  if (d_ == 2) {
    // First element with x > p.x carries the largest y among those.
    std::size_t lo = 0, hi = m;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (coords_[2 * mid] > p[0]) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    return lo < m && coords_[2 * lo + 1] > p[1];
  }
  const double np = l1_norm(p);
  for (std::size_t i = 0; i < m; ++i) {
    if (norms_[i] > np && strictly_dominates(p, coords(i))) {
      return true;
    }
  }
  return false;
}

bool ParetoFront::insert_2d(double x, double y) {
  const double pt[2] = {x, y};
  if (is_dominated(pt)) {
    return false;
  }
  const std::size_t m = size();
  // Insertion slot keeps (x ascending, y descending).
  std::size_t pos = 0;
  {
    std::size_t lo = 0, hi = m;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      const double mx = coords_[2 * mid];
      const double my = coords_[2 * mid + 1];
      if (mx > x || (mx == x && my < y)) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    pos = lo;
  }
  // y is nonincreasing along the vector, so the elements p dominates sit in
  // a window ending at pos.
  std::size_t first = pos;
  while (first > 0 && coords_[2 * (first - 1) + 1] < y) {
    --first;
  }
  std::size_t write = first;
  for (std::size_t i = first; i < pos; ++i) {
    if (!(coords_[2 * i] < x)) {  // equal first coordinate: not dominated
      coords_[2 * write] = coords_[2 * i];
      coords_[2 * write + 1] = coords_[2 * i + 1];
      norms_[write] = norms_[i];
      ++write;
    }
  }
  const std::size_t removed = pos - write;
  if (removed > 0) {
    coords_.erase(coords_.begin() + static_cast<std::ptrdiff_t>(2 * write),
                  coords_.begin() + static_cast<std::ptrdiff_t>(2 * pos));
    norms_.erase(norms_.begin() + static_cast<std::ptrdiff_t>(write),
                 norms_.begin() + static_cast<std::ptrdiff_t>(pos));
    pos = write;
  }
  coords_.insert(coords_.begin() + static_cast<std::ptrdiff_t>(2 * pos), {x, y});
  norms_.insert(norms_.begin() + static_cast<std::ptrdiff_t>(pos), x + y);
  return true;
}

bool ParetoFront::insert_nd(std::span<const double> p) {
  if (is_dominated(p)) {
    return false;
  }
  const double np = l1_norm(p);
  const std::size_t d = static_cast<std::size_t>(d_);
  std::size_t write = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    const bool evicted = norms_[i] < np && strictly_dominates(coords(i), p);
    if (!evicted) {
      if (write != i) {
        std::copy_n(coords_.begin() + static_cast<std::ptrdiff_t>(i * d), d,
                    coords_.begin() + static_cast<std::ptrdiff_t>(write * d));
        norms_[write] = norms_[i];
      }
      ++write;
    }
  }
  coords_.resize(write * d);
  norms_.resize(write);
  coords_.insert(coords_.end(), p.begin(), p.end());
  norms_.push_back(np);
  return true;
}

std::vector<Point> ParetoFront::points() const {
  std::vector<Point> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) {
    const auto c = coords(i);
    out.emplace_back(std::vector<double>(c.begin(), c.end()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

ParetoFront front_offline(std::span<const Point> points) {
  if (points.empty()) {
    throw_invalid("front_offline requires a nonempty sample");
  }
  const int d = points.front().dim();
  std::vector<double> norms(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].dim() != d) {
      throw_invalid("front_offline requires points of a single dimension");
    }
    norms[i] = l1_norm(points[i]);
  }
  // Any dominator has a larger norm, or an equal rounded norm and a larger
  // first coordinate; so after this sort dominators always precede the
  // points they dominate, and checking against kept points suffices.
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (norms[a] != norms[b]) {
      return norms[a] > norms[b];
    }
    return points[b] < points[a];
  });
  ParetoFront front(d);
  for (std::size_t i : order) {
    front.insert_unchecked(points[i].coords());
  }
  return front;
}

std::size_t rho(const ParetoFront& front, double b) noexcept {
  std::size_t c = 0;
  for (double v : front.norms()) {
    if (v <= b) {
      ++c;
    }
  }
  return c;
}

namespace {

Point scaled(std::span<const double> c, double by) {
  std::vector<double> v(c.begin(), c.end());
  for (double& x : v) {
    x /= by;
  }
  return Point(std::move(v));
}

}  // namespace

RecordStats record_stats(const ParetoFront& front) {
  if (front.empty()) {
    throw_invalid("record_stats requires a nonempty front");
  }
  auto lex_less = [&](std::size_t a, std::size_t b) {
    const auto x = front.coords(a);
    const auto y = front.coords(b);
    return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
  };
  std::size_t imin = 0, imax = 0;
  for (std::size_t i = 1; i < front.size(); ++i) {
    const double v = front.norm(i);
    if (v < front.norm(imin) || (v == front.norm(imin) && lex_less(i, imin))) {
      imin = i;
    }
    if (v > front.norm(imax) || (v == front.norm(imax) && lex_less(i, imax))) {
      imax = i;
    }
  }
  const auto smin = front.coords(imin);
  const auto smax = front.coords(imax);
  return RecordStats{
      front.norm(imin),
      front.norm(imax),
      front.size(),
      Point(std::vector<double>(smin.begin(), smin.end())),
      scaled(smin, front.norm(imin)),
      Point(std::vector<double>(smax.begin(), smax.end())),
      scaled(smax, front.norm(imax)),
  };
}

double smallest_max_density_n2(std::span<const double> s) noexcept {
  const double norm = l1_norm(s);
  double prod = 1.0;
  for (double v : s) {
    prod *= -std::expm1(-v);
  }
  double series = 0.0;
  double term = 1.0;
  const std::size_t d = s.size();
  for (std::size_t j = 1; j < d; ++j) {
    term *= norm / static_cast<double>(j);
    series += term;
  }
  return 2.0 * std::exp(-norm) * (prod + std::exp(-norm) * series);
}

double smallest_max_density_n2(const Point& s) { return smallest_max_density_n2(s.coords()); }

ParetoFront simulate_front_direct(std::uint64_t n, int d, RngStream& rng) {
  check_dimension(d);
  if (n == 0) {
    throw_invalid("sample size must be positive");
  }
  ParetoFront front(d);
  std::vector<double> buf(static_cast<std::size_t>(d));
  for (std::uint64_t i = 0; i < n; ++i) {
    fill_exponential(buf, rng);
    front.insert_unchecked(buf);
  }
  return front;
}

ParetoFront simulate_front_record_skip_2d(std::uint64_t n, RngStream& rng) {
  if (n == 0) {
    throw_invalid("sample size must be positive");
  }
  ParetoFront front(2);
  // Largest first coordinate: maximum of n uniforms mapped through the
  // Exponential(1) quantile.
  double x = -std::log(-std::expm1(std::log(rng.uniform()) / static_cast<double>(n)));
  double y = rng.exponential();
  {
    const double pt[2] = {x, y};
    front.insert_unchecked(pt);
  }
  std::uint64_t remaining = n - 1;
  while (remaining > 0) {
    const std::uint64_t skip = geometric_failures(rng, std::exp(-y));
    if (skip >= remaining) {
      break;
    }
    // (skip+1)-th largest of `remaining` uniforms is Beta(remaining-skip, skip+1);
    // keep its complement to retain precision near 1.
    const double ga = gamma_variate(rng, static_cast<double>(remaining - skip));
    const double gb = gamma_variate(rng, static_cast<double>(skip + 1));
    const double w_complement = gb / (ga + gb);
    const double tail = std::exp(-x) + (-std::expm1(-x)) * w_complement;
    x = -std::log(tail);
    y += rng.exponential();
    const double pt[2] = {x, y};
    front.insert_unchecked(pt);
    remaining -= skip + 1;
  }
  return front;
}

ParetoFront simulate_front(std::uint64_t n, int d, Sampler sampler, RngStream& rng) {
  switch (sampler) {
    case Sampler::kDirect:
      return simulate_front_direct(n, d, rng);
    case Sampler::kRecordSkip:
      if (d != 2) {
        throw_invalid("record-skip sampler requires d == 2");
      }
      return simulate_front_record_skip_2d(n, rng);
    case Sampler::kAuto:
      break;
  }
  return d == 2 ? simulate_front_record_skip_2d(n, rng) : simulate_front_direct(n, d, rng);
}

double sampled_points_per_trial(std::uint64_t n, int d, Sampler sampler) noexcept {
  const bool skip = sampler == Sampler::kRecordSkip || (sampler == Sampler::kAuto && d == 2);
  if (skip) {
    return std::log(static_cast<double>(n)) + 1.5772156649015329;
  }
  return static_cast<double>(n);
}

}  // namespace recordlab
