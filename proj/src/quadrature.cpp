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

#include "recordlab/quadrature.hpp"

#include <cmath>
#include <limits>
#include <vector>
#include <algorithm>

#include "recordlab/error.hpp"

namespace recordlab {

void CompensatedSum::add(double v) noexcept {
  const double t = sum_ + v;
  if (std::fabs(sum_) >= std::fabs(v)) {
    comp_ += (sum_ - t) + v;
  } else {
    comp_ += (v - t) + sum_;
  }
  sum_ = t;
}

namespace {

struct SimpsonStep {
  const std::function<double(double)>& f;

  double recurse(double a, double b, double fa, double fm, double fb, double whole, double eps,
                 int depth) const {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double both = left + right;
    const double delta = both - whole;
    // Floor the target at a few ulps of the estimate so round-off cannot
    // force exhaustive subdivision.
    const double floor = 8.0 * std::numeric_limits<double>::epsilon() * std::fabs(both);
    if (depth <= 0 || std::fabs(delta) <= 15.0 * std::max(eps, floor)) {
      return both + delta / 15.0;
    }
    return recurse(a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
           recurse(m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
  }
};

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opts) {
  if (!(b > a)) {
    if (a == b) {
      return 0.0;
    }
    return -integrate(f, b, a, opts);
  }
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw_invalid("integrate requires finite limits");
  }
  const int panels = opts.panels > 0 ? opts.panels : 1;
  const double h = (b - a) / panels;

  // Coarse pass: one Simpson rule per panel; nodes are reused below.
  struct Panel {
    double a, b, fa, fm, fb, whole;
  };
  std::vector<Panel> ps(static_cast<std::size_t>(panels));
  double fa = f(a);
  CompensatedSum coarse;
  for (int i = 0; i < panels; ++i) {
    const double pa = a + h * i;
    const double pb = (i + 1 == panels) ? b : a + h * (i + 1);
    const double fm = f(0.5 * (pa + pb));
    const double fb = f(pb);
    const double whole = (pb - pa) / 6.0 * (fa + 4.0 * fm + fb);
    ps[static_cast<std::size_t>(i)] = {pa, pb, fa, fm, fb, whole};
    coarse.add(std::fabs(whole));
    fa = fb;
  }
  const double eps = std::max(opts.abs_tol, opts.rel_tol * coarse.value()) / panels;
  const SimpsonStep step{f};
  CompensatedSum total;
  for (const Panel& p : ps) {
    total.add(step.recurse(p.a, p.b, p.fa, p.fm, p.fb, p.whole, eps, opts.max_depth));
  }
  return total.value();
}

}  // namespace recordlab
