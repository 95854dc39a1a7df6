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

#include <functional>

namespace recordlab {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_depth = 40;  // subdivision limit per panel
  int panels = 16;     // initial uniform split of [a, b]
};

/// Adaptive Simpson quadrature with Richardson correction. The interval is
/// first cut into `panels` pieces; the global tolerance
/// max(abs_tol, rel_tol * |coarse estimate|) is shared among them. Panel
/// results are accumulated with compensated summation.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opts = {});

/// Neumaier compensated accumulator.
class CompensatedSum {
 public:
  void add(double v) noexcept;
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace recordlab
