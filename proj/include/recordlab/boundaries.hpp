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

#include <string>

namespace recordlab {

/// Smallest admissible epoch: first integer with ln ln ln n > 0.
inline constexpr double kMinEpoch = 16.0;

/// Iterated logarithms of the epoch, evaluated in extended precision so that
/// epochs up to 1e300 (analytics only) stay accurate.
struct IteratedLogs {
  long double l1;  // ln n
  long double l2;  // ln ln n
  long double l3;  // ln ln ln n
  long double l4;  // ln ln ln ln n (negative for n < e^{e^e})
};

/// Throws ErrorCode::kDomain ("below admissible epoch") when n < 16.
IteratedLogs iterated_logs(double n);

/// Rule producing the growth sequence omega_n for the lower boundary.
struct OmegaRule {
  enum class Kind {
    kDefault,  // 2 (d - 1) sqrt(1 + L3 n)
    kSqrtL3,   // max(1.05, sqrt(L3 n))
    kScaledL4, // 2 (d - 1) (1 + max(0, L4 n))
    kFixed,    // user-supplied constant
  };
  Kind kind = Kind::kDefault;
  double value = 0.0;  // kFixed only

  static OmegaRule parse(const std::string& text);
  std::string name() const;
};

double omega_n(double n, int d, const OmegaRule& rule);

/// Every boundary and limit scalar attached to (n, d, a).
struct ShellBoundaries {
  double n;
  int d;
  double a;
  double b_star;   // ln n - L3 - ln(d-1) + a / L2
  double b;        // ln n - L3 - ln(d-1) - ln(1 - a / L2)
  double b_lower;  // ln n - L3 - ln omega_n
  double omega;
  double b_upper;  // ln n + 2 (d-1) L2
  double a_n;      // (L3 - 2 L4) / (2 (d-1))
  double lambda;   // e^{(d-1) a} / (d-1)!
  double c_n;      // (d-1)(1 - a / L2), so that b = ln n - L3 - ln c_n
  double epsilon_n;  // b_upper / b - 1
};

/// Throws kDomain for n < 16 ("below admissible epoch") and for
/// a >= ln ln n ("log argument nonpositive").
ShellBoundaries shell(double n, double a, int d, const OmegaRule& rule = {});

double a_n_of(double n, int d);
double b_star_of(double n, double a, int d);
double b_of(double n, double a, int d);
double b_lower_of(double n, int d, const OmegaRule& rule = {});
double b_upper_of(double n, int d);

double lambda_of(double a, int d);

/// (ln ln n) (phi - [ln n - L3 n - ln(d-1)]).
double phi_circ(double phi, double n, int d);

/// exp(-lambda(a)): the limiting probability that the normalized minimum
/// norm exceeds a.
double limit_survival(double a, int d);

/// 1 - limit_survival: limiting distribution function of phi_circ.
double limit_cdf(double a, int d);

}  // namespace recordlab
