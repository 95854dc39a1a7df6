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

#include "recordlab/boundaries.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "recordlab/core_model.hpp"
#include "recordlab/error.hpp"

namespace recordlab {

IteratedLogs iterated_logs(double n) {
  if (!(n >= kMinEpoch) || !std::isfinite(n)) {
    throw_domain("below admissible epoch: n must be >= 16");
  }
  IteratedLogs l{};
  l.l1 = std::log(static_cast<long double>(n));
  l.l2 = std::log(l.l1);
  l.l3 = std::log(l.l2);
  l.l4 = std::log(l.l3);
  return l;
}

OmegaRule OmegaRule::parse(const std::string& text) {
  if (text.empty() || text == "default") {
    return {};
  }
  if (text == "sqrt") {
    return {Kind::kSqrtL3, 0.0};
  }
  if (text == "l4") {
    return {Kind::kScaledL4, 0.0};
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !(v > 1.0) || !std::isfinite(v)) {
    throw_invalid("omega rule must be default|sqrt|l4|<constant > 1>, got '" + text + "'");
  }
  return {Kind::kFixed, v};
}

std::string OmegaRule::name() const {
  switch (kind) {
    case Kind::kDefault:
      return "default";
    case Kind::kSqrtL3:
      return "sqrt";
    case Kind::kScaledL4:
      return "l4";
    case Kind::kFixed:
      break;
  }
  return "fixed:" + std::to_string(value);
}

double omega_n(double n, int d, const OmegaRule& rule) {
  check_dimension(d);
  const IteratedLogs l = iterated_logs(n);
  const long double k = d - 1;
  switch (rule.kind) {
    case OmegaRule::Kind::kDefault:
      return static_cast<double>(2.0L * k * std::sqrt(1.0L + l.l3));
    case OmegaRule::Kind::kSqrtL3:
      return std::max(1.05, static_cast<double>(std::sqrt(l.l3)));
    case OmegaRule::Kind::kScaledL4:
      return static_cast<double>(2.0L * k * (1.0L + std::max(0.0L, l.l4)));
    case OmegaRule::Kind::kFixed:
      return rule.value;
  }
  return 0.0;
}

double a_n_of(double n, int d) {
  check_dimension(d);
  const IteratedLogs l = iterated_logs(n);
  return static_cast<double>((l.l3 - 2.0L * l.l4) / (2.0L * (d - 1)));
}

double b_star_of(double n, double a, int d) {
  check_dimension(d);
  const IteratedLogs l = iterated_logs(n);
  return static_cast<double>(l.l1 - l.l3 - std::log(static_cast<long double>(d - 1)) +
                             a / l.l2);
}

double b_of(double n, double a, int d) {
  check_dimension(d);
  const IteratedLogs l = iterated_logs(n);
  const long double ratio = a / l.l2;
  if (!(ratio < 1.0L)) {
    throw_domain("log argument nonpositive: a must be < ln ln n");
  }
  return static_cast<double>(l.l1 - l.l3 - std::log(static_cast<long double>(d - 1)) -
                             std::log1p(-ratio));
}

double b_lower_of(double n, int d, const OmegaRule& rule) {
  const IteratedLogs l = iterated_logs(n);
  const long double w = omega_n(n, d, rule);
  return static_cast<double>(l.l1 - l.l3 - std::log(w));
}

double b_upper_of(double n, int d) {
  check_dimension(d);
  const IteratedLogs l = iterated_logs(n);
  return static_cast<double>(l.l1 + 2.0L * (d - 1) * l.l2);
}

double lambda_of(double a, int d) {
  check_dimension(d);
  return std::exp((d - 1.0) * a - std::lgamma(static_cast<double>(d)));
}

ShellBoundaries shell(double n, double a, int d, const OmegaRule& rule) {
  check_dimension(d);
  const IteratedLogs l = iterated_logs(n);
  ShellBoundaries s{};
  s.n = n;
  s.d = d;
  s.a = a;
  s.b = b_of(n, a, d);
  s.b_star = b_star_of(n, a, d);
  s.omega = omega_n(n, d, rule);
  s.b_lower = b_lower_of(n, d, rule);
  s.b_upper = b_upper_of(n, d);
  s.a_n = a_n_of(n, d);
  s.lambda = lambda_of(a, d);
  s.c_n = static_cast<double>((d - 1) * (1.0L - a / l.l2));
  s.epsilon_n = s.b_upper / s.b - 1.0;
  return s;
}

double phi_circ(double phi, double n, int d) {
  check_dimension(d);
  const IteratedLogs l = iterated_logs(n);
  const long double center = l.l1 - l.l3 - std::log(static_cast<long double>(d - 1));
  return static_cast<double>(l.l2 * (phi - center));
}

double limit_survival(double a, int d) { return std::exp(-lambda_of(a, d)); }

double limit_cdf(double a, int d) { return -std::expm1(-lambda_of(a, d)); }

}  // namespace recordlab
