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
#include <optional>
#include <string>
#include <vector>

#include "recordlab/boundaries.hpp"
#include "recordlab/pareto_front.hpp"

namespace recordlab {

enum class Subcommand {
  kSimulate,
  kGumbelCheck,
  kPoissonCheck,
  kMeanCheck,
  kSmallest2Check,
  kConjecture,
  kBoundsTable,
};

std::optional<Subcommand> parse_subcommand(const std::string& name);
std::string subcommand_name(Subcommand cmd);
std::vector<std::string> subcommand_names();

/// Entry of the offset grid. Symbolic entries resolve per epoch because a_n
/// depends on n.
struct OffsetEntry {
  enum class Kind { kValue, kMinusAn, kPlusAn };
  Kind kind = Kind::kValue;
  double value = 0.0;

  double resolve(double n, int d) const;
  std::string text() const;
};

struct SimConfig {
  int d = 2;
  std::vector<double> n_grid;             // empty: subcommand default
  std::vector<OffsetEntry> a_grid;        // empty: {-a_n, 0, a_n}
  std::vector<std::uint64_t> trials;      // one value, or one per n; empty: default
  std::uint64_t seed = 42;
  OmegaRule omega;
  int workers = 1;
  std::string output_dir = ".";
  Sampler sampler = Sampler::kAuto;
  bool raw = false;
  double budget = 1e10;  // sampled observations per command

  /// Recognized keys: d, n, a, trials, seed, omega, workers, out, sampler,
  /// raw, budget. Throws ErrorCode::kUsage on unknown keys or bad values.
  void set(const std::string& key, const std::string& value);
  /// Flat key=value lines; '#' starts a comment. Throws kIo / kUsage.
  void load_file(const std::string& path);
  /// RECORDLAB_SEED, when set, replaces the seed.
  void apply_environment();
};

enum class Verdict { kPass, kFail, kReport };
const char* verdict_name(Verdict v);

struct ReportRow {
  std::string experiment;
  double n = 0.0;
  int d = 0;
  double a = 0.0;
  std::string statistic;
  double value = 0.0;
  double se_or_band = 0.0;
  double bound_or_target = 0.0;
  std::string rule;
  Verdict verdict = Verdict::kReport;
  std::uint64_t trials = 0;
};

struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Report {
  Subcommand command = Subcommand::kSimulate;
  std::vector<ReportRow> rows;
  RawTable raw;

  /// True when no gated row failed.
  bool passed() const noexcept;
};

/// Runs one subcommand. Output is a function of (command, config) only; the
/// worker count does not change any byte of the serialized report.
Report run(Subcommand cmd, const SimConfig& config);

/// General format with 17 significant digits, trailing zeros trimmed; "nan",
/// "inf", "-inf" for non-finite values.
std::string format_real(double v);

std::string to_csv(const Report& report);
std::string raw_to_csv(const RawTable& raw);
std::string to_json(const Report& report);

}  // namespace recordlab
