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

// recordlab command-line front end. Talks to the library only through the
// C interface in recordlab.h.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "recordlab/recordlab.h"

namespace {

enum ExitCode {
  kExitOk = 0,
  kExitGateFailed = 1,
  kExitUsage = 2,
  kExitIo = 3,
  kExitInternal = 4,
};

int exit_code_of(rl_status s) {
  switch (s) {
    case RL_OK:
      return kExitOk;
    case RL_ERR_INVALID_ARGUMENT:
    case RL_ERR_DOMAIN:
    case RL_ERR_USAGE:
      return kExitUsage;
    case RL_ERR_IO:
      return kExitIo;
    case RL_ERR_INTERNAL:
      break;
  }
  return kExitInternal;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

struct Options {
  std::string config_file;
  std::vector<std::pair<std::string, std::string>> settings;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and verification harness for Pareto maxima of exponential samples"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(rl_version()));

  std::string d, n, a, trials, seed, omega, workers, out, config_file, sampler, budget;
  bool raw = false;

  const char* commands[][2] = {
      {"simulate", "raw per-trial record statistics"},
      {"gumbel-check", "Kolmogorov distance of the normalized minimum norm to its limit"},
      {"poisson-check", "total-variation chain of the Poisson approximation"},
      {"mean-check", "analytic means against simulation"},
      {"smallest2-check", "closed-form law of the smallest maximum for two points"},
      {"conjecture", "direction uniformity and independence tests"},
      {"bounds-table", "analytic bounds across grids (no model simulation)"},
  };
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c[0], c[1]);
    sub->add_option("--d", d, "dimension (>= 2)");
    sub->add_option("--n", n, "comma-separated epochs, e.g. 1e3,1e5");
    sub->add_option("--a", a, "comma-separated offsets, -a_n/a_n allowed, or auto");
    sub->add_option("--trials", trials, "trials: one value or one per epoch");
    sub->add_option("--seed", seed, "64-bit seed (RECORDLAB_SEED overrides)");
    sub->add_option("--omega", omega, "lower-boundary rule: default|sqrt|l4|<constant>");
    sub->add_option("--workers", workers, "worker threads");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--config", config_file, "key=value configuration file");
    sub->add_option("--sampler", sampler, "direct|skip|auto");
    sub->add_option("--budget", budget, "observation budget per command");
    sub->add_flag("--raw", raw, "also write per-trial data");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  rl_config* cfg = nullptr;
  if (rl_config_create(&cfg) != RL_OK) {
    std::fprintf(stderr, "error: %s\n", rl_last_error());
    return kExitInternal;
  }
  auto check = [&](rl_status s) {
    if (s != RL_OK) {
      std::fprintf(stderr, "error: %s\n", rl_last_error());
      rl_config_destroy(cfg);
      std::exit(exit_code_of(s));
    }
  };

  if (!config_file.empty()) {
    check(rl_config_load_file(cfg, config_file.c_str()));
  }
  const std::pair<const char*, const std::string*> flags[] = {
      {"d", &d},           {"n", &n},         {"a", &a},     {"trials", &trials},
      {"seed", &seed},     {"omega", &omega}, {"workers", &workers},
      {"out", &out},       {"sampler", &sampler}, {"budget", &budget},
  };
  for (const auto& [key, value] : flags) {
    if (!value->empty()) {
      check(rl_config_set(cfg, key, value->c_str()));
    }
  }
  if (raw) {
    check(rl_config_set(cfg, "raw", "true"));
  }
  check(rl_config_apply_env(cfg));

  const char* out_dir = nullptr;
  check(rl_config_get(cfg, "out", &out_dir));
  const std::filesystem::path dir(out_dir);
  const char* raw_setting = nullptr;
  check(rl_config_get(cfg, "raw", &raw_setting));
  const bool want_raw = std::string(raw_setting) == "true";

  rl_report* report = nullptr;
  check(rl_run(command.c_str(), cfg, &report));
  rl_config_destroy(cfg);

  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    std::fprintf(stderr, "error: cannot create '%s': %s\n", dir.c_str(), ec.message().c_str());
    rl_report_destroy(report);
    return kExitIo;
  }
  const std::string stem = (dir / (command + "-" + utc_timestamp())).string();
  std::vector<std::pair<std::string, rl_status>> written = {
      {stem + ".csv", rl_report_write_csv(report, (stem + ".csv").c_str())},
      {stem + ".json", rl_report_write_json(report, (stem + ".json").c_str())},
  };
  if (want_raw) {
    written.emplace_back(stem + "-raw.csv",
                         rl_report_write_raw_csv(report, (stem + "-raw.csv").c_str()));
  }

  const std::size_t rows = rl_report_row_count(report);
  for (std::size_t i = 0; i < rows; ++i) {
    rl_row r;
    if (rl_report_row(report, i, &r) != RL_OK) continue;
    std::printf("%-7s n=%-10.4g a=%-+9.4f %-32s %-14.6g bound/target=%-12.6g %s\n", r.pass, r.n,
                r.a, r.statistic, r.value, r.bound_or_target, r.rule);
  }
  int code = rl_report_passed(report) ? kExitOk : kExitGateFailed;
  for (const auto& [path, status] : written) {
    if (status != RL_OK) {
      std::fprintf(stderr, "error: %s\n", rl_last_error());
      code = kExitIo;
    } else {
      std::fprintf(stderr, "wrote %s\n", path.c_str());
    }
  }
  rl_report_destroy(report);
  return code;
}
