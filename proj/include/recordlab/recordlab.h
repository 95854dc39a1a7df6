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

#ifndef RECORDLAB_RECORDLAB_H_
#define RECORDLAB_RECORDLAB_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RL_API __declspec(dllexport)
#else
#define RL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rl_status {
  RL_OK = 0,
  RL_ERR_INVALID_ARGUMENT = 1,
  RL_ERR_DOMAIN = 2,
  RL_ERR_IO = 3,
  RL_ERR_USAGE = 4,
  RL_ERR_INTERNAL = 5,
} rl_status;

typedef struct rl_config rl_config;
typedef struct rl_report rl_report;

/* Message of the last failed call on this thread ("" if none). */
RL_API const char* rl_last_error(void);
RL_API const char* rl_version(void);

RL_API rl_status rl_config_create(rl_config** out);
RL_API void rl_config_destroy(rl_config* config);
/* Keys: d, n, a, trials, seed, omega, workers, out, sampler, raw, budget. */
RL_API rl_status rl_config_set(rl_config* config, const char* key, const char* value);
RL_API rl_status rl_config_load_file(rl_config* config, const char* path);
/* Applies RECORDLAB_SEED when set. */
RL_API rl_status rl_config_apply_env(rl_config* config);
RL_API rl_status rl_config_get(const rl_config* config, const char* key, const char** value);

/* Subcommands: simulate, gumbel-check, poisson-check, mean-check,
 * smallest2-check, conjecture, bounds-table. */
RL_API rl_status rl_run(const char* subcommand, const rl_config* config, rl_report** out);
RL_API void rl_report_destroy(rl_report* report);

typedef struct rl_row {
  const char* experiment;
  double n;
  int d;
  double a;
  const char* statistic;
  double value;
  double se_or_band;
  double bound_or_target;
  const char* rule;
  const char* pass; /* "pass", "fail" or "report" */
  uint64_t trials;
} rl_row;

RL_API size_t rl_report_row_count(const rl_report* report);
/* String members stay valid until the report is destroyed. */
RL_API rl_status rl_report_row(const rl_report* report, size_t index, rl_row* out);
/* 1 when no gated row failed. */
RL_API int rl_report_passed(const rl_report* report);
/* Serialized forms, owned by the report. */
RL_API const char* rl_report_csv(const rl_report* report);
RL_API const char* rl_report_json(const rl_report* report);
RL_API const char* rl_report_raw_csv(const rl_report* report);
RL_API rl_status rl_report_write_csv(const rl_report* report, const char* path);
RL_API rl_status rl_report_write_json(const rl_report* report, const char* path);
RL_API rl_status rl_report_write_raw_csv(const rl_report* report, const char* path);

/* Numeric entry points. */
RL_API rl_status rl_gamma_tail(int d, double x, double* out);
RL_API rl_status rl_expected_rho(double n, double b, int d, double* out);

typedef struct rl_shell {
  double b_star;
  double b;
  double b_lower;
  double b_upper;
  double omega;
  double a_n;
  double lambda;
  double c_n;
  double epsilon_n;
} rl_shell;

/* omega_rule may be NULL for the default rule. */
RL_API rl_status rl_shell_boundaries(double n, double a, int d, const char* omega_rule,
                                     rl_shell* out);

typedef struct rl_record_stats {
  double phi;
  double f_plus;
  uint64_t count;
} rl_record_stats;

/* One Model E trial with stream (seed, stream_id); sampler is "direct",
 * "skip", "auto" or NULL (auto). */
RL_API rl_status rl_simulate_record_stats(uint64_t n, int d, uint64_t seed, uint64_t stream_id,
                                          const char* sampler, rl_record_stats* out);

#ifdef __cplusplus
}
#endif

#endif  // RECORDLAB_RECORDLAB_H_
