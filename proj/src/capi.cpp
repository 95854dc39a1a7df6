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

#include "recordlab/recordlab.h"

#include <fstream>
#include <new>
#include <string>

#include "recordlab/analytics.hpp"
#include "recordlab/error.hpp"
#include "recordlab/harness.hpp"

struct rl_config {
  recordlab::SimConfig config;
  std::string scratch;
};

struct rl_report {
  recordlab::Report report;
  std::string csv;
  std::string json;
  std::string raw_csv;
};

namespace {

thread_local std::string g_last_error;

rl_status fail(rl_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename F>
rl_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return RL_OK;
  } catch (const recordlab::Error& e) {
    return fail(static_cast<rl_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(RL_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(RL_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(RL_ERR_INTERNAL, "unknown error");
  }
}

rl_status write_text(const std::string& text, const char* path) {
  if (path == nullptr) {
    return fail(RL_ERR_INVALID_ARGUMENT, "path is null");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    return fail(RL_ERR_IO, std::string("cannot open '") + path + "' for writing");
  }
  out << text;
  out.close();
  if (!out) {
    return fail(RL_ERR_IO, std::string("write to '") + path + "' failed");
  }
  return RL_OK;
}

recordlab::Sampler sampler_of(const char* name) {
  const std::string s = name == nullptr ? "auto" : name;
  if (s == "direct") return recordlab::Sampler::kDirect;
  if (s == "skip") return recordlab::Sampler::kRecordSkip;
  if (s == "auto") return recordlab::Sampler::kAuto;
  recordlab::throw_invalid("sampler must be direct|skip|auto");
}

}  // namespace

extern "C" {

const char* rl_last_error(void) { return g_last_error.c_str(); }

const char* rl_version(void) { return "1.0.0"; }

rl_status rl_config_create(rl_config** out) {
  if (out == nullptr) {
    return fail(RL_ERR_INVALID_ARGUMENT, "output pointer is null");
  }
  return guarded([&] { *out = new rl_config(); });
}

void rl_config_destroy(rl_config* config) { delete config; }

rl_status rl_config_set(rl_config* config, const char* key, const char* value) {
  if (config == nullptr || key == nullptr || value == nullptr) {
    return fail(RL_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] { config->config.set(key, value); });
}

rl_status rl_config_load_file(rl_config* config, const char* path) {
  if (config == nullptr || path == nullptr) {
    return fail(RL_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] { config->config.load_file(path); });
}

rl_status rl_config_apply_env(rl_config* config) {
  if (config == nullptr) {
    return fail(RL_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] { config->config.apply_environment(); });
}

rl_status rl_config_get(const rl_config* config, const char* key, const char** value) {
  if (config == nullptr || key == nullptr || value == nullptr) {
    return fail(RL_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    const auto& c = config->config;
    const std::string k = key;
    std::string v;
    if (k == "d") {
      v = std::to_string(c.d);
    } else if (k == "seed") {
      v = std::to_string(c.seed);
    } else if (k == "workers") {
      v = std::to_string(c.workers);
    } else if (k == "out") {
      v = c.output_dir;
    } else if (k == "omega") {
      v = c.omega.name();
    } else if (k == "raw") {
      v = c.raw ? "true" : "false";
    } else {
      throw recordlab::Error(recordlab::ErrorCode::kUsage, "key '" + k + "' is not readable");
    }
    auto& scratch = const_cast<rl_config*>(config)->scratch;
    scratch = std::move(v);
    *value = scratch.c_str();
  });
}

rl_status rl_run(const char* subcommand, const rl_config* config, rl_report** out) {
  if (subcommand == nullptr || config == nullptr || out == nullptr) {
    return fail(RL_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    const auto cmd = recordlab::parse_subcommand(subcommand);
    if (!cmd) {
      throw recordlab::Error(recordlab::ErrorCode::kUsage,
                             std::string("unknown subcommand '") + subcommand + "'");
    }
    auto* r = new rl_report();
    try {
      r->report = recordlab::run(*cmd, config->config);
      r->csv = recordlab::to_csv(r->report);
      r->json = recordlab::to_json(r->report);
      r->raw_csv = recordlab::raw_to_csv(r->report.raw);
    } catch (...) {
      delete r;
      throw;
    }
    *out = r;
  });
}

void rl_report_destroy(rl_report* report) { delete report; }

size_t rl_report_row_count(const rl_report* report) {
  return report == nullptr ? 0 : report->report.rows.size();
}

rl_status rl_report_row(const rl_report* report, size_t index, rl_row* out) {
  if (report == nullptr || out == nullptr) {
    return fail(RL_ERR_INVALID_ARGUMENT, "null argument");
  }
  if (index >= report->report.rows.size()) {
    return fail(RL_ERR_INVALID_ARGUMENT, "row index out of range");
  }
  const auto& r = report->report.rows[index];
  *out = rl_row{r.experiment.c_str(), r.n,     r.d,
                r.a,                  r.statistic.c_str(), r.value,
                r.se_or_band,         r.bound_or_target,   r.rule.c_str(),
                recordlab::verdict_name(r.verdict),        r.trials};
  return RL_OK;
}

int rl_report_passed(const rl_report* report) {
  return report != nullptr && report->report.passed() ? 1 : 0;
}

const char* rl_report_csv(const rl_report* report) {
  return report == nullptr ? "" : report->csv.c_str();
}

const char* rl_report_json(const rl_report* report) {
  return report == nullptr ? "" : report->json.c_str();
}

const char* rl_report_raw_csv(const rl_report* report) {
  return report == nullptr ? "" : report->raw_csv.c_str();
}

rl_status rl_report_write_csv(const rl_report* report, const char* path) {
  if (report == nullptr) return fail(RL_ERR_INVALID_ARGUMENT, "null report");
  return write_text(report->csv, path);
}

rl_status rl_report_write_json(const rl_report* report, const char* path) {
  if (report == nullptr) return fail(RL_ERR_INVALID_ARGUMENT, "null report");
  return write_text(report->json, path);
}

rl_status rl_report_write_raw_csv(const rl_report* report, const char* path) {
  if (report == nullptr) return fail(RL_ERR_INVALID_ARGUMENT, "null report");
  return write_text(report->raw_csv, path);
}

rl_status rl_gamma_tail(int d, double x, double* out) {
  if (out == nullptr) return fail(RL_ERR_INVALID_ARGUMENT, "null output");
  return guarded([&] { *out = recordlab::gamma_tail(d, x); });
}

rl_status rl_expected_rho(double n, double b, int d, double* out) {
  if (out == nullptr) return fail(RL_ERR_INVALID_ARGUMENT, "null output");
  return guarded([&] { *out = recordlab::expected_rho(n, b, d); });
}

rl_status rl_shell_boundaries(double n, double a, int d, const char* omega_rule, rl_shell* out) {
  if (out == nullptr) return fail(RL_ERR_INVALID_ARGUMENT, "null output");
  return guarded([&] {
    const auto rule = recordlab::OmegaRule::parse(omega_rule == nullptr ? "" : omega_rule);
    const auto s = recordlab::shell(n, a, d, rule);
    *out = rl_shell{s.b_star, s.b,      s.b_lower, s.b_upper,  s.omega,
                    s.a_n,    s.lambda, s.c_n,     s.epsilon_n};
  });
}

rl_status rl_simulate_record_stats(uint64_t n, int d, uint64_t seed, uint64_t stream_id,
                                   const char* sampler, rl_record_stats* out) {
  if (out == nullptr) return fail(RL_ERR_INVALID_ARGUMENT, "null output");
  return guarded([&] {
    recordlab::RngStream rng(seed, stream_id);
    const auto front = recordlab::simulate_front(n, d, sampler_of(sampler), rng);
    const auto s = recordlab::record_stats(front);
    *out = rl_record_stats{s.phi, s.f_plus, static_cast<uint64_t>(s.count)};
  });
}

}  // extern "C"
