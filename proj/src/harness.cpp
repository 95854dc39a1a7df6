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

#include "recordlab/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "recordlab/analytics.hpp"
#include "recordlab/distances.hpp"
#include "recordlab/error.hpp"
#include "recordlab/parallel.hpp"
#include "recordlab/poisson_lab.hpp"

namespace recordlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void throw_usage(const std::string& what) { throw Error(ErrorCode::kUsage, what); }

const std::pair<Subcommand, const char*> kSubcommands[] = {
    {Subcommand::kSimulate, "simulate"},
    {Subcommand::kGumbelCheck, "gumbel-check"},
    {Subcommand::kPoissonCheck, "poisson-check"},
    {Subcommand::kMeanCheck, "mean-check"},
    {Subcommand::kSmallest2Check, "smallest2-check"},
    {Subcommand::kConjecture, "conjecture"},
    {Subcommand::kBoundsTable, "bounds-table"},
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) {
    return "";
  }
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) {
      throw_usage("empty entry in list '" + text + "'");
    }
    out.push_back(item);
  }
  if (out.empty()) {
    throw_usage("empty list");
  }
  return out;
}

double parse_real(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty() || !std::isfinite(v)) {
    throw_usage(key + ": not a finite number: '" + text + "'");
  }
  return v;
}

std::uint64_t parse_count(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const auto* first = text.data();
  const auto* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec == std::errc() && ptr == last) {
    return v;
  }
  // Also accept integral scientific notation such as 1e5.
  const double r = parse_real(key, text);
  if (!(r >= 0.0) || r != std::floor(r) || r > 9.2e18) {
    throw_usage(key + ": not a nonnegative integer: '" + text + "'");
  }
  return static_cast<std::uint64_t>(r);
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
  if (text == "0" || text == "false" || text == "no" || text == "off") return false;
  throw_usage(key + ": expected a boolean, got '" + text + "'");
}

}  // namespace

std::optional<Subcommand> parse_subcommand(const std::string& name) {
  for (const auto& [cmd, text] : kSubcommands) {
    if (name == text) {
      return cmd;
    }
  }
  return std::nullopt;
}

std::string subcommand_name(Subcommand cmd) {
  for (const auto& [c, text] : kSubcommands) {
    if (c == cmd) {
      return text;
    }
  }
  return "unknown";
}

std::vector<std::string> subcommand_names() {
  std::vector<std::string> out;
  for (const auto& entry : kSubcommands) {
    out.emplace_back(entry.second);
  }
  return out;
}

double OffsetEntry::resolve(double n, int d) const {
  switch (kind) {
    case Kind::kMinusAn:
      return -a_n_of(n, d);
    case Kind::kPlusAn:
      return a_n_of(n, d);
    case Kind::kValue:
      break;
  }
  return value;
}

std::string OffsetEntry::text() const {
  switch (kind) {
    case Kind::kMinusAn:
      return "-a_n";
    case Kind::kPlusAn:
      return "a_n";
    case Kind::kValue:
      break;
  }
  return format_real(value);
}

void SimConfig::set(const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  if (key == "d") {
    const std::uint64_t v = parse_count(key, value);
    if (v < 2 || v > 64) {
      throw_usage("d must lie in [2, 64]");
    }
    d = static_cast<int>(v);
  } else if (key == "n") {
    std::vector<double> grid;
    for (const auto& item : split_list(value)) {
      const double v = parse_real(key, item);
      if (!(v >= 1.0)) {
        throw_usage("n entries must be >= 1");
      }
      grid.push_back(v);
    }
    n_grid = std::move(grid);
  } else if (key == "a") {
    if (value == "auto") {
      a_grid.clear();
      return;
    }
    std::vector<OffsetEntry> grid;
    for (const auto& item : split_list(value)) {
      if (item == "-a_n") {
        grid.push_back({OffsetEntry::Kind::kMinusAn, 0.0});
      } else if (item == "a_n" || item == "+a_n") {
        grid.push_back({OffsetEntry::Kind::kPlusAn, 0.0});
      } else {
        grid.push_back({OffsetEntry::Kind::kValue, parse_real(key, item)});
      }
    }
    a_grid = std::move(grid);
  } else if (key == "trials") {
    std::vector<std::uint64_t> t;
    for (const auto& item : split_list(value)) {
      const std::uint64_t v = parse_count(key, item);
      if (v < 1) {
        throw_usage("trials must be >= 1");
      }
      t.push_back(v);
    }
    trials = std::move(t);
  } else if (key == "seed") {
    seed = parse_count(key, value);
  } else if (key == "omega") {
    try {
      omega = OmegaRule::parse(value);
    } catch (const Error& e) {
      throw_usage(e.what());
    }
  } else if (key == "workers") {
    const std::uint64_t v = parse_count(key, value);
    if (v < 1 || v > 1024) {
      throw_usage("workers must lie in [1, 1024]");
    }
    workers = static_cast<int>(v);
  } else if (key == "out") {
    if (value.empty()) {
      throw_usage("out must be a nonempty path");
    }
    output_dir = value;
  } else if (key == "sampler") {
    if (value == "direct") {
      sampler = Sampler::kDirect;
    } else if (value == "skip") {
      sampler = Sampler::kRecordSkip;
    } else if (value == "auto") {
      sampler = Sampler::kAuto;
    } else {
      throw_usage("sampler must be direct|skip|auto");
    }
  } else if (key == "raw") {
    raw = parse_bool(key, value);
  } else if (key == "budget") {
    const double v = parse_real(key, value);
    if (!(v >= 1.0)) {
      throw_usage("budget must be >= 1");
    }
    budget = v;
  } else {
    throw_usage("unknown configuration key '" + key + "'");
  }
}

void SimConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open config file '" + path + "'");
  }
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw_usage(path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    set(line.substr(0, eq), line.substr(eq + 1));
  }
}

void SimConfig::apply_environment() {
  if (const char* env = std::getenv("RECORDLAB_SEED"); env != nullptr && *env != '\0') {
    seed = parse_count("RECORDLAB_SEED", env);
  }
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kPass:
      return "pass";
    case Verdict::kFail:
      return "fail";
    case Verdict::kReport:
      break;
  }
  return "report";
}

bool Report::passed() const noexcept {
  return std::none_of(rows.begin(), rows.end(),
                      [](const ReportRow& r) { return r.verdict == Verdict::kFail; });
}

// ---------------------------------------------------------------------------
// Experiments

namespace {

Verdict gate(bool ok) { return ok ? Verdict::kPass : Verdict::kFail; }

struct Stat {
  double mean;
  double se;
};

template <typename T>
Stat mean_se(const std::vector<T>& v) {
  const auto n = static_cast<double>(v.size());
  double m = 0.0;
  for (const auto& x : v) m += static_cast<double>(x);
  m /= n;
  double ss = 0.0;
  for (const auto& x : v) {
    const double z = static_cast<double>(x) - m;
    ss += z * z;
  }
  const double se = v.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  return {m, se};
}

class Runner {
 public:
  Runner(Subcommand cmd, const SimConfig& cfg) : cmd_(cmd), cfg_(cfg) {
    report_.command = cmd;
    check_dimension(cfg.d);
  }

  Report finish() {
    std::stable_sort(report_.rows.begin(), report_.rows.end(),
                     [](const ReportRow& x, const ReportRow& y) {
                       if (x.experiment != y.experiment) return x.experiment < y.experiment;
                       if (x.n != y.n) return x.n < y.n;
                       return x.a < y.a;
                     });
    return std::move(report_);
  }

  void simulate();
  void gumbel_check();
  void poisson_check();
  void mean_check();
  void smallest2_check();
  void conjecture();
  void bounds_table();

 private:
  std::vector<double> n_grid(std::vector<double> fallback) const {
    return cfg_.n_grid.empty() ? std::move(fallback) : cfg_.n_grid;
  }

  std::uint64_t requested_trials(std::size_t idx, std::size_t grid_size,
                                 const std::vector<std::uint64_t>& fallback) const {
    const auto& t = cfg_.trials.empty() ? fallback : cfg_.trials;
    if (t.size() == 1) {
      return t[0];
    }
    if (t.size() != grid_size) {
      throw_usage("trials must hold one value or one value per n");
    }
    return t[idx];
  }

  // Caps the trial count so that one command draws at most `budget`
  // observations per epoch.
  std::uint64_t capped(std::uint64_t requested, double points_per_trial) const {
    const double cap = std::floor(cfg_.budget / std::max(1.0, points_per_trial));
    return std::max<std::uint64_t>(1, std::min<std::uint64_t>(
                                          requested, static_cast<std::uint64_t>(
                                                         std::min(cap, 9.0e18))));
  }

  std::vector<double> offsets(double n) const {
    std::vector<double> out;
    if (cfg_.a_grid.empty()) {
      const double an = a_n_of(n, cfg_.d);
      out = {-an, 0.0, an};
    } else {
      for (const auto& e : cfg_.a_grid) {
        out.push_back(e.resolve(n, cfg_.d));
      }
    }
    return out;
  }

  std::uint64_t stream_seed(std::uint64_t block, std::size_t n_idx, std::size_t a_idx = 0) const {
    const std::uint64_t tag = (static_cast<std::uint64_t>(cmd_) << 48) | (block << 32) |
                              (static_cast<std::uint64_t>(n_idx) << 16) |
                              static_cast<std::uint64_t>(a_idx);
    return derive_seed(cfg_.seed, tag);
  }

  template <typename T, typename F>
  std::vector<T> trials_of(std::uint64_t count, std::uint64_t seed, F&& body) const {
    std::vector<T> out(count);
    parallel_for(count, cfg_.workers, [&](std::uint64_t i) {
      RngStream rng(seed, i);
      out[i] = body(rng);
    });
    return out;
  }

  void add(std::string statistic, double n, double a, double value, double se_or_band,
           double bound, std::string rule, Verdict verdict, std::uint64_t trials) {
    report_.rows.push_back({subcommand_name(cmd_), n, cfg_.d, a, std::move(statistic), value,
                            se_or_band, bound, std::move(rule), verdict, trials});
  }

  static std::uint64_t as_epoch(double n) {
    if (!(n >= 1.0) || n != std::floor(n) || n > 9.0e18) {
      throw_usage("simulation epochs must be integers in [1, 9e18]");
    }
    return static_cast<std::uint64_t>(n);
  }

  Subcommand cmd_;
  const SimConfig& cfg_;
  Report report_;
};

void Runner::simulate() {
  const auto grid = n_grid({1e4});
  const int d = cfg_.d;
  if (cfg_.raw) {
    report_.raw.header = {"n", "trial", "phi", "f_plus", "count"};
    for (int j = 0; j < d; ++j) report_.raw.header.push_back("sigma_dir_" + std::to_string(j));
    for (int j = 0; j < d; ++j) report_.raw.header.push_back("largest_dir_" + std::to_string(j));
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::uint64_t n = as_epoch(grid[i]);
    const std::uint64_t t = capped(requested_trials(i, grid.size(), {1000}),
                                   sampled_points_per_trial(n, d, cfg_.sampler));
    const auto stats = trials_of<std::optional<RecordStats>>(t, stream_seed(0, i), [&](RngStream& r) {
      return std::optional<RecordStats>(record_stats(simulate_front(n, d, cfg_.sampler, r)));
    });
    std::vector<double> counts(t), phis(t), fplus(t);
    for (std::uint64_t k = 0; k < t; ++k) {
      counts[k] = static_cast<double>(stats[k]->count);
      phis[k] = stats[k]->phi;
      fplus[k] = stats[k]->f_plus;
      if (cfg_.raw) {
        std::vector<std::string> row = {format_real(grid[i]), std::to_string(k),
                                        format_real(stats[k]->phi), format_real(stats[k]->f_plus),
                                        std::to_string(stats[k]->count)};
        for (double c : stats[k]->sigma_direction.coords()) row.push_back(format_real(c));
        for (double c : stats[k]->largest_direction.coords()) row.push_back(format_real(c));
        report_.raw.rows.push_back(std::move(row));
      }
    }
    const Stat c = mean_se(counts);
    const double target = expected_rho(grid[i], std::numeric_limits<double>::infinity(), d);
    add("front_size_mean", grid[i], 0.0, c.mean, c.se, target, "|mean-target|<=4se",
        gate(std::fabs(c.mean - target) <= 4.0 * c.se + 1e-9), t);
    const Stat p = mean_se(phis);
    add("phi_mean", grid[i], 0.0, p.mean, p.se, kNaN, "report", Verdict::kReport, t);
    const Stat f = mean_se(fplus);
    add("f_plus_mean", grid[i], 0.0, f.mean, f.se, kNaN, "report", Verdict::kReport, t);
  }
}

void Runner::gumbel_check() {
  const auto grid = n_grid({1e3, 1e5, 1e7});
  const int d = cfg_.d;
  if (cfg_.raw) {
    report_.raw.header = {"n", "trial", "phi", "phi_circ"};
  }
  std::vector<double> dks;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::uint64_t n = as_epoch(grid[i]);
    const double nd = grid[i];
    iterated_logs(nd);
    const std::uint64_t t = capped(requested_trials(i, grid.size(), {100000, 100000, 10000}),
                                   sampled_points_per_trial(n, d, cfg_.sampler));
    const auto phis = trials_of<double>(t, stream_seed(0, i), [&](RngStream& r) {
      return record_stats(simulate_front(n, d, cfg_.sampler, r)).phi;
    });
    std::vector<double> circ(t);
    for (std::uint64_t k = 0; k < t; ++k) {
      circ[k] = phi_circ(phis[k], nd, d);
      if (cfg_.raw) {
        report_.raw.rows.push_back(
            {format_real(nd), std::to_string(k), format_real(phis[k]), format_real(circ[k])});
      }
    }
    const Stat m = mean_se(circ);
    const double dk =
        kolmogorov_distance(EmpiricalSample(circ), [d](double x) { return limit_cdf(x, d); });
    dks.push_back(dk);
    add("d_K", nd, 0.0, dk, dkw_radius(t, 0.99), 0.0, "report", Verdict::kReport, t);
    add("phi_circ_mean", nd, 0.0, m.mean, m.se, kNaN, "report", Verdict::kReport, t);
  }
  if (dks.size() >= 2) {
    const bool finite = std::all_of(dks.begin(), dks.end(), [](double v) { return std::isfinite(v); });
    const double diff = dks.back() - dks.front();
    add("d_K_trend", grid.back(), 0.0, diff, kNaN, 0.0, "d_K(n_max)<d_K(n_min)",
        gate(finite && diff < 0.0), 0);
  }
}

void Runner::poisson_check() {
  const auto grid = n_grid({1e6});
  const int d = cfg_.d;
  constexpr std::uint32_t kResamples = 500;
  constexpr double kLevel = 0.99;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::uint64_t n = as_epoch(grid[i]);
    const double nd = grid[i];
    const std::uint64_t t = capped(requested_trials(i, grid.size(), {100000}),
                                   sampled_points_per_trial(n, d, cfg_.sampler));
    const auto as = offsets(nd);
    std::vector<ShellBoundaries> shells;
    for (double a : as) {
      shells.push_back(shell(nd, a, d, cfg_.omega));
      if (std::fabs(a) > shells.back().a_n) {
        throw Error(ErrorCode::kDomain, "offset a must satisfy |a| <= a_n");
      }
    }
    // One front per trial serves every offset.
    const auto fronts = trials_of<std::vector<std::uint64_t>>(t, stream_seed(0, i), [&](RngStream& r) {
      const ParetoFront f = simulate_front(n, d, cfg_.sampler, r);
      std::vector<std::uint64_t> out;
      const std::size_t below = rho(f, shells.front().b_lower);
      for (const auto& s : shells) {
        const std::size_t at_b = rho(f, s.b);
        out.push_back(at_b - std::min(at_b, below));
        out.push_back(at_b);
      }
      return out;
    });
    for (std::size_t j = 0; j < as.size(); ++j) {
      const auto& s = shells[j];
      std::vector<std::uint64_t> window(t), at_b(t);
      for (std::uint64_t k = 0; k < t; ++k) {
        window[k] = fronts[k][2 * j];
        at_b[k] = fronts[k][2 * j + 1];
      }
      const auto big_n = trials_of<std::uint64_t>(t, stream_seed(1, i, j), [&](RngStream& r) {
        return sample_N(nd, s.a, d, r, cfg_.omega);
      });
      const auto nbar = trials_of<std::uint64_t>(t, stream_seed(2, i, j), [&](RngStream& r) {
        return sample_Nbar(nd, s.a, d, r, cfg_.omega);
      });
      RngStream boot(stream_seed(3, i, j), 0);
      const double pn = p_n(nd, d, cfg_.omega);
      const TvEstimate tv1 = empirical_tv(window, big_n, kResamples, kLevel, boot);
      add("tv_window_vs_N", nd, s.a, tv1.estimate, tv1.band, 2.0 * pn, "tv<=2pn+band",
          gate(tv1.estimate <= 2.0 * pn + tv1.band), t);
      const double pe = prob_En(nd, d);
      const TvEstimate tv2 = empirical_tv(big_n, nbar, kResamples, kLevel, boot);
      add("tv_N_vs_Nbar", nd, s.a, tv2.estimate, tv2.band, pe, "tv<=P(En)+band",
          gate(tv2.estimate <= pe + tv2.band), t);
      const double tv3 = tv_discrete(empirical_pmf(at_b), poisson_pmf(s.lambda));
      add("tv_rho_vs_poisson_lambda", nd, s.a, tv3, kNaN, s.lambda, "report", Verdict::kReport, t);
      const double mean_nbar = expected_Nbar_exact(nd, s.a, d, cfg_.omega);
      const double tv4 = tv_discrete(empirical_pmf(nbar), poisson_pmf(mean_nbar));
      add("tv_Nbar_vs_poisson_mean", nd, s.a, tv4, kNaN, mean_nbar, "report", Verdict::kReport, t);
    }
  }
}

void Runner::mean_check() {
  const auto grid = n_grid({1e4, 1e6});
  const int d = cfg_.d;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::uint64_t n = as_epoch(grid[i]);
    const double nd = grid[i];
    const std::uint64_t req = requested_trials(i, grid.size(), {10000});
    const std::uint64_t t_front = capped(req, sampled_points_per_trial(n, d, cfg_.sampler));
    const auto as = offsets(nd);
    std::vector<ShellBoundaries> shells;
    for (double a : as) {
      shells.push_back(shell(nd, a, d, cfg_.omega));
      if (std::fabs(a) > shells.back().a_n) {
        throw Error(ErrorCode::kDomain, "offset a must satisfy |a| <= a_n");
      }
    }
    const auto fronts =
        trials_of<std::vector<std::uint64_t>>(t_front, stream_seed(0, i), [&](RngStream& r) {
          const ParetoFront f = simulate_front(n, d, cfg_.sampler, r);
          std::vector<std::uint64_t> out;
          for (const auto& s : shells) {
            out.push_back(rho(f, s.b));
            out.push_back(rho(f, s.b) - rho(f, s.b_star));
          }
          return out;
        });
    for (std::size_t j = 0; j < as.size(); ++j) {
      const auto& s = shells[j];
      std::vector<double> at_b(t_front), diff(t_front);
      for (std::uint64_t k = 0; k < t_front; ++k) {
        at_b[k] = static_cast<double>(fronts[k][2 * j]);
        diff[k] = static_cast<double>(fronts[k][2 * j + 1]);
      }
      const Stat m = mean_se(at_b);
      const double target = expected_rho(nd, s.b, d);
      add("mean_rho_b", nd, s.a, m.mean, m.se, target, "|mean-target|<=4se",
          gate(std::fabs(m.mean - target) <= 4.0 * m.se + 1e-9), t_front);
      const Stat dm = mean_se(diff);
      const double delta = delta_mean(nd, s.a, d);
      add("mean_delta", nd, s.a, dm.mean, dm.se, delta, "|mean-target|<=4se",
          gate(std::fabs(dm.mean - delta) <= 4.0 * dm.se + 1e-9), t_front);

      const std::uint64_t t_shell = req;
      const auto nbar = trials_of<std::uint64_t>(t_shell, stream_seed(1, i, j), [&](RngStream& r) {
        return sample_Nbar(nd, s.a, d, r, cfg_.omega);
      });
      const Stat nb = mean_se(nbar);
      const Bracket br = expected_Nbar_bracket(nd, s.a, d, cfg_.omega);
      add("mean_Nbar", nd, s.a, nb.mean, nb.se, expected_Nbar_exact(nd, s.a, d, cfg_.omega),
          "in[lo-3se,hi+3se]", gate(br.contains(nb.mean, 3.0 * nb.se)), t_shell);
      add("Nbar_bracket_lo", nd, s.a, br.lo(), kNaN, kNaN, "report", Verdict::kReport, 0);
      add("Nbar_bracket_hi", nd, s.a, br.hi(), kNaN, kNaN, "report", Verdict::kReport, 0);
    }
  }
}

void Runner::smallest2_check() {
  const int d = cfg_.d;
  const std::uint64_t t = capped(requested_trials(0, 1, {1000000}), 2.0);
  const SmallestMaxNormLaw law(d);
  add("density_mass", 2.0, 0.0, law.total_mass(), 1e-6, 1.0, "|mass-1|<=1e-6",
      gate(std::fabs(law.total_mass() - 1.0) <= 1e-6), 0);
  const auto stats = trials_of<std::pair<double, double>>(t, stream_seed(0, 0), [&](RngStream& r) {
    const RecordStats s = record_stats(simulate_front_direct(2, d, r));
    return std::make_pair(s.phi, static_cast<double>(s.count));
  });
  std::vector<double> norms(t), counts(t);
  for (std::uint64_t k = 0; k < t; ++k) {
    norms[k] = stats[k].first;
    counts[k] = stats[k].second;
  }
  if (cfg_.raw) {
    report_.raw.header = {"trial", "phi", "count"};
    for (std::uint64_t k = 0; k < t; ++k) {
      report_.raw.rows.push_back(
          {std::to_string(k), format_real(norms[k]), format_real(counts[k])});
    }
  }
  const double dk =
      kolmogorov_distance(EmpiricalSample(std::move(norms)), [&](double r) { return law.cdf(r); });
  const double radius = dkw_radius(t, 0.999);
  add("d_K_norm_vs_quadrature", 2.0, 0.0, dk, radius, radius, "d_K<=dkw(0.999)",
      gate(dk <= radius), t);
  const Stat c = mean_se(counts);
  const double target = expected_rho(2.0, std::numeric_limits<double>::infinity(), d);
  add("front_size_mean", 2.0, 0.0, c.mean, c.se, target, "|mean-target|<=4se",
      gate(std::fabs(c.mean - target) <= 4.0 * c.se + 1e-9), t);
}

void Runner::conjecture() {
  const auto grid = n_grid({1e3});
  const int d = cfg_.d;
  constexpr std::uint32_t kPermutations = 1999;
  constexpr double kLevel = 1e-3;
  // First coordinate of a uniform simplex direction: Beta(1, d - 1).
  auto marginal = [d](double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return 1.0 - std::pow(1.0 - x, d - 1);
  };
  struct Sample {
    double phi, sigma0, f_plus, largest0;
  };
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::uint64_t n = as_epoch(grid[i]);
    const double nd = grid[i];
    const std::uint64_t t = capped(requested_trials(i, grid.size(), {100000}),
                                   sampled_points_per_trial(n, d, cfg_.sampler));
    const auto samples = trials_of<Sample>(t, stream_seed(0, i), [&](RngStream& r) {
      const RecordStats s = record_stats(simulate_front(n, d, cfg_.sampler, r));
      return Sample{s.phi, s.sigma_direction.coords()[0], s.f_plus,
                    s.largest_direction.coords()[0]};
    });
    std::vector<double> sig(t), lar(t);
    std::vector<std::pair<double, double>> sig_pairs(t), lar_pairs(t);
    for (std::uint64_t k = 0; k < t; ++k) {
      sig[k] = samples[k].sigma0;
      lar[k] = samples[k].largest0;
      sig_pairs[k] = {samples[k].phi, samples[k].sigma0};
      lar_pairs[k] = {samples[k].f_plus, samples[k].largest0};
    }
    const auto tn = static_cast<double>(t);
    const double d_lar = kolmogorov_distance(EmpiricalSample(lar), marginal);
    const double p_lar = ks_pvalue(d_lar, tn);
    add("largest_direction_ks_pvalue", nd, 0.0, p_lar, d_lar, kLevel, "p>1e-3",
        gate(p_lar > kLevel), t);
    RngStream perm(stream_seed(1, i), 0);
    const double q_lar = independence_test(lar_pairs, kPermutations, perm);
    add("largest_independence_pvalue", nd, 0.0, q_lar, kNaN, kLevel, "p>1e-3",
        gate(q_lar > kLevel), t);
    const double d_sig = kolmogorov_distance(EmpiricalSample(sig), marginal);
    add("smallest_direction_ks_pvalue", nd, 0.0, ks_pvalue(d_sig, tn), d_sig, kLevel, "report",
        Verdict::kReport, t);
    const double q_sig = independence_test(sig_pairs, kPermutations, perm);
    add("smallest_independence_pvalue", nd, 0.0, q_sig, kNaN, kLevel, "report", Verdict::kReport,
        t);
  }
}

void Runner::bounds_table() {
  const auto grid = n_grid({1e4, 1e6, 1e8, 1e100});
  const int d = cfg_.d;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double nd = grid[i];
    const std::uint64_t mc = std::max<std::uint64_t>(10000, requested_trials(i, grid.size(), {100000}));
    const auto as = offsets(nd);
    for (std::size_t j = 0; j < as.size(); ++j) {
      const ShellBoundaries s = shell(nd, as[j], d, cfg_.omega);
      const double a = s.a;
      const double pn = p_n(nd, d, cfg_.omega);
      add("p_n", nd, a, pn, kNaN, kNaN, "report", Verdict::kReport, 0);
      add("prob_En", nd, a, prob_En(nd, d), kNaN, kNaN, "report", Verdict::kReport, 0);
      if (nd <= 1e7 && nd == std::floor(nd)) {
        const double tv = tv_binomial_poisson(static_cast<std::uint64_t>(nd), pn);
        add("tv_binomial_poisson_pn", nd, a, tv, kNaN, pn, "tv<=p_n", gate(tv <= pn), 0);
      }
      add("lambda", nd, a, s.lambda, kNaN, kNaN, "report", Verdict::kReport, 0);
      add("delta_mean", nd, a, delta_mean(nd, a, d), kNaN, kNaN, "report", Verdict::kReport, 0);
      add("expected_Nbar", nd, a, expected_Nbar_exact(nd, a, d, cfg_.omega), kNaN, kNaN, "report",
          Verdict::kReport, 0);

      RngStream q_rng(stream_seed(0, i, j), 0);
      const QnResult q = qn_bound_and_estimate(d, s.epsilon_n, mc, q_rng);
      add("q_n", nd, a, q.estimate, q.se, q.bound, "est<=bound+3se",
          gate(q.estimate <= q.bound + 3.0 * q.se), mc);
      RngStream j_rng(stream_seed(1, i, j), 0);
      const McEstimate jn = chen_stein_Jn(nd, a, d, mc, j_rng, cfg_.omega);
      const double chain = jn_upper_chain(nd, a, d, cfg_.omega);
      add("J_n", nd, a, jn.estimate, jn.se, chain, "est<=chain+3se",
          gate(jn.estimate <= chain + 3.0 * jn.se), mc);

      const MomentBounds mb = moment_bounds(nd, s.c_n, d);
      add("moment_upper_leq", nd, a, mb.upper_leq, kNaN, kNaN, "report", Verdict::kReport, 0);
      add("moment_upper_geq", nd, a, mb.upper_geq, kNaN, kNaN, "report", Verdict::kReport, 0);
      const ErhoLowerResult er = erho_blower_bound(nd, d, cfg_.omega);
      add("erho_b_lower", nd, a, er.value, kNaN, er.leading, "report", Verdict::kReport, 0);
    }
  }
}

}  // namespace

Report run(Subcommand cmd, const SimConfig& config) {
  Runner r(cmd, config);
  switch (cmd) {
    case Subcommand::kSimulate:
      r.simulate();
      break;
    case Subcommand::kGumbelCheck:
      r.gumbel_check();
      break;
    case Subcommand::kPoissonCheck:
      r.poisson_check();
      break;
    case Subcommand::kMeanCheck:
      r.mean_check();
      break;
    case Subcommand::kSmallest2Check:
      r.smallest2_check();
      break;
    case Subcommand::kConjecture:
      r.conjecture();
      break;
    case Subcommand::kBoundsTable:
      r.bounds_table();
      break;
  }
  return r.finish();
}

// ---------------------------------------------------------------------------
// Serialization

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (ec != std::errc()) {
    throw Error(ErrorCode::kInternal, "real formatting failed");
  }
  return std::string(buf, ptr);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void csv_line(std::string& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  out += "\r\n";
}

nlohmann::json json_real(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

std::string to_csv(const Report& report) {
  std::string out;
  csv_line(out, {"experiment", "n", "d", "a", "statistic", "value", "se_or_band",
                 "bound_or_target", "rule", "pass", "trials"});
  for (const auto& r : report.rows) {
    csv_line(out, {r.experiment, format_real(r.n), std::to_string(r.d), format_real(r.a),
                   r.statistic, format_real(r.value), format_real(r.se_or_band),
                   format_real(r.bound_or_target), r.rule, verdict_name(r.verdict),
                   std::to_string(r.trials)});
  }
  return out;
}

std::string raw_to_csv(const RawTable& raw) {
  std::string out;
  if (raw.header.empty()) {
    return out;
  }
  csv_line(out, raw.header);
  for (const auto& row : raw.rows) {
    csv_line(out, row);
  }
  return out;
}

std::string to_json(const Report& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"experiment", r.experiment},
                    {"n", json_real(r.n)},
                    {"d", r.d},
                    {"a", json_real(r.a)},
                    {"statistic", r.statistic},
                    {"value", json_real(r.value)},
                    {"se_or_band", json_real(r.se_or_band)},
                    {"bound_or_target", json_real(r.bound_or_target)},
                    {"rule", r.rule},
                    {"pass", verdict_name(r.verdict)},
                    {"trials", r.trials}});
  }
  nlohmann::json doc = {{"command", subcommand_name(report.command)},
                        {"passed", report.passed()},
                        {"rows", std::move(rows)}};
  return doc.dump(2) + "\n";
}

}  // namespace recordlab
