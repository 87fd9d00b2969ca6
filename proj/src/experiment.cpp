// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csampling Authors

#include "cs/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <tuple>

#include "cs/certificate.hpp"
#include "cs/parallel.hpp"
#include "cs/rng.hpp"
#include "cs/sampling.hpp"
#include "cs/transforms.hpp"

namespace cs {

namespace {

const std::vector<std::pair<ExperimentKind, const char*>> kKinds = {
    {ExperimentKind::Table1, "table1"},
    {ExperimentKind::NoiseletHaar, "noiselet_haar"},
    {ExperimentKind::PhaseCurve, "phase_curve"},
    {ExperimentKind::DeviationTail, "deviation_tail"},
    {ExperimentKind::Certify, "certify"},
};

const std::vector<std::pair<Basis, const char*>> kBases = {
    {Basis::Subband, "subband"},
    {Basis::Dft, "dft"},
    {Basis::NoiseletHaar, "noiselet_haar"},
};

std::size_t allowed_failures(const ExperimentConfig& config) {
  return static_cast<std::size_t>(std::floor((1.0 - config.success_target) * static_cast<double>(config.trials) + 1e-9));
}

std::size_t measurement_domain(const ExperimentConfig& config, unsigned scale) {
  if (config.basis == Basis::Subband) return config.n >> scale;
  return config.n;
}

std::vector<std::size_t> coarse_indices(std::size_t b) {
  std::vector<std::size_t> idx(b);
  for (std::size_t i = 0; i < b; ++i) idx[i] = i;
  return idx;
}

}  // namespace

std::string to_string(ExperimentKind k) {
  for (const auto& [kind, name] : kKinds)
    if (kind == k) return name;
  return "unknown";
}

std::string to_string(Basis b) {
  for (const auto& [basis, name] : kBases)
    if (basis == b) return name;
  return "unknown";
}

ExperimentKind experiment_kind_from_string(const std::string& s) {
  for (const auto& [kind, name] : kKinds)
    if (s == name) return kind;
  throw ConfigError("unknown experiment '" + s + "'");
}

Basis basis_from_string(const std::string& s) {
  for (const auto& [basis, name] : kBases)
    if (s == name) return basis;
  throw ConfigError("unknown basis '" + s + "'");
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (!(success_target > 0.0 && success_target <= 1.0)) throw ConfigError("success_target must lie in (0, 1]");
  if (!is_power_of_two(n) || n < 2) throw ConfigError("n must be a power of two, at least 2");
  if (format != "csv" && format != "json") throw ConfigError("format must be csv or json");
  if (batch < 1) throw ConfigError("batch must be at least 1");
  if (search.step < 1 || search.coarse_step < 1) throw ConfigError("search steps must be at least 1");
  try {
    solver.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  if (experiment == ExperimentKind::Table1 && basis != Basis::Subband)
    throw ConfigError("table1 runs on the subband basis");
  if (experiment == ExperimentKind::NoiseletHaar && basis != Basis::NoiseletHaar)
    throw ConfigError("noiselet_haar runs on the noiselet_haar basis");
  if ((experiment == ExperimentKind::PhaseCurve || experiment == ExperimentKind::DeviationTail ||
       experiment == ExperimentKind::Certify) && m_grid.empty())
    throw ConfigError("m_grid must be nonempty");

  if (basis == Basis::Subband) {
    if (scales.empty()) throw ConfigError("scales must be nonempty");
    for (unsigned j : scales)
      if (j < 1 || (std::size_t{1} << j) > n / 16) throw ConfigError("scale out of range for n");
  }
  if (coarse_direct || coarse_support) {
    if (basis != Basis::NoiseletHaar) throw ConfigError("coarse options apply to the noiselet_haar basis");
    for (std::size_t b : {coarse_direct, coarse_support})
      if (b && (!is_power_of_two(b) || b > n / 2)) throw ConfigError("coarse block must be a power of two <= n/2");
  }
  for (unsigned j : basis == Basis::Subband ? scales : std::vector<unsigned>{0}) {
    const std::size_t rows = measurement_domain(*this, j);
    const std::size_t cols = rows;
    for (std::size_t S : sparsities) {
      if (S > cols) throw ConfigError("sparsity exceeds signal dimension");
      if (S < coarse_support) throw ConfigError("sparsity smaller than the forced coarse support");
    }
    for (std::size_t m : m_grid)
      if (m < 1 || m > rows) throw ConfigError("m_grid entry outside [1, rows]");
    if (search.hi > rows) throw ConfigError("search.hi exceeds the measurement domain");
  }
  if (search.hi && search.lo > search.hi) throw ConfigError("search.lo exceeds search.hi");
}

Problem make_problem(Basis basis, std::size_t n, unsigned scale) {
  switch (basis) {
    case Basis::Subband:
      return {basis, scale, subband_system(n, scale).op};
    case Basis::Dft:
      return {basis, 0, dft(n)};
    case Basis::NoiseletHaar:
      return {basis, 0, compose(noiselet(n), haar(n))};
  }
  throw ConfigError("unknown basis");
}

bool ExperimentRecord::any_censored() const {
  return std::any_of(searches.begin(), searches.end(), [](const SearchResult& s) { return s.censored; });
}

std::uint64_t trial_seed(const ExperimentConfig& config, unsigned scale, std::size_t S, std::uint64_t trial_id) {
  return derive_seed(config.seed, {static_cast<std::uint64_t>(config.basis), scale, S, trial_id});
}

TrialRow run_trial(const ExperimentConfig& config, const Problem& problem, std::size_t S, std::size_t m,
                   std::uint64_t trial_id) {
  const auto t0 = std::chrono::steady_clock::now();
  const LinearOperator& U = problem.U;
  TrialRow row;
  row.basis = problem.basis;
  row.scale = problem.scale;
  row.S = S;
  row.m = m;
  row.trial_id = trial_id;
  row.seed = trial_seed(config, problem.scale, S, trial_id);

  const SparseModel model =
      random_model_with(U.cols(), S, coarse_indices(config.coarse_support), derive_seed(row.seed, {1}));
  const SampleSet omega = sample_uniform(U.rows(), m, derive_seed(row.seed, {2}));
  const RVec x0 = model.signal();

  RecoveryResult res;
  const std::size_t b = config.coarse_direct;
  if (b == 0) {
    res = recover(U, omega, model, config.solver);
  } else {
    // Coarse coefficients are known exactly; only the fine part is unknown.
    std::vector<std::size_t> fine(U.cols() - b);
    for (std::size_t i = 0; i < fine.size(); ++i) fine[i] = b + i;
    const RealSystem sys = realify(select_columns(restrict_rows(U, omega), fine));
    const RVec x_fine(x0.begin() + static_cast<std::ptrdiff_t>(b), x0.end());
    const RVec y = sys.map.apply(x_fine);
    res = basis_pursuit(sys.map, y, config.solver);
    RVec full(x0.begin(), x0.begin() + static_cast<std::ptrdiff_t>(b));
    full.insert(full.end(), res.x_hat.begin(), res.x_hat.end());
    res.x_hat = std::move(full);
    grade(res, x0);
  }
  row.exact = res.exact;
  row.converged = res.converged;
  row.status = to_string(res.status);
  row.rel_error_inf = res.rel_error_inf;
  row.iterations = res.iterations;

  if (config.certify && b == 0 && S > 0) {
    const CertificateReport cert = dual_vector(U, omega, model);
    row.strict = cert.strict;
    row.off_support_max = cert.off_support_max;
  }
  row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

Probe run_probe(const ExperimentConfig& config, const Problem& problem, std::size_t S, std::size_t m,
                std::vector<TrialRow>& rows, bool stop_early) {
  Probe probe;
  probe.m = m;
  const std::size_t allowed = allowed_failures(config);
  std::size_t failures = 0;
  for (std::size_t start = 0; start < config.trials; start += config.batch) {
    const std::size_t count = std::min(config.batch, config.trials - start);
    std::vector<TrialRow> batch(count);
    parallel_for(count, config.workers,
                 [&](std::size_t i) { batch[i] = run_trial(config, problem, S, m, start + i); });
    for (auto& row : batch) {
      probe.successes += row.exact ? 1 : 0;
      failures += row.exact ? 0 : 1;
      rows.push_back(std::move(row));
    }
    probe.trials_run += count;
    if (stop_early && failures > allowed) break;
  }
  probe.met = probe.trials_run == config.trials && failures <= allowed;
  return probe;
}

SearchResult find_min_measurements(const ExperimentConfig& config, const Problem& problem, std::size_t S,
                                   std::vector<TrialRow>& rows) {
  SearchResult result;
  result.S = S;
  result.scale = problem.scale;
  const std::size_t domain = problem.U.rows();
  const std::size_t hi = config.search.hi ? config.search.hi : domain;
  const std::size_t lo = std::min(hi, std::max<std::size_t>(config.search.lo, S + 1));
  const std::size_t start = std::clamp<std::size_t>(config.search.start ? config.search.start : 2 * S, lo, hi);
  const std::size_t step = config.search.step;
  const std::size_t coarse = std::max(config.search.coarse_step, step);

  std::map<std::size_t, bool> seen;
  auto probe = [&](std::size_t m) {
    if (auto it = seen.find(m); it != seen.end()) return it->second;
    const Probe p = run_probe(config, problem, S, m, rows);
    result.trace.push_back(p);
    seen[m] = p.met;
    return p.met;
  };

  // Bracket [fail, met] with a coarse stride, then refine on the step grid.
  std::optional<std::size_t> fail, met;
  if (probe(start)) {
    met = start;
    while (*met > lo) {
      const std::size_t next = *met - std::min(coarse, *met - lo);
      if (probe(next)) {
        met = next;
      } else {
        fail = next;
        break;
      }
    }
  } else {
    fail = start;
    while (*fail < hi) {
      const std::size_t next = *fail + std::min(coarse, hi - *fail);
      if (probe(next)) {
        met = next;
        break;
      }
      fail = next;
    }
  }
  if (!met) {
    result.censored = true;
    return result;
  }
  while (fail && *met - *fail > step) {
    const std::size_t gap_steps = (*met - *fail + step - 1) / step;
    const std::size_t mid = *fail + std::max<std::size_t>(1, gap_steps / 2) * step;
    if (mid >= *met) break;
    if (probe(mid)) {
      met = mid;
    } else {
      fail = mid;
    }
  }
  result.M = met;
  return result;
}

std::vector<CellSummary> summarize(const ExperimentConfig& config, const std::vector<TrialRow>& rows) {
  std::map<std::tuple<unsigned, std::size_t, std::size_t>, CellSummary> cells;
  for (const auto& row : rows) {
    auto& c = cells[{row.scale, row.S, row.m}];
    c.basis = row.basis;
    c.scale = row.scale;
    c.S = row.S;
    c.m = row.m;
    ++c.trials;
    c.successes += row.exact ? 1 : 0;
  }
  const std::size_t allowed = allowed_failures(config);
  std::vector<CellSummary> out;
  out.reserve(cells.size());
  for (auto& [key, c] : cells) {
    c.success_rate = static_cast<double>(c.successes) / static_cast<double>(c.trials);
    c.met_target = c.trials == config.trials && c.trials - c.successes <= allowed;
    out.push_back(c);
  }
  return out;
}

namespace {

std::vector<unsigned> problem_scales(const ExperimentConfig& config) {
  if (config.basis == Basis::Subband) return config.scales;
  return {0};
}

ExperimentRecord grid_experiment(const ExperimentConfig& config) {
  ExperimentRecord rec;
  rec.config = config;
  for (unsigned j : problem_scales(config)) {
    const Problem problem = make_problem(config.basis, config.n, j);
    for (std::size_t S : config.sparsities)
      for (std::size_t m : config.m_grid) run_probe(config, problem, S, m, rec.rows, false);
  }
  rec.cells = summarize(config, rec.rows);
  return rec;
}

}  // namespace

ExperimentRecord run_table1(const ExperimentConfig& config) {
  config.validate();
  ExperimentRecord rec;
  rec.config = config;
  std::vector<std::pair<unsigned, std::size_t>> cells;
  if (config.sparsities.empty()) {
    for (const auto& c : table1_reference())
      if (std::find(config.scales.begin(), config.scales.end(), c.scale) != config.scales.end())
        cells.emplace_back(c.scale, c.S);
  } else {
    for (unsigned j : config.scales)
      for (std::size_t S : config.sparsities) cells.emplace_back(j, S);
  }
  std::optional<Problem> problem;
  for (const auto& [j, S] : cells) {
    if (!problem || problem->scale != j) problem = make_problem(Basis::Subband, config.n, j);
    rec.searches.push_back(find_min_measurements(config, *problem, S, rec.rows));
  }
  rec.cells = summarize(config, rec.rows);
  return rec;
}

ExperimentRecord noiselet_haar_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentRecord rec;
  rec.config = config;
  const Problem problem = make_problem(Basis::NoiseletHaar, config.n, 0);
  rec.coherence = config.n <= kExactCoherenceLimit ? coherence(problem.U)
                                                    : coherence(problem.U, kExactCoherenceLimit, config.seed);
  for (std::size_t S : config.sparsities) {
    if (config.m_grid.empty()) {
      rec.searches.push_back(find_min_measurements(config, problem, S, rec.rows));
    } else {
      for (std::size_t m : config.m_grid) run_probe(config, problem, S, m, rec.rows, false);
    }
  }
  rec.cells = summarize(config, rec.rows);
  return rec;
}

ExperimentRecord phase_curve(const ExperimentConfig& config) {
  config.validate();
  return grid_experiment(config);
}

ExperimentRecord run_certify(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  c.certify = true;
  c.validate();
  return grid_experiment(c);
}

ExperimentRecord run_deviation(const ExperimentConfig& config) {
  config.validate();
  ExperimentRecord rec;
  rec.config = config;
  for (unsigned j : problem_scales(config)) {
    const Problem problem = make_problem(config.basis, config.n, j);
    for (std::size_t s : config.sparsities) {
      auto support = random_subset(problem.U.cols(), s, derive_seed(config.seed, {j, s}));
      std::sort(support.begin(), support.end());
      for (std::size_t m : config.m_grid) {
        DeviationCell cell;
        cell.s = s;
        cell.m = m;
        cell.tail = deviation_tail(problem.U, support, m, config.trials, derive_seed(config.seed, {j, s, m}),
                                   SamplingModel::BernoulliMOverN, config.workers);
        rec.deviations.push_back(cell);
      }
    }
  }
  return rec;
}

ExperimentRecord run_experiment(const ExperimentConfig& config) {
  switch (config.experiment) {
    case ExperimentKind::Table1:
      return run_table1(config);
    case ExperimentKind::NoiseletHaar:
      return noiselet_haar_experiment(config);
    case ExperimentKind::PhaseCurve:
      return phase_curve(config);
    case ExperimentKind::DeviationTail:
      return run_deviation(config);
    case ExperimentKind::Certify:
      return run_certify(config);
  }
  throw ConfigError("unknown experiment");
}

const std::vector<Table1Cell>& table1_reference() {
  static const std::vector<Table1Cell> cells = {
      {1, 50, 100}, {1, 25, 68}, {1, 15, 49}, {2, 25, 56}, {2, 15, 40}, {2, 8, 27}, {3, 15, 35}, {3, 8, 24},
  };
  return cells;
}

}  // namespace cs
