// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csampling Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cs/analysis.hpp"
#include "cs/linear_operator.hpp"
#include "cs/solver.hpp"

namespace cs {

/// Invalid experiment configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind { Table1, NoiseletHaar, PhaseCurve, DeviationTail, Certify };
enum class Basis { Subband, Dft, NoiseletHaar };

std::string to_string(ExperimentKind k);
std::string to_string(Basis b);
ExperimentKind experiment_kind_from_string(const std::string& s);
Basis basis_from_string(const std::string& s);

/// Bracketing search for M(S, j). Zero fields mean "derive from S and the
/// measurement domain": start at 2S, range (S, rows].
struct SearchSpec {
  std::size_t start = 0;
  std::size_t lo = 0;
  std::size_t hi = 0;
  std::size_t step = 1;
  std::size_t coarse_step = 4;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Table1;
  Basis basis = Basis::Subband;
  std::size_t n = 1024;
  std::vector<unsigned> scales{1};
  std::vector<std::size_t> sparsities;
  std::vector<std::size_t> m_grid;
  SearchSpec search;
  std::size_t trials = 100;
  double success_target = 1.0;
  std::uint64_t seed = 1;
  SolverOptions solver;
  std::string output_path;
  std::string format = "json";
  std::size_t coarse_direct = 0;   // coarsest Haar coefficients measured directly
  std::size_t coarse_support = 0;  // coarsest Haar coefficients forced into T
  bool certify = false;
  unsigned workers = 0;            // 0: hardware concurrency
  std::size_t batch = 16;          // trials per scheduling batch
  bool timing = false;             // include wall times in outputs

  /// Throws ConfigError.
  void validate() const;
};

/// The measurement system behind one experiment cell.
struct Problem {
  Basis basis;
  unsigned scale = 0;
  LinearOperator U;
};

Problem make_problem(Basis basis, std::size_t n, unsigned scale);

struct TrialRow {
  Basis basis = Basis::Subband;
  unsigned scale = 0;
  std::size_t S = 0;
  std::size_t m = 0;
  std::uint64_t trial_id = 0;
  std::uint64_t seed = 0;
  bool exact = false;
  bool converged = false;
  std::string status;
  double rel_error_inf = 0.0;
  int iterations = 0;
  std::optional<bool> strict;
  std::optional<double> off_support_max;
  double wall_ms = 0.0;
};

struct CellSummary {
  Basis basis = Basis::Subband;
  unsigned scale = 0;
  std::size_t S = 0;
  std::size_t m = 0;
  std::size_t trials = 0;
  std::size_t successes = 0;
  double success_rate = 0.0;
  bool met_target = false;
};

struct Probe {
  std::size_t m = 0;
  std::size_t trials_run = 0;
  std::size_t successes = 0;
  bool met = false;
};

struct SearchResult {
  std::size_t S = 0;
  unsigned scale = 0;
  std::optional<std::size_t> M;
  bool censored = false;
  std::vector<Probe> trace;
};

struct DeviationCell {
  std::size_t s = 0;
  std::size_t m = 0;
  DeviationTail tail;
};

struct ExperimentRecord {
  ExperimentConfig config;
  std::vector<TrialRow> rows;
  std::vector<CellSummary> cells;
  std::vector<SearchResult> searches;
  std::vector<DeviationCell> deviations;
  std::optional<CoherenceResult> coherence;

  bool any_censored() const;
};

/// Per-trial seed: fixed by (config seed, basis, scale, S, trial id) and
/// independent of m, so Omega grows by nesting as m increases.
std::uint64_t trial_seed(const ExperimentConfig& config, unsigned scale, std::size_t S, std::uint64_t trial_id);

/// One (T, z, Omega) draw, measurement, solve, optional certificate.
TrialRow run_trial(const ExperimentConfig& config, const Problem& problem, std::size_t S, std::size_t m,
                   std::uint64_t trial_id);

/// Runs up to config.trials trials at one (S, m) in fixed-size batches and
/// stops once the target can no longer be met. Appends rows to `rows`.
Probe run_probe(const ExperimentConfig& config, const Problem& problem, std::size_t S, std::size_t m,
                std::vector<TrialRow>& rows, bool stop_early = true);

/// Smallest m reaching config.success_target over config.trials trials.
SearchResult find_min_measurements(const ExperimentConfig& config, const Problem& problem, std::size_t S,
                                   std::vector<TrialRow>& rows);

ExperimentRecord run_table1(const ExperimentConfig& config);
ExperimentRecord noiselet_haar_experiment(const ExperimentConfig& config);
ExperimentRecord phase_curve(const ExperimentConfig& config);
ExperimentRecord run_deviation(const ExperimentConfig& config);
ExperimentRecord run_certify(const ExperimentConfig& config);

/// Dispatches on config.experiment.
ExperimentRecord run_experiment(const ExperimentConfig& config);

/// Aggregates recomputed from rows: one summary per distinct (scale, S, m).
std::vector<CellSummary> summarize(const ExperimentConfig& config, const std::vector<TrialRow>& rows);

/// Published minimal measurement counts M(S, j) at n = 1024, 1000/1000 trials.
struct Table1Cell {
  unsigned scale;
  std::size_t S;
  std::size_t M;
};
const std::vector<Table1Cell>& table1_reference();

}  // namespace cs
