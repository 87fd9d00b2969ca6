// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csampling Authors

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cs/experiment.hpp"
#include "cs/io.hpp"

using namespace cs;

namespace {

ExperimentConfig small_config(ExperimentKind kind, Basis basis, std::size_t n) {
  ExperimentConfig c;
  c.experiment = kind;
  c.basis = basis;
  c.n = n;
  c.trials = 8;
  c.seed = 17;
  c.workers = 1;
  c.batch = 4;
  return c;
}

std::string rows_csv(const ExperimentRecord& rec) {
  std::ostringstream os;
  write_rows_csv(os, rec.rows, false);
  return os.str();
}

}  // namespace

TEST_CASE("a trial is a pure function of its seed") {
  auto c = small_config(ExperimentKind::PhaseCurve, Basis::Subband, 1024);
  c.scales = {3};
  const auto p = make_problem(c.basis, c.n, 3);
  const auto a = run_trial(c, p, 8, 24, 5);
  const auto b = run_trial(c, p, 8, 24, 5);
  CHECK(a.seed == b.seed);
  CHECK(a.exact == b.exact);
  CHECK(a.rel_error_inf == b.rel_error_inf);
  CHECK(a.iterations == b.iterations);
  CHECK(trial_seed(c, 3, 8, 5) != trial_seed(c, 3, 8, 6));
  CHECK(trial_seed(c, 3, 8, 5) != trial_seed(c, 2, 8, 5));
}

TEST_CASE("sampling every subband row recovers exactly") {
  auto c = small_config(ExperimentKind::PhaseCurve, Basis::Subband, 1024);
  for (unsigned j : {1u, 2u, 3u}) {
    const auto p = make_problem(c.basis, c.n, j);
    const std::size_t nj = c.n >> j;
    CHECK(run_trial(c, p, nj / 4, nj, 0).exact);
    CHECK(run_trial(c, p, 0, 4, 1).exact);
  }
}

TEST_CASE("j=3, S=8, m=24 recovers in most trials") {
  auto c = small_config(ExperimentKind::PhaseCurve, Basis::Subband, 1024);
  const auto p = make_problem(c.basis, c.n, 3);
  int exact = 0;
  for (std::uint64_t t = 0; t < 20; ++t) exact += run_trial(c, p, 8, 24, t).exact ? 1 : 0;
  CHECK(exact > 10);
}

TEST_CASE("noiselet records log unit coherence and recover empty signals") {
  auto c = small_config(ExperimentKind::NoiseletHaar, Basis::NoiseletHaar, 256);
  c.sparsities = {0, 5};
  c.m_grid = {40};
  const auto rec = noiselet_haar_experiment(c);
  REQUIRE(rec.coherence);
  CHECK(std::abs(rec.coherence->mu - 1.0) < 1e-8);
  REQUIRE(rec.cells.size() == 2);
  CHECK(rec.cells[0].S == 0);
  CHECK(rec.cells[0].success_rate == 1.0);
  CHECK(rec.cells[0].trials == c.trials);
}

TEST_CASE("coarse-direct trials reassemble the full coefficient vector") {
  auto c = small_config(ExperimentKind::NoiseletHaar, Basis::NoiseletHaar, 256);
  c.coarse_support = 8;
  c.coarse_direct = 8;
  const auto p = make_problem(c.basis, c.n, 0);
  // Only the forced coarse block is nonzero, so nothing random is needed.
  CHECK(run_trial(c, p, 8, 1, 0).exact);
  int exact = 0;
  for (std::uint64_t t = 0; t < 8; ++t) exact += run_trial(c, p, 20, 60, t).exact ? 1 : 0;
  CHECK(exact >= 6);
}

TEST_CASE("the minimal-m search is monotone-consistent") {
  auto c = small_config(ExperimentKind::Table1, Basis::Subband, 1024);
  c.trials = 10;
  const auto p = make_problem(c.basis, c.n, 3);
  std::vector<TrialRow> rows;
  const auto res = find_min_measurements(c, p, 8, rows);
  REQUIRE(res.M);
  CHECK_FALSE(res.censored);
  CHECK(*res.M > 8);
  CHECK(*res.M <= 128);
  bool probed_M = false;
  for (const auto& probe : res.trace) {
    CAPTURE(probe.m);
    if (probe.m >= *res.M) CHECK(probe.met);
    if (probe.m < *res.M) CHECK_FALSE(probe.met);
    probed_M = probed_M || probe.m == *res.M;
  }
  CHECK(probed_M);
  // Every row belongs to a probe in the trace.
  for (const auto& row : rows) {
    bool found = false;
    for (const auto& probe : res.trace) found = found || probe.m == row.m;
    CHECK(found);
  }
}

TEST_CASE("unreachable targets are censored, the grid maximum is not") {
  auto c = small_config(ExperimentKind::Table1, Basis::Subband, 1024);
  const auto p = make_problem(c.basis, c.n, 3);
  std::vector<TrialRow> rows;
  c.search.hi = 10;
  const auto censored = find_min_measurements(c, p, 8, rows);
  CHECK(censored.censored);
  CHECK_FALSE(censored.M);

  c.search.lo = 128;
  c.search.hi = 128;
  const auto top = find_min_measurements(c, p, 8, rows);
  CHECK_FALSE(top.censored);
  REQUIRE(top.M);
  CHECK(*top.M == 128);
}

TEST_CASE("outputs do not depend on the worker count") {
  auto c = small_config(ExperimentKind::PhaseCurve, Basis::NoiseletHaar, 256);
  c.sparsities = {6, 12};
  c.m_grid = {20, 40};
  c.trials = 10;
  c.batch = 3;
  const auto one = phase_curve(c);
  c.workers = 3;
  const auto three = phase_curve(c);
  CHECK(rows_csv(one) == rows_csv(three));
  // The config echo carries the worker count; everything else must agree.
  auto strip = [](Json j) {
    j.erase("config");
    return j.dump();
  };
  CHECK(strip(record_to_json(one)) == strip(record_to_json(three)));
}

TEST_CASE("phase curves rise with m") {
  auto c = small_config(ExperimentKind::PhaseCurve, Basis::Dft, 256);
  c.sparsities = {10};
  c.m_grid = {15, 25, 35, 50, 256};
  c.trials = 40;
  const auto rec = phase_curve(c);
  REQUIRE(rec.cells.size() == c.m_grid.size());
  for (std::size_t i = 1; i < rec.cells.size(); ++i) {
    const auto& a = rec.cells[i - 1];
    const auto& b = rec.cells[i];
    const double pooled = (a.success_rate + b.success_rate) / 2.0;
    const double sigma = std::sqrt(std::max(pooled * (1.0 - pooled), 1e-12) * 2.0 / static_cast<double>(c.trials));
    CHECK(b.success_rate >= a.success_rate - 2.0 * sigma);
  }
  CHECK(rec.cells.back().m == 256);
  CHECK(rec.cells.back().success_rate == 1.0);

  // Aggregates are the mean of the per-trial flags.
  for (const auto& cell : rec.cells) {
    std::size_t hits = 0, count = 0;
    for (const auto& row : rec.rows)
      if (row.m == cell.m && row.S == cell.S) {
        ++count;
        hits += row.exact ? 1 : 0;
      }
    CHECK(count == cell.trials);
    CHECK(cell.success_rate == doctest::Approx(static_cast<double>(hits) / static_cast<double>(count)));
  }
  CHECK(rows_csv(rec) == rows_csv(phase_curve(c)));
}

TEST_CASE("records survive a json round trip and tampering is caught") {
  auto c = small_config(ExperimentKind::Certify, Basis::Dft, 128);
  c.sparsities = {4};
  c.m_grid = {24};
  c.trials = 5;
  const auto rec = run_certify(c);
  for (const auto& row : rec.rows) CHECK(row.strict.has_value());
  const Json j = record_to_json(rec);
  const auto back = record_from_json(j);
  CHECK(record_to_json(back).dump() == j.dump());
  CHECK(back.rows.size() == rec.rows.size());

  Json bad = j;
  bad["rows"][0]["exact"] = !bad["rows"][0]["exact"].get<bool>();
  CHECK_THROWS_AS(record_from_json(bad), std::runtime_error);
}

TEST_CASE("deviation records sweep the requested cells") {
  auto c = small_config(ExperimentKind::DeviationTail, Basis::Dft, 512);
  c.sparsities = {10};
  c.m_grid = {200, 512};
  c.trials = 50;
  const auto rec = run_deviation(c);
  REQUIRE(rec.deviations.size() == 2);
  CHECK(rec.deviations[0].tail.trials == 50);
  CHECK(rec.deviations[1].tail.frequency <= rec.deviations[0].tail.frequency + 0.1);
  std::ostringstream os;
  write_deviation_csv(os, rec.deviations);
  CHECK(os.str().rfind("s,m,", 0) == 0);
}

TEST_CASE("invalid configurations are rejected") {
  auto base = small_config(ExperimentKind::PhaseCurve, Basis::Dft, 256);
  base.sparsities = {4};
  base.m_grid = {20};
  CHECK_NOTHROW(base.validate());

  auto c = base;
  c.trials = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = base;
  c.success_target = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = base;
  c.success_target = 1.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = base;
  c.n = 100;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = base;
  c.m_grid = {};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = base;
  c.m_grid = {257};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = base;
  c.format = "xml";
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = base;
  c.sparsities = {300};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = base;
  c.coarse_direct = 8;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = base;
  c.solver.duality_gap_tol = -1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = base;
  c.experiment = ExperimentKind::Table1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = base;
  c.basis = Basis::Subband;
  c.scales = {7};
  CHECK_THROWS_AS(c.validate(), ConfigError);

  CHECK_THROWS(experiment_kind_from_string("table9"));
  CHECK(basis_from_string(to_string(Basis::NoiseletHaar)) == Basis::NoiseletHaar);
  CHECK(experiment_kind_from_string(to_string(ExperimentKind::DeviationTail)) == ExperimentKind::DeviationTail);
}

TEST_CASE("config files overlay only the keys they set") {
  ExperimentConfig c;
  merge_config(Json::parse(R"({"experiment": "noiselet_haar", "n": 512, "trials": 7,
                               "m_search": {"coarse_step": 2}, "solver": {"duality_gap_tol": 1e-9}})"),
               c);
  CHECK(c.experiment == ExperimentKind::NoiseletHaar);
  CHECK(c.basis == Basis::NoiseletHaar);
  CHECK(c.n == 512);
  CHECK(c.trials == 7);
  CHECK(c.search.coarse_step == 2);
  CHECK(c.search.step == 1);
  CHECK(c.solver.duality_gap_tol == 1e-9);
  CHECK(c.seed == 1);
  CHECK_THROWS_AS(merge_config(Json::parse(R"({"n": "big"})"), c), ConfigError);
}

TEST_CASE("csv fields follow RFC 4180") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");

  TrialRow row;
  row.status = "converged";
  std::ostringstream os;
  write_rows_csv(os, {row}, false);
  const std::string out = os.str();
  CHECK(out.find("\r\n") != std::string::npos);
  CHECK(out.rfind("trial_id,seed,basis,scale,S,m,exact,converged,status,rel_error_inf,iterations", 0) == 0);
}
