// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csampling Authors

#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "cs/analysis.hpp"
#include "cs/certificate.hpp"
#include "cs/experiment.hpp"
#include "cs/io.hpp"
#include "cs/rng.hpp"
#include "cs/sampling.hpp"
#include "cs/transforms.hpp"

namespace cs {

namespace {

struct Flags {
  std::string config_path;
  std::string basis;
  std::string format;
  std::string out;
  std::size_t n = 0;
  std::vector<unsigned> scales;
  std::vector<std::size_t> sparsities;
  std::vector<std::size_t> ms;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double target = 0.0;
  double gap = 0.0;
  std::size_t coarse_direct = 0;
  std::size_t coarse_support = 0;
  unsigned workers = 0;
  std::size_t batch = 0;
  bool timing = false;
};

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config_path, "JSON file mirroring the experiment configuration");
  sub->add_option("--basis", f.basis, "subband, dft, noiselet_haar (coherence also accepts identity)");
  sub->add_option("--n", f.n, "signal dimension (power of two)");
  sub->add_option("--scale", f.scales, "wavelet scale j (repeatable)");
  sub->add_option("--sparsity", f.sparsities, "sparsity S (repeatable)");
  sub->add_option("--m", f.ms, "number of measurements (repeatable)");
  sub->add_option("--trials", f.trials, "trials per cell");
  sub->add_option("--seed", f.seed, "64-bit seed");
  sub->add_option("--target", f.target, "success fraction required per cell, in (0, 1]");
  sub->add_option("--out", f.out, "output file (default stdout)");
  sub->add_option("--format", f.format, "csv or json");
  sub->add_option("--solver-gap", f.gap, "duality gap tolerance");
  sub->add_option("--coarse-direct", f.coarse_direct, "coarsest Haar coefficients measured directly");
  sub->add_option("--coarse-support", f.coarse_support, "coarsest Haar coefficients forced into the support");
  sub->add_option("--workers", f.workers, "worker threads (0: all cores)");
  sub->add_option("--batch", f.batch, "trials per scheduling batch");
  sub->add_flag("--timing", f.timing, "include wall times in the output");
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config file: ") + e.what());
  }
}

ExperimentConfig build_config(const CLI::App& sub, const Flags& f, ExperimentConfig c) {
  if (!f.config_path.empty()) merge_config(read_json_file(f.config_path), c);
  auto given = [&](const char* name) { return sub.count(name) > 0; };
  if (given("--basis")) c.basis = basis_from_string(f.basis);
  if (given("--n")) c.n = f.n;
  if (given("--scale")) c.scales = f.scales;
  if (given("--sparsity")) c.sparsities = f.sparsities;
  if (given("--m")) c.m_grid = f.ms;
  if (given("--trials")) c.trials = f.trials;
  if (given("--seed")) c.seed = f.seed;
  if (given("--target")) c.success_target = f.target;
  if (given("--out")) c.output_path = f.out;
  if (given("--format")) c.format = f.format;
  if (given("--solver-gap")) c.solver.duality_gap_tol = f.gap;
  if (given("--coarse-direct")) c.coarse_direct = f.coarse_direct;
  if (given("--coarse-support")) c.coarse_support = f.coarse_support;
  if (given("--workers")) c.workers = f.workers;
  if (given("--batch")) c.batch = f.batch;
  if (given("--timing")) c.timing = f.timing;
  c.validate();
  return c;
}

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw std::runtime_error("cannot open " + path);
      os_ = &file_;
    }
  }
  std::ostream& stream() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

// Single-instance commands draw (T, z, Omega) exactly as trial 0 of an
// experiment cell with the same seed.
struct Instance {
  Problem problem;
  SparseModel model;
  SampleSet omega;
};

Instance make_instance(const ExperimentConfig& c) {
  if (c.sparsities.size() != 1 || c.m_grid.size() != 1) throw ConfigError("give exactly one --sparsity and one --m");
  const unsigned scale = c.basis == Basis::Subband ? c.scales.front() : 0;
  Instance inst{make_problem(c.basis, c.n, scale), {}, {}};
  const std::size_t S = c.sparsities.front();
  const std::uint64_t ts = trial_seed(c, scale, S, 0);
  std::vector<std::size_t> forced(c.coarse_support);
  for (std::size_t i = 0; i < forced.size(); ++i) forced[i] = i;
  inst.model = random_model_with(inst.problem.U.cols(), S, forced, derive_seed(ts, {1}));
  inst.omega = sample_uniform(inst.problem.U.rows(), c.m_grid.front(), derive_seed(ts, {2}));
  return inst;
}

Json instance_json(const ExperimentConfig& c, const Instance& inst) {
  return {{"basis", to_string(c.basis)}, {"n", c.n},          {"scale", inst.problem.scale},
          {"seed", c.seed},              {"model", inst.model}, {"sample", inst.omega}};
}

int cmd_coherence(const CLI::App& sub, const Flags& f, std::ostream& os) {
  ExperimentConfig c;
  c.experiment = ExperimentKind::PhaseCurve;
  c.m_grid = {1};
  const bool identity_basis = sub.count("--basis") && f.basis == "identity";
  Flags g = f;
  if (identity_basis) g.basis = "dft";
  c = build_config(sub, g, c);
  std::string name = identity_basis ? "identity" : to_string(c.basis);
  const LinearOperator U = identity_basis ? scaled(identity(c.n), std::sqrt(static_cast<double>(c.n)))
                                          : make_problem(c.basis, c.n, c.scales.front()).U;
  const CoherenceResult r = coherence(U, std::nullopt, c.seed);
  Output out(c.output_path, os);
  if (c.format == "csv") {
    out.stream() << "basis,n,mu,exact,columns_swept\r\n"
                 << name << ',' << c.n << ',' << std::setprecision(17) << r.mu << ',' << (r.exact ? 1 : 0) << ','
                 << r.columns_swept << "\r\n";
  } else {
    Json j = {{"basis", name}, {"n", c.n}, {"rows", U.rows()}, {"coherence", r}};
    out.stream() << j.dump(2) << '\n';
  }
  return kExitOk;
}

int cmd_spectrum(const CLI::App& sub, const Flags& f, std::ostream& os) {
  ExperimentConfig c;
  c.experiment = ExperimentKind::PhaseCurve;
  c.m_grid = {1};
  c.scales = {1, 2, 3};
  c = build_config(sub, f, c);
  Output out(c.output_path, os);
  if (c.format == "csv") {
    out.stream() << "scale,omega,in_band,magnitude\r\n";
    for (unsigned j : c.scales) {
      const RVec mag = wavelet_spectrum(c.n, j);
      const auto band = subband_frequencies(c.n, j);
      const long half = static_cast<long>(c.n / 2);
      for (std::size_t k = 0; k < mag.size(); ++k) {
        const long omega = -half + 1 + static_cast<long>(k);
        const bool in = std::find(band.begin(), band.end(), omega) != band.end();
        out.stream() << j << ',' << omega << ',' << (in ? 1 : 0) << ',' << std::setprecision(17) << mag[k] << "\r\n";
      }
    }
  } else {
    Json j = {{"n", c.n}, {"wavelet", "daubechies8"}, {"scales", Json::array()}};
    for (unsigned s : c.scales) j["scales"].push_back({{"scale", s}, {"flatness", band_flatness(c.n, s)}});
    out.stream() << j.dump(2) << '\n';
  }
  return kExitOk;
}

int cmd_recover(const CLI::App& sub, const Flags& f, std::ostream& os, bool with_certificate) {
  ExperimentConfig c;
  c.experiment = ExperimentKind::PhaseCurve;
  c.sparsities = {15};
  c.m_grid = {49};
  c = build_config(sub, f, c);
  if (c.format != "json") throw ConfigError("single-instance commands emit JSON only");
  const Instance inst = make_instance(c);
  Json j = instance_json(c, inst);
  if (with_certificate) {
    const CertifiedRecovery r = certify_then_solve(inst.problem.U, inst.omega, inst.model, c.solver);
    j["certificate"] = r.certificate;
    j["recovery"] = r.recovery;
    j["consistent"] = r.consistent;
    j["expected_failure"] = r.expected_failure;
  } else {
    j["recovery"] = recover(inst.problem.U, inst.omega, inst.model, c.solver);
  }
  Output out(c.output_path, os);
  out.stream() << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_experiment(const CLI::App& sub, const Flags& f, std::ostream& os, ExperimentConfig defaults) {
  const ExperimentConfig c = build_config(sub, f, std::move(defaults));
  const ExperimentRecord rec = run_experiment(c);
  write_record(rec, os);
  return rec.any_censored() ? kExitCensored : kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compressive sampling experiments: coherence, recovery, certificates, Monte Carlo tables"};
  app.require_subcommand(1);
  Flags f;
  std::map<std::string, std::function<int(const CLI::App&)>> handlers;

  auto add = [&](const char* name, const char* help, std::function<int(const CLI::App&)> fn) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_flags(sub, f);
    handlers[name] = std::move(fn);
  };

  add("coherence", "mutual coherence of a measurement system", [&](const CLI::App& s) {
    return cmd_coherence(s, f, out);
  });
  add("spectrum", "Daubechies-8 band diagnostics", [&](const CLI::App& s) { return cmd_spectrum(s, f, out); });
  add("recover", "one basis pursuit instance", [&](const CLI::App& s) { return cmd_recover(s, f, out, false); });
  add("certify", "dual certificate and recovery for one instance",
      [&](const CLI::App& s) { return cmd_recover(s, f, out, true); });
  add("table1", "M(S, j) search on subband systems", [&](const CLI::App& s) {
    ExperimentConfig c;
    c.experiment = ExperimentKind::Table1;
    c.scales = {1, 2, 3};
    return cmd_experiment(s, f, out, c);
  });
  add("noiselet", "noiselet measurements of Haar-sparse signals", [&](const CLI::App& s) {
    ExperimentConfig c;
    c.experiment = ExperimentKind::NoiseletHaar;
    c.basis = Basis::NoiseletHaar;
    c.n = 4096;
    c.sparsities = {100};
    c.m_grid = {300};
    return cmd_experiment(s, f, out, c);
  });
  add("phase", "success rate over an (S, m) grid", [&](const CLI::App& s) {
    ExperimentConfig c;
    c.experiment = ExperimentKind::PhaseCurve;
    return cmd_experiment(s, f, out, c);
  });
  add("deviation", "tail of the restricted Gram deviation under Bernoulli sampling", [&](const CLI::App& s) {
    ExperimentConfig c;
    c.experiment = ExperimentKind::DeviationTail;
    c.basis = Basis::Dft;
    c.n = 512;
    c.sparsities = {10};
    c.m_grid = {200};
    c.trials = 1000;
    return cmd_experiment(s, f, out, c);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << e.what() << '\n' << "Run with --help for usage.\n";
    return kExitInvalidConfig;
  }

  for (const CLI::App* sub : app.get_subcommands()) {
    try {
      return handlers.at(sub->get_name())(*sub);
    } catch (const ConfigError& e) {
      err << "invalid configuration: " << e.what() << '\n';
      return kExitInvalidConfig;
    } catch (const std::invalid_argument& e) {
      err << "invalid configuration: " << e.what() << '\n';
      return kExitInvalidConfig;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kExitFailure;
    }
  }
  return kExitInvalidConfig;
}

}  // namespace cs
