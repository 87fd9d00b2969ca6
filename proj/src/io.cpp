// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csampling Authors

#include "cs/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cs {

namespace {

Json number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

double number_or_nan(const Json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

Json vector_json(const RVec& x) {
  if (x.size() <= kDenseVectorLimit) return x;
  Json sparse = {{"length", x.size()}, {"support", Json::array()}, {"values", Json::array()}};
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::abs(x[i]) > 1e-6) {
      sparse["support"].push_back(i);
      sparse["values"].push_back(x[i]);
    }
  }
  return sparse;
}

template <class T>
void read_if(const Json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end() && !it->is_null()) out = it->get<T>();
}

Json row_json(const TrialRow& r, bool timing) {
  Json j = {{"trial_id", r.trial_id},
            {"seed", r.seed},
            {"basis", to_string(r.basis)},
            {"scale", r.scale},
            {"S", r.S},
            {"m", r.m},
            {"exact", r.exact},
            {"converged", r.converged},
            {"status", r.status},
            {"rel_error_inf", number(r.rel_error_inf)},
            {"iterations", r.iterations}};
  j["strict"] = r.strict ? Json(*r.strict) : Json(nullptr);
  j["off_support_max"] = r.off_support_max ? number(*r.off_support_max) : Json(nullptr);
  if (timing) j["wall_ms"] = r.wall_ms;
  return j;
}

TrialRow row_from_json(const Json& j) {
  TrialRow r;
  r.trial_id = j.at("trial_id").get<std::uint64_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.basis = basis_from_string(j.at("basis").get<std::string>());
  r.scale = j.at("scale").get<unsigned>();
  r.S = j.at("S").get<std::size_t>();
  r.m = j.at("m").get<std::size_t>();
  r.exact = j.at("exact").get<bool>();
  r.converged = j.at("converged").get<bool>();
  r.status = j.at("status").get<std::string>();
  r.rel_error_inf = number_or_nan(j.at("rel_error_inf"));
  r.iterations = j.at("iterations").get<int>();
  if (!j.at("strict").is_null()) r.strict = j.at("strict").get<bool>();
  if (!j.at("off_support_max").is_null()) r.off_support_max = j.at("off_support_max").get<double>();
  read_if(j, "wall_ms", r.wall_ms);
  return r;
}

Json cell_json(const CellSummary& c) {
  return {{"basis", to_string(c.basis)}, {"scale", c.scale},     {"S", c.S},
          {"m", c.m},                    {"trials", c.trials},    {"successes", c.successes},
          {"success_rate", c.success_rate}, {"met_target", c.met_target}};
}

std::string format_double(double v) {
  if (!std::isfinite(v)) return "";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

void to_json(Json& j, const SampleSet& s) {
  j = {{"n", s.n}, {"model", to_string(s.model)}, {"seed", s.seed}, {"indices", s.indices}};
}

void from_json(const Json& j, SampleSet& s) {
  s.n = j.at("n").get<std::size_t>();
  s.model = sampling_model_from_string(j.at("model").get<std::string>());
  s.seed = j.at("seed").get<std::uint64_t>();
  s.indices = j.at("indices").get<std::vector<std::size_t>>();
}

void to_json(Json& j, const SparseModel& m) { j = {{"n", m.n}, {"support", m.support}, {"signs", m.signs}}; }

void from_json(const Json& j, SparseModel& m) {
  m.n = j.at("n").get<std::size_t>();
  m.support = j.at("support").get<std::vector<std::size_t>>();
  m.signs = j.at("signs").get<std::vector<int>>();
  if (m.support.size() != m.signs.size()) throw std::runtime_error("SparseModel: support and signs differ in length");
}

void to_json(Json& j, const SpectralReport& r) {
  j = {{"lambda_min", r.lambda_min}, {"lambda_max", r.lambda_max}, {"deviation", r.deviation},
       {"m", r.m},                   {"s", r.s}};
}

void to_json(Json& j, const CoherenceResult& r) {
  j = {{"mu", r.mu}, {"exact", r.exact}, {"columns_swept", r.columns_swept}};
}

void to_json(Json& j, const DeviationTail& t) {
  j = {{"frequency", t.frequency},           {"exceed", t.exceed},
       {"trials", t.trials},                 {"mean_deviation", t.mean_deviation},
       {"max_deviation", t.max_deviation}};
}

void to_json(Json& j, const SolverOptions& o) {
  j = {{"max_outer_iterations", o.max_outer_iterations},
       {"duality_gap_tol", o.duality_gap_tol},
       {"constraint_tol", o.constraint_tol},
       {"cg_tol", o.cg_tol},
       {"cg_max_iters", o.cg_max_iters}};
}

void from_json(const Json& j, SolverOptions& o) {
  read_if(j, "max_outer_iterations", o.max_outer_iterations);
  read_if(j, "duality_gap_tol", o.duality_gap_tol);
  read_if(j, "constraint_tol", o.constraint_tol);
  read_if(j, "cg_tol", o.cg_tol);
  read_if(j, "cg_max_iters", o.cg_max_iters);
}

void to_json(Json& j, const RecoveryResult& r) {
  j = {{"x_hat", vector_json(r.x_hat)},
       {"iterations", r.iterations},
       {"final_gap", number(r.final_gap)},
       {"constraint_residual", number(r.constraint_residual)},
       {"status", to_string(r.status)},
       {"converged", r.converged},
       {"exact", r.exact},
       {"rel_error_inf", number(r.rel_error_inf)},
       {"dual_objective", number(r.dual_objective)},
       {"cg_iterations", r.cg_iterations},
       {"cg_worst_residual", number(r.cg_worst_residual)},
       {"diagnostics", r.diagnostics}};
}

void to_json(Json& j, const CertificateReport& r) {
  j = {{"invertible", r.invertible},
       {"on_support_ok", r.on_support_ok},
       {"on_support_error", number(r.on_support_error)},
       {"off_support_max", number(r.off_support_max)},
       {"strict", r.strict},
       {"gram_lambda_min", number(r.gram_lambda_min)},
       {"gram_spectrum", r.gram_spectrum},
       {"pi", vector_json(r.pi)}};
}

void to_json(Json& j, const ExperimentConfig& c) {
  j = {{"experiment", to_string(c.experiment)},
       {"basis", to_string(c.basis)},
       {"n", c.n},
       {"scales", c.scales},
       {"sparsities", c.sparsities},
       {"m_grid", c.m_grid},
       {"m_search",
        {{"start", c.search.start},
         {"lo", c.search.lo},
         {"hi", c.search.hi},
         {"step", c.search.step},
         {"coarse_step", c.search.coarse_step}}},
       {"trials", c.trials},
       {"success_target", c.success_target},
       {"seed", c.seed},
       {"solver", c.solver},
       {"output_path", c.output_path},
       {"format", c.format},
       {"coarse_direct", c.coarse_direct},
       {"coarse_support", c.coarse_support},
       {"certify", c.certify},
       {"batch", c.batch},
       {"timing", c.timing}};
}

void merge_config(const Json& j, ExperimentConfig& c) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    if (auto it = j.find("experiment"); it != j.end()) {
      c.experiment = experiment_kind_from_string(it->get<std::string>());
      if (c.experiment == ExperimentKind::NoiseletHaar) c.basis = Basis::NoiseletHaar;
    }
    if (auto it = j.find("basis"); it != j.end()) c.basis = basis_from_string(it->get<std::string>());
    read_if(j, "n", c.n);
    read_if(j, "scales", c.scales);
    read_if(j, "sparsities", c.sparsities);
    read_if(j, "m_grid", c.m_grid);
    if (auto it = j.find("m_search"); it != j.end()) {
      read_if(*it, "start", c.search.start);
      read_if(*it, "lo", c.search.lo);
      read_if(*it, "hi", c.search.hi);
      read_if(*it, "step", c.search.step);
      read_if(*it, "coarse_step", c.search.coarse_step);
    }
    read_if(j, "trials", c.trials);
    read_if(j, "success_target", c.success_target);
    read_if(j, "seed", c.seed);
    if (auto it = j.find("solver"); it != j.end()) from_json(*it, c.solver);
    read_if(j, "output_path", c.output_path);
    read_if(j, "format", c.format);
    read_if(j, "coarse_direct", c.coarse_direct);
    read_if(j, "coarse_support", c.coarse_support);
    read_if(j, "certify", c.certify);
    read_if(j, "workers", c.workers);
    read_if(j, "batch", c.batch);
    read_if(j, "timing", c.timing);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

Json record_to_json(const ExperimentRecord& rec) {
  Json j;
  j["config"] = rec.config;
  if (rec.coherence) j["coherence"] = *rec.coherence;
  j["rows"] = Json::array();
  for (const auto& r : rec.rows) j["rows"].push_back(row_json(r, rec.config.timing));
  j["cells"] = Json::array();
  for (const auto& c : rec.cells) j["cells"].push_back(cell_json(c));
  j["searches"] = Json::array();
  for (const auto& s : rec.searches) {
    Json sj = {{"S", s.S}, {"scale", s.scale}, {"censored", s.censored}};
    sj["M"] = s.M ? Json(*s.M) : Json(nullptr);
    sj["trace"] = Json::array();
    for (const auto& p : s.trace)
      sj["trace"].push_back({{"m", p.m}, {"trials_run", p.trials_run}, {"successes", p.successes}, {"met", p.met}});
    j["searches"].push_back(sj);
  }
  j["deviations"] = Json::array();
  for (const auto& d : rec.deviations) j["deviations"].push_back({{"s", d.s}, {"m", d.m}, {"tail", d.tail}});
  return j;
}

ExperimentRecord record_from_json(const Json& j) {
  ExperimentRecord rec;
  merge_config(j.at("config"), rec.config);
  if (auto it = j.find("coherence"); it != j.end()) {
    CoherenceResult c;
    c.mu = it->at("mu").get<double>();
    c.exact = it->at("exact").get<bool>();
    c.columns_swept = it->at("columns_swept").get<std::size_t>();
    rec.coherence = c;
  }
  for (const auto& r : j.at("rows")) rec.rows.push_back(row_from_json(r));
  rec.cells = summarize(rec.config, rec.rows);

  const auto& stored = j.at("cells");
  if (stored.size() != rec.cells.size()) throw std::runtime_error("record: cell count does not match rows");
  for (std::size_t i = 0; i < stored.size(); ++i) {
    const auto& s = stored[i];
    const auto& c = rec.cells[i];
    if (s.at("S").get<std::size_t>() != c.S || s.at("m").get<std::size_t>() != c.m ||
        s.at("scale").get<unsigned>() != c.scale || s.at("trials").get<std::size_t>() != c.trials ||
        s.at("successes").get<std::size_t>() != c.successes ||
        std::abs(s.at("success_rate").get<double>() - c.success_rate) > 1e-12)
      throw std::runtime_error("record: aggregate success rate disagrees with per-trial rows");
  }

  for (const auto& sj : j.at("searches")) {
    SearchResult s;
    s.S = sj.at("S").get<std::size_t>();
    s.scale = sj.at("scale").get<unsigned>();
    s.censored = sj.at("censored").get<bool>();
    if (!sj.at("M").is_null()) s.M = sj.at("M").get<std::size_t>();
    for (const auto& pj : sj.at("trace"))
      s.trace.push_back({pj.at("m").get<std::size_t>(), pj.at("trials_run").get<std::size_t>(),
                         pj.at("successes").get<std::size_t>(), pj.at("met").get<bool>()});
    rec.searches.push_back(std::move(s));
  }
  for (const auto& dj : j.at("deviations")) {
    DeviationCell d;
    d.s = dj.at("s").get<std::size_t>();
    d.m = dj.at("m").get<std::size_t>();
    const auto& t = dj.at("tail");
    d.tail.frequency = t.at("frequency").get<double>();
    d.tail.exceed = t.at("exceed").get<std::size_t>();
    d.tail.trials = t.at("trials").get<std::size_t>();
    d.tail.mean_deviation = t.at("mean_deviation").get<double>();
    d.tail.max_deviation = t.at("max_deviation").get<double>();
    rec.deviations.push_back(d);
  }
  return rec;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

void write_rows_csv(std::ostream& os, const std::vector<TrialRow>& rows, bool timing) {
  os << "trial_id,seed,basis,scale,S,m,exact,converged,status,rel_error_inf,iterations,strict,off_support_max";
  if (timing) os << ",wall_ms";
  os << "\r\n";
  for (const auto& r : rows) {
    os << r.trial_id << ',' << r.seed << ',' << csv_field(to_string(r.basis)) << ',' << r.scale << ',' << r.S << ','
       << r.m << ',' << (r.exact ? 1 : 0) << ',' << (r.converged ? 1 : 0) << ',' << csv_field(r.status) << ','
       << format_double(r.rel_error_inf) << ',' << r.iterations << ','
       << (r.strict ? (*r.strict ? "1" : "0") : "") << ','
       << (r.off_support_max ? format_double(*r.off_support_max) : "");
    if (timing) os << ',' << format_double(r.wall_ms);
    os << "\r\n";
  }
}

void write_deviation_csv(std::ostream& os, const std::vector<DeviationCell>& cells) {
  os << "s,m,trials,exceed,frequency,mean_deviation,max_deviation\r\n";
  for (const auto& c : cells)
    os << c.s << ',' << c.m << ',' << c.tail.trials << ',' << c.tail.exceed << ',' << format_double(c.tail.frequency)
       << ',' << format_double(c.tail.mean_deviation) << ',' << format_double(c.tail.max_deviation) << "\r\n";
}

void write_record(const ExperimentRecord& rec, std::ostream& os) {
  std::ofstream file;
  std::ostream* out = &os;
  if (!rec.config.output_path.empty()) {
    file.open(rec.config.output_path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open " + rec.config.output_path);
    out = &file;
  }
  if (rec.config.format == "csv") {
    if (rec.config.experiment == ExperimentKind::DeviationTail)
      write_deviation_csv(*out, rec.deviations);
    else
      write_rows_csv(*out, rec.rows, rec.config.timing);
  } else {
    *out << record_to_json(rec).dump(2) << '\n';
  }
}

}  // namespace cs
