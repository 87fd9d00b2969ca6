// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csampling Authors

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "cs/analysis.hpp"
#include "cs/certificate.hpp"
#include "cs/experiment.hpp"
#include "cs/sampling.hpp"
#include "cs/solver.hpp"

namespace cs {

using Json = nlohmann::ordered_json;

/// Dense vectors longer than this are written as their nonzero entries.
inline constexpr std::size_t kDenseVectorLimit = 64;

void to_json(Json& j, const SampleSet& s);
void from_json(const Json& j, SampleSet& s);
void to_json(Json& j, const SparseModel& m);
void from_json(const Json& j, SparseModel& m);
void to_json(Json& j, const SpectralReport& r);
void to_json(Json& j, const CoherenceResult& r);
void to_json(Json& j, const DeviationTail& t);
void to_json(Json& j, const SolverOptions& o);
void from_json(const Json& j, SolverOptions& o);
void to_json(Json& j, const RecoveryResult& r);
void to_json(Json& j, const CertificateReport& r);
void to_json(Json& j, const ExperimentConfig& c);

/// Missing keys keep the values already in `c`, so a file can be layered
/// over defaults and CLI flags layered over the file.
void merge_config(const Json& j, ExperimentConfig& c);

Json record_to_json(const ExperimentRecord& rec);

/// Throws std::runtime_error if the stored aggregates disagree with the rows.
ExperimentRecord record_from_json(const Json& j);

/// RFC 4180 field quoting.
std::string csv_field(const std::string& s);

/// Header plus one line per trial row; CRLF line breaks.
void write_rows_csv(std::ostream& os, const std::vector<TrialRow>& rows, bool timing);
void write_deviation_csv(std::ostream& os, const std::vector<DeviationCell>& cells);

/// Writes the record in config.format to config.output_path, or to `os`
/// when the path is empty.
void write_record(const ExperimentRecord& rec, std::ostream& os);

}  // namespace cs
