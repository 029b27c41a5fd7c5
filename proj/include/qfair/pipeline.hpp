#pragma once

// Dataset ingestion, the audit/repair pipeline, and file formats used by
// the command-line tool.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qfair/amplification.hpp"
#include "qfair/encoding.hpp"
#include "qfair/fairness.hpp"
#include "qfair/measurement.hpp"
#include "qfair/report.hpp"

namespace qfair::pipeline {

inline constexpr std::string_view kToolVersion = "qfair 0.1.0";

// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitNotAchieved = 2,
  kExitInputError = 3,
  kExitNumericalError = 4,
};

struct DatasetSchema {
  // Feature columns in qubit order; empty means every CSV column except the
  // score column, in file order.
  std::vector<std::string> columns;
  std::string protected_column;
  // Column -> strictly increasing breakpoints b0 < b1 < ... < bk. Each
  // interval [b_i, b_{i+1}) becomes one indicator feature.
  std::map<std::string, std::vector<double>> bins;
  std::optional<std::string> score_column;

  static DatasetSchema from_json(const report::Json& j);
  report::Json to_json() const;
};

struct Dataset {
  std::vector<std::string> feature_names;  // one per qubit, qubit 1 first
  int protected_qubit = 1;                 // 1-based
  std::vector<encoding::FeatureRecord> records;
  encoding::ScoreTable scores;  // duplicate records summed
  std::string digest;           // sha256 of the CSV bytes

  int num_qubits() const { return static_cast<int>(feature_names.size()); }
};

// CSV: header row, comma-separated integers/reals, no quoting.
Dataset ingest_text(std::string_view csv, const DatasetSchema& schema);
Dataset ingest(const std::filesystem::path& csv, const DatasetSchema& schema);

std::string sha256_hex(std::string_view bytes);

struct AuditOptions {
  double epsilon = 0.05;
  std::uint64_t shots = 100000;
  std::uint64_t seed = 0;
  bool include_state = false;  // add the repaired amplitudes to the report
  Tolerances tol;
};

struct SampledParity {
  measurement::Histogram histogram;
  double frequency_gap = 0.0;  // |f_protected - f_rest|
  double exact_gap = 0.0;
};

struct ExperimentReport {
  std::string dataset_digest;
  DatasetSchema schema;
  std::vector<std::string> feature_names;
  int protected_qubit = 1;
  std::size_t rows = 0;
  std::size_t distinct_records = 0;

  fairness::ParityReport pre_repair;
  fairness::DisparateImpact pre_disparate_impact;
  amplification::AmplificationPlan plan;
  fairness::ParityReport post_repair;
  fairness::DisparateImpact post_disparate_impact;
  std::vector<std::pair<std::string, fairness::ParityReport>> cross_partitions;
  SampledParity pre_samples;
  SampledParity post_samples;
  std::string explanation;  // why parity was not reached, when it was not
  std::optional<std::vector<Complex>> repaired_state;
};

// The protected split used throughout the pipeline: {protected qubit = 1}.
fairness::PartitionSpec protected_partition(const Dataset& data);

ExperimentReport run_audit(const Dataset& data, const AuditOptions& options);

report::Json to_json(const ExperimentReport& r);

// 0 when parity was achieved, 2 otherwise.
int exit_code(const ExperimentReport& r);

// ----------------------------------------------------- state file formats
//
// State:    {"amplitudes": [a0, a1, ...]}  or  {"density": [[...], ...]}
// Operator: {"matrix": [[...], ...]}  or  {"gates": ["H", "I", ...]}
//           (tensor product of named one-qubit gates I, X, Y, Z, H)
// POVM:     {"effects": [matrix, ...], "labels": [...]}
//           or {"computational": n}  or  {"trivial": dim}
// A complex entry is a number or a [re, im] pair.

DensityMatrix parse_state(const report::Json& j);
std::vector<DensityMatrix> parse_states(const report::Json& j);  // {"states": [...]}
MatrixOperator parse_unitary(const report::Json& j);
Povm parse_povm(const report::Json& j);

report::Json read_json_file(const std::filesystem::path& path);

}  // namespace qfair::pipeline
