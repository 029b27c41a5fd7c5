#include "qfair/pipeline.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace qfair::pipeline {

using report::Json;

// ------------------------------------------------------------------ schema

DatasetSchema DatasetSchema::from_json(const Json& j) {
  if (!j.is_object()) throw InvalidArgument("schema must be a JSON object");
  DatasetSchema s;
  try {
    if (j.contains("columns")) s.columns = j.at("columns").get<std::vector<std::string>>();
    if (j.contains("protected")) s.protected_column = j.at("protected").get<std::string>();
    if (j.contains("bins"))
      s.bins = j.at("bins").get<std::map<std::string, std::vector<double>>>();
    if (j.contains("score") && !j.at("score").is_null())
      s.score_column = j.at("score").get<std::string>();
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("malformed schema: ") + e.what());
  }
  return s;
}

Json DatasetSchema::to_json() const {
  Json j = {{"columns", columns}, {"protected", protected_column}, {"bins", Json::object()}};
  for (const auto& [col, edges] : bins) {
    Json e = Json::array();
    for (double b : edges) e.push_back(report::number(b));
    j["bins"][col] = e;
  }
  j["score"] = score_column ? Json(*score_column) : Json(nullptr);
  return j;
}

// --------------------------------------------------------------- ingestion

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    std::string_view field = line.substr(start, comma == std::string_view::npos
                                                    ? std::string_view::npos
                                                    : comma - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t'))
      field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t'))
      field.remove_suffix(1);
    out.push_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_number(std::string_view field, std::size_t row, std::string_view column) {
  double v = 0.0;
  const char* begin = field.data();
  const char* end = field.data() + field.size();
  if (!field.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (field.empty() || ec != std::errc{} || ptr != end || !std::isfinite(v))
    throw InvalidArgument("row " + std::to_string(row) + ", column '" + std::string(column) +
                          "': '" + std::string(field) + "' is not a number");
  return v;
}

std::string bin_name(const std::string& column, double lo, double hi) {
  std::ostringstream os;
  os << column << "[" << lo << "," << hi << ")";
  return os.str();
}

// One feature column after binning: either the raw binary column or one
// interval indicator.
struct FeatureSource {
  std::size_t csv_index;
  std::optional<std::pair<double, double>> interval;
};

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256 failed");
  std::ostringstream os;
  os << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < len; ++i) os << std::setw(2) << static_cast<int>(digest[i]);
  return os.str();
}

Dataset ingest_text(std::string_view csv, const DatasetSchema& schema) {
  std::vector<std::string_view> lines;
  for (std::size_t start = 0; start < csv.size();) {
    std::size_t nl = csv.find('\n', start);
    if (nl == std::string_view::npos) nl = csv.size();
    std::string_view line = csv.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = nl + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw InvalidArgument("CSV is empty");

  const auto header = split_fields(lines.front());
  std::map<std::string, std::size_t, std::less<>> column_index;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i].empty()) throw InvalidArgument("CSV header has an empty column name");
    if (!column_index.emplace(std::string(header[i]), i).second)
      throw InvalidArgument("CSV header repeats column '" + std::string(header[i]) + "'");
  }
  const auto lookup = [&](const std::string& name) {
    const auto it = column_index.find(name);
    if (it == column_index.end()) throw InvalidArgument("column '" + name + "' not in CSV");
    return it->second;
  };

  std::optional<std::size_t> score_index;
  if (schema.score_column) score_index = lookup(*schema.score_column);

  std::vector<std::string> columns = schema.columns;
  if (columns.empty())
    for (const auto h : header)
      if (!schema.score_column || h != *schema.score_column) columns.emplace_back(h);

  if (schema.protected_column.empty()) throw InvalidArgument("no protected column given");
  if (std::find(columns.begin(), columns.end(), schema.protected_column) == columns.end())
    throw InvalidArgument("protected column '" + schema.protected_column +
                          "' is not a feature column");
  for (const auto& [col, edges] : schema.bins) {
    if (std::find(columns.begin(), columns.end(), col) == columns.end())
      throw InvalidArgument("bins given for unknown feature column '" + col + "'");
  }

  Dataset data;
  std::vector<FeatureSource> sources;
  std::set<std::string> seen;
  for (const auto& col : columns) {
    if (!seen.insert(col).second) throw InvalidArgument("feature column '" + col + "' repeated");
    const std::size_t idx = lookup(col);
    const auto bin_it = schema.bins.find(col);
    if (col == schema.protected_column) {
      if (bin_it != schema.bins.end() && bin_it->second.size() != 2)
        throw InvalidArgument("protected column '" + col +
                              "' must bin to a single indicator (two breakpoints)");
      data.protected_qubit = static_cast<int>(sources.size()) + 1;
    }
    if (bin_it == schema.bins.end()) {
      sources.push_back({idx, std::nullopt});
      data.feature_names.push_back(col);
      continue;
    }
    const auto& edges = bin_it->second;
    if (edges.size() < 2) throw InvalidArgument("bins for '" + col + "' need >= 2 breakpoints");
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
      if (!(edges[k] < edges[k + 1]))
        throw InvalidArgument("bins for '" + col + "' are not strictly increasing");
      sources.push_back({idx, std::make_pair(edges[k], edges[k + 1])});
      data.feature_names.push_back(bin_name(col, edges[k], edges[k + 1]));
    }
  }
  if (data.feature_names.size() > static_cast<std::size_t>(kMaxStateQubits))
    throw InvalidArgument("dataset encodes " + std::to_string(data.feature_names.size()) +
                          " features; at most " + std::to_string(kMaxStateQubits) +
                          " are supported");

  for (std::size_t r = 1; r < lines.size(); ++r) {
    const std::size_t row = r + 1;  // 1-based line number in the file
    if (lines[r].empty()) throw InvalidArgument("row " + std::to_string(row) + " is empty");
    const auto fields = split_fields(lines[r]);
    if (fields.size() != header.size())
      throw InvalidArgument("row " + std::to_string(row) + " has " +
                            std::to_string(fields.size()) + " fields, header has " +
                            std::to_string(header.size()));
    encoding::FeatureRecord record;
    record.index = r - 1;
    record.bits.reserve(sources.size());
    for (std::size_t f = 0; f < sources.size(); ++f) {
      const auto& src = sources[f];
      const double v = parse_number(fields[src.csv_index], row, header[src.csv_index]);
      if (src.interval) {
        record.bits.push_back(v >= src.interval->first && v < src.interval->second ? 1 : 0);
      } else if (v == 0.0 || v == 1.0) {
        record.bits.push_back(static_cast<std::uint8_t>(v));
      } else {
        throw InvalidArgument("row " + std::to_string(row) + ", column '" +
                              std::string(header[src.csv_index]) + "': value " +
                              std::string(fields[src.csv_index]) + " is not binary");
      }
    }
    double score = 1.0;
    if (score_index) {
      score = parse_number(fields[*score_index], row, header[*score_index]);
      if (score < 0.0)
        throw InvalidArgument("row " + std::to_string(row) + ": negative score");
    }
    data.scores.add(encoding::record_index(record), score);
    data.records.push_back(std::move(record));
  }
  if (data.records.empty()) throw InvalidArgument("CSV has a header but no data rows");
  data.digest = sha256_hex(csv);
  return data;
}

Dataset ingest(const std::filesystem::path& csv, const DatasetSchema& schema) {
  std::ifstream in(csv, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + csv.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return ingest_text(buf.str(), schema);
}

// ---------------------------------------------------------------- pipeline

fairness::PartitionSpec protected_partition(const Dataset& data) {
  return fairness::PartitionSpec::match({{data.protected_qubit, 1}});
}

namespace {

SampledParity sample_parity(const fairness::ParityReport& exact, std::uint64_t shots,
                            std::uint64_t seed) {
  measurement::OutcomeDistribution dist{exact.labels, exact.probabilities};
  SampledParity s;
  s.histogram = measurement::sample(dist, shots, seed);
  const auto f = s.histogram.frequencies();
  s.frequency_gap = std::abs(f[0] - f[1]);
  s.exact_gap = exact.gap;
  return s;
}

Json to_json(const SampledParity& s) {
  return {{"histogram", report::to_json(s.histogram)},
          {"frequency_gap", report::number(s.frequency_gap)},
          {"exact_gap", report::number(s.exact_gap)}};
}

}  // namespace

ExperimentReport run_audit(const Dataset& data, const AuditOptions& options) {
  const int n = data.num_qubits();
  const StateVector psi = encoding::prepare_scored_state(data.scores, n);
  const fairness::PartitionSpec spec = protected_partition(data);

  ExperimentReport r;
  r.dataset_digest = data.digest;
  r.feature_names = data.feature_names;
  r.protected_qubit = data.protected_qubit;
  r.rows = data.records.size();
  r.distinct_records = data.scores.entries().size();

  r.pre_repair = fairness::statistical_parity_probs(psi, spec, options.epsilon);
  r.pre_disparate_impact = fairness::disparate_impact_ratio(r.pre_repair);

  amplification::Repair repair =
      amplification::repair_parity(psi, spec, options.epsilon, options.tol);
  r.plan = repair.plan;
  r.post_repair = std::move(repair.report);
  r.post_disparate_impact = fairness::disparate_impact_ratio(r.post_repair);

  std::vector<fairness::PartitionSpec> others;
  std::vector<std::string> other_names;
  for (int q = 1; q <= n; ++q) {
    if (q == data.protected_qubit) continue;
    others.push_back(fairness::PartitionSpec::match({{q, 1}}));
    other_names.push_back(data.feature_names[static_cast<std::size_t>(q - 1)]);
  }
  auto cross =
      amplification::cross_partition_disparity(repair.state, spec, others, options.epsilon);
  for (std::size_t i = 0; i < cross.size(); ++i)
    r.cross_partitions.emplace_back(other_names[i], std::move(cross[i]));

  r.pre_samples = sample_parity(r.pre_repair, options.shots, options.seed);
  r.post_samples = sample_parity(r.post_repair, options.shots, options.seed + 1);

  if (!r.plan.achieved) {
    std::ostringstream os;
    os << std::setprecision(17) << "epsilon-parity is not reachable: each iteration rotates by "
       << 2.0 * r.plan.theta << " rad and no m <= " << r.plan.search_bound
       << " lands within epsilon of 0.5; applied best-effort m = " << r.plan.m
       << " with residual |P1 - 0.5| = " << r.plan.gap;
    r.explanation = os.str();
  } else if (r.post_repair.gap > r.pre_repair.gap + options.tol.composed) {
    throw NumericalInvariantViolation("repair increased the parity gap");
  }

  if (options.include_state)
    r.repaired_state.emplace(repair.state.amplitudes().begin(), repair.state.amplitudes().end());
  return r;
}

Json to_json(const ExperimentReport& r) {
  Json j;
  j["tool_version"] = std::string(kToolVersion);
  j["dataset"] = {{"digest", "sha256:" + r.dataset_digest},
                  {"rows", r.rows},
                  {"distinct_records", r.distinct_records},
                  {"feature_names", r.feature_names},
                  {"protected_qubit", r.protected_qubit},
                  {"aggregation", "duplicate records summed into one basis state score"}};
  j["schema"] = r.schema.to_json();
  j["pre_repair"] = {{"parity", report::to_json(r.pre_repair)},
                     {"disparate_impact", report::to_json(r.pre_disparate_impact)},
                     {"sampled", to_json(r.pre_samples)}};
  j["plan"] = report::to_json(r.plan);
  j["post_repair"] = {{"parity", report::to_json(r.post_repair)},
                      {"disparate_impact", report::to_json(r.post_disparate_impact)},
                      {"sampled", to_json(r.post_samples)}};
  Json cross = Json::array();
  for (const auto& [name, rep] : r.cross_partitions)
    cross.push_back({{"feature", name}, {"parity", report::to_json(rep)}});
  j["cross_partitions"] = cross;
  j["achieved"] = r.plan.achieved;
  j["explanation"] = r.explanation;
  if (r.repaired_state) {
    Json amps = Json::array();
    for (const Complex& c : *r.repaired_state)
      amps.push_back(Json::array({report::number(c.real()), report::number(c.imag())}));
    j["repaired_state"] = amps;
  }
  return j;
}

int exit_code(const ExperimentReport& r) { return r.plan.achieved ? kExitOk : kExitNotAchieved; }

// ------------------------------------------------------------ file formats

namespace {

Complex parse_complex(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw InvalidArgument("complex entry must be a number or [re, im]: " + j.dump());
}

CMatrix parse_matrix(const Json& j) {
  if (!j.is_array() || j.empty()) throw InvalidArgument("matrix must be a non-empty array");
  const std::size_t dim = j.size();
  CMatrix m(dim);
  for (std::size_t r = 0; r < dim; ++r) {
    if (!j[r].is_array() || j[r].size() != dim) throw InvalidArgument("matrix must be square");
    for (std::size_t c = 0; c < dim; ++c) m(r, c) = parse_complex(j[r][c]);
  }
  return m;
}

MatrixOperator named_gate(const std::string& name) {
  if (name == "I") return MatrixOperator::identity(2);
  if (name == "X") return MatrixOperator::pauli_x();
  if (name == "Y") return MatrixOperator::pauli_y();
  if (name == "Z") return MatrixOperator::pauli_z();
  if (name == "H") return MatrixOperator::hadamard();
  throw InvalidArgument("unknown gate '" + name + "'");
}

}  // namespace

DensityMatrix parse_state(const Json& j) {
  if (j.contains("amplitudes")) {
    std::vector<Complex> amps;
    for (const auto& a : j.at("amplitudes")) amps.push_back(parse_complex(a));
    return pure_density(StateVector::from_amplitudes(std::move(amps)));
  }
  if (j.contains("density")) return DensityMatrix::from_matrix(parse_matrix(j.at("density")));
  throw InvalidArgument("state needs an 'amplitudes' or 'density' field");
}

std::vector<DensityMatrix> parse_states(const Json& j) {
  if (!j.contains("states") || !j.at("states").is_array())
    throw InvalidArgument("expected a 'states' array");
  std::vector<DensityMatrix> out;
  for (const auto& s : j.at("states")) out.push_back(parse_state(s));
  return out;
}

MatrixOperator parse_unitary(const Json& j) {
  if (j.contains("matrix")) return MatrixOperator(parse_matrix(j.at("matrix")), OperatorKind::unitary);
  if (j.contains("gates")) {
    const auto& gates = j.at("gates");
    if (!gates.is_array() || gates.empty()) throw InvalidArgument("'gates' must be non-empty");
    MatrixOperator u = named_gate(gates[0].get<std::string>());
    for (std::size_t i = 1; i < gates.size(); ++i)
      u = tensor(u, named_gate(gates[i].get<std::string>()));
    return u;
  }
  throw InvalidArgument("operator needs a 'matrix' or 'gates' field");
}

Povm parse_povm(const Json& j) {
  if (j.contains("computational")) return Povm::computational_basis(j.at("computational").get<int>());
  if (j.contains("trivial")) return Povm::trivial(j.at("trivial").get<std::size_t>());
  if (j.contains("effects")) {
    std::vector<MatrixOperator> effects;
    for (const auto& e : j.at("effects"))
      effects.emplace_back(parse_matrix(e), OperatorKind::effect);
    std::vector<std::string> labels;
    if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
    return Povm(std::move(effects), std::move(labels));
  }
  throw InvalidArgument("POVM needs 'effects', 'computational' or 'trivial'");
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
}

}  // namespace qfair::pipeline
