// qfair: audit and repair statistical parity of score-weighted datasets,
// check Lipschitz fairness of quantum algorithms, and compare states.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "qfair/fairness.hpp"
#include "qfair/metrics.hpp"
#include "qfair/pipeline.hpp"
#include "qfair/report.hpp"

namespace {

using qfair::report::Json;
namespace pipeline = qfair::pipeline;

struct DatasetArgs {
  std::string csv;
  std::string schema;
  std::string protected_column;
  std::string score_column;
  double epsilon = 0.05;
  std::uint64_t shots = 100000;
  std::uint64_t seed = 0;
  std::string output;
};

struct LipschitzArgs {
  std::string states;
  std::string algorithm;
  double k = 1.0;
  std::string metric = "trace";
  std::string variant = "metric";
  std::string convention = "unitary";
  std::string input_povm;
  std::string output_povm;
  double slack = 1e-9;
  std::string output;
};

struct MetricsArgs {
  std::string rho;
  std::string sigma;
  std::string metric;
  std::string output;
};

void add_dataset_options(CLI::App* cmd, DatasetArgs& a) {
  cmd->add_option("csv", a.csv, "Dataset CSV (header row, numeric values)")->required();
  cmd->add_option("--schema", a.schema, "Schema JSON: columns, protected, bins, score");
  cmd->add_option("--protected", a.protected_column, "Protected column (overrides schema)");
  cmd->add_option("--score", a.score_column, "Score column (overrides schema)");
  cmd->add_option("--epsilon", a.epsilon, "Parity tolerance, in (0, 0.5)");
  cmd->add_option("--shots", a.shots, "Sampled shots per histogram");
  cmd->add_option("--seed", a.seed, "Sampler seed");
  cmd->add_option("--output", a.output, "Write the report here instead of stdout");
}

void emit(const Json& j, const std::string& path) {
  const std::string text = qfair::report::dump_canonical(j);
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw qfair::InvalidArgument("cannot write " + path);
  out << text;
}

int run_dataset(const DatasetArgs& a, bool include_state) {
  pipeline::DatasetSchema schema;
  if (!a.schema.empty())
    schema = pipeline::DatasetSchema::from_json(pipeline::read_json_file(a.schema));
  if (!a.protected_column.empty()) schema.protected_column = a.protected_column;
  if (!a.score_column.empty()) schema.score_column = a.score_column;

  pipeline::AuditOptions opts;
  opts.epsilon = a.epsilon;
  opts.shots = a.shots;
  opts.seed = a.seed;
  opts.include_state = include_state;
  opts.tol = qfair::Tolerances::from_env();

  const pipeline::Dataset data = pipeline::ingest(a.csv, schema);
  pipeline::ExperimentReport report = pipeline::run_audit(data, opts);
  report.schema = schema;
  emit(pipeline::to_json(report), a.output);
  return pipeline::exit_code(report);
}

qfair::fairness::EvolutionConvention parse_convention(const std::string& s) {
  if (s == "unitary") return qfair::fairness::EvolutionConvention::unitary_conjugation;
  if (s == "adjoint") return qfair::fairness::EvolutionConvention::adjoint_conjugation;
  throw qfair::InvalidArgument("convention must be 'unitary' or 'adjoint'");
}

int run_lipschitz(const LipschitzArgs& a) {
  using namespace qfair::fairness;
  const auto inputs = pipeline::parse_states(pipeline::read_json_file(a.states));
  const auto algorithm = pipeline::parse_unitary(pipeline::read_json_file(a.algorithm));
  const auto convention = parse_convention(a.convention);

  LipschitzReport r;
  if (a.variant == "metric") {
    r = lipschitz_check_metric(inputs, algorithm, a.k, qfair::metrics::parse_metric(a.metric),
                               convention, a.slack);
  } else if (a.variant == "entropy") {
    r = lipschitz_check_entropy(inputs, algorithm, a.k, convention, a.slack);
  } else if (a.variant == "povm") {
    if (a.input_povm.empty() || a.output_povm.empty())
      throw qfair::InvalidArgument("povm variant needs --input-povm and --output-povm");
    const auto in = pipeline::parse_povm(pipeline::read_json_file(a.input_povm));
    const auto out = pipeline::parse_povm(pipeline::read_json_file(a.output_povm));
    r = lipschitz_check_povm(inputs, algorithm, in, out, a.k, convention, a.slack);
  } else {
    throw qfair::InvalidArgument("variant must be metric, entropy or povm");
  }
  Json j = qfair::report::to_json(r);
  j["tool_version"] = std::string(pipeline::kToolVersion);
  emit(j, a.output);
  return r.satisfied ? pipeline::kExitOk : pipeline::kExitNotAchieved;
}

int run_metrics(const MetricsArgs& a) {
  using namespace qfair::metrics;
  const auto rho = pipeline::parse_state(pipeline::read_json_file(a.rho));
  const auto sigma = pipeline::parse_state(pipeline::read_json_file(a.sigma));
  if (rho.dim() != sigma.dim()) throw qfair::DimensionMismatch("rho and sigma differ in size");
  Json j;
  j["tool_version"] = std::string(pipeline::kToolVersion);
  if (!a.metric.empty()) {
    const MetricChoice m = parse_metric(a.metric);
    j["metric"] = std::string(to_string(m));
    j["distance"] = qfair::report::number(distance(m, rho, sigma));
  } else {
    j["trace_distance"] = qfair::report::number(trace_distance(rho, sigma));
    j["fidelity"] = qfair::report::number(fidelity(rho, sigma));
    j["fidelity_angle"] = qfair::report::number(fidelity_angle(rho, sigma));
    j["relative_entropy"] = qfair::report::number(relative_entropy(rho, sigma));
  }
  emit(j, a.output);
  return pipeline::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum fairness audit and repair"};
  app.set_version_flag("--version", std::string(pipeline::kToolVersion));
  app.require_subcommand(1);

  DatasetArgs audit_args;
  auto* audit = app.add_subcommand("audit", "Measure parity on the protected split and plan a repair");
  add_dataset_options(audit, audit_args);

  DatasetArgs repair_args;
  auto* repair = app.add_subcommand("repair", "Audit, then emit the repaired amplitudes too");
  add_dataset_options(repair, repair_args);

  LipschitzArgs lip;
  auto* lipschitz = app.add_subcommand("lipschitz", "Check D(A(a), A(b)) <= K D(a, b) on a state set");
  lipschitz->add_option("--states", lip.states, "JSON {\"states\": [...]}")->required();
  lipschitz->add_option("--algorithm", lip.algorithm, "JSON unitary")->required();
  lipschitz->add_option("--k", lip.k, "Lipschitz constant, in (0, 1]");
  lipschitz->add_option("--metric", lip.metric, "trace | fidelity-angle | relative-entropy");
  lipschitz->add_option("--variant", lip.variant, "metric | entropy | povm");
  lipschitz->add_option("--convention", lip.convention, "unitary (A rho A^dag) | adjoint");
  lipschitz->add_option("--input-povm", lip.input_povm, "POVM on inputs (povm variant)");
  lipschitz->add_option("--output-povm", lip.output_povm, "POVM on outputs (povm variant)");
  lipschitz->add_option("--slack", lip.slack, "Absolute slack on each inequality");
  lipschitz->add_option("--output", lip.output, "Write the report here instead of stdout");

  MetricsArgs met;
  auto* metrics = app.add_subcommand("metrics", "Distances between two states");
  metrics->add_option("--rho", met.rho, "JSON state")->required();
  metrics->add_option("--sigma", met.sigma, "JSON state")->required();
  metrics->add_option("--metric", met.metric, "Only this metric; default prints all");
  metrics->add_option("--output", met.output, "Write the result here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return pipeline::kExitInputError;
  }

  try {
    if (*audit) return run_dataset(audit_args, false);
    if (*repair) return run_dataset(repair_args, true);
    if (*lipschitz) return run_lipschitz(lip);
    return run_metrics(met);
  } catch (const qfair::NumericalInvariantViolation& e) {
    std::cerr << "qfair: numerical invariant violated: " << e.what() << "\n";
    return pipeline::kExitNumericalError;
  } catch (const qfair::Error& e) {
    std::cerr << "qfair: " << e.what() << "\n";
    return pipeline::kExitInputError;
  } catch (const Json::exception& e) {
    std::cerr << "qfair: malformed JSON input: " << e.what() << "\n";
    return pipeline::kExitInputError;
  }
}
