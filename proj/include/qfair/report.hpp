#pragma once

// JSON rendering of audit values. Output is canonical: object keys sorted,
// floats printed with 17 significant digits, so serialize -> parse ->
// serialize is byte-identical.

#include <string>

#include <json.hpp>

#include "qfair/amplification.hpp"
#include "qfair/fairness.hpp"
#include "qfair/measurement.hpp"

namespace qfair::report {

using Json = nlohmann::json;

std::string dump_canonical(const Json& j);

// +inf/-inf/NaN have no JSON number form; they are written as strings.
Json number(double v);

Json to_json(const fairness::ParityReport& r);
Json to_json(const fairness::DisparateImpact& d);
Json to_json(const fairness::LipschitzReport& r);
Json to_json(const amplification::AmplificationPlan& p);
Json to_json(const measurement::Histogram& h);

}  // namespace qfair::report
