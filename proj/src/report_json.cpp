#include "qfair/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace qfair::report {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

bool is_scalar(const Json& j) { return !j.is_object() && !j.is_array(); }

void write(const Json& j, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      // nlohmann::json objects are std::map-backed, so iteration is sorted.
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(it.key()).dump() + ": ";
        write(it.value(), depth + 1, out);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      const bool flat = std::all_of(j.begin(), j.end(), is_scalar);
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          write(j[i], depth + 1, out);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        write(j[i], depth + 1, out);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string dump_canonical(const Json& j) {
  std::string out;
  write(j, 0, out);
  out += "\n";
  return out;
}

Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  return v;
}

Json to_json(const fairness::ParityReport& r) {
  Json subspaces = Json::array();
  for (std::size_t i = 0; i < r.labels.size(); ++i)
    subspaces.push_back({{"label", r.labels[i]}, {"probability", number(r.probabilities[i])}});
  return {{"subspaces", subspaces},
          {"gap", number(r.gap)},
          {"epsilon", number(r.epsilon)},
          {"satisfied", r.satisfied}};
}

Json to_json(const fairness::DisparateImpact& d) {
  Json j = {{"ratio", number(d.ratio)}, {"meets_80_percent", d.meets(0.8)}};
  if (!d.diagnostic.empty()) j["diagnostic"] = d.diagnostic;
  return j;
}

Json to_json(const fairness::LipschitzReport& r) {
  Json pairs = Json::array();
  for (const auto& p : r.pairs) {
    Json jp = {{"i", p.i},
               {"j", p.j},
               {"input_distance", number(p.input_distance)},
               {"output_distance", number(p.output_distance)},
               {"coincident", p.coincident},
               {"support_excluded", p.support_excluded},
               {"satisfied", p.satisfied}};
    jp["ratio"] = p.ratio ? number(*p.ratio) : Json(nullptr);
    pairs.push_back(std::move(jp));
  }
  Json j = {{"pairs", pairs},
            {"k", number(r.k)},
            {"variant", std::string(fairness::to_string(r.variant))},
            {"convention", std::string(fairness::to_string(r.convention))},
            {"slack", number(r.slack)},
            {"satisfied", r.satisfied}};
  j["metric"] = r.metric ? Json(std::string(metrics::to_string(*r.metric)))
                         : Json("classical-trace");
  return j;
}

Json to_json(const amplification::AmplificationPlan& p) {
  return {{"theta", number(p.theta)},
          {"initial_mass", number(p.initial_mass)},
          {"epsilon", number(p.epsilon)},
          {"m", p.m},
          {"predicted_mass", number(p.predicted_mass)},
          {"gap", number(p.gap)},
          {"achieved", p.achieved},
          {"search_bound", p.search_bound},
          {"closed_form_raw", number(p.closed_form_raw)},
          {"closed_form_m", p.closed_form_m}};
}

Json to_json(const measurement::Histogram& h) {
  Json counts = Json::array();
  for (std::size_t i = 0; i < h.labels.size(); ++i)
    counts.push_back({{"label", h.labels[i]}, {"count", h.counts[i]}});
  return {{"counts", counts}, {"shots", h.shots}, {"seed", h.seed}, {"sampler", h.sampler}};
}

}  // namespace qfair::report
