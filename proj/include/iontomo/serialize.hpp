#pragma once

#include <json.hpp>
#include <string>

#include "iontomo/calib.hpp"
#include "iontomo/noise.hpp"
#include "iontomo/sim.hpp"
#include "iontomo/tomo.hpp"

namespace iontomo {

using json = nlohmann::json;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline double require_number(const json& j, const std::string& field) {
  if (!j.contains(field)) throw ParseError("missing field \"" + field + "\"");
  if (!j.at(field).is_number()) throw ParseError("field \"" + field + "\" must be a number");
  return j.at(field).get<double>();
}

inline json to_json(const ReadoutErrors& e) { return json{{"e10", e.e10}, {"e01", e.e01}}; }

inline ReadoutErrors readout_from_json(const json& j) {
  ReadoutErrors e;
  e.e10 = require_number(j, "e10");
  e.e01 = require_number(j, "e01");
  validate(e);
  return e;
}

inline json to_json(const LinearGateModel& m) {
  json rows = json::array();
  for (int r = 0; r < 3; ++r) rows.push_back({m.a(r, 0), m.a(r, 1), m.a(r, 2)});
  return json{{"a", rows}};
}

inline LinearGateModel linear_model_from_json(const json& j) {
  if (!j.contains("a")) throw ParseError("missing field \"a\"");
  const auto& rows = j.at("a");
  if (!rows.is_array() || rows.size() != 3) throw ParseError("field \"a\" must be a 3x3 array");
  LinearGateModel m;
  for (int r = 0; r < 3; ++r) {
    const auto& row = rows.at(r);
    if (!row.is_array() || row.size() != 3) throw ParseError("field \"a\" must be a 3x3 array");
    for (int c = 0; c < 3; ++c) m.a(r, c) = row.at(c).get<double>();
  }
  return m;
}

inline json to_json(const CrossTalkModel& ct) {
  return json{{"target", to_json(ct.target)}, {"neighbor", to_json(ct.neighbor)}};
}

inline CrossTalkModel crosstalk_from_json(const json& j) {
  if (!j.contains("target")) throw ParseError("missing field \"target\"");
  if (!j.contains("neighbor")) throw ParseError("missing field \"neighbor\"");
  return CrossTalkModel{linear_model_from_json(j.at("target")),
                        linear_model_from_json(j.at("neighbor"))};
}

inline json to_json(const TomographyDataset& ds) {
  json arr = json::array();
  for (std::size_t i = 0; i < ds.circuits.size(); ++i) {
    arr.push_back(json{{"circuit_id", i},
                       {"counts", ds.circuits[i].counts},
                       {"shots", ds.circuits[i].shots}});
  }
  return arr;
}

inline TomographyDataset dataset_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("dataset must be a JSON array");
  TomographyDataset ds;
  ds.circuits.resize(j.size());
  for (const auto& entry : j) {
    if (!entry.contains("circuit_id")) throw ParseError("missing field \"circuit_id\"");
    if (!entry.contains("counts")) throw ParseError("missing field \"counts\"");
    const std::size_t id = entry.at("circuit_id").get<std::size_t>();
    if (id >= ds.circuits.size()) throw ParseError("circuit_id out of range");
    CircuitCounts cc;
    cc.counts = entry.at("counts").get<std::vector<double>>();
    cc.shots = require_number(entry, "shots");
    double sum = 0.0;
    for (double c : cc.counts) {
      if (c < 0) throw ParseError("negative count in circuit " + std::to_string(id));
      sum += c;
    }
    if (std::abs(sum - cc.shots) > 1e-9 * std::max(1.0, cc.shots))
      throw ParseError("counts of circuit " + std::to_string(id) + " do not sum to shots");
    ds.circuits[id] = std::move(cc);
  }
  // exact mode round-trips as fractional counts with shots = 1
  ds.exact = !ds.circuits.empty() && ds.circuits.front().shots == 1.0 &&
             [&] {
               for (const auto& c : ds.circuits)
                 for (double v : c.counts)
                   if (v != 0.0 && v != 1.0) return true;
               return false;
             }();
  return ds;
}

inline json to_json(const QtGateEstimate& e) {
  return json{{"a", e.params.a},
              {"b", e.params.b},
              {"c", e.params.c},
              {"stderr", {e.stderrs[0], e.stderrs[1], e.stderrs[2]}}};
}

inline QtGateParams qt_params_from_json(const json& j) {
  QtGateParams p;
  p.a = require_number(j, "a");
  p.b = require_number(j, "b");
  p.c = require_number(j, "c");
  return p;
}

inline json to_json(const ProcessEstimate& e) {
  return json{{"theta", e.params.theta},
              {"phi", e.params.phi},
              {"delta", e.params.delta},
              {"loglik", e.log_likelihood}};
}

inline json to_json(const SequencePlan& p) {
  json pulses = json::array();
  for (const auto& g : p.pulses)
    pulses.push_back(json{{"qubit", g.qubit}, {"phi", g.phi}, {"delta", g.delta}});
  return json{{"pulses", pulses}, {"predicted_fidelity", p.predicted_fidelity}};
}

}  // namespace iontomo
