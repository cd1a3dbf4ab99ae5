#pragma once

// JSON encodings for scalars, state sets, plane structures, nullity reports and
// deduction traces. Output key order and element order are fixed so that
// serialize(parse(serialize(x))) is byte-identical to serialize(x).

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "oplm/bipartition.hpp"
#include "oplm/field.hpp"
#include "oplm/prover.hpp"
#include "oplm/states.hpp"
#include "oplm/verifier.hpp"

namespace oplm {

using Json = nlohmann::ordered_json;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Json to_json(const CycNum& z) { return Json{{"u", z.u().str()}, {"v", z.v().str()}}; }

inline CycNum cyc_from_json(const Json& j) {
  try {
    return {BigRational::parse(j.at("u").get<std::string>()), BigRational::parse(j.at("v").get<std::string>())};
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad scalar: ") + e.what());
  }
}

inline Json to_json(const StateSet& s) {
  Json j;
  j["dims"] = {s.dims().d1, s.dims().d2, s.dims().d3};
  j["stopper"] = s.stopper() ? Json(s[*s.stopper()].label) : Json(nullptr);
  Json states = Json::array();
  for (const auto& st : s.states()) {
    Json e;
    e["label"] = st.label;
    if (!st.family.empty()) e["family"] = st.family;
    Json amps = Json::array();
    for (const auto& [idx, a] : st.ket.amps()) {
      Json aj;
      aj["idx"] = {idx[0], idx[1], idx[2]};
      aj["u"] = a.u().str();
      aj["v"] = a.v().str();
      amps.push_back(std::move(aj));
    }
    e["amps"] = std::move(amps);
    states.push_back(std::move(e));
  }
  j["states"] = std::move(states);
  return j;
}

inline std::string serialize(const StateSet& s) { return to_json(s).dump(2) + "\n"; }

inline StateSet state_set_from_json(const Json& j) {
  try {
    const auto& d = j.at("dims");
    if (!d.is_array() || d.size() != 3) throw ParseError("dims must be an array of three integers");
    const Dims dims{d[0].get<int>(), d[1].get<int>(), d[2].get<int>()};
    dims.validate();
    StateSet s(dims);
    for (const auto& e : j.at("states")) {
      Ket k(dims);
      for (const auto& a : e.at("amps")) {
        const auto& idx = a.at("idx");
        if (!idx.is_array() || idx.size() != 3) throw ParseError("idx must have three entries");
        k.add({idx[0].get<int>(), idx[1].get<int>(), idx[2].get<int>()}, cyc_from_json(a));
      }
      if (k.is_zero()) throw ParseError("state '" + e.at("label").get<std::string>() + "' is zero");
      s.add(e.at("label").get<std::string>(), std::move(k), e.value("family", std::string{}));
    }
    if (j.contains("stopper") && !j.at("stopper").is_null()) {
      auto idx = s.index_of(j.at("stopper").get<std::string>());
      if (!idx) throw ParseError("stopper label not found among states");
      s.set_stopper(idx);
    }
    return s;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(std::string("invalid state set: ") + e.what());
  }
}

inline StateSet parse_state_set(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return state_set_from_json(j);
}

inline Json to_json(const PlaneStructure& ps) {
  Json j;
  j["bipartition"] = to_string(ps.bipartition);
  j["rows"] = ps.shape.rows;
  j["cols"] = {ps.shape.c1, ps.shape.c2};
  Json slots = Json::array();
  for (const auto& s : ps.slots)
    slots.push_back(Json{{"row", s.row}, {"col", {s.col.first, s.col.second}}, {"label", s.label}});
  j["slots"] = std::move(slots);
  if (!ps.collisions.empty()) {
    Json col = Json::array();
    for (const auto& c : ps.collisions)
      col.push_back(Json{{"row", c.row}, {"col", {c.col.first, c.col.second}}, {"labels", {c.first, c.second}}});
    j["collisions"] = std::move(col);
  }
  return j;
}

/// Report without timing, so that reruns compare equal.
inline Json to_json(const NullityReport& r, bool with_timing = true) {
  Json j;
  j["bipartition"] = to_string(r.bipartition);
  j["mode"] = to_string(r.mode);
  j["nullity"] = r.nullity;
  j["rows"] = r.rows;
  j["unknowns"] = r.cols;
  j["identity_in_kernel"] = r.identity_in_kernel;
  if (r.mode == NullityMode::modp) {
    j["primes_used"] = r.primes_used;
    j["nullity_per_prime"] = r.nullity_per_prime;
  }
  j["verdict"] = to_string(r.verdict);
  if (with_timing) j["elapsed_ms"] = r.elapsed_ms;
  return j;
}

inline Json to_json(const Fact& f) {
  Json j;
  j["kind"] = to_string(f.kind);
  Json p = Json::array();
  for (const auto& x : f.positions) p.push_back({x.first, x.second});
  j["positions"] = std::move(p);
  j["text"] = format_fact(f);
  return j;
}

inline Json to_json(const DeductionTrace& t) {
  Json j;
  j["bipartition"] = to_string(t.bipartition);
  Json steps = Json::array();
  for (const auto& s : t.steps) {
    Json sj;
    sj["rule"] = to_string(s.rule);
    sj["pair"] = {s.first, s.second};
    Json facts = Json::array();
    for (const auto& f : s.facts) facts.push_back(to_json(f));
    sj["facts"] = std::move(facts);
    steps.push_back(std::move(sj));
  }
  j["steps"] = std::move(steps);
  j["offdiagonal_zero"] = t.offdiagonal_zero;
  j["offdiagonal_total"] = t.offdiagonal_total;
  j["diagonal_classes"] = t.diagonal_classes;
  j["verdict"] = to_string(t.verdict);
  return j;
}

}  // namespace oplm
