#pragma once

// JSON forms of the library's values. Elements are written as their integer
// codes, point sets as arrays of coordinate arrays, ArcSet points sorted by
// dense index.

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "capforge/auxcurve.hpp"
#include "capforge/cubic.hpp"
#include "capforge/error.hpp"
#include "capforge/field.hpp"
#include "capforge/indep.hpp"
#include "capforge/lift.hpp"
#include "capforge/plane.hpp"
#include "capforge/verify.hpp"

namespace capforge::io {

using json = nlohmann::ordered_json;

namespace detail {

inline const json& need(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(Errc::MalformedInput, std::string("missing field \"") + key + "\"");
  return j.at(key);
}

// Parsed text yields unsigned numbers, values built in code may be signed.
inline bool non_negative_integer(const json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

inline u64 need_u64(const json& j, const char* key) {
  const json& v = need(j, key);
  if (!non_negative_integer(v)) throw Error(Errc::MalformedInput, std::string("field \"") + key + "\" must be a non-negative integer");
  return v.get<u64>();
}

inline std::vector<u64> need_u64_array(const json& v, const char* what) {
  if (!v.is_array()) throw Error(Errc::MalformedInput, std::string(what) + " must be an array");
  std::vector<u64> out;
  for (const auto& e : v) {
    if (!non_negative_integer(e)) throw Error(Errc::MalformedInput, std::string(what) + " must hold non-negative integers");
    out.push_back(e.get<u64>());
  }
  return out;
}

}  // namespace detail

// ---- field ----

inline json to_json(const Field& f) { return json{{"p", f.p()}, {"h", f.h()}, {"modulus", f.modulus()}}; }

inline Field field_from_json(const json& j) {
  const u64 p = detail::need_u64(j, "p");
  const u64 h = j.contains("h") ? detail::need_u64(j, "h") : 1;
  if (h == 0 || h > 64) throw Error(Errc::BadModulus, "extension degree out of range");
  std::optional<std::vector<u64>> modulus;
  if (j.contains("modulus")) {
    auto m = detail::need_u64_array(j.at("modulus"), "modulus");
    if (!m.empty()) modulus = std::move(m);
  }
  Field f = Field::build(p, static_cast<unsigned>(h), modulus);
  if (j.contains("q") && detail::need_u64(j, "q") != f.q())
    throw Error(Errc::MalformedInput, "\"q\" disagrees with p^h");
  return f;
}

// ---- points ----

inline json to_json(Point2 p) { return json::array({p.x.code, p.y.code}); }

inline json to_json(const PointN& p) {
  json a = json::array();
  for (auto c : p.coords) a.push_back(c.code);
  return a;
}

inline std::vector<Point2> points2_from_json(const Field& f, const json& v) {
  if (!v.is_array()) throw Error(Errc::MalformedInput, "points must be an array");
  std::vector<Point2> out;
  for (const auto& e : v) {
    const auto c = detail::need_u64_array(e, "point");
    if (c.size() != 2) throw Error(Errc::MalformedInput, "plane points have two coordinates");
    out.push_back({f.element(c[0]), f.element(c[1])});
  }
  return out;
}

inline std::vector<PointN> pointsN_from_json(const Field& f, const json& v) {
  if (!v.is_array()) throw Error(Errc::MalformedInput, "points must be an array");
  std::vector<PointN> out;
  for (const auto& e : v) {
    PointN p;
    for (u64 c : detail::need_u64_array(e, "point")) p.coords.push_back(f.element(c));
    if (!out.empty() && p.dim() != out.front().dim()) throw Error(Errc::MixedDimensions, "points of different dimensions");
    out.push_back(std::move(p));
  }
  return out;
}

// ---- arcs ----

inline json to_json(const ArcSet& arc) {
  const Field& f = arc.field;
  auto pts = arc.points;
  sort_by_dense_index(f, pts);
  json pj = json::array();
  for (auto p : pts) pj.push_back(to_json(p));
  return json{{"q", f.q()}, {"p", f.p()}, {"h", f.h()}, {"modulus", f.modulus()}, {"m", arc.m},
              {"M", arc.M}, {"g", arc.g.code}, {"points", pj}};
}

inline ArcSet arc_from_json(const json& j) {
  Field f = field_from_json(j);
  ArcSet arc{f, 0, {}, f.primitive_root(), {}};
  if (j.contains("m")) arc.m = detail::need_u64(j, "m");
  if (j.contains("M")) arc.M = detail::need_u64_array(j.at("M"), "M");
  if (j.contains("g")) arc.g = f.element(detail::need_u64(j, "g"));
  arc.points = points2_from_json(f, detail::need(j, "points"));
  return arc;
}

// ---- caps ----

inline json to_json(const LiftedCap& cap) {
  json j = to_json(cap.arc);
  json arc_points = std::move(j["points"]);
  j.erase("points");
  j["arc"] = std::move(arc_points);
  j["N"] = cap.N;
  j["qprime"] = cap.qprime();
  j["ext_modulus"] = json::array();
  for (auto c : cap.ext.modulus()) j["ext_modulus"].push_back(c.code);
  json pj = json::array();
  for (const auto& p : cap.points) pj.push_back(to_json(p));
  j["points"] = std::move(pj);
  return j;
}

// A cap read back from disk: its points and, when present, the source arc.
struct CapFile {
  Field field;
  unsigned N = 0;
  std::vector<PointN> points;
  std::optional<ArcSet> arc;
};

inline CapFile cap_from_json(const json& j) {
  Field f = field_from_json(j);
  CapFile c{f, static_cast<unsigned>(detail::need_u64(j, "N")), pointsN_from_json(f, detail::need(j, "points")), {}};
  for (const auto& p : c.points) {
    if (p.dim() != c.N) throw Error(Errc::MalformedInput, "point dimension disagrees with N");
  }
  if (j.contains("arc")) {
    json aj = j;
    aj["points"] = j.at("arc");
    c.arc = arc_from_json(aj);
  }
  return c;
}

inline bool is_cap_json(const json& j) { return j.is_object() && j.contains("N"); }

// ---- reports ----

inline json to_json(const Field& f, const VerifyReport& r) {
  json unc = json::array();
  for (u64 idx : r.uncovered) {
    if (r.dimension == 2) unc.push_back(to_json(point_at(f, idx)));
    else unc.push_back(to_json(point_at(f, idx, r.dimension)));
  }
  json counts{{"set_size", r.set_size}, {"checked", r.points_checked}, {"covered", r.covered}};
  if (r.dimension == 2) {
    counts["external"] = r.external;
    counts["internal"] = r.internal;
    counts["bicovered"] = r.both;
  }
  json j{{"verdict", r.verdict}, {"mode", r.mode}, {"dimension", r.dimension}, {"uncovered", unc}, {"counts", counts}};
  if (r.mode == "sampled") {
    j["seed"] = r.seed;
    j["sample"] = r.sample;
  }
  return j;
}

inline json to_json(const indep::IndepSet& s) {
  return json{{"m", s.m},
              {"members", s.members},
              {"flags",
               {{"three_independent", s.flags.three_independent},
                {"maximal", s.flags.maximal},
                {"good", s.flags.good}}}};
}

inline json to_json(const GateReport& g) {
  return json{{"q", g.q},
              {"m", g.m},
              {"exact", g.exact},
              {"quartic", g.quartic},
              {"exact_threshold", g.exact_threshold},
              {"quartic_threshold", g.quartic_threshold}};
}

inline json to_json(Point2 p, const aux::CurveParams& cp, const aux::WitnessSearch& w) {
  json j{{"P", to_json(p)}, {"t", cp.t.code}, {"m", cp.m}, {"searched", w.searched}};
  if (!w.witness) {
    j["found"] = false;
    return j;
  }
  j["found"] = true;
  j["x"] = w.witness->x.code;
  j["y"] = w.witness->y.code;
  j["class"] = to_string(w.witness->cls);
  j["secant"] = json::array({to_json(w.witness->secant[0]), to_json(w.witness->secant[1])});
  return j;
}

// ---- parity-check matrices ----

inline json to_json(const ParityCheckMatrix& H, unsigned N, std::optional<u64> source_hash) {
  const auto par = H.parameters();
  json meta{{"parameters", json::array({par.length, par.dimension, par.distance})},
            {"embedding", "affine-embedded"},
            {"N", N}};
  if (source_hash) {
    std::ostringstream hex;
    hex << std::hex << *source_hash;
    meta["source_arc_fnv1a"] = hex.str();
  }
  return json{{"rows", H.rows}, {"cols", H.cols}, {"order", "column-major"}, {"entries", H.entries}, {"metadata", meta}};
}

inline ParityCheckMatrix parity_from_json(const json& j) {
  ParityCheckMatrix H;
  H.rows = detail::need_u64(j, "rows");
  H.cols = detail::need_u64(j, "cols");
  H.entries = detail::need_u64_array(detail::need(j, "entries"), "entries");
  if (H.entries.size() != H.rows * H.cols) throw Error(Errc::MalformedInput, "entries do not fill rows x cols");
  return H;
}

// One matrix row per line, comma separated.
inline std::string to_csv(const ParityCheckMatrix& H) {
  std::string out;
  for (std::size_t r = 0; r < H.rows; ++r) {
    for (std::size_t c = 0; c < H.cols; ++c) {
      if (c) out += ',';
      out += std::to_string(H.at(r, c));
    }
    out += '\n';
  }
  return out;
}

inline json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::MalformedInput, std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace capforge::io
