#pragma once

// Machine-readable reports. Every report is a JSON object carrying
// schema_version, the tool version and the full run configuration (including
// the graph description), so rerunning the embedded configuration reproduces
// the report byte for byte. Wall-clock timing is deliberately not recorded.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qghot/hotspots/verify.hpp"
#include "qghot/spectral/eigen.hpp"
#include "qghot/structure.hpp"

namespace qghot {

inline constexpr int report_schema_version = 1;
inline constexpr const char* tool_version = "0.1.0";

using Json = nlohmann::json;

inline Json report_header(const std::string& command) {
  Json j;
  j["schema_version"] = report_schema_version;
  j["tool"] = "qghot";
  j["tool_version"] = tool_version;
  j["command"] = command;
  return j;
}

inline Json graph_summary(const MetricGraph& g) {
  return {{"name", g.name()},
          {"vertices", g.vertex_count()},
          {"edges", g.edge_count()},
          {"total_length", g.total_length()},
          {"betti", betti(g)},
          {"boundary", boundary_vertices(g).size()}};
}

inline Json to_json(const EigenFunction& f) {
  Json traces = Json::array();
  for (const auto& t : f.traces) traces.push_back({t.A, t.B});
  return {{"k", f.k}, {"traces", traces}};
}

inline Json to_json(const EigenPair& p, bool with_basis) {
  Json j{{"mu", p.mu},
         {"k", p.k},
         {"multiplicity", p.multiplicity},
         {"first_index", p.first_index + 1},
         {"diagnostics",
          {{"continuity", p.diagnostics.continuity},
           {"kirchhoff", p.diagnostics.kirchhoff},
           {"mean", p.diagnostics.mean},
           {"gram", p.diagnostics.gram},
           {"sigma", p.diagnostics.sigma}}}};
  if (with_basis && !p.basis.empty()) {
    Json b = Json::array();
    for (const auto& f : p.basis) b.push_back(to_json(f));
    j["basis"] = b;
  }
  return j;
}

inline Json to_json(const MetricGraph& g, const HotspotPiece& p) {
  Json j{{"edge", g.edge(p.segment.edge).id},
         {"lo", p.segment.lo},
         {"hi", p.segment.hi},
         {"point", p.is_point()},
         {"max", p.has_max},
         {"min", p.has_min},
         {"component", p.component}};
  if (p.is_point()) {
    auto v = vertex_at(g, p.point());
    j["vertex"] = v ? Json(g.graph().vertex_name(*v)) : Json(nullptr);
  }
  return j;
}

inline Json to_json(const MetricGraph& g, const HotspotSet& s) {
  Json pieces = Json::array();
  for (const auto& p : s.pieces) pieces.push_back(to_json(g, p));
  return {{"components", s.component_count}, {"pieces", pieces}};
}

inline Json to_json(const MetricGraph& g, const HotspotReport& r) {
  const auto bd = boundary(g);
  bool meets_boundary = false;
  for (const auto& p : r.global.pieces) {
    meets_boundary = meets_boundary || bd.contains(g, {p.segment.edge, p.segment.lo}) ||
                     bd.contains(g, {p.segment.edge, p.segment.hi});
  }
  return {{"mu", r.mu},
          {"k", r.k},
          {"multiplicity", r.multiplicity},
          {"global", to_json(g, r.global)},
          {"local", to_json(g, r.local)},
          {"directions", r.directions},
          {"closure_segments", r.closure_segments},
          {"subset_certified", r.subset_certified},
          {"equality_claimed", r.equality_claimed},
          {"global_meets_boundary", meets_boundary},
          // Finitely many components holds for every sampled report by
          // construction and says nothing about the true set.
          {"finite_components_note", "by construction of the sampled set"}};
}

/// status is "pass", "fail" or "inapplicable".
inline Json to_json(const VerifierOutcome& o, const std::string& status) {
  Json tol = Json::object();
  for (const auto& [name, value] : o.tolerances) tol[name] = value;
  return {{"check", o.check}, {"status", status}, {"witnesses", o.witnesses}, {"tolerances", tol}, {"detail", o.detail}};
}

inline Json to_json(const VerifierOutcome& o) { return to_json(o, o.pass ? "pass" : "fail"); }

/// Writes to a temporary file next to `path`, then renames it into place.
inline void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::BadParameter, "cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) fail(ErrorCode::BadParameter, "write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    fail(ErrorCode::BadParameter, "cannot move output into '" + path + "'");
  }
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

/// Shortest decimal form that reads back to the same double.
inline std::string fmt(double v) {
  char buf[32];
  for (int prec = 6; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

}  // namespace qghot
