#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "zaslab/errors.hpp"
#include "zaslab/imcf.hpp"
#include "zaslab/mass.hpp"
#include "zaslab/profile.hpp"
#include "zaslab/report.hpp"

namespace zaslab::io {

using json = nlohmann::json;

/// 17 significant digits, enough to read back the same double.
inline std::string formatDouble(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x < 0.0 ? "-inf" : "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// JSON has no infinities; they travel as the strings "-inf" / "inf".
inline json number(double x) {
  if (std::isfinite(x)) return x;
  return formatDouble(x);
}

inline double readNumber(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "-inf") return -kInf;
    if (s == "inf") return kInf;
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ParseError(where + ": expected a number");
}

namespace detail {

inline void requireObject(const json& j, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
}

inline void rejectUnknownKeys(const json& j, const std::vector<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const auto& a : allowed) known = known || key == a;
    if (!known) throw ParseError(where + ": unknown key '" + key + "'");
  }
}

inline double requireNumber(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ParseError(where + ": missing key '" + key + "'");
  return readNumber(obj.at(key), where + "." + key);
}

inline std::string csvField(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace detail

// ---------------------------------------------------------------- profiles

inline const char* kindName(ProfileKind k) {
  switch (k) {
    case ProfileKind::negSchwarzschild: return "negSchwarzschild";
    case ProfileKind::posSchwarzschild: return "posSchwarzschild";
    case ProfileKind::powerLaw: return "powerLaw";
    case ProfileKind::boosted: return "boosted";
    case ProfileKind::tabulated: return "tabulated";
    case ProfileKind::flat: return "flat";
  }
  return "unknown";
}

inline json profileToJson(const RadialProfile& p) {
  json j;
  j["kind"] = kindName(p.kind());
  json params = json::object();
  switch (p.kind()) {
    case ProfileKind::negSchwarzschild:
    case ProfileKind::posSchwarzschild: params["m"] = p.mass(); break;
    case ProfileKind::powerLaw:
      params["alpha"] = p.alpha();
      params["r0"] = p.r0();
      break;
    case ProfileKind::boosted:
      params["r0"] = p.r0();
      params["a"] = p.shift();
      break;
    case ProfileKind::tabulated: {
      json samples = json::array();
      const auto r = p.table()->abscissae();
      const auto phi = p.table()->ordinates();
      for (std::size_t i = 0; i < r.size(); ++i) samples.push_back(json::array({r[i], phi[i]}));
      params["samples"] = std::move(samples);
      params["asymptotic_order"] = p.asymptoticOrder();
      break;
    }
    case ProfileKind::flat: break;
  }
  j["params"] = std::move(params);
  if (p.isModified()) {
    json mods = json::array();
    for (const auto& m : p.modifiers()) {
      if (const auto* b = std::get_if<Bump>(&m)) {
        mods.push_back({{"type", "bump"}, {"center", b->center}, {"half_width", b->half_width}, {"amplitude", b->amplitude}});
      } else {
        mods.push_back({{"type", "harmonic_factor"}, {"coefficient", std::get<HarmonicFactor>(m).coefficient}});
      }
    }
    j["modifiers"] = std::move(mods);
  }
  return j;
}

/// {"kind": ..., "params": {...}, "modifiers": [...]}; "modifiers" is optional.
inline RadialProfile profileFromJson(const json& j, const std::string& where = "profile") {
  detail::requireObject(j, where);
  detail::rejectUnknownKeys(j, {"kind", "params", "modifiers"}, where);
  if (!j.contains("kind") || !j.at("kind").is_string()) throw ParseError(where + ": missing string key 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  const json params = j.contains("params") ? j.at("params") : json::object();
  const std::string pw = where + ".params";
  detail::requireObject(params, pw);
  auto build = [&]() -> RadialProfile {
    if (kind == "flat") {
      detail::rejectUnknownKeys(params, {}, pw);
      return RadialProfile::flat();
    }
    if (kind == "negSchwarzschild" || kind == "posSchwarzschild") {
      detail::rejectUnknownKeys(params, {"m"}, pw);
      const double m = detail::requireNumber(params, "m", pw);
      return kind == "negSchwarzschild" ? RadialProfile::negSchwarzschild(m) : RadialProfile::posSchwarzschild(m);
    }
    if (kind == "powerLaw") {
      detail::rejectUnknownKeys(params, {"alpha", "α", "r0"}, pw);
      const bool ascii = params.contains("alpha"), greek = params.contains("α");
      if (ascii == greek) throw ParseError(pw + ": give exactly one of 'alpha' or 'α'");
      const double alpha = detail::requireNumber(params, ascii ? "alpha" : "α", pw);
      return RadialProfile::powerLaw(alpha, detail::requireNumber(params, "r0", pw));
    }
    if (kind == "boosted") {
      detail::rejectUnknownKeys(params, {"r0", "a"}, pw);
      return RadialProfile::boosted(detail::requireNumber(params, "r0", pw), detail::requireNumber(params, "a", pw));
    }
    if (kind == "tabulated") {
      detail::rejectUnknownKeys(params, {"samples", "asymptotic_order"}, pw);
      if (!params.contains("samples") || !params.at("samples").is_array()) {
        throw ParseError(pw + ": 'samples' must be an array of [r, phi] pairs");
      }
      std::vector<std::pair<double, double>> samples;
      std::size_t i = 0;
      for (const auto& s : params.at("samples")) {
        const std::string sw = pw + ".samples[" + std::to_string(i++) + "]";
        if (!s.is_array() || s.size() != 2) throw ParseError(sw + ": expected [r, phi]");
        samples.emplace_back(readNumber(s[0], sw), readNumber(s[1], sw));
      }
      int order = 1;
      if (params.contains("asymptotic_order")) {
        if (!params.at("asymptotic_order").is_number_integer()) throw ParseError(pw + ".asymptotic_order: expected an integer");
        order = params.at("asymptotic_order").get<int>();
      }
      return RadialProfile::tabulated(samples, order);
    }
    throw ParseError(where + ".kind: unknown profile kind '" + kind + "'");
  };
  RadialProfile p = [&] {
    try {
      return build();
    } catch (const DomainError& e) {
      throw ValidationError(where + ": " + e.what());
    }
  }();
  if (j.contains("modifiers")) {
    const json& mods = j.at("modifiers");
    if (!mods.is_array()) throw ParseError(where + ".modifiers: expected an array");
    std::size_t i = 0;
    for (const auto& m : mods) {
      const std::string mw = where + ".modifiers[" + std::to_string(i++) + "]";
      detail::requireObject(m, mw);
      const std::string type = m.contains("type") && m.at("type").is_string() ? m.at("type").get<std::string>() : "";
      try {
        if (type == "bump") {
          detail::rejectUnknownKeys(m, {"type", "center", "half_width", "amplitude"}, mw);
          p = p.withBump({detail::requireNumber(m, "center", mw), detail::requireNumber(m, "half_width", mw),
                          detail::requireNumber(m, "amplitude", mw)});
        } else if (type == "harmonic_factor") {
          detail::rejectUnknownKeys(m, {"type", "coefficient"}, mw);
          p = p.withHarmonicFactor(detail::requireNumber(m, "coefficient", mw));
        } else {
          throw ParseError(mw + ".type: expected 'bump' or 'harmonic_factor'");
        }
      } catch (const DomainError& e) {
        throw ValidationError(mw + ": " + e.what());
      }
    }
  }
  return p;
}

inline json parseDocument(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(what + ": " + e.what());
  }
}

inline std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void writeFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << content;
}

/// A catalog file is a JSON array of profiles, or {"profiles": [...]}.
inline std::vector<RadialProfile> catalogFromJson(const json& j) {
  const json* list = &j;
  if (j.is_object()) {
    detail::rejectUnknownKeys(j, {"profiles"}, "catalog");
    if (!j.contains("profiles")) throw ParseError("catalog: missing key 'profiles'");
    list = &j.at("profiles");
  }
  if (!list->is_array()) throw ParseError("catalog: expected an array of profiles");
  std::vector<RadialProfile> out;
  std::size_t i = 0;
  for (const auto& p : *list) out.push_back(profileFromJson(p, "catalog[" + std::to_string(i++) + "]"));
  return out;
}

// ----------------------------------------------------------------- reports

inline json diagnosticsToJson(const Diagnostics& d) {
  json j = json::object();
  for (const auto& [k, v] : d.scalars) j[k] = number(v);
  for (const auto& [k, series] : d.series) {
    json arr = json::array();
    for (double x : series) arr.push_back(number(x));
    j[k] = std::move(arr);
  }
  if (!d.notes.empty()) j["notes"] = d.notes;
  return j;
}

inline json massReportToJson(const MassReport& m) {
  json j;
  j["kind"] = toString(m.kind);
  j["value"] = number(m.value);
  j["r"] = m.r ? json(number(*m.r)) : json(nullptr);
  j["diagnostics"] = diagnosticsToJson(m.diagnostics);
  return j;
}

inline std::string massReportsToCsv(const std::vector<MassReport>& reports) {
  std::string out = "kind,value,r\n";
  for (const auto& m : reports) {
    out += std::string(toString(m.kind)) + "," + formatDouble(m.value) + "," + (m.r ? formatDouble(*m.r) : "") + "\n";
  }
  return out;
}

inline json suiteCaseToJson(const SuiteCase& c) {
  json q = json::object();
  for (const auto& [k, v] : c.quantities) q[k] = number(v);
  return {{"profile_id", c.profile_id}, {"relation", c.relation}, {"quantities", q},
          {"margin", number(c.margin)}, {"tolerance", number(c.tolerance)}, {"status", toString(c.status)},
          {"note", c.note}};
}

inline json suiteReportToJson(const SuiteReport& r) {
  json cases = json::array();
  for (const auto& c : r.cases) cases.push_back(suiteCaseToJson(c));
  json tol = json::object();
  for (const auto& [k, v] : r.tolerances) tol[k] = number(v);
  return {{"suite", r.suite}, {"overall", r.overall() ? "pass" : "fail"}, {"tolerances", tol}, {"cases", cases}};
}

inline std::string suiteReportToCsv(const SuiteReport& r) {
  std::string out = "suite,profile_id,relation,status,margin,tolerance,note\n";
  for (const auto& c : r.cases) {
    out += detail::csvField(r.suite) + "," + detail::csvField(c.profile_id) + "," + detail::csvField(c.relation) + "," +
           toString(c.status) + "," + formatDouble(c.margin) + "," + formatDouble(c.tolerance) + "," +
           detail::csvField(c.note) + "\n";
  }
  return out;
}

// ------------------------------------------------------------- flow traces

inline std::string flowTraceToCsv(const FlowTrace& trace) {
  std::string out = "t,r,area,H,m_H\n";
  for (const auto& s : trace.samples) {
    out += formatDouble(s.t) + "," + formatDouble(s.r) + "," + formatDouble(s.area) + "," + formatDouble(s.H) + "," +
           formatDouble(s.m_H) + "\n";
  }
  return out;
}

inline json flowJumpsToJson(const FlowTrace& trace) {
  json jumps = json::array();
  for (const auto& j : trace.jumps) {
    jumps.push_back({{"t", number(j.t)}, {"r_before", number(j.r_before)}, {"r_after", number(j.r_after)}});
  }
  return {{"A0", number(trace.A0)}, {"m0", number(trace.m0)}, {"jumps", jumps}};
}

/// Inverse of flowTraceToCsv + flowJumpsToJson; bit-exact for finite values.
inline FlowTrace flowTraceFromCsv(const std::string& csv, const json& jumps_doc) {
  FlowTrace trace;
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line != "t,r,area,H,m_H") throw ParseError("flow csv: bad header");
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    double v[5];
    const char* p = line.c_str();
    for (int k = 0; k < 5; ++k) {
      char* end = nullptr;
      v[k] = std::strtod(p, &end);
      if (end == p || (k < 4 && *end != ',') || (k == 4 && *end != '\0')) {
        throw ParseError("flow csv: malformed row " + std::to_string(row));
      }
      p = end + 1;
    }
    trace.samples.push_back({v[0], v[1], v[2], v[3], v[4]});
  }
  detail::requireObject(jumps_doc, "flow jumps");
  trace.A0 = detail::requireNumber(jumps_doc, "A0", "flow jumps");
  trace.m0 = detail::requireNumber(jumps_doc, "m0", "flow jumps");
  if (!jumps_doc.contains("jumps") || !jumps_doc.at("jumps").is_array()) throw ParseError("flow jumps: missing 'jumps'");
  for (const auto& j : jumps_doc.at("jumps")) {
    trace.jumps.push_back({detail::requireNumber(j, "t", "flow jumps"), detail::requireNumber(j, "r_before", "flow jumps"),
                           detail::requireNumber(j, "r_after", "flow jumps")});
  }
  return trace;
}

}  // namespace zaslab::io
