#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "zaslab/elliptic.hpp"
#include "zaslab/errors.hpp"
#include "zaslab/imcf.hpp"
#include "zaslab/io.hpp"
#include "zaslab/mass.hpp"
#include "zaslab/verify.hpp"

namespace zaslab {

enum class Command { mass, capacity, flow, verify };
enum class OutputFormat { json, csv };

inline const char* toString(Command c) {
  switch (c) {
    case Command::mass: return "mass";
    case Command::capacity: return "capacity";
    case Command::flow: return "flow";
    case Command::verify: return "verify";
  }
  return "unknown";
}

inline const char* toString(OutputFormat f) { return f == OutputFormat::json ? "json" : "csv"; }

inline OutputFormat parseFormat(const std::string& s) {
  if (s == "json") return OutputFormat::json;
  if (s == "csv") return OutputFormat::csv;
  throw ValidationError("format must be 'json' or 'csv', got '" + s + "'");
}

struct ScenarioParams {
  std::optional<double> r;
  std::optional<double> r0;
  double t_max = 10.0;
  int n_samples = 512;
  std::string suite = "all";
  Tolerances tolerances;
};

struct Scenario {
  std::optional<RadialProfile> profile;
  Command command = Command::mass;
  ScenarioParams params;
  std::optional<std::string> output_path;
  OutputFormat format = OutputFormat::json;
};

namespace detail {

inline Command parseCommand(const std::string& s) {
  if (s == "mass") return Command::mass;
  if (s == "capacity") return Command::capacity;
  if (s == "flow") return Command::flow;
  if (s == "verify") return Command::verify;
  throw ParseError("command: unknown command '" + s + "'");
}

inline Tolerances parseTolerances(const io::json& j) {
  io::detail::requireObject(j, "params.tolerances");
  io::detail::rejectUnknownKeys(j, {"equality", "limit", "identity", "monotonicity", "hull"}, "params.tolerances");
  Tolerances t;
  auto read = [&](const char* key, double& field) {
    if (!j.contains(key)) return;
    field = io::readNumber(j.at(key), std::string("params.tolerances.") + key);
    if (!(field > 0.0) || !std::isfinite(field)) {
      throw ValidationError(std::string("params.tolerances.") + key + ": must be positive and finite");
    }
  };
  read("equality", t.equality);
  read("limit", t.limit);
  read("identity", t.identity);
  read("monotonicity", t.monotonicity);
  read("hull", t.hull);
  return t;
}

}  // namespace detail

/// Parses and validates a scenario document. Defaults: t_max = 10,
/// n_samples = 512, suite = "all", verify tolerances.
inline Scenario parseScenario(const std::string& text) {
  const io::json doc = io::parseDocument(text, "scenario");
  io::detail::requireObject(doc, "scenario");
  io::detail::rejectUnknownKeys(doc, {"profile", "command", "params", "output"}, "scenario");
  Scenario s;
  if (!doc.contains("command") || !doc.at("command").is_string()) throw ParseError("scenario: missing string key 'command'");
  s.command = detail::parseCommand(doc.at("command").get<std::string>());
  if (doc.contains("profile")) {
    s.profile = io::profileFromJson(doc.at("profile"), "profile");
  } else if (s.command != Command::verify) {
    throw ParseError("scenario: missing key 'profile'");
  }
  if (doc.contains("params")) {
    const io::json& p = doc.at("params");
    io::detail::requireObject(p, "params");
    io::detail::rejectUnknownKeys(p, {"r", "r0", "t_max", "n_samples", "suite", "tolerances"}, "params");
    if (p.contains("r")) s.params.r = io::readNumber(p.at("r"), "params.r");
    if (p.contains("r0")) s.params.r0 = io::readNumber(p.at("r0"), "params.r0");
    if (p.contains("t_max")) s.params.t_max = io::readNumber(p.at("t_max"), "params.t_max");
    if (p.contains("n_samples")) {
      if (!p.at("n_samples").is_number_integer()) throw ParseError("params.n_samples: expected an integer");
      s.params.n_samples = p.at("n_samples").get<int>();
    }
    if (p.contains("suite")) {
      if (!p.at("suite").is_string()) throw ParseError("params.suite: expected a string");
      s.params.suite = p.at("suite").get<std::string>();
    }
    if (p.contains("tolerances")) s.params.tolerances = detail::parseTolerances(p.at("tolerances"));
  }
  if (doc.contains("output")) {
    const io::json& o = doc.at("output");
    io::detail::requireObject(o, "output");
    io::detail::rejectUnknownKeys(o, {"path", "format"}, "output");
    if (o.contains("path")) {
      if (!o.at("path").is_string()) throw ParseError("output.path: expected a string");
      s.output_path = o.at("path").get<std::string>();
    }
    if (o.contains("format")) {
      if (!o.at("format").is_string()) throw ParseError("output.format: expected a string");
      s.format = parseFormat(o.at("format").get<std::string>());
    }
  }

  const double r_min = s.profile ? s.profile->rMin() : 0.0;
  for (const auto& [name, value] : {std::pair{"params.r", s.params.r}, std::pair{"params.r0", s.params.r0}}) {
    if (value && !(*value > r_min && std::isfinite(*value))) {
      throw ValidationError(std::string(name) + ": must be finite and exceed r_min = " + io::formatDouble(r_min));
    }
  }
  if (!(s.params.t_max > 0.0) || !std::isfinite(s.params.t_max)) throw ValidationError("params.t_max: must be positive");
  if (s.params.n_samples < 2) throw ValidationError("params.n_samples: must be at least 2");
  if (s.params.suite != "all" && std::find(suiteNames().begin(), suiteNames().end(), s.params.suite) == suiteNames().end()) {
    throw ValidationError("params.suite: unknown suite '" + s.params.suite + "'");
  }
  if (s.command == Command::flow && !s.params.r0) throw ValidationError("params.r0: required by the flow command");
  return s;
}

/// Canonical JSON form; parseScenario(scenarioToJson(s).dump()) reproduces s.
inline io::json scenarioToJson(const Scenario& s) {
  io::json doc;
  if (s.profile) doc["profile"] = io::profileToJson(*s.profile);
  doc["command"] = toString(s.command);
  io::json p = io::json::object();
  if (s.params.r) p["r"] = *s.params.r;
  if (s.params.r0) p["r0"] = *s.params.r0;
  p["t_max"] = s.params.t_max;
  p["n_samples"] = s.params.n_samples;
  p["suite"] = s.params.suite;
  const Tolerances& t = s.params.tolerances;
  p["tolerances"] = {{"equality", t.equality}, {"limit", t.limit}, {"identity", t.identity},
                     {"monotonicity", t.monotonicity}, {"hull", t.hull}};
  doc["params"] = p;
  io::json o = {{"format", toString(s.format)}};
  if (s.output_path) o["path"] = *s.output_path;
  doc["output"] = o;
  return doc;
}

enum ExitCode : int { kExitOk = 0, kExitVerifyFailed = 1, kExitInputError = 2, kExitNumericalFailure = 3 };

/// Command-line overrides of the scenario's output settings.
struct RunOptions {
  std::optional<std::string> out_dir;
  std::optional<OutputFormat> format;
  double tol_scale = 1.0;
};

namespace detail {

struct Artifact {
  std::string name;  // file name used under --out
  std::string content;
};

// Destination of the primary artifact: --out DIR wins over output.path;
// without either, artifacts go to `console`.
inline void emit(const std::vector<Artifact>& artifacts, const std::optional<std::string>& out_dir,
                 const std::optional<std::string>& output_path, std::ostream& console) {
  namespace fs = std::filesystem;
  if (out_dir) {
    fs::create_directories(*out_dir);
    for (const auto& a : artifacts) io::writeFile((fs::path(*out_dir) / a.name).string(), a.content);
    return;
  }
  if (output_path) {
    const fs::path primary(*output_path);
    if (primary.has_parent_path()) fs::create_directories(primary.parent_path());
    io::writeFile(primary.string(), artifacts.front().content);
    for (std::size_t i = 1; i < artifacts.size(); ++i) {
      fs::path side = primary;
      side.replace_extension();
      const std::string suffix = artifacts[i].name.substr(artifacts[i].name.find('.'));
      io::writeFile(side.string() + suffix, artifacts[i].content);
    }
    return;
  }
  for (const auto& a : artifacts) console << a.content << (a.content.ends_with('\n') ? "" : "\n");
}

inline std::vector<Artifact> massArtifacts(const Scenario& s, OutputFormat fmt) {
  const RadialProfile& p = *s.profile;
  std::vector<MassReport> reports;
  if (s.params.r) reports.push_back(hawkingMassReport(p, *s.params.r));
  reports.push_back(admMass(p));
  if (hasRegularSingularity(p)) reports.push_back(regularMass(p));
  if (hasZeroAreaSingularity(p)) reports.push_back(zasMass(p));
  if (fmt == OutputFormat::csv) return {{"mass.csv", io::massReportsToCsv(reports)}};
  io::json arr = io::json::array();
  for (const auto& m : reports) arr.push_back(io::massReportToJson(m));
  return {{"mass.json", io::json{{"profile_id", p.id()}, {"reports", arr}}.dump(2) + "\n"}};
}

inline std::vector<Artifact> capacityArtifacts(const Scenario& s, OutputFormat fmt) {
  const RadialProfile& p = *s.profile;
  io::json doc = {{"profile_id", p.id()}};
  std::string csv = "quantity,value,r\n";
  if (s.params.r) {
    const HarmonicFunction h = solveHarmonic(p, *s.params.r);
    const double cap = 4.0 * kPi * h.c;
    doc["capacity_surface"] = {{"r", *s.params.r}, {"value", io::number(cap)}, {"c", io::number(h.c)},
                               {"C", io::number(h.C.value_or(h.c))}};
    csv += "capacity_surface," + io::formatDouble(cap) + "," + io::formatDouble(*s.params.r) + "\n";
  }
  if (hasZeroAreaSingularity(p)) {
    const CapacityLimit lim = capacityZAS(p);
    io::json radii = io::json::array(), caps = io::json::array();
    for (double r : lim.radii) radii.push_back(io::number(r));
    for (double c : lim.capacities) caps.push_back(io::number(c));
    doc["capacity_zas"] = {{"value", io::number(lim.value)}, {"error_estimate", io::number(lim.error_estimate)},
                           {"radii", radii}, {"capacities", caps}};
    csv += "capacity_zas," + io::formatDouble(lim.value) + "," + io::formatDouble(p.rMin()) + "\n";
  }
  doc["notes"] = io::json::array({"radial test functions only; capacity normalized so the flat unit sphere has 4 pi"});
  if (fmt == OutputFormat::csv) return {{"capacity.csv", csv}};
  return {{"capacity.json", doc.dump(2) + "\n"}};
}

inline std::vector<Artifact> flowArtifacts(const Scenario& s, OutputFormat fmt) {
  const FlowTrace trace = weakFlow(*s.profile, *s.params.r0, s.params.t_max, s.params.n_samples);
  const std::string jumps = io::flowJumpsToJson(trace).dump(2) + "\n";
  if (fmt == OutputFormat::csv) return {{"flow.csv", io::flowTraceToCsv(trace)}, {"flow.jumps.json", jumps}};
  io::json samples = io::json::array();
  for (const auto& x : trace.samples) {
    samples.push_back({{"t", x.t}, {"r", x.r}, {"area", x.area}, {"H", x.H}, {"m_H", io::number(x.m_H)}});
  }
  io::json doc = io::flowJumpsToJson(trace);
  doc["profile_id"] = s.profile->id();
  doc["samples"] = samples;
  return {{"flow.json", doc.dump(2) + "\n"}};
}

inline std::vector<Artifact> suiteArtifacts(const SuiteReport& rep, OutputFormat fmt) {
  const std::string base = "verify_" + rep.suite;
  if (fmt == OutputFormat::csv) return {{base + ".csv", io::suiteReportToCsv(rep)}};
  return {{base + ".json", io::suiteReportToJson(rep).dump(2) + "\n"}};
}

template <class F>
int guarded(F&& body, std::ostream& err) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const ValidationError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const DomainError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const InterpolationError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumericalFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace detail

/// Runs a verify suite on a catalog and writes its report. Exit 1 if any case failed.
inline int runVerify(const std::string& suite, const std::vector<RadialProfile>& catalog, const Tolerances& tol,
                     OutputFormat fmt, const std::optional<std::string>& out_dir,
                     const std::optional<std::string>& output_path, std::ostream& console, std::ostream& err) {
  return detail::guarded(
      [&] {
        const SuiteReport rep = runSuite(suite, catalog, tol);
        detail::emit(detail::suiteArtifacts(rep, fmt), out_dir, output_path, console);
        return rep.overall() ? kExitOk : kExitVerifyFailed;
      },
      err);
}

/// Dispatches a validated scenario and writes its artifacts.
inline int runCommand(const Scenario& s, const RunOptions& opt = {}, std::ostream& console = std::cout,
                      std::ostream& err = std::cerr) {
  const OutputFormat fmt = opt.format.value_or(s.format);
  if (s.command == Command::verify) {
    const std::vector<RadialProfile> catalog = s.profile ? std::vector<RadialProfile>{*s.profile} : defaultCatalog();
    return runVerify(s.params.suite, catalog, s.params.tolerances.scaled(opt.tol_scale), fmt, opt.out_dir,
                     s.output_path, console, err);
  }
  return detail::guarded(
      [&] {
        std::vector<detail::Artifact> artifacts;
        switch (s.command) {
          case Command::mass: artifacts = detail::massArtifacts(s, fmt); break;
          case Command::capacity: artifacts = detail::capacityArtifacts(s, fmt); break;
          case Command::flow: artifacts = detail::flowArtifacts(s, fmt); break;
          case Command::verify: break;
        }
        detail::emit(artifacts, opt.out_dir, s.output_path, console);
        return static_cast<int>(kExitOk);
      },
      err);
}

}  // namespace zaslab
