#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace zaslab {

enum class CaseStatus { pass, fail, hypothesis_unmet, informational };

inline const char* toString(CaseStatus s) {
  switch (s) {
    case CaseStatus::pass: return "pass";
    case CaseStatus::fail: return "fail";
    case CaseStatus::hypothesis_unmet: return "hypothesis-unmet";
    case CaseStatus::informational: return "informational";
  }
  return "unknown";
}

/// One asserted relation on one profile. Margins are signed so that a
/// nonnegative margin (up to the tolerance) means the relation holds.
struct SuiteCase {
  std::string profile_id;
  std::string relation;
  std::map<std::string, double> quantities;
  double margin = 0.0;
  double tolerance = 0.0;
  CaseStatus status = CaseStatus::pass;
  std::string note;
};

struct SuiteReport {
  std::string suite;
  std::vector<SuiteCase> cases;
  std::map<std::string, double> tolerances;

  /// Passes unless some case failed. Cases whose hypotheses were not met and
  /// informational cases do not count either way.
  [[nodiscard]] bool overall() const {
    return std::none_of(cases.begin(), cases.end(), [](const SuiteCase& c) { return c.status == CaseStatus::fail; });
  }

  void append(const SuiteReport& other) {
    for (const auto& c : other.cases) {
      cases.push_back(c);
      if (!other.suite.empty()) cases.back().relation = other.suite + ": " + c.relation;
    }
    for (const auto& [k, v] : other.tolerances) tolerances.emplace(k, v);
  }
};

/// Inequality lhs >= rhs - tol; margin lhs - rhs.
inline SuiteCase inequalityCase(std::string profile_id, std::string relation, double lhs, double rhs, double tol) {
  SuiteCase c;
  c.profile_id = std::move(profile_id);
  c.relation = std::move(relation);
  c.margin = lhs - rhs;
  c.tolerance = tol;
  c.status = c.margin >= -tol ? CaseStatus::pass : CaseStatus::fail;
  return c;
}

/// Equality |lhs - rhs| <= tol; margin tol - |lhs - rhs|.
inline SuiteCase equalityCase(std::string profile_id, std::string relation, double lhs, double rhs, double tol) {
  SuiteCase c;
  c.profile_id = std::move(profile_id);
  c.relation = std::move(relation);
  const double diff = (lhs == rhs) ? 0.0 : std::abs(lhs - rhs);
  c.margin = tol - diff;
  c.tolerance = tol;
  c.status = diff <= tol ? CaseStatus::pass : CaseStatus::fail;
  return c;
}

}  // namespace zaslab
