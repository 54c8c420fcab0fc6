#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "bkg/scene.hpp"

namespace bkg {

struct ReportRow {
  std::string fixture;
  Vec point;
  Vec direction;  ///< unit frame coefficients
  std::string theorem;
  std::string interpretation;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool holds = true;
  std::string equality_case;
  std::map<std::string, double> residuals;
};

struct AuditRow {
  std::string fixture;
  Vec point;
  std::string interpretation;
  AuditReport audit;
};

struct AmbientProbe {
  std::string fixture;
  Vec point;
  KaehlerReport kaehler;
  double bochner = 0.0;
};

/// A precondition or evaluation failure at one sample point.
struct ReportFailure {
  std::string fixture;
  Vec point;
  std::string stage;
  std::string message;
};

struct Report {
  std::string command;
  std::vector<ReportRow> rows;
  std::vector<AuditRow> audit;
  std::vector<SurveyRow> survey;
  std::vector<AmbientProbe> probes;
  std::vector<ReportFailure> failures;
  int exit_code = 0;
};

/// Residual above which an audit step counts as failed.
inline constexpr double kAuditTolerance = 1e-5;

Report run_verify(const SceneConfig& scene);
Report run_audit(const SceneConfig& scene);
Report run_survey(const SceneConfig& scene);
Report run_check_ambient(const SceneConfig& scene);

/// Dispatches on "verify", "audit", "survey", "check-ambient".
Report run_report(const SceneConfig& scene, std::string_view command);

/// Rounds to 12 significant digits and prints the shortest text that reads back to the rounded value.
std::string format_number(double x);
/// The rounded value itself; -0 becomes 0.
double round_significant(double x);

/// format is text, json or csv.
std::string render(const Report& report, std::string_view format);
std::string render_fixtures(std::string_view format);

}  // namespace bkg
