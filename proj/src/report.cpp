#include "bkg/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

namespace bkg {

namespace {

using nlohmann::json;

std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round_significant(x);
}

json vec_json(const Vec& v) {
  json out = json::array();
  for (double x : to_std(v)) out.push_back(number(x));
  return out;
}

std::string joined(const Vec& v, char sep) {
  std::string out;
  for (Index k = 0; k < v.size(); ++k) out += (k ? std::string(1, sep) : "") + format_number(v[k]);
  return out;
}

std::string point_text(const Vec& v) { return "(" + joined(v, ',') + ")"; }

class FailureLog {
 public:
  explicit FailureLog(std::vector<ReportFailure>& out) : out_(out) {}
  void add(const std::string& fixture, const Vec& u, const std::string& stage, const std::string& message) {
    if (seen_.insert({fixture, to_std(u), stage, message}).second) out_.push_back({fixture, u, stage, message});
  }

 private:
  std::vector<ReportFailure>& out_;
  std::set<std::tuple<std::string, std::vector<double>, std::string, std::string>> seen_;
};

struct Prepared {
  AmbientManifold ambient;
  std::vector<Fixture> fixtures;
  FdPolicy policy;
  Tolerances tol;
};

Prepared prepare(const SceneConfig& scene) {
  return {build_ambient(scene.ambient), build_fixtures(scene), scene_policy(scene.check),
          scene_tolerances(scene.check)};
}

// Kaehler validity at the image of u; failures are logged and gate the point.
bool kaehler_gate(const Prepared& pr, const Fixture& f, const Vec& u, FailureLog& log) {
  try {
    const auto k = check_kaehler(pr.ambient, f.immersion.map(u), pr.policy);
    if (k.valid()) return true;
    std::ostringstream os;
    os << "ambient is not Kaehler: |J^2 + I| = " << format_number(k.j_squared)
       << ", |g(J.,J.) - g| = " << format_number(k.hermitian) << ", |nabla J| = " << format_number(k.parallel);
    log.add(f.name, u, "kaehler-validity", os.str());
  } catch (const Error& e) {
    log.add(f.name, u, "kaehler-validity", e.what());
  }
  return false;
}

InequalityVerdict run_theorem(const PointContext& ctx, TheoremId id, const Interpretation& interp,
                              const SceneConfig& scene, const Tolerances& tol) {
  switch (id) {
    case TheoremId::Theorem1: return check_theorem1(ctx, interp, tol);
    case TheoremId::Theorem2:
      return check_theorem2_slant(ctx, interp,
                                  scene.check.slant == "n-cos2" ? SlantSubstitution::NCos2
                                                                : SlantSubstitution::PrintedCos2,
                                  tol);
    case TheoremId::Corollary1: return check_corollary(ctx, Corollary::Einstein, interp, tol);
    case TheoremId::Corollary2: return check_corollary(ctx, Corollary::AntiInvariant, interp, tol);
    case TheoremId::Corollary3: return check_corollary(ctx, Corollary::Invariant, interp, tol);
  }
  throw InputError("unknown theorem");
}

int verdict_exit(const Report& r, bool falsified) {
  if (!r.failures.empty()) return 1;
  return falsified ? 2 : 0;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows)
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (width.size() <= k) width.push_back(0);
      width[k] = std::max(width[k], r[k].size());
    }
  std::string out;
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t k = 0; k < r.size(); ++k) line += k + 1 < r.size() ? pad(r[k], width[k] + 2) : r[k];
    out += line + "\n";
  }
  return out;
}

json failures_json(const Report& r) {
  json out = json::array();
  for (const auto& f : r.failures)
    out.push_back({{"fixture", f.fixture}, {"point", vec_json(f.point)}, {"stage", f.stage}, {"message", f.message}});
  return out;
}

std::string failures_text(const Report& r) {
  std::string out;
  for (const auto& f : r.failures)
    out += "error: " + f.fixture + " " + point_text(f.point) + " [" + f.stage + "] " + f.message + "\n";
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string render_verify(const Report& r, std::string_view format) {
  if (format == "json") {
    json rows = json::array();
    double min_margin = std::numeric_limits<double>::infinity();
    std::size_t falsified = 0;
    for (const auto& row : r.rows) {
      json res = json::object();
      for (const auto& [k, v] : row.residuals) res[k] = number(v);
      rows.push_back({{"fixture", row.fixture},
                      {"point", vec_json(row.point)},
                      {"direction", vec_json(row.direction)},
                      {"theorem", row.theorem},
                      {"interpretation", row.interpretation},
                      {"lhs", number(row.lhs)},
                      {"rhs", number(row.rhs)},
                      {"margin", number(row.margin)},
                      {"holds", row.holds},
                      {"equality_case", row.equality_case},
                      {"residuals", res}});
      min_margin = std::min(min_margin, row.margin);
      falsified += row.holds ? 0 : 1;
    }
    json summary = {{"rows", r.rows.size()},
                    {"falsified", falsified},
                    {"errors", r.failures.size()},
                    {"min_margin", r.rows.empty() ? json(nullptr) : number(min_margin)},
                    {"exit_code", r.exit_code}};
    json doc = {{"command", r.command}, {"rows", rows}, {"errors", failures_json(r)}, {"summary", summary}};
    return doc.dump(2) + "\n";
  }
  if (format == "csv") {
    std::string out = "fixture,point,direction,theorem,interpretation,lhs,rhs,margin,equality_case\n";
    for (const auto& row : r.rows)
      out += csv_field(row.fixture) + "," + joined(row.point, ';') + "," + joined(row.direction, ';') + "," +
             row.theorem + "," + row.interpretation + "," + format_number(row.lhs) + "," + format_number(row.rhs) +
             "," + format_number(row.margin) + "," + row.equality_case + "\n";
    return out;
  }
  std::vector<std::vector<std::string>> cells = {
      {"fixture", "point", "direction", "theorem", "interpretation", "lhs", "rhs", "margin", "holds", "equality"}};
  double min_margin = std::numeric_limits<double>::infinity();
  std::size_t falsified = 0;
  for (const auto& row : r.rows) {
    cells.push_back({row.fixture, point_text(row.point), point_text(row.direction), row.theorem, row.interpretation,
                     format_number(row.lhs), format_number(row.rhs), format_number(row.margin),
                     row.holds ? "yes" : "NO", row.equality_case});
    min_margin = std::min(min_margin, row.margin);
    falsified += row.holds ? 0 : 1;
  }
  std::string out = table(cells) + failures_text(r);
  out += "rows " + std::to_string(r.rows.size()) + ", falsified " + std::to_string(falsified) + ", errors " +
         std::to_string(r.failures.size());
  if (!r.rows.empty()) out += ", min margin " + format_number(min_margin);
  return out + "\n";
}

std::vector<std::pair<std::string, const AuditStep*>> audit_steps(const AuditReport& a) {
  return {{a.scalar_trace.name, &a.scalar_trace}, {a.partial_sectional.name, &a.partial_sectional}};
}

std::string render_audit(const Report& r, std::string_view format) {
  if (format == "json") {
    json rows = json::array();
    for (const auto& row : r.audit) {
      json steps = json::object();
      for (const auto& [name, s] : audit_steps(row.audit))
        steps[name] = {{"lhs", number(s->lhs)}, {"rhs", number(s->rhs)}, {"residual", number(s->residual())}};
      steps["square-decomposition"] = {{"residual", number(row.audit.square_decomposition)}};
      steps["gauss"] = {{"residual", number(row.audit.gauss)}};
      rows.push_back({{"fixture", row.fixture},
                      {"point", vec_json(row.point)},
                      {"interpretation", row.interpretation},
                      {"steps", steps}});
    }
    json doc = {{"command", r.command},
                {"rows", rows},
                {"errors", failures_json(r)},
                {"summary", {{"rows", r.audit.size()}, {"errors", r.failures.size()}, {"exit_code", r.exit_code}}}};
    return doc.dump(2) + "\n";
  }
  if (format == "csv") {
    std::string out = "fixture,point,interpretation,step,lhs,rhs,residual\n";
    for (const auto& row : r.audit) {
      const std::string head = csv_field(row.fixture) + "," + joined(row.point, ';') + "," + row.interpretation + ",";
      for (const auto& [name, s] : audit_steps(row.audit))
        out += head + name + "," + format_number(s->lhs) + "," + format_number(s->rhs) + "," +
               format_number(s->residual()) + "\n";
      out += head + "square-decomposition,,," + format_number(row.audit.square_decomposition) + "\n";
      out += head + "gauss,,," + format_number(row.audit.gauss) + "\n";
    }
    return out;
  }
  std::vector<std::vector<std::string>> cells = {
      {"fixture", "point", "interpretation", "scalar-trace", "partial-sectional", "square-decomposition", "gauss"}};
  for (const auto& row : r.audit)
    cells.push_back({row.fixture, point_text(row.point), row.interpretation,
                     format_number(row.audit.scalar_trace.residual()),
                     format_number(row.audit.partial_sectional.residual()),
                     format_number(row.audit.square_decomposition), format_number(row.audit.gauss)});
  return table(cells) + failures_text(r) + "rows " + std::to_string(r.audit.size()) + ", errors " +
         std::to_string(r.failures.size()) + "\n";
}

std::string render_survey(const Report& r, std::string_view format) {
  std::vector<std::string> falsified;
  for (const auto& row : r.survey)
    if (row.falsified && (falsified.empty() || falsified.back() != row.interpretation.name()))
      falsified.push_back(row.interpretation.name());
  if (format == "json") {
    json rows = json::array();
    for (const auto& row : r.survey)
      rows.push_back({{"interpretation", row.interpretation.name()},
                      {"fixture", row.fixture},
                      {"min_margin", row.evaluations ? number(row.min_margin) : json(nullptr)},
                      {"evaluations", row.evaluations},
                      {"bochner_flat", row.bochner_flat},
                      {"falsified", row.falsified}});
    json doc = {{"command", r.command},
                {"rows", rows},
                {"falsified_interpretations", falsified},
                {"errors", failures_json(r)},
                {"summary", {{"rows", r.survey.size()}, {"errors", r.failures.size()}, {"exit_code", r.exit_code}}}};
    return doc.dump(2) + "\n";
  }
  if (format == "csv") {
    std::string out = "interpretation,fixture,min_margin,evaluations,bochner_flat,falsified\n";
    for (const auto& row : r.survey)
      out += row.interpretation.name() + "," + csv_field(row.fixture) + "," + format_number(row.min_margin) + "," +
             std::to_string(row.evaluations) + "," + (row.bochner_flat ? "true" : "false") + "," +
             (row.falsified ? "true" : "false") + "\n";
    return out;
  }
  std::vector<std::vector<std::string>> cells = {
      {"interpretation", "fixture", "min margin", "evaluations", "bochner-flat", "status"}};
  for (const auto& row : r.survey)
    cells.push_back({row.interpretation.name(), row.fixture, format_number(row.min_margin),
                     std::to_string(row.evaluations), row.bochner_flat ? "yes" : "no",
                     row.falsified ? "inconsistent-with-fixtures" : "consistent"});
  std::string out = table(cells) + failures_text(r);
  out += "falsified interpretations:";
  for (const auto& f : falsified) out += " " + f;
  if (falsified.empty()) out += " none";
  return out + "\n";
}

std::string render_probes(const Report& r, std::string_view format) {
  if (format == "json") {
    json rows = json::array();
    for (const auto& p : r.probes)
      rows.push_back({{"fixture", p.fixture},
                      {"point", vec_json(p.point)},
                      {"j_squared", number(p.kaehler.j_squared)},
                      {"hermitian", number(p.kaehler.hermitian)},
                      {"parallel", number(p.kaehler.parallel)},
                      {"kaehler", p.kaehler.valid()},
                      {"bochner", number(p.bochner)}});
    json doc = {{"command", r.command},
                {"rows", rows},
                {"errors", failures_json(r)},
                {"summary", {{"rows", r.probes.size()}, {"errors", r.failures.size()}, {"exit_code", r.exit_code}}}};
    return doc.dump(2) + "\n";
  }
  if (format == "csv") {
    std::string out = "fixture,point,j_squared,hermitian,parallel,kaehler,bochner\n";
    for (const auto& p : r.probes)
      out += csv_field(p.fixture) + "," + joined(p.point, ';') + "," + format_number(p.kaehler.j_squared) + "," +
             format_number(p.kaehler.hermitian) + "," + format_number(p.kaehler.parallel) + "," +
             (p.kaehler.valid() ? "true" : "false") + "," + format_number(p.bochner) + "\n";
    return out;
  }
  std::vector<std::vector<std::string>> cells = {
      {"fixture", "point", "|J^2+I|", "hermitian", "|nabla J|", "kaehler", "bochner"}};
  for (const auto& p : r.probes)
    cells.push_back({p.fixture, point_text(p.point), format_number(p.kaehler.j_squared),
                     format_number(p.kaehler.hermitian), format_number(p.kaehler.parallel),
                     p.kaehler.valid() ? "yes" : "NO", format_number(p.bochner)});
  return table(cells) + failures_text(r);
}

}  // namespace

double round_significant(double x) {
  if (!std::isfinite(x)) return x;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, round_significant(x));
  return std::string(buf, ptr);
}

Report run_verify(const SceneConfig& scene) {
  const Prepared pr = prepare(scene);
  const auto interps = scene_interpretations(scene.check);
  std::vector<TheoremId> theorems;
  for (const auto& t : scene.check.theorems) theorems.push_back(parse_theorem(t));

  Report r;
  r.command = "verify";
  FailureLog log(r.failures);
  bool falsified = false;
  for (const auto& f : pr.fixtures) {
    const auto directions = sample_directions(scene.check, f.immersion.param_dim);
    for (const auto& u : sample_points(scene, f.immersion)) {
      if (!kaehler_gate(pr, f, u, log)) continue;
      try {
        const FramedPoint base = frames_at(f.immersion, pr.ambient, u, std::nullopt, pr.policy);
        const CurvatureBundle bundle = riemann_at(pr.ambient, base.p, CurvatureSource::Automatic, pr.policy);
        for (const auto& c : directions) {
          PointOptions opts;
          opts.lock = lock_from_coefficients(base, c);
          opts.policy = pr.policy;
          const PointContext ctx = evaluate_point(f.immersion, pr.ambient, u, bundle, opts);
          for (TheoremId id : theorems)
            for (const auto& interp : interps) {
              try {
                const auto v = run_theorem(ctx, id, interp, scene, pr.tol);
                ReportRow row;
                row.fixture = f.name;
                row.point = u;
                row.direction = c.normalized();
                row.theorem = std::string(to_string(id));
                row.interpretation = interp.name();
                row.lhs = v.lhs;
                row.rhs = v.rhs;
                row.margin = v.margin;
                row.holds = v.holds;
                row.equality_case = std::string(to_string(v.equality));
                row.residuals = {{"bochner", ctx.bochner_residual},
                                 {"frame", ctx.fp.frame_residual()},
                                 {"h_symmetry", ctx.fp.h_symmetry_residual()}};
                falsified = falsified || !v.holds;
                r.rows.push_back(std::move(row));
              } catch (const Error& e) {
                log.add(f.name, u, std::string(to_string(id)), e.what());
              }
            }
        }
      } catch (const Error& e) {
        log.add(f.name, u, "geometry", e.what());
      }
    }
  }
  r.exit_code = verdict_exit(r, falsified);
  return r;
}

Report run_audit(const SceneConfig& scene) {
  const Prepared pr = prepare(scene);
  const auto interps = scene_interpretations(scene.check);
  Report r;
  r.command = "audit";
  FailureLog log(r.failures);
  bool failed = false;
  for (const auto& f : pr.fixtures)
    for (const auto& u : sample_points(scene, f.immersion)) {
      if (!kaehler_gate(pr, f, u, log)) continue;
      try {
        PointOptions opts;
        opts.with_intrinsic = true;
        opts.policy = pr.policy;
        const PointContext ctx = evaluate_point(f.immersion, pr.ambient, u, opts);
        if (!(ctx.bochner_residual < pr.tol.bochner)) {
          log.add(f.name, u, "audit",
                  "ambient is not Bochner-flat at the point (residual " + format_number(ctx.bochner_residual) + ")");
          continue;
        }
        for (const auto& interp : interps) {
          AuditRow row{f.name, u, interp.name(), derivation_audit(ctx, interp)};
          const auto& a = row.audit;
          failed = failed || !(a.scalar_trace.residual() < kAuditTolerance &&
                               a.partial_sectional.residual() < kAuditTolerance &&
                               a.square_decomposition < kAuditTolerance && a.gauss < kAuditTolerance);
          r.audit.push_back(std::move(row));
        }
      } catch (const Error& e) {
        log.add(f.name, u, "geometry", e.what());
      }
    }
  r.exit_code = verdict_exit(r, failed);
  return r;
}

Report run_survey(const SceneConfig& scene) {
  const Prepared pr = prepare(scene);
  auto interps = scene_interpretations(scene.check);
  Report r;
  r.command = "survey";
  FailureLog log(r.failures);
  std::vector<SurveyInput> inputs;
  for (const auto& f : pr.fixtures) {
    SurveyInput in{f.name, &f.immersion, &pr.ambient, {}, sample_directions(scene.check, f.immersion.param_dim)};
    for (const auto& u : sample_points(scene, f.immersion))
      if (kaehler_gate(pr, f, u, log)) in.points.push_back(u);
    inputs.push_back(std::move(in));
  }
  if (r.failures.empty()) {
    try {
      r.survey = interpretation_survey(inputs, interps, pr.tol, pr.policy);
    } catch (const Error& e) {
      log.add("", Vec(), "survey", e.what());
    }
  }
  bool falsified = false;
  for (const auto& row : r.survey) falsified = falsified || row.falsified;
  r.exit_code = verdict_exit(r, falsified);
  return r;
}

Report run_check_ambient(const SceneConfig& scene) {
  const Prepared pr = prepare(scene);
  Report r;
  r.command = "check-ambient";
  FailureLog log(r.failures);
  bool kaehler = true, flat = true;
  for (const auto& f : pr.fixtures)
    for (const auto& u : sample_points(scene, f.immersion)) {
      try {
        const Vec p = f.immersion.map(u);
        AmbientProbe probe{f.name, u, check_kaehler(pr.ambient, p, pr.policy), 0.0};
        probe.bochner = check_bochner_flat(pr.ambient, p, CurvatureSource::Automatic, pr.policy);
        kaehler = kaehler && probe.kaehler.valid();
        flat = flat && probe.bochner < pr.tol.bochner;
        r.probes.push_back(std::move(probe));
      } catch (const Error& e) {
        log.add(f.name, u, "ambient", e.what());
      }
    }
  r.exit_code = !r.failures.empty() || !kaehler ? 1 : flat ? 0 : 2;
  return r;
}

Report run_report(const SceneConfig& scene, std::string_view command) {
  if (command == "verify") return run_verify(scene);
  if (command == "audit") return run_audit(scene);
  if (command == "survey") return run_survey(scene);
  if (command == "check-ambient") return run_check_ambient(scene);
  throw InputError("unknown command '" + std::string(command) + "'");
}

std::string render(const Report& report, std::string_view format) {
  if (format != "text" && format != "json" && format != "csv")
    throw InputError("format must be text, json or csv");
  if (report.command == "audit") return render_audit(report, format);
  if (report.command == "survey") return render_survey(report, format);
  if (report.command == "check-ambient") return render_probes(report, format);
  return render_verify(report, format);
}

std::string render_fixtures(std::string_view format) {
  const auto& cat = builtin_catalogue();
  if (format == "json") {
    json rows = json::array();
    for (const auto& b : cat)
      rows.push_back({{"name", b.name},
                      {"param_names", b.param_names},
                      {"default_params", b.default_params},
                      {"param_dim", b.param_dim},
                      {"min_complex_dim", b.min_complex_dim},
                      {"description", b.description},
                      {"oracle", b.oracle}});
    return json{{"command", "fixtures"}, {"fixtures", rows}}.dump(2) + "\n";
  }
  if (format == "csv") {
    std::string out = "name,param_dim,min_complex_dim,description,oracle\n";
    for (const auto& b : cat)
      out += b.name + "," + std::to_string(b.param_dim) + "," + std::to_string(b.min_complex_dim) + "," +
             csv_field(b.description) + "," + csv_field(b.oracle) + "\n";
    return out;
  }
  std::string out;
  for (const auto& b : cat) {
    out += b.name;
    for (std::size_t k = 0; k < b.param_names.size(); ++k)
      out += (k ? ", " : " (") + b.param_names[k] + " = " + format_number(b.default_params[k]) +
             (k + 1 == b.param_names.size() ? ")" : "");
    out += "\n  " + b.description + "\n  " + b.oracle + "\n";
  }
  return out;
}

}  // namespace bkg
