#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bkg/report.hpp"

namespace {

struct Overrides {
  std::optional<double> tol;
  std::optional<double> fd_step;
  std::optional<std::string> interpretation;
  std::optional<std::string> format;
  std::optional<std::string> out;
  std::optional<std::string> point;
  std::optional<std::string> direction;
};

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw bkg::InputError(std::string(flag) + ": malformed number '" + item + "'");
    out.push_back(x);
  }
  if (out.empty()) throw bkg::InputError(std::string(flag) + " needs at least one number");
  return out;
}

void apply(bkg::SceneConfig& scene, const Overrides& o) {
  if (o.tol) scene.check.tol = *o.tol;
  if (o.fd_step) scene.check.fd_step = *o.fd_step;
  if (o.interpretation) scene.check.interpretations = {*o.interpretation};
  if (o.format) scene.output.format = *o.format;
  if (o.out) scene.output.path = *o.out;
  if (o.point) scene.sample.points = {parse_list(*o.point, "--point")};
  if (o.direction) scene.check.directions = {parse_list(*o.direction, "--direction")};
  // re-validate the merged configuration
  try {
    scene = bkg::parse_scene(bkg::emit_scene(scene));
  } catch (const bkg::SceneError& e) {
    throw bkg::InputError("command-line override rejected in block '" + e.block() + "': " + e.detail());
  }
}

int emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write '" << path << "'\n";
    return 1;
  }
  out << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chen-Ricci inequality checks for submanifolds of Bochner-Kaehler manifolds"};
  app.require_subcommand(1);

  std::string scene_path;
  Overrides o;
  std::string fixtures_format = "text";

  auto add_scene_command = [&](const std::string& name, const std::string& help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("scene", scene_path, "scene file")->required();
    sub->add_option("--tol", o.tol, "holds tolerance (relative to max(1, |rhs|))");
    sub->add_option("--fd-step", o.fd_step, "base finite-difference step");
    sub->add_option("--interpretation", o.interpretation, "interpretation name, or all");
    sub->add_option("--format", o.format, "text, json or csv");
    sub->add_option("--out", o.out, "write the report to this path");
    sub->add_option("--point", o.point, "single parameter point u1,u2,...");
    sub->add_option("--direction", o.direction, "single direction c1,...,cn in the default frame");
    return sub;
  };
  add_scene_command("verify", "evaluate the requested inequalities at every sample point");
  add_scene_command("audit", "evaluate the proof identities at every sample point");
  add_scene_command("survey", "minimum margins of theorem 1 per interpretation and fixture");
  add_scene_command("check-ambient", "Kaehler and Bochner-flat validation only");
  auto* fixtures = app.add_subcommand("fixtures", "list built-in immersions with their closed-form values");
  fixtures->add_option("--format", fixtures_format, "text, json or csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (fixtures->parsed()) return emit(bkg::render_fixtures(fixtures_format), "");
    const std::string command = app.get_subcommands().front()->get_name();
    bkg::SceneConfig scene = bkg::load_scene(scene_path);
    apply(scene, o);
    const bkg::Report report = bkg::run_report(scene, command);
    if (emit(bkg::render(report, scene.output.format), scene.output.path) != 0) return 1;
    return report.exit_code;
  } catch (const bkg::SceneError& e) {
    std::cerr << scene_path << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
