#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include "bkg/report.hpp"

namespace {

bkg::SceneConfig scene(const std::string& name) { return bkg::load_scene(std::string(BKG_SCENE_DIR) + "/" + name); }

}  // namespace

TEST_CASE("number formatting") {
  CHECK(bkg::format_number(0.25) == "0.25");
  CHECK(bkg::format_number(-0.0) == "0");
  CHECK(bkg::format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(bkg::format_number(0.99999999999999) == "1");
  CHECK(bkg::format_number(1e-20) == "1e-20");
  CHECK(bkg::format_number(123456789012345.0) == "123456789012000");
  CHECK(bkg::round_significant(2.0 / 3.0) == 0.666666666667);
}

TEST_CASE("sphere scene: exit 0, every row an umbilical equality") {
  const auto r = bkg::run_verify(scene("sphere.scene"));
  CHECK(r.exit_code == 0);
  REQUIRE(r.rows.size() == 72);
  for (const auto& row : r.rows) {
    CHECK(row.equality_case == "umbilical-n2");
    CHECK(std::abs(row.margin) < 1e-6);
  }
}

TEST_CASE("cylinder scene: exit 0, min margin 1/4") {
  const auto r = bkg::run_verify(scene("cylinder.scene"));
  CHECK(r.exit_code == 0);
  double m = 1e9;
  for (const auto& row : r.rows) m = std::min(m, row.margin);
  CHECK(std::abs(m - 0.25) < 1e-6);
}

TEST_CASE("non-Kaehler ambient: exit 1 with a validity error") {
  const auto r = bkg::run_verify(scene("nonkaehler.scene"));
  CHECK(r.exit_code == 1);
  REQUIRE_FALSE(r.failures.empty());
  CHECK(r.failures[0].stage == "kaehler-validity");
  CHECK(r.rows.empty());
  const auto doc = nlohmann::json::parse(bkg::render(r, "json"));
  CHECK(doc["errors"][0]["stage"] == "kaehler-validity");
  CHECK(doc["summary"]["exit_code"] == 1);
}

TEST_CASE("falsified space-form scene exits 2") {
  auto s = scene("csf.scene");
  s.check.interpretations = {"statement-default"};
  const auto r = bkg::run_verify(s);
  CHECK(r.exit_code == 2);
  CHECK(r.failures.empty());
}

TEST_CASE("non-Bochner-flat ambient is recorded per point") {
  const auto r = bkg::run_verify(scene("product.scene"));
  CHECK(r.exit_code == 1);
  REQUIRE(r.failures.size() == 1);
  CHECK(r.failures[0].stage == "theorem1");
  CHECK(bkg::run_check_ambient(scene("product.scene")).exit_code == 2);
  CHECK(bkg::run_check_ambient(scene("csf.scene")).exit_code == 0);
  CHECK(bkg::run_check_ambient(scene("nonkaehler.scene")).exit_code == 1);
}

TEST_CASE("json rows carry the documented fields with sorted keys") {
  const auto r = bkg::run_verify(scene("cylinder.scene"));
  const std::string text = bkg::render(r, "json");
  CHECK(text == bkg::render(bkg::run_verify(scene("cylinder.scene")), "json"));
  const auto doc = nlohmann::json::parse(text);
  const auto& row = doc["rows"][0];
  for (const char* key : {"fixture", "point", "direction", "theorem", "interpretation", "lhs", "rhs", "margin",
                          "equality_case", "residuals"})
    CHECK(row.contains(key));
  CHECK(text.find("\"direction\"") < text.find("\"equality_case\""));
  CHECK(text.find("\"residuals\"") < text.find("\"rhs\""));
}

TEST_CASE("csv header and point encoding") {
  auto s = scene("cylinder.scene");
  s.sample.points = {{0.5, -0.25}};
  s.check.directions = {{1.0, 0.0}};
  const std::string csv = bkg::render(bkg::run_verify(s), "csv");
  CHECK(csv ==
        "fixture,point,direction,theorem,interpretation,lhs,rhs,margin,equality_case\n"
        "cylinder,0.5;-0.25,1;0,theorem1,statement-ambient-row,0,0.25,0.25,none\n");
}

TEST_CASE("survey and audit exits") {
  CHECK(bkg::run_survey(scene("flat_all.scene")).exit_code == 0);
  const auto sv = bkg::run_survey(scene("csf.scene"));
  CHECK(sv.exit_code == 2);
  CHECK(bkg::render(sv, "json") == bkg::render(bkg::run_survey(scene("csf.scene")), "json"));
  CHECK(bkg::run_audit(scene("flat_all.scene")).exit_code == 0);
  CHECK(bkg::run_audit(scene("product.scene")).exit_code == 1);
}

TEST_CASE("fixtures listing") {
  const auto doc = nlohmann::json::parse(bkg::render_fixtures("json"));
  CHECK(doc["fixtures"].size() == bkg::builtin_catalogue().size());
  CHECK(bkg::render_fixtures("text").find("sphere") != std::string::npos);
}
