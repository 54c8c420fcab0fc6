#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "bkg/report.hpp"

using bkg::SceneError;

namespace {

bkg::SceneError parse_error(const std::string& text) {
  try {
    bkg::parse_scene(text);
  } catch (const SceneError& e) {
    return e;
  }
  FAIL("expected SceneError");
  return SceneError("", 0, 0, "");
}

}  // namespace

TEST_CASE("minimal scene gets every default") {
  const auto s = bkg::parse_scene(
      "ambient {\n"
      "  kind = \"flat\"\n"
      "}\n"
      "immersion {\n"
      "  builtin = \"complex_plane\"\n"
      "}\n");
  CHECK(s.ambient.m == 2);
  CHECK(s.immersion.builtins == std::vector<std::string>{"complex_plane"});
  CHECK(s.check.interpretations == std::vector<std::string>{"statement-default"});
  CHECK(s.check.theorems == std::vector<std::string>{"theorem1"});
  CHECK(s.check.tol == 1e-6);
  CHECK(s.output.format == "text");
  CHECK(bkg::sample_points(s, bkg::build_fixtures(s)[0].immersion).size() == 9);
  CHECK(bkg::sample_directions(s.check, 2).size() == 8);
}

TEST_CASE("expression component count must be 2m") {
  const std::string head = "ambient { kind = \"flat\"; m = 2 }\nimmersion {\n  parameters = [\"u\", \"v\"]\n";
  CHECK_NOTHROW(bkg::parse_scene(head + "  components = [\"u\", \"v\", \"0\", \"u*v\"]\n}\n"));
  const auto e = parse_error(head + "  components = [\"u\", \"v\", \"0\"]\n}\n");
  CHECK(e.block() == "immersion");
  CHECK(std::string(e.what()).find("immersion") != std::string::npos);
}

TEST_CASE("duplicate blocks are named") {
  const auto e = parse_error("ambient { kind = \"flat\" }\nambient { kind = \"flat\" }\nimmersion { builtin = \"sphere\" }\n");
  CHECK(e.block() == "ambient");
  CHECK(e.line() == 2);
  CHECK(std::string(e.what()).find("duplicate block 'ambient'") != std::string::npos);
}

TEST_CASE("parse errors carry line and column") {
  auto e = parse_error("ambient {\n  kind = \"flat\"\n  m = = 2\n}\n");
  CHECK(e.line() == 3);
  CHECK(e.column() == 7);
  CHECK(std::string(e.what()).rfind("line 3, column 7", 0) == 0);

  e = parse_error("ambient { kind = \"flat\" }\nimmersion { builtin = \"sphere\"; colour = \"red\" }\n");
  CHECK(e.line() == 2);
  CHECK(e.column() == 33);
  CHECK(std::string(e.what()).find("unknown key 'colour'") != std::string::npos);

  e = parse_error("immersion { builtin = sphere }");
  CHECK(e.column() == 23);
  e = parse_error("immersion { builtin = \"sphere\" ");
  CHECK(std::string(e.what()).find("end of input") != std::string::npos);
  e = parse_error("immersion { builtin = \"sphere }");
  CHECK(std::string(e.what()).find("unterminated") != std::string::npos);
  e = parse_error("geometry { }");
  CHECK(e.line() == 1);
}

TEST_CASE("semantic checks") {
  const std::string imm = "immersion { builtin = \"sphere\" }\n";
  CHECK_THROWS_AS(bkg::parse_scene("ambient { kind = \"kahler\" }\n" + imm), SceneError);
  CHECK_THROWS_AS(bkg::parse_scene(imm + "check { tol = 0 }"), SceneError);
  CHECK_THROWS_AS(bkg::parse_scene(imm + "check { tol = -1e-6 }"), SceneError);
  CHECK_THROWS_AS(bkg::parse_scene(imm + "sample { counts = [0, 3] }"), SceneError);
  CHECK_THROWS_AS(bkg::parse_scene(imm + "sample { points = [[1, 2, 3]] }"), SceneError);
  CHECK_THROWS_AS(bkg::parse_scene(imm + "check { interpretations = [\"proof\"] }"), SceneError);
  CHECK_THROWS_AS(bkg::parse_scene(imm + "check { theorems = [\"theorem9\"] }"), SceneError);
  CHECK_THROWS_AS(bkg::parse_scene(imm + "output { format = \"xml\" }"), SceneError);
  CHECK_THROWS_AS(bkg::parse_scene("immersion { builtin = \"donut\" }"), SceneError);
  CHECK_THROWS_AS(bkg::parse_scene("ambient { kind = \"flat\"; m = 1 }\n" + imm), SceneError);
  CHECK_THROWS_AS(bkg::parse_scene("ambient { kind = \"flat\"; c = 4 }\n" + imm), SceneError);
  CHECK_THROWS_AS(bkg::parse_scene("ambient { kind = \"product\"; m = 3; curvatures = [1, 2] }\n" + imm), SceneError);
  CHECK_THROWS_AS(bkg::parse_scene("ambient { kind = \"flat\" }"), SceneError);
  const auto e = parse_error("immersion {\n  parameters = [\"u\", \"v\"]\n  components = [\"u\", \"v\", \"cos(\", \"0\"]\n}");
  CHECK(e.block() == "immersion");
  CHECK(e.line() == 3);
}

TEST_CASE("emit and parse round trip") {
  const std::string dir = BKG_SCENE_DIR;
  int count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".scene" || entry.path().stem().string().rfind("bad_", 0) == 0) continue;
    if (entry.path().stem() == "duplicate") continue;
    CAPTURE(entry.path().string());
    const auto s = bkg::load_scene(entry.path().string());
    const auto text = bkg::emit_scene(s);
    CHECK(bkg::parse_scene(text) == s);
    CHECK(bkg::emit_scene(bkg::parse_scene(text)) == text);
    ++count;
  }
  CHECK(count >= 6);

  bkg::SceneConfig s;
  s.ambient = {"space_form", 3, -0.1, {}, 0.0};
  s.immersion.builtins = {"slant_plane"};
  s.immersion.params = {0.1234567890123456789};
  s.immersion.name = "odd \"name\"";
  s.sample.ranges = {{-0.1, 0.2}, {1e-7, 3.0}};
  s.sample.counts = {2, 5};
  s.check.directions = {{1.0, 0.0}, {1.0 / 3.0, 2.0}};
  s.check.interpretations = {"all"};
  s.output = {"json", "out/report.json"};
  CHECK(bkg::parse_scene(bkg::emit_scene(s)) == s);
}

TEST_CASE("grid sampling and directions") {
  const auto s = bkg::parse_scene(
      "immersion { builtin = \"cylinder\" }\n"
      "sample { ranges = [[0, 1], [2, 2]]; counts = [3, 1] }\n"
      "check { direction_count = 2 }\n");
  const auto pts = bkg::sample_points(s, bkg::build_fixtures(s)[0].immersion);
  REQUIRE(pts.size() == 3);
  CHECK(pts[1][0] == 0.5);
  CHECK(pts[2][1] == 2.0);
  const auto dirs = bkg::sample_directions(s.check, 2);
  REQUIRE(dirs.size() == 2);
  CHECK(dirs[1][0] == doctest::Approx(0.0));
  CHECK(dirs[1][1] == 1.0);
  CHECK(bkg::scene_interpretations(bkg::parse_scene("immersion { builtin = \"sphere\" }\n"
                                                    "check { interpretations = [\"all\", \"statement-default\"] }")
                                         .check)
            .size() == 8);
}
