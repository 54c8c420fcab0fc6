#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bkg/chen.hpp"

namespace bkg {

/// Scene-file problem. Parse errors carry a 1-based line and column; semantic
/// errors name the block they were found in.
class SceneError : public InputError {
 public:
  SceneError(const std::string& detail, std::size_t line, std::size_t column, std::string block)
      : InputError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + detail),
        detail_(detail), line_(line), column_(column), block_(std::move(block)) {}
  /// The message without its location prefix.
  const std::string& detail() const noexcept { return detail_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& block() const noexcept { return block_; }

 private:
  std::string detail_;
  std::size_t line_;
  std::size_t column_;
  std::string block_;
};

struct AmbientSpec {
  std::string kind = "flat";  ///< flat, space_form, product
  Index m = 2;
  double c = 0.0;
  std::vector<double> curvatures;  ///< product kind: Gaussian curvature of each factor
  double j_perturb = 0.0;          ///< adds eps to J(0, 1)
  bool operator==(const AmbientSpec&) const = default;
};

struct ImmersionSpec {
  std::vector<std::string> builtins;  ///< several builtins make several fixtures
  std::vector<double> params;
  std::vector<std::string> parameters;
  std::vector<std::string> components;
  std::string name;
  bool operator==(const ImmersionSpec&) const = default;
};

struct SampleSpec {
  std::vector<ParameterRange> ranges;  ///< empty: each fixture's default domain
  std::vector<Index> counts;           ///< per axis, default 3
  std::vector<std::vector<double>> points;
  bool operator==(const SampleSpec&) const = default;
};

struct CheckSpec {
  std::vector<std::string> theorems = {"theorem1"};
  std::vector<std::string> interpretations = {"statement-default"};
  double tol = 1e-6;
  double eq_tol = 1e-5;
  double fd_step = 1e-4;
  std::vector<std::vector<double>> directions;  ///< frame coefficients
  Index direction_count = 8;
  std::string slant = "printed";  ///< printed or n-cos2
  bool operator==(const CheckSpec&) const = default;
};

struct OutputSpec {
  std::string format = "text";  ///< text, json, csv
  std::string path;
  bool operator==(const OutputSpec&) const = default;
};

struct SceneConfig {
  AmbientSpec ambient;
  ImmersionSpec immersion;
  SampleSpec sample;
  CheckSpec check;
  OutputSpec output;
  bool operator==(const SceneConfig&) const = default;
};

/// Grammar:
///
///     scene  := block*
///     block  := name '{' (key '=' value ';'?)* '}'
///     value  := number | "string" | '[' (value (',' value)*)? ']'
///
/// Block names are ambient, immersion, sample, check, output; `#` starts a comment.
SceneConfig parse_scene(std::string_view text);
SceneConfig load_scene(const std::string& path);

/// Canonical text with every field spelled out; parse_scene(emit_scene(s)) == s.
std::string emit_scene(const SceneConfig& scene);

struct Fixture {
  std::string name;
  Immersion immersion;
};

AmbientManifold build_ambient(const AmbientSpec& spec);
std::vector<Fixture> build_fixtures(const SceneConfig& scene);
/// Explicit points, else the grid over the sample ranges (or the fixture's default domain).
std::vector<Vec> sample_points(const SceneConfig& scene, const Immersion& imm);
/// Explicit directions, else `direction_count` unit vectors spread over the e1-e2 half circle.
std::vector<Vec> sample_directions(const CheckSpec& check, Index n);

std::vector<Interpretation> scene_interpretations(const CheckSpec& check);
Tolerances scene_tolerances(const CheckSpec& check);
FdPolicy scene_policy(const CheckSpec& check);

}  // namespace bkg
