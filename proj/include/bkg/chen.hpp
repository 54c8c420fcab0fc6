#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bkg/invariants.hpp"

namespace bkg {

// Axes along which the printed inequalities admit more than one reading.
enum class CoeffVariant { Statement, Proof };
enum class RicciSource { Ambient, Induced };
enum class MixedTermRange { RowOfX, FullDoubleSum };

/// One reading of the Ricci inequality's right-hand side.
///
/// The operator lost at the statement's line break is always read as "+", and the
/// constant of the L-tensor formula is the ambient complex dimension; those axes
/// have a single value and are not stored.
struct Interpretation {
  CoeffVariant coeff = CoeffVariant::Statement;
  RicciSource ricci = RicciSource::Ambient;
  MixedTermRange mixed = MixedTermRange::RowOfX;

  /// "statement-ambient-row" style name.
  std::string name() const;
  /// Accepts canonical names and the alias "statement-default".
  static Interpretation parse(std::string_view name);
  /// All enumerated readings, in lexicographic name order.
  static std::vector<Interpretation> all();

  bool operator==(const Interpretation&) const = default;
};

/// How the slant theorem replaces |P|^2: as printed (cos^2 t) or by the slant identity (n cos^2 t).
enum class SlantSubstitution { PrintedCos2, NCos2 };

enum class TheoremId { Theorem1, Theorem2, Corollary1, Corollary2, Corollary3 };
enum class EqualityCase { None, TotallyGeodesic, UmbilicalN2, NullSpaceMembership, Unclassified };

std::string_view to_string(TheoremId id);
std::string_view to_string(EqualityCase e);
TheoremId parse_theorem(std::string_view name);

struct Tolerances {
  double holds = 1e-6;     ///< relative to max(1, |rhs|)
  double equality = 1e-5;  ///< relative to max(1, |rhs|)
  double null_space = 1e-8;
  double umbilic = 1e-8;
  double bochner = 1e-5;
  double hypothesis = 1e-8;
};

/// Everything evaluated at one framed point; e_1 is the direction being tested.
struct PointContext {
  FramedPoint fp;
  CurvatureBundle ambient;
  Tensor ambient_frame;  ///< ambient curvature in the joint frame
  InvariantReport inv;   ///< gauss-derived induced curvature
  std::optional<InducedCurvatures> intrinsic;
  double bochner_residual = 0.0;
  Index m = 0;

  Index n() const noexcept { return fp.n(); }
  /// J in joint-frame coordinates: jf(a, b) = g(e_a, J e_b).
  Mat j_frame() const;
};

struct PointOptions {
  std::optional<Vec> lock;  ///< ambient tangent vector
  bool with_intrinsic = false;
  FdPolicy policy{};
};

PointContext evaluate_point(const Immersion& imm, const AmbientManifold& amb, const Vec& u,
                            const PointOptions& opts = {});

/// Reuses an ambient bundle already computed at imm.map(u).
PointContext evaluate_point(const Immersion& imm, const AmbientManifold& amb, const Vec& u,
                            const CurvatureBundle& bundle, const PointOptions& opts = {});

/// Ambient lock vector for direction coefficients relative to the default (unlocked) frame.
Vec lock_from_coefficients(const FramedPoint& default_frame, const Vec& coefficients);

struct InequalityVerdict {
  TheoremId theorem = TheoremId::Theorem1;
  Interpretation interpretation;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool holds = true;
  EqualityCase equality = EqualityCase::None;
  Vec u;
  Vec direction;  ///< e_1 as an ambient vector
};

double theorem1_rhs(const PointContext& ctx, const Interpretation& interp);
InequalityVerdict check_theorem1(const PointContext& ctx, const Interpretation& interp, const Tolerances& tol = {});

double theorem2_rhs(const PointContext& ctx, const Interpretation& interp, double theta, SlantSubstitution sub);
InequalityVerdict check_theorem2_slant(const PointContext& ctx, const Interpretation& interp,
                                       SlantSubstitution sub = SlantSubstitution::PrintedCos2,
                                       const Tolerances& tol = {});

enum class Corollary { Einstein, AntiInvariant, Invariant };

/// `lambda` overrides the Einstein constant; by default it is read off the ambient Ricci tensor.
InequalityVerdict check_corollary(const PointContext& ctx, Corollary which, const Interpretation& interp,
                                  const Tolerances& tol = {}, std::optional<double> lambda = std::nullopt);

/// Point-level equality class from the verdicts of every sampled direction at one point.
EqualityCase classify_point(const PointContext& ctx, const std::vector<InequalityVerdict>& verdicts,
                            const Tolerances& tol = {});

/// Max over normals r of |sum_i h_ii^2 - [1/2 (sum h_ii)^2 + 1/2 (h_11 - h_22 - ... - h_nn)^2
/// - 2 sum_{2<=i<j} h_ii h_jj]|, together with the regrouping
/// |h|^2 = sum_r [sum_i h_ii^2 + 2 sum_{i<j} h_ij^2].
double algebraic_identity_check(std::span<const Mat> h);

struct AuditStep {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual() const { return std::abs(lhs - rhs); }
};

struct AuditReport {
  AuditStep scalar_trace;       ///< 2 rho = 2(n-1) tr L + 6 sum L(e_i,Je_j) g(e_i,Je_j) + n^2|H|^2 - |h|^2
  AuditStep partial_sectional;  ///< sum_{2<=i<j} K_ij against its closed form
  double square_decomposition = 0.0;
  double gauss = 0.0;  ///< max Gauss residual between the two curvature routes
};

/// Needs ctx.intrinsic; the left-hand sides use the intrinsically differentiated curvature.
AuditReport derivation_audit(const PointContext& ctx, const Interpretation& interp);

struct SurveyInput {
  std::string fixture;
  const Immersion* immersion = nullptr;
  const AmbientManifold* ambient = nullptr;
  std::vector<Vec> points;
  std::vector<Vec> directions;  ///< frame coefficients
};

struct SurveyRow {
  Interpretation interpretation;
  std::string fixture;
  double min_margin = 0.0;
  std::size_t evaluations = 0;
  bool bochner_flat = true;
  bool falsified = false;  ///< min margin < -1e-6 on a Bochner-flat fixture
};

/// Theorem 1 over every (interpretation, fixture, point, direction); rows ordered by
/// interpretation name then fixture order.
std::vector<SurveyRow> interpretation_survey(const std::vector<SurveyInput>& inputs,
                                             const std::vector<Interpretation>& interps, const Tolerances& tol = {},
                                             const FdPolicy& policy = {});

}  // namespace bkg
