#include "bkg/chen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace bkg {

namespace {

constexpr std::string_view kCoeffNames[] = {"statement", "proof"};
constexpr std::string_view kRicciNames[] = {"ambient", "induced"};
constexpr std::string_view kRangeNames[] = {"row", "full"};

double tol_scale(double rhs) { return std::max(1.0, std::abs(rhs)); }

double chen_denominator(double n) { return 2.0 * (2.0 * n + 2.0) * (2.0 * n + 4.0); }

double leading_block(double n) { return 4.0 * n * n * n - 12.0 * n * n - 2.0 * n + 10.0; }

double p_coefficient(double n, CoeffVariant v) {
  return v == CoeffVariant::Statement ? 3.0 * n * n - 9.0 * n + 3.0 : 3.0 * n * n + 9.0 * n - 3.0;
}

// Ricci-type form and scalar feeding the curvature terms, in joint-frame coordinates.
struct CurvatureSources {
  Mat ricci;  // ricci(a, b) = Ric_src(e_a, e_b)
  double rho = 0.0;
};

CurvatureSources curvature_sources(const PointContext& ctx, RicciSource source) {
  const Index d = ctx.fp.p.size();
  const Index n = ctx.n();
  CurvatureSources s;
  if (source == RicciSource::Ambient) {
    const Mat e = ctx.fp.full_frame();
    s.ricci = e.transpose() * ctx.ambient.ricci * e;
    s.rho = ctx.ambient.scalar;
    return s;
  }
  // ambient curvature traced over the tangent space only
  s.ricci = Mat::Zero(d, d);
  for (Index a = 0; a < d; ++a)
    for (Index b = 0; b < d; ++b)
      for (Index k = 0; k < n; ++k) s.ricci(a, b) += ctx.ambient_frame(k, a, b, k);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) s.rho += ctx.ambient_frame(i, j, j, i);
  return s;
}

// Ric_src(e_i, J e_j) for tangent i, j
Mat ricci_with_j(const CurvatureSources& s, const Mat& jf, Index n) { return (s.ricci * jf).topLeftCorner(n, n); }

struct MixedSums {
  double inner = 0.0;  // sum over 2 <= i < j <= n
  double last = 0.0;   // row of X or full double sum
};

MixedSums mixed_sums(const Mat& ric_j, const Mat& weight, Index n, MixedTermRange range) {
  MixedSums s;
  for (Index i = 1; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) s.inner += ric_j(i, j) * weight(i, j);
  if (range == MixedTermRange::RowOfX) {
    for (Index j = 0; j < n; ++j) s.last += ric_j(0, j) * weight(0, j);
  } else {
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) s.last += ric_j(i, j) * weight(i, j);
  }
  return s;
}

void require_rank(const PointContext& ctx) {
  if (ctx.n() < 2) throw PreconditionError("Ricci inequality needs a submanifold of dimension >= 2");
}

void require_bochner(const PointContext& ctx, const Tolerances& tol) {
  if (!(ctx.bochner_residual < tol.bochner)) {
    std::ostringstream os;
    os << "ambient is not Bochner-flat at the point (residual " << ctx.bochner_residual << " >= " << tol.bochner
       << ")";
    throw PreconditionError(os.str());
  }
}

double umbilic_defect(const FramedPoint& fp) {
  double worst = 0.0;
  const Index n = fp.n();
  for (const auto& a : fp.h)
    worst = std::max(worst, (a - a.trace() / static_cast<double>(n) * Mat::Identity(n, n)).norm());
  return worst;
}

EqualityCase classify_direction(const PointContext& ctx, const Tolerances& tol) {
  if (std::sqrt(ctx.inv.mean.norm_sq) <= tol.null_space) {
    const Vec x = ctx.fp.tangent.col(0);
    return null_space_residual(ctx.inv.null_space_basis, x, ctx.fp.metric) < tol.null_space
               ? EqualityCase::NullSpaceMembership
               : EqualityCase::Unclassified;
  }
  if (ctx.n() == 2 && umbilic_defect(ctx.fp) < tol.umbilic) return EqualityCase::UmbilicalN2;
  return EqualityCase::Unclassified;
}

InequalityVerdict make_verdict(const PointContext& ctx, TheoremId id, const Interpretation& interp, double rhs,
                               const Tolerances& tol) {
  InequalityVerdict v;
  v.theorem = id;
  v.interpretation = interp;
  v.lhs = ctx.inv.curvatures.ricci[0];
  v.rhs = rhs;
  v.margin = rhs - v.lhs;
  v.holds = v.margin >= -tol.holds * tol_scale(rhs);
  v.equality = std::abs(v.margin) < tol.equality * tol_scale(rhs) ? classify_direction(ctx, tol) : EqualityCase::None;
  v.u = ctx.fp.u;
  v.direction = ctx.fp.tangent.col(0);
  return v;
}

}  // namespace

std::string Interpretation::name() const {
  std::string s(kCoeffNames[static_cast<int>(coeff)]);
  s += "-";
  s += kRicciNames[static_cast<int>(ricci)];
  s += "-";
  s += kRangeNames[static_cast<int>(mixed)];
  return s;
}

Interpretation Interpretation::parse(std::string_view name) {
  if (name == "statement-default") return {};
  for (const auto& i : all())
    if (i.name() == name) return i;
  std::ostringstream os;
  os << "unknown interpretation '" << name << "'; expected statement-default or <statement|proof>-<ambient|induced>-"
        "<row|full>";
  throw InputError(os.str());
}

std::vector<Interpretation> Interpretation::all() {
  std::vector<Interpretation> out;
  for (auto c : {CoeffVariant::Statement, CoeffVariant::Proof})
    for (auto r : {RicciSource::Ambient, RicciSource::Induced})
      for (auto m : {MixedTermRange::RowOfX, MixedTermRange::FullDoubleSum}) out.push_back({c, r, m});
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.name() < b.name(); });
  return out;
}

std::string_view to_string(TheoremId id) {
  switch (id) {
    case TheoremId::Theorem1: return "theorem1";
    case TheoremId::Theorem2: return "theorem2";
    case TheoremId::Corollary1: return "corollary1";
    case TheoremId::Corollary2: return "corollary2";
    case TheoremId::Corollary3: return "corollary3";
  }
  return "?";
}

TheoremId parse_theorem(std::string_view name) {
  for (auto id : {TheoremId::Theorem1, TheoremId::Theorem2, TheoremId::Corollary1, TheoremId::Corollary2,
                  TheoremId::Corollary3})
    if (to_string(id) == name) return id;
  throw InputError("unknown theorem '" + std::string(name) +
                   "'; expected theorem1, theorem2, corollary1, corollary2 or corollary3");
}

std::string_view to_string(EqualityCase e) {
  switch (e) {
    case EqualityCase::None: return "none";
    case EqualityCase::TotallyGeodesic: return "totally-geodesic";
    case EqualityCase::UmbilicalN2: return "umbilical-n2";
    case EqualityCase::NullSpaceMembership: return "null-space-membership";
    case EqualityCase::Unclassified: return "equality-unclassified";
  }
  return "?";
}

Mat PointContext::j_frame() const {
  const Mat e = fp.full_frame();
  return e.transpose() * fp.metric * fp.complex_structure * e;
}

PointContext evaluate_point(const Immersion& imm, const AmbientManifold& amb, const Vec& u,
                            const CurvatureBundle& bundle, const PointOptions& opts) {
  PointContext ctx;
  ctx.m = amb.complex_dim;
  ctx.fp = frames_at(imm, amb, u, opts.lock, opts.policy);
  ctx.ambient = bundle;
  ctx.ambient_frame = ambient_riemann_in_frame(ctx.fp, bundle);
  ctx.inv = compute_invariants(ctx.fp, imm, amb, ctx.ambient_frame, CurvatureRoute::GaussDerived, opts.policy);
  if (opts.with_intrinsic)
    ctx.intrinsic = induced_curvatures(ctx.fp, imm, amb, CurvatureRoute::IntrinsicFd, opts.policy);
  ctx.bochner_residual = bochner_residual(bundle, ctx.fp.metric, ctx.fp.complex_structure, amb.complex_dim);
  return ctx;
}

PointContext evaluate_point(const Immersion& imm, const AmbientManifold& amb, const Vec& u,
                            const PointOptions& opts) {
  const Vec p = imm.map(u);
  return evaluate_point(imm, amb, u, riemann_at(amb, p, CurvatureSource::Automatic, opts.policy), opts);
}

Vec lock_from_coefficients(const FramedPoint& default_frame, const Vec& coefficients) {
  if (coefficients.size() != default_frame.n())
    throw InputError("direction must have one coefficient per tangent dimension");
  if (!(coefficients.norm() > 0.0)) throw InputError("direction is zero");
  return default_frame.tangent * coefficients.normalized();
}

double theorem1_rhs(const PointContext& ctx, const Interpretation& interp) {
  const Index n = ctx.n();
  const double dn = static_cast<double>(n);
  const auto src = curvature_sources(ctx, interp.ricci);
  const Mat jf = ctx.j_frame();
  const Mat ric_j = ricci_with_j(src, jf, n);
  const auto sums = mixed_sums(ric_j, jf.topLeftCorner(n, n), n, interp.mixed);

  const double coeff = leading_block(dn) - p_coefficient(dn, interp.coeff) * ctx.inv.p_norm_sq;
  return dn * dn * ctx.inv.mean.norm_sq / 4.0 + coeff * src.rho / chen_denominator(dn) +
         6.0 / (2.0 * dn + 4.0) * sums.inner - 3.0 / (2.0 * dn + 4.0) * sums.last;
}

InequalityVerdict check_theorem1(const PointContext& ctx, const Interpretation& interp, const Tolerances& tol) {
  require_rank(ctx);
  require_bochner(ctx, tol);
  return make_verdict(ctx, TheoremId::Theorem1, interp, theorem1_rhs(ctx, interp), tol);
}

double theorem2_rhs(const PointContext& ctx, const Interpretation& interp, double theta, SlantSubstitution sub) {
  const Index n = ctx.n();
  const double dn = static_cast<double>(n);
  const double ct = std::cos(theta);
  const double p_sub = sub == SlantSubstitution::PrintedCos2 ? ct * ct : dn * ct * ct;
  const auto src = curvature_sources(ctx, interp.ricci);
  const Mat ric_j = ricci_with_j(src, ctx.j_frame(), n);
  // the slant statement drops the g(e_i, J e_j) weights and scales by cos(theta)
  const auto sums = mixed_sums(ric_j, Mat::Ones(n, n), n, interp.mixed);

  const double coeff = leading_block(dn) - p_coefficient(dn, interp.coeff) * p_sub;
  return dn * dn * ctx.inv.mean.norm_sq / 4.0 + coeff * src.rho / chen_denominator(dn) +
         6.0 * ct / (2.0 * dn + 4.0) * sums.inner - 3.0 / (2.0 * dn + 4.0) * ct * sums.last;
}

InequalityVerdict check_theorem2_slant(const PointContext& ctx, const Interpretation& interp, SlantSubstitution sub,
                                       const Tolerances& tol) {
  require_rank(ctx);
  require_bochner(ctx, tol);
  if (!ctx.inv.slant.angle) {
    std::ostringstream os;
    os << "point is not slant (angle spread " << ctx.inv.slant.spread << ")";
    throw PreconditionError(os.str());
  }
  return make_verdict(ctx, TheoremId::Theorem2, interp, theorem2_rhs(ctx, interp, *ctx.inv.slant.angle, sub), tol);
}

InequalityVerdict check_corollary(const PointContext& ctx, Corollary which, const Interpretation& interp,
                                  const Tolerances& tol, std::optional<double> lambda) {
  require_rank(ctx);
  require_bochner(ctx, tol);
  const Index n = ctx.n();
  const double dn = static_cast<double>(n);
  const double mean_term = dn * dn * ctx.inv.mean.norm_sq / 4.0;
  const auto src = curvature_sources(ctx, interp.ricci);
  const double denom = chen_denominator(dn);

  switch (which) {
    case Corollary::Einstein: {
      const Mat& g = ctx.fp.metric;
      const double lam = lambda.value_or(ctx.ambient.scalar / static_cast<double>(2 * ctx.m));
      const double defect = (ctx.ambient.ricci - lam * g).cwiseAbs().maxCoeff();
      if (!(defect < tol.hypothesis)) {
        std::ostringstream os;
        os << "einstein hypothesis fails: max |Ric - lambda g| = " << defect;
        throw PreconditionError(os.str());
      }
      const double coeff = leading_block(dn) - p_coefficient(dn, interp.coeff) * ctx.inv.p_norm_sq;
      const double rhs = mean_term + coeff * src.rho / denom + 3.0 / (2.0 * dn + 2.0) * lam * ctx.inv.p_norm_sq;
      return make_verdict(ctx, TheoremId::Corollary1, interp, rhs, tol);
    }
    case Corollary::AntiInvariant: {
      if (!(ctx.inv.p_norm_sq < tol.hypothesis)) {
        std::ostringstream os;
        os << "anti-invariant hypothesis fails: |P|^2 = " << ctx.inv.p_norm_sq;
        throw PreconditionError(os.str());
      }
      return make_verdict(ctx, TheoremId::Corollary2, interp, mean_term + leading_block(dn) * src.rho / denom, tol);
    }
    case Corollary::Invariant: {
      if (!ctx.inv.slant.angle || !(*ctx.inv.slant.angle < tol.hypothesis)) {
        std::ostringstream os;
        os << "invariant hypothesis fails: slant angle "
           << (ctx.inv.slant.angle ? std::to_string(*ctx.inv.slant.angle) : std::string("undefined"));
        throw PreconditionError(os.str());
      }
      const Mat ric_j = ricci_with_j(src, ctx.j_frame(), n);
      const auto sums = mixed_sums(ric_j, Mat::Ones(n, n), n, interp.mixed);
      const double coeff = leading_block(dn) - p_coefficient(dn, interp.coeff);
      const double rhs = mean_term + coeff * src.rho / denom + 6.0 / (2.0 * dn + 4.0) * sums.inner -
                         3.0 / (2.0 * dn + 4.0) * sums.last;
      return make_verdict(ctx, TheoremId::Corollary3, interp, rhs, tol);
    }
  }
  throw InputError("unknown corollary");
}

EqualityCase classify_point(const PointContext& ctx, const std::vector<InequalityVerdict>& verdicts,
                            const Tolerances& tol) {
  if (verdicts.empty()) return EqualityCase::None;
  for (const auto& v : verdicts)
    if (v.equality == EqualityCase::None) return EqualityCase::None;
  const double scale = std::max(1.0, h_norm_sq(ctx.fp));
  if (h_norm_sq(ctx.fp) < tol.null_space * tol.null_space * scale) return EqualityCase::TotallyGeodesic;
  if (ctx.n() == 2 && umbilic_defect(ctx.fp) < tol.umbilic) return EqualityCase::UmbilicalN2;
  return EqualityCase::Unclassified;
}

double algebraic_identity_check(std::span<const Mat> h) {
  double worst = 0.0;
  for (const auto& hr : h) {
    const Index n = hr.rows();
    double diag_sq = 0.0, trace = 0.0, offdiag_sq = 0.0, cross = 0.0;
    for (Index i = 0; i < n; ++i) {
      diag_sq += hr(i, i) * hr(i, i);
      trace += hr(i, i);
      for (Index j = i + 1; j < n; ++j) offdiag_sq += hr(i, j) * hr(i, j);
    }
    for (Index i = 1; i < n; ++i)
      for (Index j = i + 1; j < n; ++j) cross += hr(i, i) * hr(j, j);
    const double alternating = hr(0, 0) - (trace - hr(0, 0));
    const double regrouped = 0.5 * trace * trace + 0.5 * alternating * alternating - 2.0 * cross;
    const double scale = std::max(1.0, diag_sq);
    worst = std::max(worst, std::abs(diag_sq - regrouped) / scale);
    const double full = hr.squaredNorm();
    worst = std::max(worst, std::abs(full - (diag_sq + 2.0 * offdiag_sq)) / std::max(1.0, full));
  }
  return worst;
}

AuditReport derivation_audit(const PointContext& ctx, const Interpretation& interp) {
  if (!ctx.intrinsic) throw PreconditionError("derivation_audit needs the intrinsic curvature route");
  const Index n = ctx.n();
  const double dn = static_cast<double>(n);
  const Mat e = ctx.fp.full_frame();
  const Mat jf = ctx.j_frame();
  const Mat l = e.transpose() * l_tensor(ctx.ambient.ricci, ctx.ambient.scalar, ctx.fp.metric, ctx.m) * e;
  const Mat l_j = (l * jf).topLeftCorner(n, n);  // L(e_i, J e_j)

  AuditReport rep;
  rep.scalar_trace.name = "scalar-trace";
  rep.scalar_trace.lhs = 2.0 * ctx.intrinsic->rho;
  double mixed = 0.0;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) mixed += l_j(i, j) * jf(i, j);
  rep.scalar_trace.rhs = 2.0 * (dn - 1.0) * l.topLeftCorner(n, n).trace() + 6.0 * mixed +
                         dn * dn * ctx.inv.mean.norm_sq - ctx.inv.h_norm_sq;

  rep.partial_sectional.name = "partial-sectional";
  double partial = 0.0, extrinsic = 0.0;
  for (Index i = 1; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      partial += ctx.intrinsic->sectional(i, j);
      for (const auto& hr : ctx.fp.h) extrinsic += hr(i, i) * hr(j, j) - hr(i, j) * hr(i, j);
    }
  const auto src = curvature_sources(ctx, interp.ricci);
  const Mat ric_j = ricci_with_j(src, jf, n);
  const auto sums = mixed_sums(ric_j, jf.topLeftCorner(n, n), n, interp.mixed);
  const double closed = 4.0 * dn * dn * dn - 9.0 * dn * dn - dn + 6.0 - (3.0 * dn * dn - 9.0 * dn + 6.0) * ctx.inv.p_norm_sq;
  rep.partial_sectional.lhs = partial;
  rep.partial_sectional.rhs = closed * src.rho / chen_denominator(dn) + 6.0 / (2.0 * dn + 4.0) * sums.inner + extrinsic;

  rep.square_decomposition = algebraic_identity_check(ctx.fp.h);

  double gauss = 0.0;
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y)
      for (Index z = 0; z < n; ++z)
        for (Index w = 0; w < n; ++w)
          gauss = std::max(gauss, gauss_residual(ctx.fp, ctx.intrinsic->riemann, ctx.ambient_frame, x, y, z, w));
  rep.gauss = gauss;
  return rep;
}

std::vector<SurveyRow> interpretation_survey(const std::vector<SurveyInput>& inputs,
                                             const std::vector<Interpretation>& interps, const Tolerances& tol,
                                             const FdPolicy& policy) {
  std::vector<Interpretation> ordered = interps;
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) { return a.name() < b.name(); });

  // margins[k][f]: min over samples of fixture f under interpretation k
  std::vector<std::vector<SurveyRow>> table(ordered.size());
  for (std::size_t k = 0; k < ordered.size(); ++k)
    for (const auto& in : inputs) {
      SurveyRow row;
      row.interpretation = ordered[k];
      row.fixture = in.fixture;
      row.min_margin = std::numeric_limits<double>::infinity();
      table[k].push_back(row);
    }

  for (std::size_t f = 0; f < inputs.size(); ++f) {
    const auto& in = inputs[f];
    for (const auto& u : in.points) {
      const FramedPoint base = frames_at(*in.immersion, *in.ambient, u, std::nullopt, policy);
      const CurvatureBundle bundle = riemann_at(*in.ambient, base.p, CurvatureSource::Automatic, policy);
      for (const auto& c : in.directions) {
        PointOptions opts;
        opts.lock = lock_from_coefficients(base, c);
        opts.policy = policy;
        const PointContext ctx = evaluate_point(*in.immersion, *in.ambient, u, bundle, opts);
        const double lhs = ctx.inv.curvatures.ricci[0];
        for (std::size_t k = 0; k < ordered.size(); ++k) {
          auto& row = table[k][f];
          row.min_margin = std::min(row.min_margin, theorem1_rhs(ctx, ordered[k]) - lhs);
          ++row.evaluations;
          row.bochner_flat = row.bochner_flat && ctx.bochner_residual < tol.bochner;
        }
      }
    }
  }

  std::vector<SurveyRow> out;
  for (auto& rows : table)
    for (auto& row : rows) {
      row.falsified = row.bochner_flat && row.evaluations > 0 && row.min_margin < -1e-6;
      out.push_back(row);
    }
  return out;
}

}  // namespace bkg
