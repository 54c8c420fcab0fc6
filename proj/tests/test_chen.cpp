#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "bkg/chen.hpp"
#include "fixtures.hpp"

using bkg::Interpretation;
using bkg::Mat;
using bkg::Vec;

namespace {

Vec uv(double a, double b) { return (Vec(2) << a, b).finished(); }

bkg::PointContext at(const bkg::Immersion& imm, const bkg::AmbientManifold& amb, const Vec& u,
                     std::optional<Vec> coeffs = std::nullopt, bool intrinsic = false) {
  bkg::PointOptions o;
  o.with_intrinsic = intrinsic;
  if (coeffs) o.lock = bkg::lock_from_coefficients(bkg::frames_at(imm, amb, u), *coeffs);
  return bkg::evaluate_point(imm, amb, u, o);
}

// same point with the normal frame rotated in its first two slots
bkg::PointContext remixed(const bkg::PointContext& ctx, const bkg::Immersion& imm, const bkg::AmbientManifold& amb,
                          double t) {
  Mat rot = Mat::Identity(ctx.fp.codim(), ctx.fp.codim());
  rot.topLeftCorner(2, 2) << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  bkg::PointContext out = ctx;
  out.fp = bkg::with_normal_frame(ctx.fp, ctx.fp.normal * rot, imm, amb);
  out.ambient_frame = bkg::ambient_riemann_in_frame(out.fp, out.ambient);
  out.inv = bkg::compute_invariants(out.fp, imm, amb, out.ambient_frame);
  return out;
}

}  // namespace

TEST_CASE("interpretation names") {
  const auto all = Interpretation::all();
  REQUIRE(all.size() == 8);
  CHECK(std::is_sorted(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.name() < b.name(); }));
  for (const auto& i : all) CHECK(Interpretation::parse(i.name()) == i);
  CHECK(Interpretation{}.name() == "statement-ambient-row");
  CHECK(Interpretation::parse("statement-default") == Interpretation{});
  CHECK_THROWS_AS(Interpretation::parse("statement"), bkg::InputError);
  CHECK(bkg::parse_theorem("corollary2") == bkg::TheoremId::Corollary2);
  CHECK_THROWS_AS(bkg::parse_theorem("lemma"), bkg::InputError);
}

TEST_CASE("round sphere attains equality, umbilical, under every reading") {
  const auto imm = bkg::builtin_immersion("sphere", {}, 2);
  const auto amb = bkg::flat_ambient(2);
  for (const auto& u : fixture::grid(imm)) {
    std::vector<bkg::InequalityVerdict> verdicts;
    for (const auto& c : fixture::directions()) {
      const auto ctx = at(imm, amb, u, c);
      for (const auto& interp : Interpretation::all()) {
        const auto v = bkg::check_theorem1(ctx, interp);
        CHECK(std::abs(v.lhs - 1.0) < 1e-6);
        CHECK(std::abs(v.rhs - 1.0) < 1e-6);
        CHECK(v.holds);
        CHECK(v.equality == bkg::EqualityCase::UmbilicalN2);
        verdicts.push_back(v);
      }
    }
    CHECK(bkg::classify_point(at(imm, amb, u), verdicts) == bkg::EqualityCase::UmbilicalN2);
  }
}

TEST_CASE("cylinder holds strictly with margin 1/4") {
  const auto imm = bkg::builtin_immersion("cylinder", {}, 2);
  const auto amb = bkg::flat_ambient(2);
  double min_margin = 1e9;
  for (const auto& u : fixture::grid(imm))
    for (const auto& c : fixture::directions()) {
      const auto v = bkg::check_theorem1(at(imm, amb, u, c), {});
      CHECK(v.holds);
      CHECK(v.equality == bkg::EqualityCase::None);
      CHECK(std::abs(v.rhs - 0.25) < 1e-6);
      min_margin = std::min(min_margin, v.margin);
    }
  CHECK(std::abs(min_margin - 0.25) < 1e-6);
}

TEST_CASE("planes in flat space: 0 <= 0 with e_1 in the null space") {
  const auto amb = bkg::flat_ambient(2);
  for (const char* name : {"complex_plane", "totally_real_plane", "slant_plane"}) {
    const auto imm = bkg::builtin_immersion(name, {}, 2);
    for (const auto& u : fixture::grid(imm)) {
      std::vector<bkg::InequalityVerdict> vs;
      for (const auto& c : fixture::directions(4)) {
        const auto v = bkg::check_theorem1(at(imm, amb, u, c), {});
        CHECK(v.lhs == doctest::Approx(0.0));
        CHECK(v.rhs == doctest::Approx(0.0));
        CHECK(v.equality == bkg::EqualityCase::NullSpaceMembership);
        vs.push_back(v);
      }
      CHECK(bkg::classify_point(at(imm, amb, u), vs) == bkg::EqualityCase::TotallyGeodesic);
    }
  }
}

TEST_CASE("flat ambient: every reading collapses to the classical bound") {
  const auto amb = bkg::flat_ambient(2);
  for (const char* name : {"sphere", "cylinder", "torus", "slant_plane"}) {
    const auto imm = bkg::builtin_immersion(name, {}, 2);
    for (const auto& u : fixture::grid(imm)) {
      const auto ctx = at(imm, amb, u, uv(0.6, 0.8));
      const double classical = ctx.inv.mean.norm_sq;  // n^2 |H|^2 / 4 with n = 2
      for (const auto& interp : Interpretation::all()) CHECK(bkg::theorem1_rhs(ctx, interp) == classical);
    }
  }
}

TEST_CASE("margin is invariant under re-mixing of the normal frame") {
  const auto amb = bkg::complex_space_form(2, 4.0);
  const auto imm = bkg::builtin_immersion("sphere", {0.4}, 2);
  const auto ctx = at(imm, amb, uv(1.1, 0.7), uv(0.6, 0.8));
  for (double t : {0.3, 1.7, 2.9}) {
    const auto other = remixed(ctx, imm, amb, t);
    for (const auto& interp : Interpretation::all())
      CHECK(std::abs(bkg::check_theorem1(ctx, interp).margin - bkg::check_theorem1(other, interp).margin) < 1e-9);
  }
}

TEST_CASE("flipping e_1 does not change the verdict") {
  const auto amb = bkg::complex_space_form(2, 4.0);
  const auto imm = bkg::builtin_immersion("slant_plane", {}, 2);
  const auto a = at(imm, amb, uv(0.1, 0.2), uv(0.6, 0.8));
  const auto b = at(imm, amb, uv(0.1, 0.2), uv(-0.6, -0.8));
  for (const auto& interp : Interpretation::all())
    CHECK(std::abs(bkg::check_theorem1(a, interp).margin - bkg::check_theorem1(b, interp).margin) < 1e-9);
}

TEST_CASE("complex line in CP^2(4): hand-evaluated right-hand side") {
  // n = 2, |P|^2 = 2, rho = 24, Ric = 6 g, rho_T = 4, Ric_T(e_1, J e_2) g(e_1, J e_2) = 4
  const auto ctx = at(bkg::builtin_immersion("complex_plane", {}, 2), bkg::complex_space_form(2, 4.0), uv(0.1, -0.2));
  const auto v = bkg::check_theorem1(ctx, {});
  CHECK(v.lhs == doctest::Approx(4.0).epsilon(1e-8));
  CHECK(v.rhs == doctest::Approx(-1.0 - 2.25).epsilon(1e-8));
  CHECK_FALSE(v.holds);
  CHECK(bkg::theorem1_rhs(ctx, Interpretation::parse("proof-ambient-row")) ==
        doctest::Approx((-10.0 - 27.0 * 2.0) * 24.0 / 96.0 - 2.25).epsilon(1e-8));
  CHECK(bkg::theorem1_rhs(ctx, Interpretation::parse("statement-induced-row")) ==
        doctest::Approx(-4.0 * 4.0 / 96.0 - 3.0 / 8.0 * 4.0).epsilon(1e-8));
  CHECK(bkg::theorem1_rhs(ctx, Interpretation::parse("statement-ambient-full")) ==
        doctest::Approx(-1.0 - 3.0 / 8.0 * 12.0).epsilon(1e-8));
}

TEST_CASE("totally real plane through the origin of CP^2(4): regression values") {
  // |P|^2 = 0, theta = pi/2, rho = 24, rho_T = K(e_1, e_2) = 1, mixed terms vanish
  const auto ctx = at(bkg::builtin_immersion("totally_real_plane", {}, 2), bkg::complex_space_form(2, 4.0), uv(0, 0));
  const double ambient_rhs = -10.0 * 24.0 / 96.0;
  const double induced_rhs = -10.0 / 96.0;
  for (const auto& interp : Interpretation::all()) {
    const double want = interp.ricci == bkg::RicciSource::Ambient ? ambient_rhs : induced_rhs;
    const auto t1 = bkg::check_theorem1(ctx, interp);
    CHECK(t1.lhs == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(t1.rhs == doctest::Approx(want).epsilon(1e-8));
    for (auto sub : {bkg::SlantSubstitution::PrintedCos2, bkg::SlantSubstitution::NCos2}) {
      const auto t2 = bkg::check_theorem2_slant(ctx, interp, sub);
      CHECK(std::abs(t2.rhs - want) < 1e-8);
      CHECK(t2.margin < 0.0);
    }
  }
}

TEST_CASE("slant theorem in flat space") {
  const auto amb = bkg::flat_ambient(2);
  std::vector<double> rhs;
  for (double theta : {0.0, std::numbers::pi / 6, std::numbers::pi / 3, std::numbers::pi / 2}) {
    const auto imm = bkg::builtin_immersion("slant_plane", {theta}, 2);
    const auto ctx = at(imm, amb, uv(0.2, 0.1), uv(0.6, 0.8));
    for (const auto& interp : Interpretation::all()) {
      const auto v = bkg::check_theorem2_slant(ctx, interp);
      CHECK(v.margin == doctest::Approx(0.0));
      CHECK(v.equality == bkg::EqualityCase::NullSpaceMembership);
      rhs.push_back(v.rhs);
    }
  }
  CHECK(std::all_of(rhs.begin(), rhs.end(), [&](double x) { return x == rhs.front(); }));
}

TEST_CASE("slant theorem needs a slant point") {
  // every surface in C^2 is pointwise slant; a hypersurface is not
  Vec u(3);
  u << 1.0, 1.2, 0.3;
  const auto ctx = at(bkg::builtin_immersion("sphere3", {}, 2), bkg::flat_ambient(2), u);
  CHECK_THROWS_AS(bkg::check_theorem2_slant(ctx, {}), bkg::PreconditionError);
}

TEST_CASE("non-Bochner-flat ambient is a precondition failure") {
  const auto ctx = at(bkg::builtin_immersion("complex_plane", {}, 2), bkg::product_of_curves({4.0, 1.0}), uv(0.1, 0.2));
  CHECK(ctx.bochner_residual > 1e-2);
  CHECK_THROWS_AS(bkg::check_theorem1(ctx, {}), bkg::PreconditionError);
}

TEST_CASE("corollaries in flat space") {
  const auto amb = bkg::flat_ambient(2);
  const auto sphere = at(bkg::builtin_immersion("sphere", {}, 2), amb, uv(1.0, 1.0));
  const auto e = bkg::check_corollary(sphere, bkg::Corollary::Einstein, {});
  CHECK(e.rhs == bkg::check_theorem1(sphere, {}).rhs);
  CHECK_THROWS_AS(bkg::check_corollary(sphere, bkg::Corollary::Einstein, {}, {}, 1.0), bkg::PreconditionError);

  const auto real = at(bkg::builtin_immersion("totally_real_plane", {}, 2), amb, uv(0.1, 0.1));
  const auto a = bkg::check_corollary(real, bkg::Corollary::AntiInvariant, {});
  CHECK(a.rhs == 0.0);
  CHECK_THROWS_AS(bkg::check_corollary(real, bkg::Corollary::Invariant, {}), bkg::PreconditionError);

  const auto cplx = at(bkg::builtin_immersion("complex_plane", {}, 2), amb, uv(0.1, 0.1));
  const auto i = bkg::check_corollary(cplx, bkg::Corollary::Invariant, {});
  CHECK(i.rhs == 0.0);
  CHECK(i.lhs == 0.0);
  CHECK(i.equality != bkg::EqualityCase::None);
  CHECK_THROWS_AS(bkg::check_corollary(cplx, bkg::Corollary::AntiInvariant, {}), bkg::PreconditionError);
}

TEST_CASE("Einstein corollary in CP^2(4)") {
  // lambda = 6; slant plane at the origin: |P|^2 = 2 cos^2(pi/3) = 1/2
  const auto ctx = at(bkg::builtin_immersion("slant_plane", {}, 2), bkg::complex_space_form(2, 4.0), uv(0, 0));
  const auto v = bkg::check_corollary(ctx, bkg::Corollary::Einstein, {});
  const double c = -10.0 + 3.0 * 0.5;
  CHECK(v.rhs == doctest::Approx(c * 24.0 / 96.0 + 3.0 * 6.0 * 0.5 / 6.0).epsilon(1e-8));
}

TEST_CASE("square decomposition identity") {
  const Mat d2 = Mat::Identity(2, 2);
  const Mat d3 = Mat::Identity(3, 3);
  CHECK(bkg::algebraic_identity_check(std::vector<Mat>{d2}) == 0.0);
  CHECK(bkg::algebraic_identity_check(std::vector<Mat>{d3}) == 0.0);
  CHECK(bkg::algebraic_identity_check(std::vector<Mat>{Mat::Zero(4, 4)}) == 0.0);

  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int n = 2; n <= 6; ++n) {
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      Mat a(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = dist(rng);
      worst = std::max(worst, bkg::algebraic_identity_check(std::vector<Mat>{a, 2.0 * a}));
    }
    CAPTURE(n);
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("derivation audit on the sphere: 2 * 1 = 0 + 0 + 4 - 2") {
  const auto ctx = at(bkg::builtin_immersion("sphere", {}, 2), bkg::flat_ambient(2), uv(1.0, 1.0), std::nullopt, true);
  const auto a = bkg::derivation_audit(ctx, {});
  CHECK(a.scalar_trace.lhs == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(a.scalar_trace.rhs == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(a.scalar_trace.residual() < 1e-6);
  CHECK(a.partial_sectional.residual() < 1e-12);
  CHECK(a.gauss < 1e-6);
}

TEST_CASE("derivation audit step (a) on flat fixtures and in CP^2(4)") {
  const auto flat = bkg::flat_ambient(2);
  for (const char* name : {"sphere", "cylinder", "complex_plane", "totally_real_plane", "slant_plane", "torus"}) {
    const auto imm = bkg::builtin_immersion(name, {}, 2);
    for (const auto& u : fixture::grid(imm)) {
      CAPTURE(name);
      const auto a = bkg::derivation_audit(at(imm, flat, u, std::nullopt, true), {});
      CHECK(a.scalar_trace.residual() < 1e-5);
      CHECK(a.square_decomposition < 1e-12);
    }
  }
  Vec u(3);
  u << 1.0, 1.2, 0.3;
  const auto s3 = bkg::derivation_audit(at(bkg::builtin_immersion("sphere3", {}, 2), flat, u, std::nullopt, true), {});
  CHECK(s3.scalar_trace.residual() < 1e-5);
  CHECK(s3.partial_sectional.residual() < 1e-5);

  const auto ctx = at(bkg::builtin_immersion("totally_real_plane", {}, 2), bkg::complex_space_form(2, 4.0), uv(0.1, 0.2),
                      std::nullopt, true);
  for (const auto& interp : Interpretation::all()) CHECK(bkg::derivation_audit(ctx, interp).scalar_trace.residual() < 1e-5);
  CHECK_THROWS_AS(bkg::derivation_audit(at(bkg::builtin_immersion("sphere", {}, 2), flat, uv(1, 1)), {}),
                  bkg::PreconditionError);
}

TEST_CASE("survey over flat fixtures is identical across readings") {
  const auto amb = bkg::flat_ambient(2);
  std::vector<bkg::Immersion> imms;
  for (const char* name : {"sphere", "cylinder", "complex_plane", "totally_real_plane", "slant_plane"})
    imms.push_back(bkg::builtin_immersion(name, {}, 2));
  std::vector<bkg::SurveyInput> in;
  for (const auto& imm : imms) in.push_back({imm.name, &imm, &amb, fixture::grid(imm), fixture::directions(4)});
  const auto rows = bkg::interpretation_survey(in, Interpretation::all());
  REQUIRE(rows.size() == 8 * imms.size());
  const std::vector<double> expect = {0.0, 0.25, 0.0, 0.0, 0.0};
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(std::abs(rows[k].min_margin - expect[k % imms.size()]) < 1e-6);
    CHECK(std::abs(rows[k].min_margin - rows[k % imms.size()].min_margin) < 1e-9);
    CHECK_FALSE(rows[k].falsified);
    CHECK(rows[k].bochner_flat);
    CHECK(rows[k].evaluations == 36);
  }
}

TEST_CASE("survey in CP^2(4) flags falsified readings and is deterministic") {
  const auto amb = bkg::complex_space_form(2, 4.0);
  const auto imm = bkg::builtin_immersion("complex_plane", {}, 2);
  const std::vector<bkg::SurveyInput> in = {{"complex_plane", &imm, &amb, {uv(0.1, 0.1), uv(-0.2, 0.0)}, fixture::directions(2)}};
  const auto a = bkg::interpretation_survey(in, Interpretation::all());
  const auto b = bkg::interpretation_survey(in, Interpretation::all());
  REQUIRE(a.size() == 8);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].min_margin == b[k].min_margin);
    CHECK(a[k].falsified);
  }
  CHECK(a[5].interpretation == Interpretation{});
  CHECK(a[5].min_margin == doctest::Approx(-7.25).epsilon(1e-8));
}
