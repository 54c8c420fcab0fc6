#include "bkg/immersion.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <numbers>
#include <sstream>

#include "bkg/errors.hpp"

namespace bkg {

namespace {

// Places up to 2m real components; the rest stay zero.
struct Embedder {
  Index real_dim;
  Vec point(std::initializer_list<std::pair<Index, double>> entries) const {
    Vec x = Vec::Zero(real_dim);
    for (const auto& [k, v] : entries) x[k] = v;
    return x;
  }
};

const BuiltinInfo& find_builtin(const std::string& name) {
  for (const auto& b : builtin_catalogue())
    if (b.name == name) return b;
  std::ostringstream os;
  os << "unknown builtin immersion '" << name << "'; available:";
  for (const auto& b : builtin_catalogue()) os << " " << b.name;
  throw InputError(os.str());
}

}  // namespace

const std::vector<BuiltinInfo>& builtin_catalogue() {
  static const std::vector<BuiltinInfo> catalogue = {
      {"complex_plane", {}, {}, 2, 2, "complex line (u, v, 0, 0)",
       "h = 0, H = 0, K12 = 0, P = [[0,1],[-1,0]], |P|^2 = 2, theta = 0, N_p = T_pM"},
      {"totally_real_plane", {}, {}, 2, 2, "totally real plane (u, 0, v, 0)",
       "h = 0, H = 0, K12 = 0, P = 0, theta = pi/2, N_p = T_pM"},
      {"slant_plane", {"theta"}, {std::numbers::pi / 3.0}, 2, 2, "slant plane (u, v cos t, 0, v sin t)",
       "h = 0, H = 0, |P|^2 = 2 cos^2 t, slant angle t"},
      {"sphere", {"r"}, {1.0}, 2, 2, "round sphere S^2(r) in the real span of x1, y1, x2",
       "h = (1/r) delta against the inward normal, |H|^2 = 1/r^2, |h|^2 = 2/r^2, K12 = 1/r^2, rho = 1/r^2, "
       "Ric(X) = 1/r^2, N_p = 0, Chen margin 0 (umbilical)"},
      {"cylinder", {"r"}, {1.0}, 2, 2, "cylinder S^1(r) x R (r cos u, r sin u, v, 0)",
       "principal curvatures {1/r, 0}, |H|^2 = 1/(4r^2), K12 = 0, N_p = axis, Chen margin 1/(4 r^2)"},
      {"torus", {"r1", "r2"}, {1.0, 1.0}, 2, 2, "product torus S^1(r1) x S^1(r2) in C^2",
       "flat, totally real, |H|^2 = (1/r1^2 + 1/r2^2)/4, Chen margin (1/r1^2 + 1/r2^2)/4"},
      {"sphere3", {"r"}, {1.0}, 3, 2, "round hypersphere S^3(r) in C^2",
       "h = (1/r) delta, |H|^2 = 1/r^2, K_ij = 1/r^2, rho = 3/r^2, Ric(X) = 2/r^2, Chen margin 1/(4 r^2)"},
  };
  return catalogue;
}

Immersion builtin_immersion(const std::string& name, std::vector<double> params, Index m) {
  const BuiltinInfo& info = find_builtin(name);
  if (m < info.min_complex_dim) {
    std::ostringstream os;
    os << "builtin '" << name << "' needs complex dimension >= " << info.min_complex_dim;
    throw InputError(os.str());
  }
  if (params.size() > info.default_params.size()) {
    std::ostringstream os;
    os << "builtin '" << name << "' takes " << info.default_params.size() << " parameters, got " << params.size();
    throw InputError(os.str());
  }
  for (std::size_t k = params.size(); k < info.default_params.size(); ++k) params.push_back(info.default_params[k]);

  const Index d = 2 * m;
  const Embedder e{d};
  Immersion imm;
  imm.param_dim = info.param_dim;
  imm.ambient_real_dim = d;
  imm.name = name;
  imm.params = params;

  if (name == "complex_plane" || name == "totally_real_plane") {
    const Index second = name == "complex_plane" ? 1 : 2;
    imm.map = [e, second](const Vec& u) { return e.point({{0, u[0]}, {second, u[1]}}); };
    imm.jacobian = [d, second](const Vec&) {
      Mat j = Mat::Zero(d, 2);
      j(0, 0) = 1.0;
      j(second, 1) = 1.0;
      return j;
    };
    imm.default_domain = {{-0.5, 0.5}, {-0.5, 0.5}};
  } else if (name == "slant_plane") {
    const double ct = std::cos(params[0]), st = std::sin(params[0]);
    imm.map = [e, ct, st](const Vec& u) { return e.point({{0, u[0]}, {1, u[1] * ct}, {3, u[1] * st}}); };
    imm.jacobian = [d, ct, st](const Vec&) {
      Mat j = Mat::Zero(d, 2);
      j(0, 0) = 1.0;
      j(1, 1) = ct;
      j(3, 1) = st;
      return j;
    };
    imm.default_domain = {{-0.5, 0.5}, {-0.5, 0.5}};
  } else if (name == "sphere") {
    const double r = params[0];
    if (!(r > 0)) throw InputError("sphere: radius must be positive");
    imm.map = [e, r](const Vec& u) {
      return e.point({{0, r * std::sin(u[0]) * std::cos(u[1])},
                      {1, r * std::sin(u[0]) * std::sin(u[1])},
                      {2, r * std::cos(u[0])}});
    };
    imm.jacobian = [d, r](const Vec& u) {
      Mat j = Mat::Zero(d, 2);
      j(0, 0) = r * std::cos(u[0]) * std::cos(u[1]);
      j(1, 0) = r * std::cos(u[0]) * std::sin(u[1]);
      j(2, 0) = -r * std::sin(u[0]);
      j(0, 1) = -r * std::sin(u[0]) * std::sin(u[1]);
      j(1, 1) = r * std::sin(u[0]) * std::cos(u[1]);
      return j;
    };
    imm.default_domain = {{0.6, 2.5}, {0.0, 5.0}};
  } else if (name == "cylinder") {
    const double r = params[0];
    if (!(r > 0)) throw InputError("cylinder: radius must be positive");
    imm.map = [e, r](const Vec& u) { return e.point({{0, r * std::cos(u[0])}, {1, r * std::sin(u[0])}, {2, u[1]}}); };
    imm.jacobian = [d, r](const Vec& u) {
      Mat j = Mat::Zero(d, 2);
      j(0, 0) = -r * std::sin(u[0]);
      j(1, 0) = r * std::cos(u[0]);
      j(2, 1) = 1.0;
      return j;
    };
    imm.default_domain = {{0.0, 5.0}, {-1.0, 1.0}};
  } else if (name == "torus") {
    const double r1 = params[0], r2 = params[1];
    if (!(r1 > 0 && r2 > 0)) throw InputError("torus: radii must be positive");
    imm.map = [e, r1, r2](const Vec& u) {
      return e.point({{0, r1 * std::cos(u[0])}, {1, r1 * std::sin(u[0])}, {2, r2 * std::cos(u[1])},
                      {3, r2 * std::sin(u[1])}});
    };
    imm.jacobian = [d, r1, r2](const Vec& u) {
      Mat j = Mat::Zero(d, 2);
      j(0, 0) = -r1 * std::sin(u[0]);
      j(1, 0) = r1 * std::cos(u[0]);
      j(2, 1) = -r2 * std::sin(u[1]);
      j(3, 1) = r2 * std::cos(u[1]);
      return j;
    };
    imm.default_domain = {{0.0, 5.0}, {0.0, 5.0}};
  } else if (name == "sphere3") {
    const double r = params[0];
    if (!(r > 0)) throw InputError("sphere3: radius must be positive");
    imm.map = [e, r](const Vec& u) {
      const double sa = std::sin(u[0]), ca = std::cos(u[0]), sb = std::sin(u[1]), cb = std::cos(u[1]);
      return e.point({{0, r * sa * sb * std::cos(u[2])}, {1, r * sa * sb * std::sin(u[2])}, {2, r * sa * cb},
                      {3, r * ca}});
    };
    imm.jacobian = [d, r](const Vec& u) {
      const double sa = std::sin(u[0]), ca = std::cos(u[0]), sb = std::sin(u[1]), cb = std::cos(u[1]);
      const double sc = std::sin(u[2]), cc = std::cos(u[2]);
      Mat j = Mat::Zero(d, 3);
      j(0, 0) = r * ca * sb * cc;
      j(1, 0) = r * ca * sb * sc;
      j(2, 0) = r * ca * cb;
      j(3, 0) = -r * sa;
      j(0, 1) = r * sa * cb * cc;
      j(1, 1) = r * sa * cb * sc;
      j(2, 1) = -r * sa * sb;
      j(0, 2) = -r * sa * sb * sc;
      j(1, 2) = r * sa * sb * cc;
      return j;
    };
    imm.default_domain = {{0.6, 2.5}, {0.6, 2.5}, {0.0, 5.0}};
  }
  return imm;
}

Immersion expression_immersion(std::vector<std::string> parameters, std::vector<expr::Expr> components,
                               std::string name) {
  if (parameters.empty()) throw InputError("expression immersion: no parameters declared");
  if (components.empty() || components.size() % 2 != 0)
    throw InputError("expression immersion: component count must be 2m");
  Immersion imm;
  imm.param_dim = static_cast<Index>(parameters.size());
  imm.ambient_real_dim = static_cast<Index>(components.size());
  imm.name = std::move(name);
  imm.map = [components = std::move(components)](const Vec& u) {
    Vec x(static_cast<Index>(components.size()));
    const std::span<const double> values(u.data(), static_cast<std::size_t>(u.size()));
    for (std::size_t k = 0; k < components.size(); ++k) x[static_cast<Index>(k)] = components[k](values);
    return x;
  };
  imm.default_domain.assign(parameters.size(), ParameterRange{-0.5, 0.5});
  return imm;
}

Mat jacobian_at(const Immersion& imm, const Vec& u, const FdPolicy& policy) {
  if (u.size() != imm.param_dim) throw DimensionError("jacobian: parameter point has wrong dimension");
  if (imm.jacobian) return imm.jacobian(u);
  Mat j(imm.ambient_real_dim, imm.param_dim);
  for (Index a = 0; a < imm.param_dim; ++a) j.col(a) = fd_derivative(imm.map, u, a, 1, policy);
  return j;
}

Mat FramedPoint::full_frame() const {
  Mat e(tangent.rows(), tangent.cols() + normal.cols());
  e << tangent, normal;
  return e;
}

double FramedPoint::frame_residual() const {
  const Mat e = full_frame();
  return (e.transpose() * metric * e - Mat::Identity(e.cols(), e.cols())).cwiseAbs().maxCoeff();
}

double FramedPoint::h_symmetry_residual() const {
  double worst = 0.0;
  for (const auto& hr : h) worst = std::max(worst, (hr - hr.transpose()).cwiseAbs().maxCoeff());
  return worst;
}

namespace {

Mat chart_coefficients(const Mat& jac, const Mat& g, const Mat& tangent) {
  const Mat gram = jac.transpose() * g * jac;
  return gram.ldlt().solve(jac.transpose() * g * tangent);
}

}  // namespace

FramedPoint frames_at(const Immersion& imm, const AmbientManifold& amb, const Vec& u, const std::optional<Vec>& lock,
                      const FdPolicy& policy) {
  if (imm.ambient_real_dim != amb.real_dim())
    throw DimensionError("frames_at: immersion target dimension does not match ambient");
  if (u.size() != imm.param_dim) throw DimensionError("frames_at: parameter point has wrong dimension");

  FramedPoint fp;
  fp.u = u;
  fp.p = imm.map(u);
  if (!fp.p.allFinite()) throw EvaluationError("frames_at: immersion is not finite at the point", {u.data(), u.data() + u.size()});
  fp.metric = amb.metric_at(fp.p);
  require_spd(fp.metric, "frames_at");
  fp.complex_structure = amb.j_at(fp.p);
  fp.jacobian = jacobian_at(imm, u, policy);

  const Index n = imm.param_dim;
  const Index d = amb.real_dim();
  Eigen::JacobiSVD<Mat> svd(fp.jacobian);
  const Vec sv = svd.singularValues();
  if (sv.size() < n || sv[n - 1] <= 1e-8) {
    std::ostringstream os;
    os << "immersion degenerate at u = (" << u.transpose() << "): smallest singular value "
       << (sv.size() ? sv[sv.size() - 1] : 0.0);
    throw DegeneracyError(os.str());
  }

  const auto jac_cols = columns(fp.jacobian);
  std::vector<Vec> tangent;
  if (lock) {
    if (lock->size() != d) throw InputError("frames_at: lock direction has wrong dimension");
    const double len = std::sqrt(inner(*lock, *lock, fp.metric));
    if (!(len > 0.0)) throw InputError("frames_at: lock direction is zero");
    const Vec projected = fp.jacobian * chart_coefficients(fp.jacobian, fp.metric, *lock);
    const Vec off = *lock - projected;
    if (std::sqrt(std::max(0.0, inner(off, off, fp.metric))) > 1e-8 * len)
      throw InputError("frames_at: lock direction is not tangent to the immersion");
    tangent = extend_orthonormal({Vec(*lock / len)}, jac_cols, fp.metric, n, 1e-8);
    fp.first_direction_lock = *lock / len;
  } else {
    tangent = gram_schmidt(jac_cols, fp.metric);
  }
  if (static_cast<Index>(tangent.size()) != n) throw DegeneracyError("frames_at: could not complete tangent frame");
  fp.tangent = stack_columns(tangent, d);

  std::vector<Vec> coordinate_basis;
  for (Index k = 0; k < d; ++k) coordinate_basis.push_back(Vec::Unit(d, k));
  const auto full = extend_orthonormal(tangent, coordinate_basis, fp.metric, d, 1e-8);
  if (static_cast<Index>(full.size()) != d) throw DegeneracyError("frames_at: could not complete normal frame");
  fp.normal = stack_columns(std::span<const Vec>(full).subspan(static_cast<std::size_t>(n)), d);

  fp.chart_coeffs = chart_coefficients(fp.jacobian, fp.metric, fp.tangent);
  fp.induced_metric = fp.tangent.transpose() * fp.metric * fp.tangent;
  fp.h = second_fundamental_form(fp, imm, amb, policy);
  return fp;
}

FramedPoint with_normal_frame(FramedPoint fp, const Mat& normal, const Immersion& imm, const AmbientManifold& amb,
                              const FdPolicy& policy) {
  if (normal.rows() != fp.normal.rows() || normal.cols() != fp.normal.cols())
    throw DimensionError("with_normal_frame: normal frame has wrong shape");
  fp.normal = normal;
  if (fp.frame_residual() > 1e-10) throw InputError("with_normal_frame: frame is not orthonormal");
  fp.h = second_fundamental_form(fp, imm, amb, policy);
  return fp;
}

std::vector<Mat> second_fundamental_form(const FramedPoint& fp, const Immersion& imm, const AmbientManifold& amb,
                                         const FdPolicy& policy) {
  const Index n = fp.n();
  const Index d = fp.p.size();

  // derivative of the pushed-forward coordinate frame: hess[a * n + b] = d_a d_b f
  std::vector<Vec> hess(static_cast<std::size_t>(n * n));
  if (imm.jacobian) {
    std::vector<Mat> djac;
    for (Index a = 0; a < n; ++a) djac.push_back(fd_derivative(imm.jacobian, fp.u, a, 1, policy));
    for (Index a = 0; a < n; ++a)
      for (Index b = a; b < n; ++b) hess[a * n + b] = hess[b * n + a] = 0.5 * (djac[a].col(b) + djac[b].col(a));
  } else {
    const FdPolicy wide = policy.scaled(kSecondDerivativeStepScale);
    for (Index a = 0; a < n; ++a)
      for (Index b = a; b < n; ++b) hess[a * n + b] = hess[b * n + a] = fd_mixed_second(imm.map, fp.u, a, b, wide);
  }

  const Tensor gamma = christoffels_at(amb, fp.p, CurvatureSource::Automatic, policy);
  const Mat gn = fp.metric * fp.normal;  // columns: g e_r

  std::vector<Mat> coord(static_cast<std::size_t>(fp.codim()), Mat::Zero(n, n));
  for (Index a = 0; a < n; ++a)
    for (Index b = a; b < n; ++b) {
      Vec v = hess[a * n + b];
      const Vec xa = fp.jacobian.col(a), xb = fp.jacobian.col(b);
      for (Index k = 0; k < d; ++k) {
        double acc = 0.0;
        for (Index i = 0; i < d; ++i) {
          if (xa[i] == 0.0) continue;
          for (Index j = 0; j < d; ++j) acc += gamma(k, i, j) * xa[i] * xb[j];
        }
        v[k] += acc;
      }
      for (Index r = 0; r < fp.codim(); ++r) coord[r](a, b) = coord[r](b, a) = gn.col(r).dot(v);
    }

  std::vector<Mat> h;
  h.reserve(coord.size());
  for (const auto& c : coord) h.emplace_back(fp.chart_coeffs.transpose() * c * fp.chart_coeffs);
  return h;
}

Mat shape_operator(const FramedPoint& fp, Index r) {
  if (r < 0 || r >= fp.codim()) {
    std::ostringstream os;
    os << "shape_operator: normal index " << r << " out of range [0, " << fp.codim() << ")";
    throw DimensionError(os.str());
  }
  return fp.h[static_cast<std::size_t>(r)];
}

MeanCurvature mean_curvature(const FramedPoint& fp) {
  MeanCurvature mc;
  mc.vector = Vec::Zero(fp.codim());
  for (Index r = 0; r < fp.codim(); ++r) mc.vector[r] = fp.h[r].trace() / static_cast<double>(fp.n());
  mc.norm_sq = mc.vector.squaredNorm();
  return mc;
}

double h_norm_sq(const FramedPoint& fp) {
  double acc = 0.0;
  for (const auto& hr : fp.h) acc += hr.squaredNorm();
  return acc;
}

Tensor intrinsic_riemann(const FramedPoint& fp, const Immersion& imm, const AmbientManifold& amb,
                         const FdPolicy& policy) {
  const MatrixField induced = [&](const Vec& u) {
    const Mat jac = jacobian_at(imm, u, policy);
    return Mat(jac.transpose() * amb.metric_at(imm.map(u)) * jac);
  };
  const CurvatureBundle chart = curvature_from_metric(induced, fp.u, policy);
  return change_basis4(chart.riemann, fp.chart_coeffs);
}

Tensor ambient_riemann_in_frame(const FramedPoint& fp, const CurvatureBundle& bundle) {
  return change_basis4(bundle.riemann, fp.full_frame());
}

double gauss_residual(const FramedPoint& fp, const Tensor& intrinsic_frame, const Tensor& ambient_frame, Index x,
                      Index y, Index z, Index w) {
  double extrinsic = 0.0;
  for (const auto& hr : fp.h) extrinsic += hr(x, w) * hr(y, z) - hr(x, z) * hr(y, w);
  return std::abs(intrinsic_frame(x, y, z, w) - ambient_frame(x, y, z, w) - extrinsic);
}

double max_gauss_residual(const FramedPoint& fp, const Tensor& intrinsic_frame, const Tensor& ambient_frame) {
  const Index n = fp.n();
  double worst = 0.0;
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y)
      for (Index z = 0; z < n; ++z)
        for (Index w = 0; w < n; ++w)
          worst = std::max(worst, gauss_residual(fp, intrinsic_frame, ambient_frame, x, y, z, w));
  return worst;
}

}  // namespace bkg
