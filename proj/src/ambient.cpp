#include "bkg/ambient.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include "bkg/errors.hpp"

namespace bkg {

namespace {

using cplx = std::complex<double>;

Tensor zero_christoffels(Index d) { return Tensor({d, d, d}); }

CurvatureBundle flat_bundle(const Vec& p) {
  const Index d = p.size();
  return {Tensor({d, d, d, d}), Mat::Zero(d, d), 0.0, p};
}

std::vector<cplx> to_complex(const Vec& x) {
  std::vector<cplx> z(static_cast<std::size_t>(x.size() / 2));
  for (std::size_t k = 0; k < z.size(); ++k) z[k] = {x[2 * k], x[2 * k + 1]};
  return z;
}

// Real metric of the Hermitian form h_{i jbar}: g(X,Y) = Re sum h_ij xi_i conj(eta_j).
Mat real_metric(const Eigen::MatrixXcd& h) {
  const Index m = h.rows();
  Mat g(2 * m, 2 * m);
  for (Index a = 0; a < m; ++a)
    for (Index b = 0; b < m; ++b) {
      g(2 * a, 2 * b) = h(a, b).real();
      g(2 * a, 2 * b + 1) = h(a, b).imag();
      g(2 * a + 1, 2 * b) = -h(a, b).imag();
      g(2 * a + 1, 2 * b + 1) = h(a, b).real();
    }
  return g;
}

// Chart factor 1 + s|z|^2 with s = c/4; the chart ends where it vanishes.
double chart_weight(const std::vector<cplx>& z, double s) {
  double r2 = 0.0;
  for (const auto& zk : z) r2 += std::norm(zk);
  return 1.0 + s * r2;
}

Mat space_form_metric(const Vec& x, double c) {
  const double s = c / 4.0;
  const auto z = to_complex(x);
  const double w = chart_weight(z, s);
  if (!(w > 0.0)) {
    std::ostringstream os;
    os << "complex space form: point outside the chart (1 + c|z|^2/4 = " << w << ")";
    throw DegeneracyError(os.str());
  }
  const Index m = static_cast<Index>(z.size());
  Eigen::MatrixXcd h(m, m);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j)
      h(i, j) = (i == j ? 1.0 / w : 0.0) - s * std::conj(z[i]) * z[j] / (w * w);
  return real_metric(h);
}

// Gamma^k_ij = -s (delta_ik zbar_j + delta_jk zbar_i) / w on holomorphic indices; the real
// symbols follow from nabla_X Y^{(1,0)} = dY(X) + Gamma(xi, eta).
Tensor space_form_christoffels(const Vec& x, double c) {
  const double s = c / 4.0;
  const auto z = to_complex(x);
  const double w = chart_weight(z, s);
  const Index m = static_cast<Index>(z.size());
  const Index d = 2 * m;
  const auto unit = [](Index a) {
    return std::pair<Index, cplx>{a / 2, a % 2 == 0 ? cplx(1.0, 0.0) : cplx(0.0, 1.0)};
  };
  Tensor gamma({d, d, d});
  for (Index a = 0; a < d; ++a)
    for (Index b = 0; b < d; ++b) {
      const auto [ia, xa] = unit(a);
      const auto [ib, xb] = unit(b);
      // v = -s [xi (zbar . eta) + eta (zbar . xi)] / w
      std::vector<cplx> v(static_cast<std::size_t>(m), 0.0);
      v[ia] += -s * xa * std::conj(z[ib]) * xb / w;
      v[ib] += -s * xb * std::conj(z[ia]) * xa / w;
      for (Index k = 0; k < m; ++k) {
        gamma(2 * k, a, b) = v[k].real();
        gamma(2 * k + 1, a, b) = v[k].imag();
      }
    }
  return gamma;
}

std::string format_curvature(double c) {
  std::ostringstream os;
  os << c;
  return os.str();
}

}  // namespace

AmbientManifold flat_ambient(Index m) {
  if (m < 1) throw InputError("flat_ambient: complex dimension must be positive");
  AmbientManifold amb;
  amb.complex_dim = m;
  amb.kind = AmbientKind::Flat;
  amb.metric_at = [d = 2 * m](const Vec&) { return Mat(Mat::Identity(d, d)); };
  amb.j_at = [m](const Vec&) { return standard_complex_structure(m); };
  amb.christoffel_oracle = [d = 2 * m](const Vec&) { return zero_christoffels(d); };
  amb.curvature_oracle = flat_bundle;
  amb.label = "flat(m=" + std::to_string(m) + ")";
  return amb;
}

AmbientManifold complex_space_form(Index m, double c) {
  if (m < 1) throw InputError("complex_space_form: complex dimension must be positive");
  if (c == 0.0) {
    auto amb = flat_ambient(m);
    amb.kind = AmbientKind::ComplexSpaceForm;
    amb.label = "space_form(m=" + std::to_string(m) + ",c=0)";
    return amb;
  }
  AmbientManifold amb;
  amb.complex_dim = m;
  amb.kind = AmbientKind::ComplexSpaceForm;
  amb.c = c;
  amb.metric_at = [c](const Vec& x) { return space_form_metric(x, c); };
  amb.j_at = [m](const Vec&) { return standard_complex_structure(m); };
  amb.christoffel_oracle = [c](const Vec& x) { return space_form_christoffels(x, c); };
  amb.curvature_oracle = [c, m](const Vec& x) {
    const Mat g = space_form_metric(x, c);
    CurvatureBundle b;
    b.riemann = space_form_curvature(g, standard_complex_structure(m), c);
    b.ricci = ricci_from_riemann(b.riemann, g.inverse());
    b.scalar = (g.inverse() * b.ricci).trace();
    b.at_point = x;
    return b;
  };
  amb.label = "space_form(m=" + std::to_string(m) + ",c=" + format_curvature(c) + ")";
  return amb;
}

AmbientManifold product_of_curves(std::vector<double> curvatures) {
  if (curvatures.empty()) throw InputError("product_of_curves: at least one factor required");
  const Index m = static_cast<Index>(curvatures.size());
  AmbientManifold amb;
  amb.complex_dim = m;
  amb.kind = AmbientKind::Custom;
  amb.metric_at = [curvatures](const Vec& x) {
    const Index m = static_cast<Index>(curvatures.size());
    Mat g = Mat::Zero(2 * m, 2 * m);
    for (Index k = 0; k < m; ++k) {
      const double w = 1.0 + curvatures[k] / 4.0 * (x[2 * k] * x[2 * k] + x[2 * k + 1] * x[2 * k + 1]);
      if (!(w > 0.0)) throw DegeneracyError("product_of_curves: point outside the chart of a hyperbolic factor");
      g(2 * k, 2 * k) = g(2 * k + 1, 2 * k + 1) = 1.0 / (w * w);
    }
    return g;
  };
  amb.j_at = [m](const Vec&) { return standard_complex_structure(m); };
  std::ostringstream label;
  label << "product(";
  for (std::size_t k = 0; k < curvatures.size(); ++k) label << (k ? "," : "") << curvatures[k];
  label << ")";
  amb.label = label.str();
  return amb;
}

AmbientManifold with_perturbed_j(AmbientManifold amb, double eps, Index row, Index col) {
  amb.j_at = [base = amb.j_at, eps, row, col](const Vec& x) {
    Mat j = base(x);
    j(row, col) += eps;
    return j;
  };
  std::ostringstream os;
  os << amb.label << "+J(" << row << "," << col << ")" << (eps >= 0 ? "+" : "") << eps;
  amb.label = os.str();
  amb.kind = AmbientKind::Custom;
  amb.curvature_oracle = nullptr;
  return amb;
}

Tensor christoffels_from_metric(const MatrixField& metric, const Vec& p, const FdPolicy& policy) {
  const Mat g = metric(p);
  require_spd(g, "christoffels");
  const Mat ginv = g.inverse();
  const Index d = p.size();
  std::vector<Mat> dg;
  dg.reserve(static_cast<std::size_t>(d));
  for (Index i = 0; i < d; ++i) dg.push_back(fd_derivative(metric, p, i, 1, policy));

  Tensor gamma({d, d, d});
  for (Index i = 0; i < d; ++i)
    for (Index j = i; j < d; ++j) {
      Vec lowered(d);
      for (Index l = 0; l < d; ++l) lowered[l] = 0.5 * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
      const Vec raised = ginv * lowered;
      for (Index k = 0; k < d; ++k) gamma(k, i, j) = gamma(k, j, i) = raised[k];
    }
  return gamma;
}

Mat ricci_from_riemann(const Tensor& riemann, const Mat& ginv) {
  const Index d = riemann.dim(0);
  Mat ric = Mat::Zero(d, d);
  for (Index b = 0; b < d; ++b)
    for (Index c = 0; c < d; ++c) {
      double acc = 0.0;
      for (Index a = 0; a < d; ++a)
        for (Index e = 0; e < d; ++e) acc += ginv(a, e) * riemann(a, b, c, e);
      ric(b, c) = acc;
    }
  return ric;
}

CurvatureBundle curvature_from_metric(const MatrixField& metric, const Vec& p, const FdPolicy& policy) {
  const Index d = p.size();
  const Mat g = metric(p);
  require_spd(g, "curvature");
  const Mat ginv = g.inverse();
  const Tensor gamma = christoffels_from_metric(metric, p, policy);

  // second partials d_a d_b g, symmetric in (a, b)
  const FdPolicy wide = policy.scaled(kSecondDerivativeStepScale);
  std::vector<Mat> d2(static_cast<std::size_t>(d * d));
  for (Index a = 0; a < d; ++a)
    for (Index b = a; b < d; ++b) d2[a * d + b] = d2[b * d + a] = fd_mixed_second(metric, p, a, b, wide);
  const auto dd = [&](Index x, Index y, Index i, Index j) { return d2[x * d + y](i, j); };

  // lowered symbols Gamma_{mu, ij} = g_{mu k} Gamma^k_ij
  Tensor low({d, d, d});
  for (Index mu = 0; mu < d; ++mu)
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j) {
        double acc = 0.0;
        for (Index k = 0; k < d; ++k) acc += g(mu, k) * gamma(k, i, j);
        low(mu, i, j) = acc;
      }

  Tensor r({d, d, d, d});
  for (Index a = 0; a < d; ++a)
    for (Index b = 0; b < d; ++b)
      for (Index c = 0; c < d; ++c)
        for (Index e = 0; e < d; ++e) {
          double v = 0.5 * (dd(c, a, e, b) + dd(e, b, c, a) - dd(c, b, e, a) - dd(e, a, c, b));
          for (Index mu = 0; mu < d; ++mu) v += low(mu, c, a) * gamma(mu, e, b) - low(mu, c, b) * gamma(mu, e, a);
          r(a, b, c, e) = v;
        }

  CurvatureBundle out;
  out.riemann = std::move(r);
  out.ricci = ricci_from_riemann(out.riemann, ginv);
  out.scalar = (ginv * out.ricci).trace();
  out.at_point = p;
  return out;
}

Tensor christoffels_at(const AmbientManifold& amb, const Vec& p, CurvatureSource source, const FdPolicy& policy) {
  if (p.size() != amb.real_dim()) throw DimensionError("christoffels_at: point dimension does not match ambient");
  require_spd(amb.metric_at(p), "christoffels_at");
  if (source == CurvatureSource::Automatic && amb.christoffel_oracle) return amb.christoffel_oracle(p);
  return christoffels_from_metric(amb.metric_at, p, policy);
}

CurvatureBundle riemann_at(const AmbientManifold& amb, const Vec& p, CurvatureSource source,
                           const FdPolicy& policy) {
  if (p.size() != amb.real_dim()) throw DimensionError("riemann_at: point dimension does not match ambient");
  if (source == CurvatureSource::Automatic && amb.curvature_oracle) return amb.curvature_oracle(p);
  return curvature_from_metric(amb.metric_at, p, policy);
}

Tensor space_form_curvature(const Mat& g, const Mat& j, double c) {
  const Index d = g.rows();
  const Mat jg = j.transpose() * g;  // jg(a,b) = g(J d_a, d_b)
  const Mat gj = g * j;              // gj(a,b) = g(d_a, J d_b)
  Tensor r({d, d, d, d});
  const double k = c / 4.0;
  for (Index a = 0; a < d; ++a)
    for (Index b = 0; b < d; ++b)
      for (Index cc = 0; cc < d; ++cc)
        for (Index e = 0; e < d; ++e)
          r(a, b, cc, e) = k * (g(b, cc) * g(a, e) - g(a, cc) * g(b, e) + jg(b, cc) * jg(a, e) -
                                jg(a, cc) * jg(b, e) + 2.0 * gj(a, b) * jg(cc, e));
  return r;
}

Mat l_tensor(const Mat& ricci, double rho, const Mat& g, Index m) {
  if (ricci.rows() != g.rows() || ricci.cols() != g.cols()) throw DimensionError("l_tensor: shape mismatch");
  const double dm = static_cast<double>(m);
  return ricci / (2.0 * dm + 4.0) - rho / (2.0 * (2.0 * dm + 2.0) * (2.0 * dm + 4.0)) * g;
}

Mat m_tensor(const Mat& l, const Mat& j) {
  if (l.cols() != j.rows()) throw DimensionError("m_tensor: shape mismatch");
  return -(l * j);
}

LMPair lm_pair(const Mat& ricci, double rho, const Mat& g, const Mat& j, Index m) {
  LMPair lm;
  lm.l = l_tensor(ricci, rho, g, m);
  lm.m = m_tensor(lm.l, j);
  lm.source_ricci = ricci;
  lm.source_scalar = rho;
  return lm;
}

Tensor assemble_bochner_curvature(const LMPair& lm, const Mat& g, const Mat& j) {
  const Index d = g.rows();
  if (lm.l.rows() != d || lm.m.rows() != d || j.rows() != d)
    throw DimensionError("assemble_bochner_curvature: shape mismatch");
  const Mat jg = j.transpose() * g;  // jg(a,b) = g(J d_a, d_b)
  const Mat& L = lm.l;
  const Mat& M = lm.m;
  Tensor r({d, d, d, d});
  for (Index x = 0; x < d; ++x)
    for (Index y = 0; y < d; ++y)
      for (Index z = 0; z < d; ++z)
        for (Index w = 0; w < d; ++w) {
          const double lblock = g(x, w) * L(y, z) - g(y, w) * L(x, z) + g(y, z) * L(x, w) - g(x, z) * L(y, w);
          const double mblock = M(y, z) * jg(x, w) - M(x, z) * jg(y, w) + M(x, w) * jg(y, z) -
                                M(y, w) * jg(x, z) - 2.0 * M(x, y) * jg(z, w) - 2.0 * M(z, w) * jg(x, y);
          r(x, y, z, w) = lblock + mblock;
        }
  return r;
}

KaehlerReport check_kaehler(const AmbientManifold& amb, const Vec& p, const FdPolicy& policy) {
  const Index d = amb.real_dim();
  const Mat g = amb.metric_at(p);
  const Mat j = amb.j_at(p);
  KaehlerReport rep;
  rep.j_squared = (j * j + Mat::Identity(d, d)).cwiseAbs().maxCoeff();
  rep.hermitian = (j.transpose() * g * j - g).cwiseAbs().maxCoeff();

  const Tensor gamma = christoffels_at(amb, p, CurvatureSource::Automatic, policy);
  double worst = 0.0;
  for (Index a = 0; a < d; ++a) {
    const Mat dj = fd_derivative(amb.j_at, p, a, 1, policy);
    Mat ga(d, d);  // ga(b,e) = Gamma^b_{a e}
    for (Index b = 0; b < d; ++b)
      for (Index e = 0; e < d; ++e) ga(b, e) = gamma(b, a, e);
    const Mat nabla = dj + ga * j - j * ga;
    worst = std::max(worst, nabla.cwiseAbs().maxCoeff());
  }
  rep.parallel = worst;
  return rep;
}

double bochner_residual(const CurvatureBundle& bundle, const Mat& g, const Mat& j, Index m) {
  const Tensor assembled = assemble_bochner_curvature(lm_pair(bundle.ricci, bundle.scalar, g, j, m), g, j);
  return (bundle.riemann - assembled).max_abs();
}

double check_bochner_flat(const AmbientManifold& amb, const Vec& p, CurvatureSource source,
                          const FdPolicy& policy) {
  const CurvatureBundle b = riemann_at(amb, p, source, policy);
  return bochner_residual(b, amb.metric_at(p), amb.j_at(p), amb.complex_dim);
}

SymmetryResiduals curvature_symmetries(const Tensor& r) {
  const Index d = r.dim(0);
  SymmetryResiduals s;
  for (Index a = 0; a < d; ++a)
    for (Index b = 0; b < d; ++b)
      for (Index c = 0; c < d; ++c)
        for (Index e = 0; e < d; ++e) {
          const double v = r(a, b, c, e);
          s.first_pair = std::max(s.first_pair, std::abs(v + r(b, a, c, e)));
          s.last_pair = std::max(s.last_pair, std::abs(v + r(a, b, e, c)));
          s.pair_exchange = std::max(s.pair_exchange, std::abs(v - r(c, e, a, b)));
          s.bianchi = std::max(s.bianchi, std::abs(v + r(b, c, a, e) + r(c, a, b, e)));
        }
  return s;
}

double kaehler_identity_residual(const Tensor& r, const Mat& j) {
  const Index d = r.dim(0);
  Tensor rotated({d, d, d, d});
  for (Index a = 0; a < d; ++a)
    for (Index b = 0; b < d; ++b)
      for (Index c = 0; c < d; ++c)
        for (Index e = 0; e < d; ++e) {
          double acc = 0.0;
          for (Index f = 0; f < d; ++f)
            for (Index h = 0; h < d; ++h) acc += r(a, b, f, h) * j(f, c) * j(h, e);
          rotated(a, b, c, e) = acc;
        }
  return (r - rotated).max_abs();
}

}  // namespace bkg
