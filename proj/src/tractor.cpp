#include "spintractor/tractor.hpp"

#include <cmath>
#include <limits>

#include <Eigen/SVD>

namespace spintractor {

namespace {

const double kSqrt2 = std::sqrt(2.0);

std::size_t u(int i) { return static_cast<std::size_t>(i); }

Vec embed(const Vec& frame_part) {
  const auto n = frame_part.size();
  Vec out = Vec::Zero(n + 2);
  out.segment(1, n) = frame_part;
  return out;
}

// α_χ(e_i) = −Re⟨e_i·χ, χ⟩
Vec current_covector(const CliffordRep& rep, const Spinor& chi) {
  Vec a(rep.dim());
  for (int i = 0; i < rep.dim(); ++i) a(i) = -rep.inner(rep.gamma(i) * chi, chi).real();
  return a;
}

}  // namespace

Vec Tractor::coords() const {
  Vec c(v.size() + 2);
  c << a, v, b;
  return c;
}

Tractor Tractor::from_coords(const Vec& c) {
  const auto n = c.size() - 2;
  return {c(0), c.segment(1, n), c(n + 1)};
}

Mat tractor_metric(int n) {
  Mat g = Mat::Zero(n + 2, n + 2);
  g(0, n + 1) = g(n + 1, 0) = 1.0;
  g.block(1, 1, n, n) = Signature::lorentzian(n).flat_metric();
  return g;
}

double tractor_inner(const Tractor& x, const Tractor& y) {
  if (x.v.size() != y.v.size()) throw DimensionMismatch("tractor dimension mismatch");
  return x.coords().dot(tractor_metric(static_cast<int>(x.v.size())) * y.coords());
}

Spinor Twistor::stacked() const {
  Spinor s(phi.size() + psi.size());
  s << phi, psi;
  return s;
}

Complex twistor_product(const CliffordRep& rep, const Twistor& a, const Twistor& b) {
  return Complex(0.0, 1.0 / kSqrt2) * (rep.inner(a.phi, b.psi) - rep.inner(a.psi, b.phi));
}

CMat twistor_form(const CliffordRep& rep) {
  const int d = rep.spinor_dim();
  const Complex c(0.0, 1.0 / kSqrt2);
  CMat w = CMat::Zero(2 * d, 2 * d);
  w.topRightCorner(d, d) = -c * rep.hermitian_form();
  w.bottomLeftCorner(d, d) = c * rep.hermitian_form();
  return w;
}

std::vector<CMat> tractor_generators(const CliffordRep& rep) {
  const int n = rep.dim();
  const int d = rep.spinor_dim();
  std::vector<CMat> t(u(n + 2), CMat::Zero(2 * d, 2 * d));
  t[0].topRightCorner(d, d) = -kSqrt2 * CMat::Identity(d, d);
  for (int i = 0; i < n; ++i) {
    t[u(i + 1)].topLeftCorner(d, d) = rep.gamma(i);
    t[u(i + 1)].bottomRightCorner(d, d) = -rep.gamma(i);
  }
  t[u(n + 1)].bottomLeftCorner(d, d) = kSqrt2 * CMat::Identity(d, d);
  return t;
}

CMat tractor_twoform_action(const CliffordRep& rep, const Mat& b_upper) {
  const int m = rep.dim() + 2;
  if (b_upper.rows() != m || b_upper.cols() != m) throw DimensionMismatch("tractor two-form size mismatch");
  if ((b_upper + b_upper.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + b_upper.cwiseAbs().maxCoeff()))
    throw ConventionViolation("tractor two-form is not antisymmetric");
  const auto t = tractor_generators(rep);
  CMat out = CMat::Zero(t[0].rows(), t[0].cols());
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (b_upper(i, j) != 0.0) out += 0.5 * b_upper(i, j) * (t[u(i)] * t[u(j)] - t[u(j)] * t[u(i)]);
  return out;
}

Mat orthonormal_tractor_basis(int n) {
  Mat f = Mat::Zero(n + 2, n + 2);
  f(0, 0) = 1.0 / kSqrt2;
  f(n + 1, 0) = -1.0 / kSqrt2;
  f.block(1, 1, n, n).setIdentity();
  f(0, n + 1) = 1.0 / kSqrt2;
  f(n + 1, n + 1) = 1.0 / kSqrt2;
  return f;
}

CliffordRep twistor_rep(const CliffordRep& base) {
  if (base.signature().timelike != 1) throw DomainError("twistor module needs a Lorentzian base");
  const int n = base.dim();
  const auto t = tractor_generators(base);
  const Mat f = orthonormal_tractor_basis(n);
  std::vector<CMat> gammas;
  for (int a = 0; a < n + 2; ++a) {
    CMat g = CMat::Zero(t[0].rows(), t[0].cols());
    for (int i = 0; i < n + 2; ++i)
      if (f(i, a) != 0.0) g += f(i, a) * t[u(i)];
    gammas.push_back(std::move(g));
  }
  return CliffordRep(Signature::tractor(n), std::move(gammas), twistor_form(base), Complex(0.0, 1.0 / kSqrt2));
}

TwistorField lift_to_twistor(const MetricPatch& patch, const CliffordRep& rep, const KnownSolution& sol, double tol) {
  require_gauge(patch, sol.phi);
  require_gauge(patch, sol.dirac);
  const Vec c = patch.domain().center();
  const auto r = twistor_residual(patch, rep, sol.phi, c);
  if (r.residual_norm > tol) throw NotASolution("spinor does not solve the twistor equation");
  const Spinor d = sol.dirac.value(c);
  if ((d - r.dirac_value).norm() > tol * (1.0 + d.norm())) throw NotASolution("supplied Dirac field disagrees with Dφ");
  return {sol.phi, scaled_field(sol.dirac, kSqrt2 / patch.dim())};
}

ParallelTwistorResidual parallel_twistor_residual(const MetricPatch& patch, const CliffordRep& rep,
                                                  const TwistorField& tw, const Vec& x) {
  const auto dphi = spinor_derivatives(patch, rep, tw.phi, x);
  const auto dpsi = spinor_derivatives(patch, rep, tw.psi, x);
  const Spinor phi = tw.phi.value(x);
  const Spinor psi = tw.psi.value(x);
  const SchoutenAt sch = riemann_ricci_scal(patch, x);
  ParallelTwistorResidual r;
  for (int i = 0; i < patch.dim(); ++i) {
    r.penrose = std::max(r.penrose, (dphi[u(i)] + rep.gamma(i) * psi / kSqrt2).norm());
    r.schouten = std::max(r.schouten, (dpsi[u(i)] - rep.vector_action(sch.schouten.col(i)) * phi / kSqrt2).norm());
  }
  return r;
}

Mat TractorTwoForm::fiber() const {
  const int n = dim();
  const Vec theta_plus = Vec::Unit(n + 2, n + 1);  // s_-♭
  const Vec theta_minus = Vec::Unit(n + 2, 0);     // s_+♭
  Mat a = wedge(theta_plus, embed(alpha_minus)) + wedge(theta_minus, embed(alpha_plus)) +
          alpha_mp * wedge(theta_plus, theta_minus);
  a.block(1, 1, n, n) += 2.0 * alpha_0;
  return a;
}

TractorTwoForm twistor_square(const CliffordRep& rep, const Twistor& tw) {
  const int n = rep.dim();
  TractorTwoForm tf;
  tf.alpha_minus = current_covector(rep, tw.phi);
  tf.alpha_plus = -current_covector(rep, tw.psi);
  tf.alpha_mp = kSqrt2 * rep.inner(tw.phi, tw.psi).real();
  tf.alpha_0 = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = rep.inner(rep.gamma(i) * (rep.gamma(j) * tw.phi), tw.psi).real() / kSqrt2;
      tf.alpha_0(i, j) = v;
      tf.alpha_0(j, i) = -v;
    }
  return tf;
}

TractorTwoForm assemble_two_form(const MetricPatch& patch, const CliffordRep& rep, const KnownSolution& sol,
                                 const Vec& x) {
  require_gauge(patch, sol.phi);
  require_gauge(patch, sol.dirac);
  return twistor_square(rep, {sol.phi.value(x), Spinor(kSqrt2 / patch.dim() * sol.dirac.value(x))});
}

double tractor_pairing(const Mat& a_lower, const Mat& b_upper) { return 0.5 * a_lower.cwiseProduct(b_upper).sum(); }

double defining_relation_defect(const CliffordRep& rep, const Twistor& tw, const Mat& b_upper) {
  const Spinor s = tw.stacked();
  const Complex rhs = Complex(0.0, -1.0) * s.dot(twistor_form(rep) * (tractor_twoform_action(rep, b_upper) * s));
  return std::abs(Complex(tractor_pairing(twistor_square(rep, tw).fiber(), b_upper)) - rhs);
}

OneFormField current_one_form(const MetricPatch& patch, const CliffordRep& rep, const SpinorField& field) {
  require_gauge(patch, field);
  const int n = patch.dim();
  const Vec eps = rep.signature().flat_diagonal();
  const FrameField frame = make_frame(patch);
  const std::vector<CMat> gammas = rep.gammas();
  const CMat h = rep.hermitian_form();
  // ⟨γ_i a, b⟩ = b^H H γ_i a
  auto pair = [gammas, h](int i, const Spinor& a, const Spinor& b) { return b.dot(h * (gammas[u(i)] * a)); };
  auto covector = [=](const Spinor& phi) {
    Vec a(n);
    for (int i = 0; i < n; ++i) a(i) = -pair(i, phi, phi).real();
    return a;
  };
  OneFormField out;
  out.value = [=](const Vec& x) {
    return Vec(patch.g(x) * frame.at(x) * eps.cwiseProduct(covector(field.value(x))));
  };
  out.jacobian = [=](const Vec& x) {
    const MetricJet mj = patch.jet(x);
    const FrameJet fj = frame.jet(x);
    const Spinor phi = field.value(x);
    const CMat jac = field.jacobian(x);
    const Vec v = eps.cwiseProduct(covector(phi));
    Mat out_j(n, n);
    for (int nu = 0; nu < n; ++nu) {
      Vec da(n);
      for (int i = 0; i < n; ++i) da(i) = -(pair(i, jac.col(nu), phi) + pair(i, phi, jac.col(nu))).real();
      out_j.col(nu) = mj.dg[u(nu)] * fj.e * v + mj.g * fj.de[u(nu)] * v + mj.g * fj.e * eps.cwiseProduct(da);
    }
    return out_j;
  };
  if (patch.constant_frame() && field.hessian) {
    out.hessian = [=](const Vec& x) {
      const Mat m = patch.g(x) * frame.at(x);
      const Spinor phi = field.value(x);
      const CMat jac = field.jacobian(x);
      const auto hess = field.hessian(x);
      std::vector<Mat> out_h(u(n), Mat::Zero(n, n));
      for (int nu = 0; nu < n; ++nu)
        for (int la = nu; la < n; ++la) {
          const Spinor& dd = hess[u(nu)].col(la);
          Vec dda(n);
          for (int i = 0; i < n; ++i)
            dda(i) = -(pair(i, dd, phi) + pair(i, jac.col(nu), jac.col(la)) + pair(i, jac.col(la), jac.col(nu)) +
                       pair(i, phi, dd))
                          .real();
          const Vec col = m * eps.cwiseProduct(dda);
          for (int mu = 0; mu < n; ++mu) out_h[u(mu)](nu, la) = out_h[u(mu)](la, nu) = col(mu);
        }
      return out_h;
    };
  }
  return out;
}

double TwoFormCrossCheck::max() const { return std::max({alpha_0, alpha_mp, has_box ? alpha_plus : 0.0}); }

TwoFormCrossCheck cross_check_two_form(const MetricPatch& patch, const CliffordRep& rep, const KnownSolution& sol,
                                       const Vec& x) {
  const int n = patch.dim();
  const TractorTwoForm tf = assemble_two_form(patch, rep, sol, x);
  const OneFormField alpha = current_one_form(patch, rep, sol.phi);
  const Mat e = make_frame(patch).at(x);
  const Mat t = e.transpose() * covariant_derivative(patch, alpha, x) * e;  // t(i, j) = (∇_{e_i} α)(e_j)
  TwoFormCrossCheck r;
  r.alpha_0 = (tf.alpha_0 - 0.25 * (t - t.transpose())).cwiseAbs().maxCoeff();
  double div = 0.0;
  for (int i = 0; i < n; ++i) div += rep.signature().eps(i) * t(i, i);
  r.alpha_mp = std::abs(tf.alpha_mp + div / n);
  if (alpha.hessian) {
    r.has_box = true;
    r.alpha_plus = (tf.alpha_plus - frame_covector(e, box_operator(patch, alpha, x))).cwiseAbs().maxCoeff();
  } else {
    r.alpha_plus = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

double hypersurface_orthogonality_defect(const MetricPatch& patch, const CliffordRep& rep, const SpinorField& field,
                                         const Vec& x) {
  const int n = patch.dim();
  const OneFormField alpha = current_one_form(patch, rep, field);
  const Mat e = make_frame(patch).at(x);
  const Vec a = frame_covector(e, alpha.value(x));
  const Mat t = e.transpose() * covariant_derivative(patch, alpha, x) * e;
  const Mat f = t - t.transpose();
  const double scale = a.cwiseAbs().maxCoeff() * f.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        worst = std::max(worst, std::abs(a(i) * f(j, k) + a(j) * f(k, i) + a(k) * f(i, j)));
  return worst / scale;
}

const char* to_string(FactorType t) {
  switch (t) {
    case FactorType::null_wedge_null: return "null_wedge_null";
    case FactorType::null_wedge_timelike: return "null_wedge_timelike";
    case FactorType::other: return "other";
  }
  return "other";
}

OrbitType wedge_and_simplicity(const Mat& a, double tol) {
  const auto m = a.rows();
  if (a.cols() != m) throw DimensionMismatch("fiber form must be square");
  const double scale = a.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) throw DomainError("orbit type of the zero form is undefined");
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i + 1; j < m; ++j)
      for (Eigen::Index k = j + 1; k < m; ++k)
        for (Eigen::Index l = k + 1; l < m; ++l)
          worst = std::max(worst, std::abs(a(i, j) * a(k, l) - a(i, k) * a(j, l) + a(i, l) * a(j, k)));
  OrbitType o;
  o.simplicity_defect = worst / (scale * scale);
  o.simple = o.simplicity_defect <= tol;
  return o;
}

OrbitType wedge_and_simplicity(const TractorTwoForm& tf, double tol) { return wedge_and_simplicity(tf.fiber(), tol); }

OrbitType classify_orbit(const Mat& a, double tol) {
  OrbitType o = wedge_and_simplicity(a);
  if (!o.simple) throw DomainError("orbit classification needs a simple two-form");
  const int n = static_cast<int>(a.rows()) - 2;
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const Mat p = svd.matrixV().leftCols(2).transpose();
  const Mat gram = p * tractor_metric(n) * p.transpose();
  o.gram_eigenvalues = Eigen::SelfAdjointEigenSolver<Mat>(gram, Eigen::EigenvaluesOnly).eigenvalues();
  const double lo = o.gram_eigenvalues(0);
  const double hi = o.gram_eigenvalues(1);
  if (std::abs(lo) <= tol && std::abs(hi) <= tol)
    o.factor_type = FactorType::null_wedge_null;
  else if (std::abs(hi) <= tol && lo < -tol)
    o.factor_type = FactorType::null_wedge_timelike;
  else
    o.factor_type = FactorType::other;
  return o;
}

OrbitType classify_orbit(const TractorTwoForm& tf, double tol) { return classify_orbit(tf.fiber(), tol); }

}  // namespace spintractor
