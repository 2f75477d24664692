#include "spintractor/spinor.hpp"

#include <cmath>

namespace spintractor {

namespace {

std::size_t u(int i) { return static_cast<std::size_t>(i); }

}  // namespace

void require_gauge(const MetricPatch& patch, const SpinorField& field) {
  if (field.gauge != patch.gauge()) throw GaugeMismatch("spinor field is expressed in a different frame gauge");
  if (!field.value || !field.jacobian) throw MissingDerivatives("spinor field lacks value or jacobian");
}

SpinorField constant_field(const MetricPatch& patch, const Spinor& s) {
  const int n = patch.dim();
  SpinorField f;
  f.value = [s](const Vec&) { return s; };
  f.jacobian = [s, n](const Vec&) { return CMat(CMat::Zero(s.size(), n)); };
  f.hessian = [s, n](const Vec&) { return std::vector<CMat>(u(n), CMat::Zero(s.size(), n)); };
  f.gauge = patch.gauge();
  return f;
}

SpinorField position_clifford_field(const MetricPatch& patch, const CliffordRep& rep, const Spinor& s) {
  if (!patch.constant_frame() || !make_frame(patch).at(patch.domain().center()).isIdentity(1e-14))
    throw DomainError("position-Clifford fields need a flat Cartesian chart");
  if (s.size() != rep.spinor_dim()) throw DimensionMismatch("spinor length mismatch");
  const int n = patch.dim();
  CMat cols(s.size(), n);
  for (int a = 0; a < n; ++a) cols.col(a) = rep.gamma(a) * s;
  SpinorField f;
  f.value = [cols](const Vec& x) { return Spinor(cols * x.cast<Complex>()); };
  f.jacobian = [cols](const Vec&) { return cols; };
  f.hessian = [cols, n](const Vec&) { return std::vector<CMat>(u(n), CMat::Zero(cols.rows(), n)); };
  f.gauge = patch.gauge();
  return f;
}

SpinorField weighted_field(const MetricPatch& target, const SpinorField& field, const RescaleFunction& f,
                           double weight) {
  SpinorField out;
  out.value = [field, f, weight](const Vec& x) { return Spinor(std::exp(weight * f.value(x)) * field.value(x)); };
  out.jacobian = [field, f, weight](const Vec& x) {
    const double s = std::exp(weight * f.value(x));
    const Vec df = f.gradient(x);
    return CMat(s * (field.jacobian(x) + weight * field.value(x) * df.transpose().cast<Complex>()));
  };
  if (field.hessian) {
    out.hessian = [field, f, weight](const Vec& x) {
      const double s = std::exp(weight * f.value(x));
      const Vec df = f.gradient(x);
      const Mat d2f = f.hessian(x);
      const Spinor phi = field.value(x);
      const CMat jac = field.jacobian(x);
      std::vector<CMat> h = field.hessian(x);
      const auto n = static_cast<int>(df.size());
      for (int mu = 0; mu < n; ++mu)
        for (int nu = 0; nu < n; ++nu)
          h[u(mu)].col(nu) = s * (h[u(mu)].col(nu) + weight * (jac.col(mu) * df(nu) + jac.col(nu) * df(mu)) +
                                  (weight * d2f(mu, nu) + weight * weight * df(mu) * df(nu)) * phi);
      return h;
    };
  }
  out.gauge = target.gauge();
  return out;
}

SpinorField scaled_field(const SpinorField& field, Complex c) {
  SpinorField out;
  out.value = [field, c](const Vec& x) { return Spinor(c * field.value(x)); };
  out.jacobian = [field, c](const Vec& x) { return CMat(c * field.jacobian(x)); };
  if (field.hessian)
    out.hessian = [field, c](const Vec& x) {
      auto h = field.hessian(x);
      for (auto& m : h) m *= c;
      return h;
    };
  out.gauge = field.gauge;
  return out;
}

SpinorField sum_field(const SpinorField& a, const SpinorField& b) {
  if (a.gauge != b.gauge) throw GaugeMismatch("cannot add spinor fields from different gauges");
  SpinorField out;
  out.value = [a, b](const Vec& x) { return Spinor(a.value(x) + b.value(x)); };
  out.jacobian = [a, b](const Vec& x) { return CMat(a.jacobian(x) + b.jacobian(x)); };
  if (a.hessian && b.hessian)
    out.hessian = [a, b](const Vec& x) {
      auto h = a.hessian(x);
      const auto hb = b.hessian(x);
      for (std::size_t i = 0; i < h.size(); ++i) h[i] += hb[i];
      return h;
    };
  out.gauge = a.gauge;
  return out;
}

SpinorField gradient_clifford_field(const MetricPatch& patch, const CliffordRep& rep, const RescaleFunction& f,
                                    const SpinorField& field) {
  if (!patch.constant_frame()) throw DomainError("gradient-Clifford fields need a constant frame");
  require_gauge(patch, field);
  const Mat e = make_frame(patch).at(patch.domain().center());
  const Vec eps = rep.signature().flat_diagonal();
  const std::vector<CMat> gammas = rep.gammas();
  auto action = [gammas](const Vec& c) {
    CMat m = CMat::Zero(gammas.front().rows(), gammas.front().cols());
    for (std::size_t a = 0; a < gammas.size(); ++a) m += c(static_cast<Eigen::Index>(a)) * gammas[a];
    return m;
  };
  SpinorField out;
  out.value = [=](const Vec& x) {
    const Vec c = eps.cwiseProduct(e.transpose() * f.gradient(x));
    return Spinor(action(c) * field.value(x));
  };
  out.jacobian = [=](const Vec& x) {
    const Vec c = eps.cwiseProduct(e.transpose() * f.gradient(x));
    const Mat dc = eps.asDiagonal() * e.transpose() * f.hessian(x);  // dc(a, ν) = ∂_ν c_a
    const CMat m = action(c);
    const Spinor phi = field.value(x);
    CMat jac = m * field.jacobian(x);
    for (Eigen::Index nu = 0; nu < x.size(); ++nu) jac.col(nu) += action(dc.col(nu)) * phi;
    return jac;
  };
  out.gauge = field.gauge;
  return out;
}

SpinorField rescaled_dirac_field(const MetricPatch& base, const MetricPatch& rescaled, const CliffordRep& rep,
                                 const SpinorField& field, const SpinorField& dirac_field, const RescaleFunction& f) {
  require_gauge(base, field);
  require_gauge(base, dirac_field);
  const double half_n = 0.5 * base.dim();
  const SpinorField inner = sum_field(dirac_field, scaled_field(gradient_clifford_field(base, rep, f, field), half_n));
  return weighted_field(rescaled, inner, f, -0.5);
}

CMat spin_connection_matrix(const CliffordRep& rep, const ConnectionAt& conn, const Vec& frame_vector) {
  const int n = rep.dim();
  const auto& sig = rep.signature();
  Mat omega = Mat::Zero(n, n);  // ω_jk(X)
  for (int i = 0; i < n; ++i)
    if (frame_vector(i) != 0.0) omega += frame_vector(i) * conn.frame_connection[u(i)];
  CMat out = CMat::Zero(rep.spinor_dim(), rep.spinor_dim());
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      const double w = 0.5 * sig.eps(j) * sig.eps(k) * omega(j, k);
      if (w != 0.0) out += w * (rep.gamma(j) * rep.gamma(k));
    }
  return out;
}

std::vector<Spinor> spinor_derivatives(const MetricPatch& patch, const CliffordRep& rep, const SpinorField& field,
                                       const Vec& x) {
  require_gauge(patch, field);
  const int n = patch.dim();
  if (rep.dim() != n) throw DimensionMismatch("Clifford representation does not match patch dimension");
  const ConnectionAt conn = christoffels(patch, x);
  const Spinor phi = field.value(x);
  const CMat jac = field.jacobian(x);
  std::vector<Spinor> out;
  out.reserve(u(n));
  for (int i = 0; i < n; ++i) {
    Spinor d = jac * conn.frame.col(i).cast<Complex>();
    d += spin_connection_matrix(rep, conn, Vec::Unit(n, i)) * phi;
    out.push_back(std::move(d));
  }
  return out;
}

Spinor spinor_derivative(const MetricPatch& patch, const CliffordRep& rep, const SpinorField& field, const Vec& x,
                         int direction) {
  if (direction < 0 || direction >= patch.dim()) throw DomainError("frame direction out of range");
  return spinor_derivatives(patch, rep, field, x)[u(direction)];
}

namespace {

Spinor dirac_from(const CliffordRep& rep, const std::vector<Spinor>& nabla) {
  Spinor d = Spinor::Zero(rep.spinor_dim());
  for (int i = 0; i < rep.dim(); ++i) d += rep.signature().eps(i) * (rep.gamma(i) * nabla[u(i)]);
  return d;
}

}  // namespace

Spinor dirac(const MetricPatch& patch, const CliffordRep& rep, const SpinorField& field, const Vec& x) {
  return dirac_from(rep, spinor_derivatives(patch, rep, field, x));
}

TwistorResidualReport twistor_residual(const MetricPatch& patch, const CliffordRep& rep, const SpinorField& field,
                                       const Vec& x) {
  const auto nabla = spinor_derivatives(patch, rep, field, x);
  TwistorResidualReport r;
  r.point = x;
  r.dirac_value = dirac_from(rep, nabla);
  const double inv_n = 1.0 / patch.dim();
  for (int i = 0; i < patch.dim(); ++i)
    r.residual_norm = std::max(r.residual_norm, (nabla[u(i)] + inv_n * (rep.gamma(i) * r.dirac_value)).norm());
  return r;
}

CovarianceReport covariance_check(const MetricPatch& patch, const CliffordRep& rep, const SpinorField& field,
                                  const RescaleFunction& f, const std::vector<Vec>& points, double tol) {
  CovarianceReport rep_out;
  rep_out.points = points.size();
  for (const auto& x : points) {
    const double r = twistor_residual(patch, rep, field, x).residual_norm;
    rep_out.max_base_residual = std::max(rep_out.max_base_residual, r);
  }
  if (rep_out.max_base_residual > tol) throw NotASolution("field does not solve the twistor equation on the base metric");
  const MetricPatch scaled = rescale(patch, f);
  const SpinorField scaled_field_ = weighted_field(scaled, field, f, 0.5);
  for (const auto& x : points)
    rep_out.max_rescaled_residual =
        std::max(rep_out.max_rescaled_residual, twistor_residual(scaled, rep, scaled_field_, x).residual_norm);
  return rep_out;
}

double dphi_schouten_check(const MetricPatch& patch, const CliffordRep& rep, const SpinorField& field,
                           const SpinorField& dirac_field, const Vec& x) {
  require_gauge(patch, field);
  require_gauge(patch, dirac_field);
  const auto nabla_d = spinor_derivatives(patch, rep, dirac_field, x);
  const SchoutenAt sch = riemann_ricci_scal(patch, x);
  const Spinor phi = field.value(x);
  const double half_n = 0.5 * patch.dim();
  double worst = 0.0;
  for (int i = 0; i < patch.dim(); ++i) {
    const Spinor p_phi = rep.vector_action(sch.schouten.col(i)) * phi;
    worst = std::max(worst, (nabla_d[u(i)] - half_n * p_phi).norm());
  }
  return worst;
}

KnownSolution flat_solution(const MetricPatch& patch, const CliffordRep& rep, const Spinor& s, const Spinor& t) {
  KnownSolution sol;
  sol.phi = sum_field(position_clifford_field(patch, rep, s), constant_field(patch, t));
  sol.dirac = constant_field(patch, Spinor(-static_cast<double>(patch.dim()) * s));
  return sol;
}

KnownSolution parallel_solution(const MetricPatch& patch, const CliffordRep& rep, const Spinor& s) {
  if (s.size() != rep.spinor_dim()) throw DimensionMismatch("spinor length mismatch");
  return {constant_field(patch, s), constant_field(patch, Spinor::Zero(s.size()))};
}

KnownSolution rescaled_solution(const MetricPatch& base, const MetricPatch& rescaled, const CliffordRep& rep,
                                const KnownSolution& sol, const RescaleFunction& f) {
  return {weighted_field(rescaled, sol.phi, f, 0.5), rescaled_dirac_field(base, rescaled, rep, sol.phi, sol.dirac, f)};
}

Spinor null_kernel_spinor(const CliffordRep& rep, const Spinor& t) {
  Vec k = Vec::Zero(rep.dim());
  k(0) = k(1) = 1.0;
  return rep.vector_action(k) * t;
}

}  // namespace spintractor
