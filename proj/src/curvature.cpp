#include "spintractor/curvature.hpp"

#include <cmath>

namespace spintractor {

namespace {

std::size_t u(int i) { return static_cast<std::size_t>(i); }

Mat invert_metric(const Mat& g) {
  Eigen::FullPivLU<Mat> lu(g);
  if (!lu.isInvertible()) throw DegenerateMetric("metric is singular");
  return lu.inverse();
}

}  // namespace

namespace {

// Γ_{l,ij} = ½(∂_i g_jl + ∂_j g_il − ∂_l g_ij), lowered first index.
double lowered(const std::vector<Mat>& dg, int l, int i, int k) {
  return 0.5 * (dg[u(i)](k, l) + dg[u(k)](i, l) - dg[u(l)](i, k));
}

std::vector<Mat> gamma_from(const std::vector<Mat>& dg, const Mat& g_inv) {
  const auto n = static_cast<int>(g_inv.rows());
  std::vector<Mat> gamma(u(n), Mat::Zero(n, n));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int m = i; m < n; ++m) {
        double acc = 0.0;
        for (int l = 0; l < n; ++l) acc += g_inv(k, l) * lowered(dg, l, i, m);
        gamma[u(k)](i, m) = gamma[u(k)](m, i) = acc;
      }
  return gamma;
}

}  // namespace

std::vector<Mat> christoffel_symbols(const MetricPatch& patch, const Vec& x) {
  const MetricJet j = patch.jet(x);
  return gamma_from(j.dg, invert_metric(j.g));
}

ConnectionJet connection_jet(const MetricPatch& patch, const Vec& x) {
  const int n = patch.dim();
  const MetricJet j = patch.jet(x);
  ConnectionJet cj;
  cj.g_inv = invert_metric(j.g);
  cj.gamma = gamma_from(j.dg, cj.g_inv);

  cj.dgamma.assign(u(n), std::vector<Mat>(u(n), Mat::Zero(n, n)));
  for (int p = 0; p < n; ++p) {
    const Mat dginv = -cj.g_inv * j.dg[u(p)] * cj.g_inv;
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int m = 0; m < n; ++m) {
          double acc = 0.0;
          for (int l = 0; l < n; ++l) {
            const double d2 = 0.5 * (j.d2g[u(p)][u(i)](m, l) + j.d2g[u(p)][u(m)](i, l) - j.d2g[u(p)][u(l)](i, m));
            acc += dginv(k, l) * lowered(j.dg, l, i, m) + cj.g_inv(k, l) * d2;
          }
          cj.dgamma[u(p)][u(k)](i, m) = acc;
        }
  }
  return cj;
}

ConnectionAt christoffels(const MetricPatch& patch, const Vec& x) {
  const int n = patch.dim();
  const ConnectionJet cj = connection_jet(patch, x);
  const FrameJet fj = make_frame(patch).jet(x);
  const Mat g = patch.g(x);

  ConnectionAt out;
  out.point = x;
  out.christoffel = cj.gamma;
  out.frame = fj.e;
  // ∇_{e_i} e_j = Σ_μ E^μ_i (∂_μ e_j + Γ(∂_μ, e_j))
  std::vector<Mat> nabla(u(n), Mat::Zero(n, n));  // nabla[i].col(j) = ∇_{e_i} e_j
  for (int mu = 0; mu < n; ++mu) {
    Mat gamma_mu(n, n);  // gamma_mu(k, l) = Γ^k_{μ l}
    for (int k = 0; k < n; ++k) gamma_mu.row(k) = cj.gamma[u(k)].row(mu);
    const Mat de_mu = fj.de[u(mu)] + gamma_mu * fj.e;
    for (int i = 0; i < n; ++i) nabla[u(i)] += fj.e(mu, i) * de_mu;
  }
  out.frame_connection.assign(u(n), Mat::Zero(n, n));
  for (int i = 0; i < n; ++i) out.frame_connection[u(i)] = nabla[u(i)].transpose() * g * fj.e;
  return out;
}

RiemannTensor riemann_tensor(const MetricPatch& patch, const Vec&, const ConnectionJet& cj) {
  const int n = patch.dim();
  RiemannTensor r(n);
  for (int rho = 0; rho < n; ++rho)
    for (int sig = 0; sig < n; ++sig)
      for (int mu = 0; mu < n; ++mu)
        for (int nu = 0; nu < n; ++nu) {
          double v = cj.dgamma[u(mu)][u(rho)](nu, sig) - cj.dgamma[u(nu)][u(rho)](mu, sig);
          for (int lam = 0; lam < n; ++lam)
            v += cj.gamma[u(rho)](mu, lam) * cj.gamma[u(lam)](nu, sig) -
                 cj.gamma[u(rho)](nu, lam) * cj.gamma[u(lam)](mu, sig);
          r(rho, sig, mu, nu) = v;
        }
  return r;
}

SchoutenAt riemann_ricci_scal(const MetricPatch& patch, const Vec& x) {
  const int n = patch.dim();
  if (n < 3) throw DomainError("Schouten operator needs n ≥ 3");
  const ConnectionJet cj = connection_jet(patch, x);
  SchoutenAt out;
  out.point = x;
  out.riemann = riemann_tensor(patch, x, cj);
  out.ricci_coordinates = Mat::Zero(n, n);
  for (int s = 0; s < n; ++s)
    for (int v = 0; v < n; ++v)
      for (int r = 0; r < n; ++r) out.ricci_coordinates(s, v) += out.riemann(r, s, r, v);

  out.frame = make_frame(patch).at(x);
  const Mat ric_frame = out.frame.transpose() * out.ricci_coordinates * out.frame;  // Ric(e_a, e_b)
  out.ric = ric_frame;
  out.ric.row(0) *= -1.0;  // raise with diag(−1, +1, …)
  out.scal = out.ric.trace();
  out.schouten = (out.scal / (2.0 * (n - 1)) * Mat::Identity(n, n) - out.ric) / (n - 2.0);
  return out;
}

Mat covariant_derivative(const MetricPatch& patch, const OneFormField& alpha, const Vec& x) {
  const int n = patch.dim();
  const ConnectionJet cj = connection_jet(patch, x);
  const Vec a = alpha.value(x);
  const Mat jac = alpha.jacobian(x);
  Mat out(n, n);
  for (int nu = 0; nu < n; ++nu)
    for (int mu = 0; mu < n; ++mu) {
      double v = jac(mu, nu);
      for (int l = 0; l < n; ++l) v -= cj.gamma[u(l)](nu, mu) * a(l);
      out(nu, mu) = v;
    }
  return out;
}

Vec box_operator(const MetricPatch& patch, const OneFormField& alpha, const Vec& x) {
  if (!alpha.value || !alpha.jacobian || !alpha.hessian)
    throw MissingDerivatives("box operator needs the one-form's first and second derivatives");
  const int n = patch.dim();
  const ConnectionJet cj = connection_jet(patch, x);
  const Vec a = alpha.value(x);
  const Mat jac = alpha.jacobian(x);
  const std::vector<Mat> hess = alpha.hessian(x);
  if (static_cast<int>(hess.size()) != n) throw MissingDerivatives("one-form Hessian has the wrong shape");

  // T_{νμ} = ∇_ν α_μ and its partials ∂_λ T_{νμ}.
  Mat t(n, n);
  for (int nu = 0; nu < n; ++nu)
    for (int mu = 0; mu < n; ++mu) {
      double v = jac(mu, nu);
      for (int k = 0; k < n; ++k) v -= cj.gamma[u(k)](nu, mu) * a(k);
      t(nu, mu) = v;
    }
  auto dt = [&](int lam, int nu, int mu) {
    double v = hess[u(mu)](nu, lam);
    for (int k = 0; k < n; ++k)
      v -= cj.dgamma[u(lam)][u(k)](nu, mu) * a(k) + cj.gamma[u(k)](nu, mu) * jac(k, lam);
    return v;
  };

  Vec lap = Vec::Zero(n);
  for (int mu = 0; mu < n; ++mu)
    for (int lam = 0; lam < n; ++lam)
      for (int nu = 0; nu < n; ++nu) {
        if (cj.g_inv(lam, nu) == 0.0) continue;
        double nabla2 = dt(lam, nu, mu);
        for (int k = 0; k < n; ++k)
          nabla2 -= cj.gamma[u(k)](lam, nu) * t(k, mu) + cj.gamma[u(k)](lam, mu) * t(nu, k);
        lap(mu) += cj.g_inv(lam, nu) * nabla2;
      }

  const double trace_p = riemann_ricci_scal(patch, x).schouten.trace();
  return -(lap - trace_p * a) / (n - 2.0);
}

}  // namespace spintractor
