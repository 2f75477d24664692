#pragma once

#include <functional>
#include <vector>

#include "spintractor/metric.hpp"

namespace spintractor {

/// Levi-Civita connection at a point, in coordinates and in the patch frame.
struct ConnectionAt {
  Vec point;
  std::vector<Mat> christoffel;       // christoffel[k](i, j) = Γ^k_ij
  std::vector<Mat> frame_connection;  // frame_connection[i](j, k) = ω_jk(e_i) = g(∇_{e_i} e_j, e_k)
  Mat frame;                          // frame.col(a) = e_a
};

/// Γ and its first partials: dgamma[l][k](i, j) = ∂_l Γ^k_ij.
struct ConnectionJet {
  Mat g_inv;
  std::vector<Mat> gamma;
  std::vector<std::vector<Mat>> dgamma;
};

ConnectionJet connection_jet(const MetricPatch& patch, const Vec& x);
/// Γ only: gamma[k](i, j) = Γ^k_ij.
std::vector<Mat> christoffel_symbols(const MetricPatch& patch, const Vec& x);
ConnectionAt christoffels(const MetricPatch& patch, const Vec& x);

/// R^ρ_{σμν} = ∂_μΓ^ρ_{νσ} − ∂_νΓ^ρ_{μσ} + Γ^ρ_{μλ}Γ^λ_{νσ} − Γ^ρ_{νλ}Γ^λ_{μσ}
/// (positive Ricci on round spheres).
class RiemannTensor {
 public:
  explicit RiemannTensor(int n = 0) : n_(n), data_(static_cast<std::size_t>(n * n * n * n), 0.0) {}
  int dim() const { return n_; }
  double& operator()(int rho, int sigma, int mu, int nu) { return data_[index(rho, sigma, mu, nu)]; }
  double operator()(int rho, int sigma, int mu, int nu) const { return data_[index(rho, sigma, mu, nu)]; }

 private:
  std::size_t index(int a, int b, int c, int d) const {
    return static_cast<std::size_t>(((a * n_ + b) * n_ + c) * n_ + d);
  }
  int n_;
  std::vector<double> data_;
};

/// Curvature endomorphisms in the frame gauge: ric(a, b) = Ric^a_b with the
/// upper index raised by the flat frame metric; schouten likewise.
struct SchoutenAt {
  Vec point;
  Mat ric;
  double scal = 0.0;
  Mat schouten;
  Mat ricci_coordinates;  // Ric_{σν}
  RiemannTensor riemann;  // coordinate components
  Mat frame;
};

RiemannTensor riemann_tensor(const MetricPatch& patch, const Vec& x, const ConnectionJet& cj);
SchoutenAt riemann_ricci_scal(const MetricPatch& patch, const Vec& x);

/// A one-form field α_μ with analytic derivatives:
///   jacobian(x)(μ, ν) = ∂_ν α_μ,   hessian(x)[μ](ν, λ) = ∂_ν∂_λ α_μ.
/// hessian may be empty when second derivatives are unavailable.
struct OneFormField {
  std::function<Vec(const Vec&)> value;
  std::function<Mat(const Vec&)> jacobian;
  std::function<std::vector<Mat>(const Vec&)> hessian;
};

/// (∇α)(ν, μ) = ∇_ν α_μ in coordinates.
Mat covariant_derivative(const MetricPatch& patch, const OneFormField& alpha, const Vec& x);

/// □α = −(1/(n−2))(Δα − tr(P)·α), Δ = tr_g ∇² the Bochner Laplacian.
/// Returns coordinate components. Throws MissingDerivatives without a Hessian.
Vec box_operator(const MetricPatch& patch, const OneFormField& alpha, const Vec& x);

/// Frame components α(e_a) of a coordinate covector.
inline Vec frame_covector(const Mat& frame, const Vec& coords) { return frame.transpose() * coords; }

}  // namespace spintractor
