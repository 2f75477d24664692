#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "spintractor/clifford.hpp"
#include "spintractor/curvature.hpp"

namespace spintractor {

/// Spinor field in a patch's frame gauge with analytic coordinate partials:
///   jacobian(x).col(μ) = ∂_μ φ,   hessian(x)[μ].col(ν) = ∂_μ∂_ν φ (optional).
struct SpinorField {
  std::function<Spinor(const Vec&)> value;
  std::function<CMat(const Vec&)> jacobian;
  std::function<std::vector<CMat>(const Vec&)> hessian;
  GaugeId gauge = 0;
};

// Builders for fields with closed-form derivatives.
SpinorField constant_field(const MetricPatch& patch, const Spinor& s);
/// φ(x) = Σ_a x^a γ_a S; a conformal Killing spinor on flat Cartesian charts.
SpinorField position_clifford_field(const MetricPatch& patch, const CliffordRep& rep, const Spinor& s);
/// e^{w f} φ. The result lives in `target`'s gauge (the rescaled patch when
/// f is the conformal factor; the frames then differ only by e^{−f}).
SpinorField weighted_field(const MetricPatch& target, const SpinorField& field, const RescaleFunction& f,
                           double weight);
SpinorField scaled_field(const SpinorField& field, Complex c);
SpinorField sum_field(const SpinorField& a, const SpinorField& b);
/// Field ↦ (Σ_a ε_a e_a(f) γ_a)·φ in the frame of `patch`; needs a constant frame.
SpinorField gradient_clifford_field(const MetricPatch& patch, const CliffordRep& rep, const RescaleFunction& f,
                                    const SpinorField& field);
/// Closed-form Dirac field of e^{f/2}φ on e^{2f}g:  e^{−f/2}(Dφ + (n/2) grad f·φ).
SpinorField rescaled_dirac_field(const MetricPatch& base, const MetricPatch& rescaled, const CliffordRep& rep,
                                 const SpinorField& field, const SpinorField& dirac_field, const RescaleFunction& f);

/// ∇^S_{e_i}φ = e_i(φ) + ½ Σ_{j<k} ε_jε_k ω_jk(e_i) γ_jγ_k φ.
Spinor spinor_derivative(const MetricPatch& patch, const CliffordRep& rep, const SpinorField& field, const Vec& x,
                         int direction);
/// All n frame directions, reusing one connection evaluation.
std::vector<Spinor> spinor_derivatives(const MetricPatch& patch, const CliffordRep& rep, const SpinorField& field,
                                       const Vec& x);
/// Matrix of the spin connection term ½ Σ_{j<k} ε_jε_k ω_jk(X) γ_jγ_k for X = Σ X^i e_i.
CMat spin_connection_matrix(const CliffordRep& rep, const ConnectionAt& conn, const Vec& frame_vector);

/// Dφ = Σ_i ε_i e_i·∇_{e_i}φ.
Spinor dirac(const MetricPatch& patch, const CliffordRep& rep, const SpinorField& field, const Vec& x);

struct TwistorResidualReport {
  Vec point;
  double residual_norm = 0.0;  // max_i ‖∇_{e_i}φ + (1/n) e_i·Dφ‖
  Spinor dirac_value;
};

TwistorResidualReport twistor_residual(const MetricPatch& patch, const CliffordRep& rep, const SpinorField& field,
                                       const Vec& x);

struct CovarianceReport {
  double max_base_residual = 0.0;
  double max_rescaled_residual = 0.0;
  std::size_t points = 0;
};

/// Checks that e^{f/2}φ solves the twistor equation of e^{2f}g at the sample
/// points. Throws NotASolution if φ itself fails on g beyond `tol`.
CovarianceReport covariance_check(const MetricPatch& patch, const CliffordRep& rep, const SpinorField& field,
                                  const RescaleFunction& f, const std::vector<Vec>& points, double tol = 1e-8);

/// max_i ‖∇_{e_i}(Dφ) − (n/2) P(e_i)·φ‖ with Dφ supplied as a differentiable field.
double dphi_schouten_check(const MetricPatch& patch, const CliffordRep& rep, const SpinorField& field,
                           const SpinorField& dirac_field, const Vec& x);

void require_gauge(const MetricPatch& patch, const SpinorField& field);

/// A twistor spinor together with its Dirac field, both in the same gauge.
struct KnownSolution {
  SpinorField phi;
  SpinorField dirac;
};

/// φ = x·S + T on a flat Cartesian chart; Dφ = −nS.
KnownSolution flat_solution(const MetricPatch& patch, const CliffordRep& rep, const Spinor& s, const Spinor& t);
/// Constant components in the patch frame with Dφ = 0 (parallel when the
/// frame is adapted, e.g. null-kernel spinors on pp-waves).
KnownSolution parallel_solution(const MetricPatch& patch, const CliffordRep& rep, const Spinor& s);
/// (e^{f/2}φ, e^{−f/2}(Dφ + (n/2) grad f·φ)) on rescaled = e^{2f}·base.
KnownSolution rescaled_solution(const MetricPatch& base, const MetricPatch& rescaled, const CliffordRep& rep,
                                const KnownSolution& sol, const RescaleFunction& f);
/// (γ_0 + γ_1)·t: annihilated by the null vector e_0 + e_1.
Spinor null_kernel_spinor(const CliffordRep& rep, const Spinor& t);

}  // namespace spintractor
