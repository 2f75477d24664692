#pragma once

#include <vector>

#include "spintractor/types.hpp"
#include "json.hpp"

namespace spintractor {

/// Signature (r, s): r timelike directions first, then s spacelike ones.
struct Signature {
  int timelike = 1;
  int spacelike = 3;

  int dim() const { return timelike + spacelike; }
  /// Diagonal entry ε_i of the flat metric diag(−1,…,−1,+1,…,+1).
  double eps(int i) const { return i < timelike ? -1.0 : 1.0; }
  Vec flat_diagonal() const;
  Mat flat_metric() const { return flat_diagonal().asDiagonal(); }
  void validate() const;

  static Signature lorentzian(int n) { return {1, n - 1}; }
  static Signature tractor(int n) { return {2, n}; }
};

constexpr int kMaxCliffordDim = 12;

/// Complex spinor module with gamma matrices satisfying
///   γ_i γ_j + γ_j γ_i = −2 g_ij Id,   g = diag(−1,…,−1,+1,…,+1),
/// and the invariant Hermitian form ⟨φ,ψ⟩ = ψ^H H φ.
///
/// Timelike gammas are Hermitian (square +Id), spacelike ones anti-Hermitian
/// (square −Id). H = c·γ_0⋯γ_{r−1}; the form satisfies
///   ⟨x·φ, ψ⟩ = (−1)^{r+1} ⟨φ, x·ψ⟩.
class CliffordRep {
 public:
  CliffordRep() = default;
  /// Takes ownership of an explicit realization. Throws ConventionViolation if
  /// the Clifford relations or Hermiticity of the form fail.
  CliffordRep(Signature sig, std::vector<CMat> gammas, CMat form, Complex phase);

  const Signature& signature() const { return sig_; }
  int dim() const { return sig_.dim(); }
  int spinor_dim() const { return static_cast<int>(gammas_.front().rows()); }
  const CMat& gamma(int i) const { return gammas_[static_cast<std::size_t>(i)]; }
  const std::vector<CMat>& gammas() const { return gammas_; }
  const CMat& hermitian_form() const { return form_; }
  Complex phase() const { return phase_; }
  int invariance_sign() const { return sig_.timelike % 2 == 1 ? 1 : -1; }

  /// ⟨a, b⟩, linear in a, antilinear in b.
  Complex inner(const Spinor& a, const Spinor& b) const { return b.dot(form_ * a); }
  /// Matrix of Clifford multiplication by Σ v^i e_i.
  CMat vector_action(const Vec& v) const;
  /// Same representation with the form's phase replaced (H = phase·γ_0⋯γ_{r−1}).
  CliffordRep with_phase(Complex phase) const;
  /// max_ij ‖γ_iγ_j + γ_jγ_i + 2g_ij Id‖_max
  double clifford_defect() const;

 private:
  Signature sig_;
  std::vector<CMat> gammas_;
  CMat form_;
  Complex phase_{1.0, 0.0};
};

/// Gamma matrices by recursive doubling (Jordan–Wigner chain of Pauli
/// matrices, chirality element appended in odd dimension), timelike generators
/// first. The form phase is calibrated (see calibrate_hermitian_phase) for
/// Lorentzian signatures; otherwise the first of {1, i} giving a Hermitian form.
CliffordRep build_clifford_rep(Signature sig);

/// Same matrices with phase 1, no calibration applied.
CliffordRep build_uncalibrated_rep(Signature sig);

Spinor clifford_mul_vector(const CliffordRep& rep, const Vec& v, const Spinor& phi);

/// Σ_{i<j} A_ij γ_i γ_j φ. A must be antisymmetric.
Spinor clifford_mul_twoform(const CliffordRep& rep, const Mat& a, const Spinor& phi);

/// Matrix of the two-form action above.
CMat twoform_action(const CliffordRep& rep, const Mat& a);

/// Debug dump: {"signature":[r,s], "phase":[re,im], "gammas":[[[re,im],…] row-major …], "form": …}.
nlohmann::json gammas_to_json(const CliffordRep& rep);

}  // namespace spintractor
