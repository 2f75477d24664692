#pragma once

#include <vector>

#include "spintractor/spinor.hpp"

namespace spintractor {

// Tractor fibers use the null basis (s_-, e_0, …, e_{n−1}, s_+), indices
// 0, 1..n, n+1, with metric G(s_-, s_+) = 1 and the flat frame metric in the
// middle block. G is its own inverse.

/// a·s_- + V + b·s_+
struct Tractor {
  double a = 0.0;
  Vec v;
  double b = 0.0;

  Vec coords() const;
  static Tractor from_coords(const Vec& c);
};

/// Tractor metric G of signature (2, n) in the null basis.
Mat tractor_metric(int n);
/// ab̃ + bã + g(V, Ṽ)
double tractor_inner(const Tractor& x, const Tractor& y);

/// Pair (φ, ψ) under the metric splitting W ≅ S ⊕ S.
struct Twistor {
  Spinor phi;
  Spinor psi;

  Spinor stacked() const;
};

/// ⟨Φ, Φ̃⟩_W = (i/√2)(⟨φ, ψ̃⟩ − ⟨ψ, φ̃⟩)
Complex twistor_product(const CliffordRep& rep, const Twistor& a, const Twistor& b);
/// Matrix of ⟨·,·⟩_W on stacked pairs: (i/√2)[[0, −H], [H, 0]].
CMat twistor_form(const CliffordRep& rep);

/// Clifford action of the null-basis tractor vectors on S ⊕ S:
///   e_i ↦ diag(γ_i, −γ_i),  s_+ ↦ (φ, ψ) ↦ (0, √2φ),  s_- ↦ (φ, ψ) ↦ (−√2ψ, 0).
std::vector<CMat> tractor_generators(const CliffordRep& rep);
/// ½ Σ_{I,J} B^{IJ} t_I t_J for an upper-index antisymmetric B in the null basis
/// (equal to Σ_{I<J} B^{IJ} t_I t_J only in orthonormal bases).
CMat tractor_twoform_action(const CliffordRep& rep, const Mat& b_upper);
/// The (2, n) spinor module on S ⊕ S in the orthonormal tractor basis
///   ((s_- − s_+)/√2, e_0, …, e_{n−1}, (s_- + s_+)/√2)
/// with the form of twistor_form.
CliffordRep twistor_rep(const CliffordRep& base);
/// Columns are the orthonormal basis vectors above in null-basis coordinates.
Mat orthonormal_tractor_basis(int n);

/// Pair of spinor fields in one gauge.
struct TwistorField {
  SpinorField phi;
  SpinorField psi;
};

/// Φ = (φ, (√2/n) Dφ). Throws NotASolution when φ fails the twistor equation
/// at the chart center or the supplied Dirac field disagrees with Dφ there.
TwistorField lift_to_twistor(const MetricPatch& patch, const CliffordRep& rep, const KnownSolution& sol,
                             double tol = 1e-8);

struct ParallelTwistorResidual {
  double penrose = 0.0;   // max_i ‖∇_iφ + (1/√2) e_i·ψ‖
  double schouten = 0.0;  // max_i ‖∇_iψ − (1/√2) P(e_i)·φ‖
  double max() const { return std::max(penrose, schouten); }
};

ParallelTwistorResidual parallel_twistor_residual(const MetricPatch& patch, const CliffordRep& rep,
                                                  const TwistorField& tw, const Vec& x);

/// Components of s_-♭∧α_- + α_0 + α_∓ s_-♭∧s_+♭ + s_+♭∧α_+ in a metric gauge.
/// Covectors and α_0 are frame components, forms evaluated with the 1/k!
/// convention.
struct TractorTwoForm {
  Vec alpha_minus;
  Mat alpha_0;
  double alpha_mp = 0.0;
  Vec alpha_plus;

  int dim() const { return static_cast<int>(alpha_minus.size()); }
  /// Lower-index antisymmetric coefficient array in the null basis.
  Mat fiber() const;
};

/// α_Φ of a twistor at a point:
///   α_- = α_φ, α_∓ = √2 Re⟨φ, ψ⟩, α_+ = −α_ψ, α_0(e_i, e_j) = (1/√2) Re⟨e_i·e_j·φ, ψ⟩,
/// where α_φ(e_i) = −⟨e_i·φ, φ⟩.
TractorTwoForm twistor_square(const CliffordRep& rep, const Twistor& tw);
/// twistor_square of (φ(x), (√2/n) Dφ(x)).
TractorTwoForm assemble_two_form(const MetricPatch& patch, const CliffordRep& rep, const KnownSolution& sol,
                                 const Vec& x);

/// ⟨A, B⟩_T = ½ A_IJ B^IJ
double tractor_pairing(const Mat& a_lower, const Mat& b_upper);
/// |⟨α_Φ, B⟩_T + i⟨B·Φ, Φ⟩_W| for an upper-index B in the null basis.
double defining_relation_defect(const CliffordRep& rep, const Twistor& tw, const Mat& b_upper);

/// The Dirac current α_φ as a coordinate one-form, α_μ = g_μν V^ν. Second
/// derivatives are supplied when the frame is constant and φ has a Hessian.
OneFormField current_one_form(const MetricPatch& patch, const CliffordRep& rep, const SpinorField& field);

struct TwoFormCrossCheck {
  double alpha_0 = 0.0;     // max |α_0 − ½dα_φ|
  double alpha_mp = 0.0;    // |α_∓ − (1/n) d*α_φ|
  double alpha_plus = 0.0;  // max |α_+ − □α_φ|, NaN without second derivatives
  bool has_box = false;
  double max() const;
};

/// Compares the algebraic components with derivatives of α_φ.
TwoFormCrossCheck cross_check_two_form(const MetricPatch& patch, const CliffordRep& rep, const KnownSolution& sol,
                                       const Vec& x);

/// max_{ijk} |(α∧dα)_{ijk}| in frame components, relative to ‖α‖·‖∇α‖.
double hypersurface_orthogonality_defect(const MetricPatch& patch, const CliffordRep& rep, const SpinorField& field,
                                         const Vec& x);

enum class FactorType { null_wedge_null, null_wedge_timelike, other };
const char* to_string(FactorType t);

struct OrbitType {
  bool simple = false;
  FactorType factor_type = FactorType::other;
  double simplicity_defect = 0.0;  // ‖A∧A‖_max / ‖A‖²_max
  Vec gram_eigenvalues;            // of the plane, ascending; empty unless simple
};

constexpr double kSimplicityTol = 1e-9;
constexpr double kGramTol = 1e-9;

/// Fills simple and simplicity_defect. Throws DomainError on a zero form.
OrbitType wedge_and_simplicity(const Mat& fiber, double tol = kSimplicityTol);
OrbitType wedge_and_simplicity(const TractorTwoForm& tf, double tol = kSimplicityTol);
/// Classifies the 2-plane of a simple fiber form by its Gram matrix under G.
/// Throws DomainError on zero or non-simple input.
OrbitType classify_orbit(const Mat& fiber, double tol = kGramTol);
OrbitType classify_orbit(const TractorTwoForm& tf, double tol = kGramTol);

/// Antisymmetric uvᵀ − vuᵀ.
inline Mat wedge(const Vec& u, const Vec& v) { return u * v.transpose() - v * u.transpose(); }

}  // namespace spintractor
