#pragma once

#include <cstdint>

#include "spintractor/clifford.hpp"

namespace spintractor {

enum class CausalType { zero, null, timelike, spacelike };

const char* to_string(CausalType t);

/// Relative band for the null classification: |(v,v)| ≤ kNullBand·‖v‖².
constexpr double kNullBand = 1e-9;

/// Causal type of a frame vector under diag(−1,+1,…,+1). Zero means
/// ‖v‖_∞ ≤ zero_tol.
CausalType causal_type(const Vec& v, double zero_tol = 0.0);

struct DiracCurrentAt {
  Vec v;  // frame components (upper index)
  CausalType causal_type = CausalType::zero;
  bool future_directed = false;
};

/// Frame components of V_φ defined by g(V_φ, e_i) = −⟨e_i·φ, φ⟩, no checks.
Vec current_vector(const CliffordRep& rep, const Spinor& phi);

/// Dirac current with causal classification. Throws ConventionViolation when
/// the current is spacelike, past-directed, or vanishes for φ ≠ 0.
DiracCurrentAt dirac_current(const CliffordRep& rep, const Spinor& phi);

/// Homogeneous degree-i part of the spinor square for i ∈ {0,1,2}.
///   degree 0: −⟨φ,φ⟩
///   degree 1: ε_j·(−⟨γ_jφ,φ⟩)             (equals dirac_current().v)
///   degree 2: ε_jε_k·(−⟨γ_jγ_kφ,φ⟩), j ≠ k (antisymmetric)
/// Upper-index coefficients; normalization −1 in every degree, fixed by the
/// degree-1 anchor.
struct SpinorSquare {
  int degree = 0;
  CMat coefficients;  // 1×1, n×1 or n×n
};

SpinorSquare spinor_square(const CliffordRep& rep, const Spinor& phi, int degree);

/// Scans the phases {1, −1, i, −i} of the Hermitian form and returns the
/// representation with the unique phase for which `samples` random spinors
/// all have causal, future-directed currents. Lorentzian signatures only.
CliffordRep calibrate_hermitian_phase(const CliffordRep& rep, int samples = 200,
                                      std::uint64_t seed = 0x5eed);

/// True if `samples` random spinors all give real, causal, future-directed
/// currents under rep's current form.
bool currents_causal_future(const CliffordRep& rep, int samples, std::uint64_t seed);

}  // namespace spintractor
