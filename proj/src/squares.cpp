#include "spintractor/squares.hpp"

#include <cmath>
#include <random>
#include <string>

namespace spintractor {

const char* to_string(CausalType t) {
  switch (t) {
    case CausalType::zero: return "zero";
    case CausalType::null: return "null";
    case CausalType::timelike: return "timelike";
    case CausalType::spacelike: return "spacelike";
  }
  return "unknown";
}

CausalType causal_type(const Vec& v, double zero_tol) {
  if (v.cwiseAbs().maxCoeff() <= zero_tol) return CausalType::zero;
  const double norm2 = v.squaredNorm();
  const double q = -v(0) * v(0) + v.tail(v.size() - 1).squaredNorm();
  if (std::abs(q) <= kNullBand * norm2) return CausalType::null;
  return q < 0.0 ? CausalType::timelike : CausalType::spacelike;
}

namespace {

CVec lowered_current(const CliffordRep& rep, const Spinor& phi) {
  CVec low(rep.dim());
  for (int i = 0; i < rep.dim(); ++i) low(i) = -rep.inner(rep.gamma(i) * phi, phi);
  return low;
}

Spinor random_spinor(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> normal;
  Spinor s(dim);
  for (int k = 0; k < dim; ++k) s(k) = Complex{normal(rng), normal(rng)};
  return s;
}

}  // namespace

Vec current_vector(const CliffordRep& rep, const Spinor& phi) {
  if (phi.size() != rep.spinor_dim()) throw DimensionMismatch("spinor length mismatch");
  const CVec low = lowered_current(rep, phi);
  Vec v(rep.dim());
  for (int i = 0; i < rep.dim(); ++i) v(i) = rep.signature().eps(i) * low(i).real();
  return v;
}

DiracCurrentAt dirac_current(const CliffordRep& rep, const Spinor& phi) {
  DiracCurrentAt out;
  out.v = current_vector(rep, phi);
  const double phi_norm2 = phi.squaredNorm();
  out.causal_type = causal_type(out.v, 1e-14 * std::max(phi_norm2, 1e-300));
  if (phi_norm2 == 0.0) {
    out.causal_type = CausalType::zero;
    return out;
  }
  if (out.causal_type == CausalType::zero)
    throw ConventionViolation("Dirac current vanishes for a nonzero spinor");
  if (out.causal_type == CausalType::spacelike)
    throw ConventionViolation("spacelike Dirac current: Hermitian-form calibration is wrong");
  out.future_directed = out.v(0) > 0.0;
  if (!out.future_directed)
    throw ConventionViolation("past-directed Dirac current: Hermitian-form calibration is wrong");
  return out;
}

SpinorSquare spinor_square(const CliffordRep& rep, const Spinor& phi, int degree) {
  const int n = rep.dim();
  if (degree < 0 || degree > n) throw DomainError("spinor square degree out of range");
  if (degree > 2) throw DomainError("spinor squares are implemented for degrees 0, 1, 2");
  if (phi.size() != rep.spinor_dim()) throw DimensionMismatch("spinor length mismatch");
  const auto& sig = rep.signature();
  SpinorSquare sq;
  sq.degree = degree;
  if (degree == 0) {
    sq.coefficients = CMat::Constant(1, 1, -rep.inner(phi, phi));
  } else if (degree == 1) {
    sq.coefficients.resize(n, 1);
    for (int j = 0; j < n; ++j) sq.coefficients(j, 0) = -sig.eps(j) * rep.inner(rep.gamma(j) * phi, phi);
  } else {
    sq.coefficients = CMat::Zero(n, n);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (j != k)
          sq.coefficients(j, k) =
              -sig.eps(j) * sig.eps(k) * rep.inner(rep.gamma(j) * (rep.gamma(k) * phi), phi);
  }
  return sq;
}

bool currents_causal_future(const CliffordRep& rep, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) {
    const Spinor phi = random_spinor(rng, rep.spinor_dim());
    const CVec low = lowered_current(rep, phi);
    const double scale = low.cwiseAbs().maxCoeff();
    if (low.imag().cwiseAbs().maxCoeff() > 1e-10 * scale) return false;
    Vec v(rep.dim());
    for (int i = 0; i < rep.dim(); ++i) v(i) = rep.signature().eps(i) * low(i).real();
    const CausalType t = causal_type(v, 0.0);
    if (t != CausalType::timelike && t != CausalType::null) return false;
    if (v(0) <= 0.0) return false;
  }
  return true;
}

CliffordRep calibrate_hermitian_phase(const CliffordRep& rep, int samples, std::uint64_t seed) {
  if (rep.signature().timelike != 1)
    throw CalibrationError("phase calibration requires a Lorentzian signature");
  const Complex candidates[] = {{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}};
  int passing = 0;
  Complex chosen;
  for (const Complex& c : candidates) {
    if (currents_causal_future(rep.with_phase(c), samples, seed)) {
      ++passing;
      chosen = c;
    }
  }
  if (passing != 1)
    throw CalibrationError("Hermitian phase calibration is ambiguous: " + std::to_string(passing) +
                           " of 4 phases pass");
  return rep.with_phase(chosen);
}

}  // namespace spintractor
