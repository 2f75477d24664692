#include "doctest.h"
#include "oracles.hpp"

#include "spintractor/squares.hpp"

using namespace spintractor;

TEST_CASE("currents of random spinors are causal and future-directed for n = 3..6") {
  for (int n = 3; n <= 6; ++n) {
    const CliffordRep rep = build_clifford_rep(Signature::lorentzian(n));
    CHECK(currents_causal_future(rep, 200, 77));
    std::mt19937_64 rng(n);
    for (int t = 0; t < 50; ++t) {
      const Spinor phi = oracle::random_spinor(rep.spinor_dim(), rng);
      const auto c = dirac_current(rep, phi);
      CHECK(c.future_directed);
      CHECK((c.causal_type == CausalType::timelike || c.causal_type == CausalType::null));
      // g(V, V) ≤ 0 and V^0 > 0
      CHECK(c.v(0) > 0.0);
    }
  }
}

TEST_CASE("phase calibration picks a single phase and rejects the others") {
  for (int n = 3; n <= 6; ++n) {
    const CliffordRep raw = build_uncalibrated_rep(Signature::lorentzian(n));
    const CliffordRep cal = calibrate_hermitian_phase(raw);
    int passing = 0;
    for (Complex c : {Complex(1, 0), Complex(-1, 0), Complex(0, 1), Complex(0, -1)})
      passing += currents_causal_future(raw.with_phase(c), 100, 9) ? 1 : 0;
    CHECK(passing == 1);
    CHECK(currents_causal_future(cal, 100, 9));
    CHECK_THROWS_AS(dirac_current(cal.with_phase(-cal.phase()), Spinor::Ones(cal.spinor_dim())), ConventionViolation);
  }
}

TEST_CASE("degree-one square equals the current and degree two is antisymmetric") {
  std::mt19937_64 rng(19);
  const CliffordRep rep = build_clifford_rep(Signature::lorentzian(4));
  const Spinor phi = oracle::random_spinor(4, rng);
  const auto s1 = spinor_square(rep, phi, 1);
  CHECK((s1.coefficients.real() - dirac_current(rep, phi).v).norm() <= 1e-12);
  CHECK(s1.coefficients.imag().norm() <= 1e-12);
  const auto s2 = spinor_square(rep, phi, 2);
  CHECK((s2.coefficients + s2.coefficients.transpose()).norm() <= 1e-12);
  const auto s0 = spinor_square(rep, phi, 0);
  CHECK(std::abs(s0.coefficients(0, 0) + rep.inner(phi, phi)) <= 1e-12);
}

TEST_CASE("spinors annihilated by a null vector have null currents") {
  for (int n = 3; n <= 6; ++n) {
    const CliffordRep rep = build_clifford_rep(Signature::lorentzian(n));
    std::mt19937_64 rng(n + 100);
    Vec k = Vec::Zero(n);
    k(0) = 1.0;
    k(1) = 1.0;
    const Spinor phi = rep.vector_action(k) * oracle::random_spinor(rep.spinor_dim(), rng);
    const auto c = dirac_current(rep, phi);
    CHECK(c.causal_type == CausalType::null);
    // The current is proportional to k.
    CHECK(std::abs(c.v(0) - c.v(1)) <= 1e-9 * c.v.norm());
  }
}

TEST_CASE("causal type bands") {
  Vec v(3);
  v << 1.0, 1.0, 0.0;
  CHECK(causal_type(v) == CausalType::null);
  v << 1.0, 0.5, 0.0;
  CHECK(causal_type(v) == CausalType::timelike);
  v << 0.5, 1.0, 0.0;
  CHECK(causal_type(v) == CausalType::spacelike);
  CHECK(causal_type(Vec::Zero(3), 1e-12) == CausalType::zero);
}

TEST_CASE("currents scale by |λ|² and are equivariant under spacelike reflections") {
  for (int n = 3; n <= 6; ++n) {
    const CliffordRep rep = build_clifford_rep(Signature::lorentzian(n));
    const Mat eta = rep.signature().flat_metric();
    std::mt19937_64 rng(n + 200);
    for (int t = 0; t < 20; ++t) {
      const Spinor phi = oracle::random_spinor(rep.spinor_dim(), rng);
      const Vec v = current_vector(rep, phi);
      CHECK(v.norm() > 0.0);
      const Complex lambda(0.7 * t - 3.0, 1.3);
      CHECK((current_vector(rep, lambda * phi) - std::norm(lambda) * v).norm() <= 1e-12 * (1.0 + v.norm()) * std::norm(lambda));

      Vec u = oracle::random_vec(n, rng);
      while (u.dot(eta * u) < 0.1) u = oracle::random_vec(n, rng);
      u /= std::sqrt(u.dot(eta * u));  // g(u, u) = 1
      const Vec reflected = v - 2.0 * v.dot(eta * u) * u;
      CHECK((current_vector(rep, clifford_mul_vector(rep, u, phi)) - reflected).norm() <= 1e-10 * v.norm());
    }
  }
}
