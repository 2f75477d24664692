#include "doctest.h"
#include "oracles.hpp"

#include "spintractor/squares.hpp"
#include "spintractor/tractor.hpp"

using namespace spintractor;

namespace {

Mat random_twoform(int m, std::mt19937_64& rng) {
  Mat b(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) b(i, j) = oracle::random_vec(1, rng)(0);
  return b - b.transpose();
}

struct Flat {
  MetricPatch patch;
  CliffordRep rep;
  KnownSolution sol;
  Spinor s;
};

Flat flat_family(int n, const Spinor& s, const Spinor& t) {
  MetricPatch p = make_minkowski(n);
  CliffordRep rep = build_clifford_rep(Signature::lorentzian(n));
  KnownSolution sol = flat_solution(p, rep, s, t);
  return {p, rep, sol, s};
}

}  // namespace

TEST_CASE("tractor metric has signature (2, n) and pairs s_- with s_+") {
  for (int n = 3; n <= 6; ++n) {
    const Mat g = tractor_metric(n);
    const Vec ev = Eigen::SelfAdjointEigenSolver<Mat>(g).eigenvalues();
    CHECK((ev.array() < 0).count() == 2);
    CHECK((ev.array() > 0).count() == n);
    Tractor sm{1.0, Vec::Zero(n), 0.0}, sp{0.0, Vec::Zero(n), 1.0};
    CHECK(tractor_inner(sm, sp) == 1.0);
    CHECK(tractor_inner(sm, sm) == 0.0);
    const Mat f = orthonormal_tractor_basis(n);
    CHECK((f.transpose() * g * f - Signature::tractor(n).flat_metric()).norm() <= 1e-14);
    CHECK((g * g - Mat::Identity(n + 2, n + 2)).norm() == 0.0);
  }
}

TEST_CASE("twistor module is a (2, n) Clifford module with an invariant form") {
  std::mt19937_64 rng(31);
  for (int n = 3; n <= 6; ++n) {
    const CliffordRep base = build_clifford_rep(Signature::lorentzian(n));
    const CliffordRep tw = twistor_rep(base);
    CHECK(tw.clifford_defect() <= 1e-12);
    CHECK(tw.spinor_dim() == 2 * base.spinor_dim());
    const Spinor a = oracle::random_spinor(tw.spinor_dim(), rng);
    const Spinor b = oracle::random_spinor(tw.spinor_dim(), rng);
    for (int i = 0; i < n + 2; ++i)
      CHECK(std::abs(tw.inner(tw.gamma(i) * a, b) + tw.inner(a, tw.gamma(i) * b)) <= 1e-10);
    const int d = base.spinor_dim();
    const Twistor x{a.head(d), a.tail(d)}, y{b.head(d), b.tail(d)};
    CHECK(std::abs(twistor_product(base, x, y) - tw.inner(a, b)) <= 1e-12);
    // tractor generators satisfy t_I t_J + t_J t_I = −2 G_IJ
    const auto t = tractor_generators(base);
    const Mat g = tractor_metric(n);
    for (int i = 0; i < n + 2; ++i)
      for (int j = 0; j < n + 2; ++j)
        CHECK((t[i] * t[j] + t[j] * t[i] + 2.0 * g(i, j) * CMat::Identity(2 * d, 2 * d)).norm() <= 1e-12);
  }
}

TEST_CASE("defining relation holds with unit normalization") {
  std::mt19937_64 rng(32);
  for (int n = 3; n <= 6; ++n) {
    const CliffordRep base = build_clifford_rep(Signature::lorentzian(n));
    const CliffordRep tw = twistor_rep(base);
    const Mat f_inv = orthonormal_tractor_basis(n).inverse();
    for (int t = 0; t < 50; ++t) {
      const Twistor x{oracle::random_spinor(base.spinor_dim(), rng), oracle::random_spinor(base.spinor_dim(), rng)};
      const Mat b = random_twoform(n + 2, rng);
      CHECK(defining_relation_defect(base, x, b) <= 1e-8 * (1 + b.norm() * x.stacked().squaredNorm()));
      // second path: generic (2, n) module in the orthonormal basis
      const Spinor s = x.stacked();
      const Mat b_orth = f_inv * b * f_inv.transpose();
      const Complex rhs = Complex(0, -1) * tw.inner(clifford_mul_twoform(tw, b_orth, s), s);
      const double lhs = tractor_pairing(twistor_square(base, x).fiber(), b);
      CHECK(std::abs(lhs - rhs) <= 1e-8 * (1 + std::abs(lhs)));
    }
  }
}

TEST_CASE("lift of the Minkowski family and parallel-twistor residuals") {
  std::mt19937_64 rng(33);
  for (int n = 3; n <= 6; ++n) {
    const int d = 1 << (n / 2);
    const Flat fam = flat_family(n, oracle::random_spinor(d, rng), oracle::random_spinor(d, rng));
    const TwistorField tw = lift_to_twistor(fam.patch, fam.rep, fam.sol);
    const Vec x = oracle::random_point(fam.patch.domain(), rng);
    CHECK((tw.psi.value(x) + std::sqrt(2.0) * fam.s).norm() <= 1e-12);
    CHECK(parallel_twistor_residual(fam.patch, fam.rep, tw, x).max() <= 1e-10);
    // rescaled family
    const RescaleFunction f = RescaleFunction::bump(0.4, Vec::Constant(n, -0.1), 0.8);
    const MetricPatch q = rescale(fam.patch, f);
    const KnownSolution rs = rescaled_solution(fam.patch, q, fam.rep, fam.sol, f);
    const TwistorField tq = lift_to_twistor(q, fam.rep, rs);
    CHECK(parallel_twistor_residual(q, fam.rep, tq, x).max() <= 1e-9);
    // perturbing ψ on the curved patch breaks the pair equations
    TwistorField bad = tq;
    bad.psi = sum_field(tq.psi, constant_field(q, Spinor::Ones(d)));
    CHECK(parallel_twistor_residual(q, fam.rep, bad, x).max() > 1e-3);
  }
}

TEST_CASE("lift rejects non-solutions") {
  const Flat fam = flat_family(4, Spinor::Ones(4), Spinor::Zero(4));
  KnownSolution wrong = fam.sol;
  wrong.dirac = constant_field(fam.patch, Spinor::Zero(4));
  CHECK_THROWS_AS(lift_to_twistor(fam.patch, fam.rep, wrong), NotASolution);
}

TEST_CASE("pp-wave parallel spinor lifts with ψ = 0") {
  std::mt19937_64 rng(34);
  for (int n = 3; n <= 6; ++n) {
    Mat a = Mat::Identity(n - 2, n - 2) * 0.5;
    a(0, 0) = -1.0;
    const MetricPatch p = make_pp_wave(n, quadratic_profile(a), Box::cube(n, 1.0));
    const CliffordRep rep = build_clifford_rep(Signature::lorentzian(n));
    const KnownSolution sol = parallel_solution(p, rep, null_kernel_spinor(rep, oracle::random_spinor(rep.spinor_dim(), rng)));
    const TwistorField tw = lift_to_twistor(p, rep, sol);
    const Vec x = oracle::random_point(p.domain(), rng);
    CHECK(tw.psi.value(x).norm() == 0.0);
    CHECK(parallel_twistor_residual(p, rep, tw, x).max() <= 1e-9);
    const TractorTwoForm tf = assemble_two_form(p, rep, sol, x);
    CHECK(tf.alpha_0.norm() == 0.0);
    CHECK(tf.alpha_plus.norm() == 0.0);
    CHECK(tf.alpha_mp == 0.0);
    CHECK(tf.alpha_minus.norm() > 0.0);
    const TwoFormCrossCheck cc = cross_check_two_form(p, rep, sol, x);
    CHECK(cc.alpha_0 <= 1e-10);
    CHECK(cc.alpha_mp <= 1e-10);
    CHECK_FALSE(cc.has_box);
  }
}

TEST_CASE("two-form components agree with derivatives of the current") {
  std::mt19937_64 rng(35);
  for (int n = 3; n <= 6; ++n) {
    const int d = 1 << (n / 2);
    const Flat fam = flat_family(n, oracle::random_spinor(d, rng), oracle::random_spinor(d, rng));
    for (int t = 0; t < 10; ++t) {
      const Vec x = oracle::random_point(fam.patch.domain(), rng);
      const TwoFormCrossCheck cc = cross_check_two_form(fam.patch, fam.rep, fam.sol, x);
      CHECK(cc.has_box);
      CHECK(cc.max() <= 1e-8);
    }
    // the first-order identities hold on curved rescalings as well
    const RescaleFunction f = RescaleFunction::quadratic(0.1, Vec::LinSpaced(n, -0.2, 0.2), Mat::Identity(n, n) * 0.2);
    const MetricPatch q = rescale(fam.patch, f);
    const KnownSolution rs = rescaled_solution(fam.patch, q, fam.rep, fam.sol, f);
    const TwoFormCrossCheck cq = cross_check_two_form(q, fam.rep, rs, oracle::random_point(q.domain(), rng));
    CHECK(cq.alpha_0 <= 1e-8);
    CHECK(cq.alpha_mp <= 1e-8);
  }
}

TEST_CASE("current one-form derivatives agree with finite differences") {
  std::mt19937_64 rng(36);
  const Flat fam = flat_family(4, oracle::random_spinor(4, rng), oracle::random_spinor(4, rng));
  const RescaleFunction f = RescaleFunction::bump(0.5, Vec::Zero(4), 0.9);
  const MetricPatch q = rescale(fam.patch, f);
  const KnownSolution rs = rescaled_solution(fam.patch, q, fam.rep, fam.sol, f);
  for (const auto& [patch, field] : {std::pair{fam.patch, fam.sol.phi}, std::pair{q, rs.phi}}) {
    const OneFormField a = current_one_form(patch, fam.rep, field);
    const Vec x = oracle::random_point(patch.domain(), rng);
    const Mat j = a.jacobian(x);
    for (int nu = 0; nu < 4; ++nu) {
      const Vec e = Vec::Unit(4, nu) * 1e-5;
      CHECK((j.col(nu) - (a.value(x + e) - a.value(x - e)) / 2e-5).norm() <= 1e-7);
      if (a.hessian) {
        const auto h = a.hessian(x);
        const Mat dj = (a.jacobian(x + e) - a.jacobian(x - e)) / 2e-5;
        for (int mu = 0; mu < 4; ++mu) CHECK((h[mu].row(nu) - dj.row(mu)).norm() <= 1e-7);
      }
    }
    // frame components of α are the current with its index lowered
    const Vec frame_a = frame_covector(make_frame(patch).at(x), a.value(x));
    const Vec v = dirac_current(fam.rep, field.value(x)).v;
    CHECK((frame_a - Signature::lorentzian(4).flat_metric() * v).norm() <= 1e-10 * (1 + v.norm()));
  }
}

TEST_CASE("at a zero only the s_+ component survives") {
  std::mt19937_64 rng(37);
  for (int n = 3; n <= 6; ++n) {
    const int d = 1 << (n / 2);
    const Flat fam = flat_family(n, oracle::random_spinor(d, rng), Spinor::Zero(d));
    const TractorTwoForm tf = assemble_two_form(fam.patch, fam.rep, fam.sol, Vec::Zero(n));
    CHECK(tf.alpha_minus.norm() == 0.0);
    CHECK(tf.alpha_0.norm() == 0.0);
    CHECK(tf.alpha_mp == 0.0);
    Vec dphi_current(n);
    const Spinor dphi = -double(n) * fam.s;
    for (int i = 0; i < n; ++i) dphi_current(i) = -fam.rep.inner(fam.rep.gamma(i) * dphi, dphi).real();
    CHECK((tf.alpha_plus + 2.0 / (n * n) * dphi_current).norm() <= 1e-12 * dphi_current.norm());
  }
}

TEST_CASE("simplicity detector") {
  const int n = 4;
  const Vec sm = Vec::Unit(n + 2, n + 1);
  CHECK(wedge_and_simplicity(wedge(sm, Vec::Unit(n + 2, 2))).simple);
  const Mat non = wedge(Vec::Unit(n + 2, 1), Vec::Unit(n + 2, 2)) + wedge(Vec::Unit(n + 2, 3), Vec::Unit(n + 2, 4));
  const OrbitType o = wedge_and_simplicity(non);
  CHECK_FALSE(o.simple);
  CHECK(o.simplicity_defect == doctest::Approx(1.0));
  CHECK_THROWS_AS(wedge_and_simplicity(Mat::Zero(n + 2, n + 2)), DomainError);
  CHECK_THROWS_AS(classify_orbit(non), DomainError);
}

TEST_CASE("orbit classification of synthetic planes") {
  const int n = 4;
  const Mat g = tractor_metric(n);
  const Vec l = Vec::Unit(n + 2, 0);  // s_-, null
  Vec c_null = Vec::Zero(n + 2);
  c_null(1) = c_null(2) = 1.0;  // e_0 + e_1
  const Vec c_time = Vec::Unit(n + 2, 1);
  // lower indices with G before wedging
  CHECK(classify_orbit(wedge(g * l, g * c_null)).factor_type == FactorType::null_wedge_null);
  CHECK(classify_orbit(wedge(g * l, g * c_time)).factor_type == FactorType::null_wedge_timelike);
  CHECK(classify_orbit(wedge(g * Vec::Unit(n + 2, 2), g * Vec::Unit(n + 2, 3))).factor_type == FactorType::other);
  // scale invariance
  CHECK(classify_orbit(1e-6 * wedge(g * l, g * c_time)).factor_type == FactorType::null_wedge_timelike);
}

TEST_CASE("orbit type follows the causal type of the square of S and is constant") {
  std::mt19937_64 rng(38);
  for (int n = 3; n <= 6; ++n) {
    const int d = 1 << (n / 2);
    const Spinor s_null = null_kernel_spinor(build_clifford_rep(Signature::lorentzian(n)), oracle::random_spinor(d, rng));
    const Spinor s_time = oracle::random_spinor(d, rng);
    for (const auto& [s, expect] : {std::pair{s_null, FactorType::null_wedge_null},
                                    std::pair{s_time, FactorType::null_wedge_timelike}}) {
      const Flat fam = flat_family(n, s, Spinor::Zero(d));
      const RescaleFunction f = RescaleFunction::bump(0.3, Vec::Constant(n, 0.2), 0.6);
      const MetricPatch q = rescale(fam.patch, f);
      const KnownSolution rs = rescaled_solution(fam.patch, q, fam.rep, fam.sol, f);
      for (int t = 0; t < 20; ++t) {
        const Vec x = oracle::random_point(fam.patch.domain(), rng);
        const OrbitType o = classify_orbit(assemble_two_form(fam.patch, fam.rep, fam.sol, x));
        CHECK(o.simple);
        CHECK(o.factor_type == expect);
        CHECK(classify_orbit(assemble_two_form(q, fam.rep, rs, x)).factor_type == expect);
      }
    }
  }
}

TEST_CASE("currents of solutions with zeros are hypersurface orthogonal") {
  std::mt19937_64 rng(39);
  for (int n = 4; n <= 6; ++n) {
    const int d = 1 << (n / 2);
    const Flat fam = flat_family(n, oracle::random_spinor(d, rng), Spinor::Zero(d));
    for (int t = 0; t < 5; ++t)
      CHECK(hypersurface_orthogonality_defect(fam.patch, fam.rep, fam.sol.phi,
                                              oracle::random_point(fam.patch.domain(), rng)) <= 1e-10);
  }
}
