#include "doctest.h"
#include "oracles.hpp"

#include "spintractor/metric.hpp"

using namespace spintractor;

namespace {

std::vector<MetricPatch> sample_patches() {
  std::vector<MetricPatch> out;
  out.push_back(make_minkowski(4));
  Mat a(2, 2);
  a << 1.0, 0.3, 0.3, -0.5;
  out.push_back(make_pp_wave(4, quadratic_profile(a), Box::cube(4, 1.0)));
  out.push_back(make_pp_wave(5, polynomial_profile(5, {{0.7, 1, 2, 0, 0}, {-0.2, 0, 1, 1, 1}, {0.1, 2, 0, 0, 3}}),
                             Box::cube(5, 1.0)));
  out.push_back(make_static_product(4, SpatialFactor::torus_box, Box::cube(4, 1.0)));
  out.push_back(rescale(make_minkowski(3), RescaleFunction::bump(0.4, Vec::Constant(3, 0.1), 0.7)));
  Mat q = Mat::Identity(4, 4) * 0.3;
  q(0, 2) = q(2, 0) = 0.1;
  out.push_back(rescale(out[1], RescaleFunction::quadratic(0.1, Vec::LinSpaced(4, -0.2, 0.3), q)));
  return out;
}

}  // namespace

TEST_CASE("metric jets agree with finite differences") {
  std::mt19937_64 rng(1);
  for (const auto& p : sample_patches()) {
    for (int t = 0; t < 4; ++t) {
      const Vec x = oracle::random_point(p.domain(), rng);
      const MetricJet j = p.jet(x);
      const auto fd = oracle::fd_dg(p, x);
      for (int k = 0; k < p.dim(); ++k) {
        CHECK((j.dg[k] - fd[k]).cwiseAbs().maxCoeff() <= 1e-7);
        const double h = 1e-4;
        const Vec e = Vec::Unit(p.dim(), k) * h;
        const auto a = p.jet(x + e), b = p.jet(x - e);
        for (int l = 0; l < p.dim(); ++l)
          CHECK((j.d2g[k][l] - (a.dg[l] - b.dg[l]) / (2 * h)).cwiseAbs().maxCoeff() <= 1e-6);
      }
      CHECK(p.lorentzian_at(x));
    }
  }
}

TEST_CASE("frames are pseudo-orthonormal with correct partials") {
  std::mt19937_64 rng(2);
  for (const auto& p : sample_patches()) {
    const FrameField frame = make_frame(p);
    const Mat eta = Signature::lorentzian(p.dim()).flat_metric();
    for (int t = 0; t < 4; ++t) {
      const Vec x = oracle::random_point(p.domain(), rng);
      const FrameJet fj = frame.jet(x);
      CHECK((fj.e.transpose() * p.g(x) * fj.e - eta).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK((fj.e - frame.at(x)).norm() <= 1e-14);
      for (int k = 0; k < p.dim(); ++k) {
        const Vec e = Vec::Unit(p.dim(), k) * 1e-5;
        const Mat fd = (frame.at(x + e) - frame.at(x - e)) / 2e-5;
        CHECK((fj.de[k] - fd).cwiseAbs().maxCoeff() <= 1e-7);
      }
      // e_0 is future-directed: dt(e_0) > 0 for the time-orientation seed.
      CHECK(fj.e.col(0).dot(p.g(x) * p.frame_seed(x).seed.col(0)) < 0.0);
    }
  }
}

TEST_CASE("rescaled frame is e^{-f} times the base frame") {
  const MetricPatch base = make_minkowski(4);
  const RescaleFunction f = RescaleFunction::linear(0.2, Vec::LinSpaced(4, 0.1, 0.4));
  const MetricPatch resc = rescale(base, f);
  const Vec x = Vec::Constant(4, 0.3);
  CHECK((make_frame(resc).at(x) - std::exp(-f.value(x)) * make_frame(base).at(x)).norm() <= 1e-13);
  CHECK(resc.gauge() != base.gauge());
}

TEST_CASE("rescale function derivatives and json round trip") {
  std::mt19937_64 rng(4);
  Mat q = Mat::Random(3, 3);
  q = (q + q.transpose()).eval();
  for (const auto& f : {RescaleFunction::zero(3), RescaleFunction::linear(0.1, Vec::Ones(3)),
                        RescaleFunction::quadratic(0.2, Vec::LinSpaced(3, 0, 1), q),
                        RescaleFunction::bump(0.5, Vec::Zero(3), 0.8)}) {
    const Vec x = oracle::random_vec(3, rng) * 0.5;
    const RescaleFunction g = RescaleFunction::from_json(f.to_json(), 3);
    CHECK(std::abs(g.value(x) - f.value(x)) <= 1e-14);
    for (int k = 0; k < 3; ++k) {
      const Vec e = Vec::Unit(3, k) * 1e-5;
      CHECK(std::abs(f.gradient(x)(k) - (f.value(x + e) - f.value(x - e)) / 2e-5) <= 1e-8);
      CHECK((f.hessian(x).col(k) - (f.gradient(x + e) - f.gradient(x - e)) / 2e-5).norm() <= 1e-8);
    }
    CHECK(std::abs(f.negated().value(x) + f.value(x)) <= 1e-14);
  }
  CHECK_THROWS_AS(RescaleFunction::from_json({{"kind", "cubic"}}, 3), DomainError);
}

TEST_CASE("pp-wave constructor rejects inconsistent profiles") {
  Profile bad = quadratic_profile(Mat::Identity(2, 2));
  bad.gradient = [](const Vec& x) { return Vec(Vec::Zero(x.size())); };
  CHECK_THROWS_AS(make_pp_wave(4, bad, Box::cube(4, 1.0)), DomainError);
  CHECK_THROWS_AS(polynomial_profile(4, {{1.0, 0, 5, 0}}), DomainError);
}

TEST_CASE("patch descriptors") {
  const nlohmann::json j = {{"family", "pp_wave"}, {"dim", 4}, {"profile", "quadratic"},
                            {"coeffs", {1.0, 0.0, 0.0, -1.0}}};
  const MetricPatch p = patch_from_json(j);
  CHECK(p.dim() == 4);
  CHECK(p.tag() == FamilyTag::pp_wave);
  CHECK_THROWS_AS(patch_from_json({{"family", "kerr"}, {"dim", 4}}), DomainError);
  CHECK_THROWS_AS(patch_from_json({{"family", "minkowski"}, {"dim", 4}, {"domain", {{1, 0}}}}), DomainError);
  CHECK_THROWS_AS(p.require_inside(Vec::Constant(4, 5.0)), DomainError);
  const MetricPatch torus = make_static_product(3, SpatialFactor::torus_box, Box::cube(3, 1.0));
  CHECK(torus.domain().periodic[1]);
  CHECK_FALSE(torus.domain().periodic[0]);
  CHECK(torus.domain().wrap(Vec::Constant(3, 1.5))(1) == doctest::Approx(-0.5));
}
