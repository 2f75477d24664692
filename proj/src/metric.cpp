#include "spintractor/metric.hpp"

#include <atomic>
#include <cmath>
#include <string>

#include <unsupported/Eigen/AutoDiff>

namespace spintractor {

// ---------------------------------------------------------------- Box

Box Box::cube(int n, double half_width) {
  Box b;
  b.lo = Vec::Constant(n, -half_width);
  b.hi = Vec::Constant(n, half_width);
  b.periodic.assign(static_cast<std::size_t>(n), false);
  return b;
}

bool Box::contains(const Vec& x) const {
  if (x.size() != lo.size()) return false;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (periodic.size() > static_cast<std::size_t>(i) && periodic[static_cast<std::size_t>(i)]) continue;
    if (x(i) < lo(i) || x(i) > hi(i)) return false;
  }
  return true;
}

Vec Box::wrap(const Vec& x) const {
  Vec out = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (periodic.size() <= static_cast<std::size_t>(i) || !periodic[static_cast<std::size_t>(i)]) continue;
    const double len = hi(i) - lo(i);
    out(i) = lo(i) + std::fmod(std::fmod(x(i) - lo(i), len) + len, len);
  }
  return out;
}

// ---------------------------------------------------------------- families

SeedJet MetricFamily::frame_seed(const Vec&) const {
  const int n = dim();
  return {Mat::Identity(n, n), std::vector<Mat>(static_cast<std::size_t>(n), Mat::Zero(n, n))};
}

const char* to_string(FamilyTag t) {
  switch (t) {
    case FamilyTag::minkowski: return "minkowski";
    case FamilyTag::pp_wave: return "pp_wave";
    case FamilyTag::static_product: return "static_product";
    case FamilyTag::rescaled: return "rescaled";
  }
  return "unknown";
}

namespace {

MetricJet zero_jet(int n) {
  MetricJet j;
  j.g = Mat::Zero(n, n);
  j.dg.assign(static_cast<std::size_t>(n), Mat::Zero(n, n));
  j.d2g.assign(static_cast<std::size_t>(n), std::vector<Mat>(static_cast<std::size_t>(n), Mat::Zero(n, n)));
  return j;
}

class FlatFamily final : public MetricFamily {
 public:
  explicit FlatFamily(int n) : n_(n) {}
  int dim() const override { return n_; }
  MetricJet jet(const Vec&) const override {
    MetricJet j = zero_jet(n_);
    j.g = Mat::Identity(n_, n_);
    j.g(0, 0) = -1.0;
    return j;
  }
  bool constant_frame() const override { return true; }

 private:
  int n_;
};

class PpWaveFamily final : public MetricFamily {
 public:
  PpWaveFamily(int n, Profile h) : n_(n), h_(std::move(h)) {}
  int dim() const override { return n_; }

  MetricJet jet(const Vec& x) const override {
    MetricJet j = zero_jet(n_);
    j.g = Mat::Identity(n_, n_);
    j.g(0, 0) = h_.value(x);
    j.g(1, 1) = 0.0;
    j.g(0, 1) = j.g(1, 0) = 1.0;
    const Vec dh = h_.gradient(x);
    const Mat d2h = h_.hessian(x);
    for (int k = 0; k < n_; ++k) {
      j.dg[static_cast<std::size_t>(k)](0, 0) = dh(k);
      for (int l = 0; l < n_; ++l) j.d2g[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)](0, 0) = d2h(k, l);
    }
    return j;
  }

  // Null-adapted frame: k = ∂_v, ℓ = ∂_u − (H/2)∂_v,
  // e_0 = (k − ℓ)/√2, e_1 = (k + ℓ)/√2, e_i = ∂_i.
  SeedJet frame_seed(const Vec& x) const override {
    const double s = 1.0 / std::sqrt(2.0);
    const double h = h_.value(x);
    const Vec dh = h_.gradient(x);
    SeedJet sj;
    sj.seed = Mat::Identity(n_, n_);
    sj.seed(0, 0) = -s;
    sj.seed(1, 0) = s * (1.0 + 0.5 * h);
    sj.seed(0, 1) = s;
    sj.seed(1, 1) = s * (1.0 - 0.5 * h);
    sj.dseed.assign(static_cast<std::size_t>(n_), Mat::Zero(n_, n_));
    for (int k = 0; k < n_; ++k) {
      sj.dseed[static_cast<std::size_t>(k)](1, 0) = 0.5 * s * dh(k);
      sj.dseed[static_cast<std::size_t>(k)](1, 1) = -0.5 * s * dh(k);
    }
    return sj;
  }

 private:
  int n_;
  Profile h_;
};

class RescaledFamily final : public MetricFamily {
 public:
  RescaledFamily(std::shared_ptr<const MetricFamily> base, RescaleFunction f)
      : base_(std::move(base)), f_(std::move(f)) {}
  int dim() const override { return base_->dim(); }

  MetricJet jet(const Vec& x) const override {
    const int n = dim();
    const MetricJet b = base_->jet(x);
    const double w = std::exp(2.0 * f_.value(x));
    const Vec df = f_.gradient(x);
    const Mat d2f = f_.hessian(x);
    MetricJet j = zero_jet(n);
    j.g = w * b.g;
    for (int k = 0; k < n; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      j.dg[ku] = w * (2.0 * df(k) * b.g + b.dg[ku]);
      for (int l = 0; l < n; ++l) {
        const auto lu = static_cast<std::size_t>(l);
        j.d2g[ku][lu] = w * ((4.0 * df(k) * df(l) + 2.0 * d2f(k, l)) * b.g + 2.0 * df(k) * b.dg[lu] +
                             2.0 * df(l) * b.dg[ku] + b.d2g[ku][lu]);
      }
    }
    return j;
  }
  SeedJet frame_seed(const Vec& x) const override { return base_->frame_seed(x); }

 private:
  std::shared_ptr<const MetricFamily> base_;
  RescaleFunction f_;
};

std::atomic<GaugeId> next_gauge{1};

using AD = Eigen::AutoDiffScalar<Vec>;
using ADMat = Eigen::Matrix<AD, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
Scalar bilinear(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& g,
                const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& a,
                const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& b) {
  Scalar acc = a(0) * 0.0;
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j) acc += a(i) * g(i, j) * b(j);
  return acc;
}

double plain(double v) { return v; }
double plain(const AD& v) { return v.value(); }

// Pseudo-Gram–Schmidt in column order: e_0 timelike, the rest spacelike.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> gram_schmidt(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& g,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& seed) {
  using std::sqrt;
  using V = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index n = g.rows();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> e = seed;
  for (Eigen::Index a = 0; a < n; ++a) {
    V v = seed.col(a);
    for (Eigen::Index b = 0; b < a; ++b) {
      const double eps_b = b == 0 ? -1.0 : 1.0;
      const V eb = e.col(b);
      const Scalar proj = bilinear<Scalar>(g, v, eb) * eps_b;
      for (Eigen::Index k = 0; k < n; ++k) v(k) -= proj * eb(k);
    }
    const double eps_a = a == 0 ? -1.0 : 1.0;
    const Scalar norm2 = bilinear<Scalar>(g, v, v) * eps_a;
    if (!(plain(norm2) > 1e-14)) throw DegenerateMetric("frame seed " + std::to_string(a) + " degenerate");
    const Scalar inv = 1.0 / sqrt(norm2);
    for (Eigen::Index k = 0; k < n; ++k) e(k, a) = v(k) * inv;
  }
  return e;
}

}  // namespace

// ---------------------------------------------------------------- patch

MetricPatch::MetricPatch(std::shared_ptr<const MetricFamily> family, Box domain, FamilyTag tag)
    : family_(std::move(family)), domain_(std::move(domain)), tag_(tag), gauge_(next_gauge++) {
  if (domain_.dim() != family_->dim()) throw DimensionMismatch("chart domain dimension mismatch");
  if (domain_.periodic.size() != static_cast<std::size_t>(domain_.dim()))
    domain_.periodic.assign(static_cast<std::size_t>(domain_.dim()), false);
}

bool MetricPatch::lorentzian_at(const Vec& x) const {
  const Mat g = family_->jet(x).g;
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, g.cwiseAbs().maxCoeff()))
    return false;
  Eigen::SelfAdjointEigenSolver<Mat> es(g, Eigen::EigenvaluesOnly);
  const Vec ev = es.eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  int negative = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) <= 1e-12 * scale) return false;
    if (ev(i) < 0.0) ++negative;
  }
  return negative == 1;
}

void MetricPatch::require_inside(const Vec& x) const {
  if (x.size() != dim()) throw DimensionMismatch("point dimension does not match chart");
  if (!domain_.contains(x)) throw DomainError("point outside chart domain");
}

// ---------------------------------------------------------------- rescale function

RescaleFunction RescaleFunction::zero(int n) {
  RescaleFunction f;
  f.b_ = Vec::Zero(n);
  f.q_ = Mat::Zero(n, n);
  f.center_ = Vec::Zero(n);
  return f;
}

RescaleFunction RescaleFunction::linear(double c0, Vec b) {
  RescaleFunction f = zero(static_cast<int>(b.size()));
  f.c0_ = c0;
  f.b_ = std::move(b);
  f.kind_ = "linear";
  return f;
}

RescaleFunction RescaleFunction::quadratic(double c0, Vec b, Mat q) {
  if (q.rows() != b.size() || q.cols() != b.size()) throw DimensionMismatch("quadratic rescale size mismatch");
  RescaleFunction f = linear(c0, std::move(b));
  f.q_ = 0.5 * (q + q.transpose());
  f.kind_ = "quadratic";
  return f;
}

RescaleFunction RescaleFunction::bump(double amplitude, Vec center, double width) {
  if (!(width > 0.0)) throw DomainError("bump width must be positive");
  RescaleFunction f = zero(static_cast<int>(center.size()));
  f.amp_ = amplitude;
  f.center_ = std::move(center);
  f.width_ = width;
  f.kind_ = "bump";
  return f;
}

double RescaleFunction::value(const Vec& x) const {
  double v = c0_ + b_.dot(x) + 0.5 * x.dot(q_ * x);
  if (amp_ != 0.0) v += amp_ * std::exp(-(x - center_).squaredNorm() / (width_ * width_));
  return v;
}

Vec RescaleFunction::gradient(const Vec& x) const {
  Vec g = b_ + q_ * x;
  if (amp_ != 0.0) {
    const double w2 = width_ * width_;
    const double e = amp_ * std::exp(-(x - center_).squaredNorm() / w2);
    g += e * (-2.0 / w2) * (x - center_);
  }
  return g;
}

Mat RescaleFunction::hessian(const Vec& x) const {
  Mat h = q_;
  if (amp_ != 0.0) {
    const double w2 = width_ * width_;
    const Vec d = x - center_;
    const double e = amp_ * std::exp(-d.squaredNorm() / w2);
    h += e * ((4.0 / (w2 * w2)) * d * d.transpose() - (2.0 / w2) * Mat::Identity(d.size(), d.size()));
  }
  return h;
}

RescaleFunction RescaleFunction::negated() const {
  RescaleFunction f = *this;
  f.c0_ = -c0_;
  f.b_ = -b_;
  f.q_ = -q_;
  f.amp_ = -amp_;
  return f;
}

nlohmann::json RescaleFunction::to_json() const {
  nlohmann::json j;
  j["kind"] = kind_;
  j["c0"] = c0_;
  j["b"] = std::vector<double>(b_.data(), b_.data() + b_.size());
  if (kind_ == "quadratic") {
    nlohmann::json q = nlohmann::json::array();
    for (Eigen::Index i = 0; i < q_.rows(); ++i) {
      std::vector<double> row(static_cast<std::size_t>(q_.cols()));
      for (Eigen::Index k = 0; k < q_.cols(); ++k) row[static_cast<std::size_t>(k)] = q_(i, k);
      q.push_back(row);
    }
    j["q"] = q;
  }
  if (kind_ == "bump") {
    j["amplitude"] = amp_;
    j["center"] = std::vector<double>(center_.data(), center_.data() + center_.size());
    j["width"] = width_;
  }
  return j;
}

namespace {

Vec vec_from_json(const nlohmann::json& j, int n, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    throw DomainError(std::string(what) + " must be an array of length " + std::to_string(n));
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = j.at(static_cast<std::size_t>(i)).get<double>();
  return v;
}

}  // namespace

RescaleFunction RescaleFunction::from_json(const nlohmann::json& j, int n) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "zero") return zero(n);
    const double c0 = j.value("c0", 0.0);
    if (kind == "linear") return linear(c0, vec_from_json(j.at("b"), n, "rescale.b"));
    if (kind == "quadratic") {
      Mat q(n, n);
      const auto& jq = j.at("q");
      if (!jq.is_array() || static_cast<int>(jq.size()) != n) throw DomainError("rescale.q must be n×n");
      for (int i = 0; i < n; ++i) q.row(i) = vec_from_json(jq.at(static_cast<std::size_t>(i)), n, "rescale.q row");
      const Vec b = j.contains("b") ? vec_from_json(j.at("b"), n, "rescale.b") : Vec::Zero(n);
      return quadratic(c0, b, q);
    }
    if (kind == "bump")
      return bump(j.at("amplitude").get<double>(), vec_from_json(j.at("center"), n, "rescale.center"),
                  j.at("width").get<double>());
    throw DomainError("unknown rescale kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed rescale descriptor: ") + e.what());
  }
}

// ---------------------------------------------------------------- profiles

Profile polynomial_profile(int n, const std::vector<std::vector<double>>& terms) {
  struct Term {
    double c;
    std::vector<int> e;  // exponent per coordinate; v exponent always 0
  };
  std::vector<Term> parsed;
  for (const auto& t : terms) {
    if (static_cast<int>(t.size()) != n) throw DomainError("profile term must have n entries {c, k_u, e_2..e_{n-1}}");
    Term term{t[0], std::vector<int>(static_cast<std::size_t>(n), 0)};
    int transverse = 0;
    for (int i = 1; i < n; ++i) {
      const double e = t[static_cast<std::size_t>(i)];
      if (e < 0.0 || e != std::floor(e)) throw DomainError("profile exponents must be non-negative integers");
      const int coord = i == 1 ? 0 : i;  // slot 1 holds the u exponent
      term.e[static_cast<std::size_t>(coord)] = static_cast<int>(e);
      if (coord >= 2) transverse += static_cast<int>(e);
    }
    if (transverse > 4 || term.e[0] > 4) throw DomainError("profile degree exceeds the closed-form whitelist (≤ 4)");
    parsed.push_back(std::move(term));
  }

  auto monomial = [](const Vec& x, const std::vector<int>& e) {
    double m = 1.0;
    for (std::size_t i = 0; i < e.size(); ++i) m *= std::pow(x(static_cast<Eigen::Index>(i)), e[i]);
    return m;
  };
  auto with_power_dropped = [](std::vector<int> e, std::size_t i) -> std::pair<double, std::vector<int>> {
    const double factor = e[i];
    if (e[i] > 0) --e[i];
    return {factor, e};
  };

  Profile p;
  p.value = [parsed, monomial](const Vec& x) {
    double v = 0.0;
    for (const auto& t : parsed) v += t.c * monomial(x, t.e);
    return v;
  };
  p.gradient = [parsed, monomial, with_power_dropped, n](const Vec& x) {
    Vec g = Vec::Zero(n);
    for (const auto& t : parsed)
      for (int i = 0; i < n; ++i) {
        auto [f, e] = with_power_dropped(t.e, static_cast<std::size_t>(i));
        if (f != 0.0) g(i) += t.c * f * monomial(x, e);
      }
    return g;
  };
  p.hessian = [parsed, monomial, with_power_dropped, n](const Vec& x) {
    Mat h = Mat::Zero(n, n);
    for (const auto& t : parsed)
      for (int i = 0; i < n; ++i) {
        auto [fi, ei] = with_power_dropped(t.e, static_cast<std::size_t>(i));
        if (fi == 0.0) continue;
        for (int j = 0; j < n; ++j) {
          auto [fj, eij] = with_power_dropped(ei, static_cast<std::size_t>(j));
          if (fj != 0.0) h(i, j) += t.c * fi * fj * monomial(x, eij);
        }
      }
    return h;
  };
  return p;
}

Profile quadratic_profile(const Mat& a) {
  const Eigen::Index m = a.rows();
  if (a.cols() != m) throw DimensionMismatch("quadratic profile matrix must be square");
  const Mat s = 0.5 * (a + a.transpose());
  const Eigen::Index n = m + 2;
  Profile p;
  p.value = [s](const Vec& x) {
    const Vec xt = x.tail(s.rows());
    return xt.dot(s * xt);
  };
  p.gradient = [s, n](const Vec& x) {
    Vec g = Vec::Zero(n);
    g.tail(s.rows()) = 2.0 * s * x.tail(s.rows());
    return g;
  };
  p.hessian = [s, n](const Vec&) {
    Mat h = Mat::Zero(n, n);
    h.bottomRightCorner(s.rows(), s.rows()) = 2.0 * s;
    return h;
  };
  return p;
}

// ---------------------------------------------------------------- constructors

MetricPatch make_minkowski(int n, const Box& domain) {
  if (n < 3 || n > 6) throw DomainError("Minkowski dimension must be in [3, 6]");
  return MetricPatch(std::make_shared<FlatFamily>(n), domain, FamilyTag::minkowski);
}

namespace {

// Central-difference consistency of a profile's analytic derivatives.
void check_profile(int n, const Profile& h, const Box& domain) {
  const double step = 1e-4;
  for (int probe = 0; probe < 7; ++probe) {
    Vec x(n);
    for (int i = 0; i < n; ++i) {
      const double t = (0.13 + 0.11 * probe + 0.07 * i);
      const double frac = t - std::floor(t);
      x(i) = domain.lo(i) + frac * (domain.hi(i) - domain.lo(i));
    }
    const Vec g = h.gradient(x);
    const Mat hs = h.hessian(x);
    if (g.size() != n || hs.rows() != n || hs.cols() != n) throw DomainError("profile derivative shape mismatch");
    for (int k = 0; k < n; ++k) {
      Vec xp = x, xm = x;
      xp(k) += step;
      xm(k) -= step;
      const double fd = (h.value(xp) - h.value(xm)) / (2.0 * step);
      const Vec fdg = (h.gradient(xp) - h.gradient(xm)) / (2.0 * step);
      const double scale = 1.0 + std::abs(g(k)) + hs.col(k).cwiseAbs().maxCoeff();
      if (std::abs(fd - g(k)) > 1e-6 * scale || (fdg - hs.col(k)).cwiseAbs().maxCoeff() > 1e-6 * scale)
        throw DomainError("pp-wave profile derivatives inconsistent with finite differences");
    }
    if (std::abs(g(1)) > 1e-12) throw DomainError("pp-wave profile must not depend on v");
  }
}

}  // namespace

MetricPatch make_pp_wave(int n, Profile h, const Box& domain) {
  if (n < 3) throw DomainError("pp-wave dimension must be at least 3");
  if (!h.value || !h.gradient || !h.hessian) throw DomainError("pp-wave profile needs value, gradient and Hessian");
  check_profile(n, h, domain);
  return MetricPatch(std::make_shared<PpWaveFamily>(n, std::move(h)), domain, FamilyTag::pp_wave);
}

MetricPatch make_static_product(int n, SpatialFactor h, const Box& domain) {
  if (n < 3) throw DomainError("static product dimension must be at least 3");
  Box b = domain;
  b.periodic.assign(static_cast<std::size_t>(n), false);
  if (h == SpatialFactor::torus_box)
    for (int i = 1; i < n; ++i) b.periodic[static_cast<std::size_t>(i)] = true;
  return MetricPatch(std::make_shared<FlatFamily>(n), b, FamilyTag::static_product);
}

MetricPatch rescale(const MetricPatch& patch, const RescaleFunction& f) {
  if (f.dim() != patch.dim()) throw DomainError("rescale function chart does not match patch");
  return MetricPatch(std::make_shared<RescaledFamily>(patch.family_ptr(), f), patch.domain(), FamilyTag::rescaled);
}

// ---------------------------------------------------------------- frames

FrameField make_frame(const MetricPatch& patch) { return FrameField(patch); }

Mat FrameField::at(const Vec& x) const {
  const MetricJet j = patch_.jet(x);
  return gram_schmidt<double>(j.g, patch_.frame_seed(x).seed);
}

FrameJet FrameField::jet(const Vec& x) const {
  const int n = patch_.dim();
  const MetricJet mj = patch_.jet(x);
  const SeedJet sj = patch_.frame_seed(x);
  ADMat g(n, n), seed(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      Vec dgik(n), dsik(n);
      for (int l = 0; l < n; ++l) {
        dgik(l) = mj.dg[static_cast<std::size_t>(l)](i, k);
        dsik(l) = sj.dseed[static_cast<std::size_t>(l)](i, k);
      }
      g(i, k) = AD(mj.g(i, k), dgik);
      seed(i, k) = AD(sj.seed(i, k), dsik);
    }
  const ADMat e = gram_schmidt<AD>(g, seed);
  FrameJet fj;
  fj.e.resize(n, n);
  fj.de.assign(static_cast<std::size_t>(n), Mat::Zero(n, n));
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a) {
      fj.e(i, a) = e(i, a).value();
      const Vec& d = e(i, a).derivatives();
      for (int l = 0; l < n && l < d.size(); ++l) fj.de[static_cast<std::size_t>(l)](i, a) = d(l);
    }
  return fj;
}

// ---------------------------------------------------------------- JSON

MetricPatch patch_from_json(const nlohmann::json& j) {
  try {
    const std::string family = j.at("family").get<std::string>();
    const int n = j.at("dim").get<int>();
    if (n < 3 || n > 12) throw DomainError("family dimension out of range");
    Box box = Box::cube(n, 1.0);
    if (j.contains("domain")) {
      const auto& d = j.at("domain");
      if (!d.is_array() || static_cast<int>(d.size()) != n) throw DomainError("domain must list one [lo,hi] per axis");
      for (int i = 0; i < n; ++i) {
        const auto& r = d.at(static_cast<std::size_t>(i));
        box.lo(i) = r.at(0).get<double>();
        box.hi(i) = r.at(1).get<double>();
        if (!(box.lo(i) < box.hi(i))) throw DomainError("domain interval must satisfy lo < hi");
      }
    }
    if (family == "minkowski") return make_minkowski(n, box);
    if (family == "static_product") {
      const std::string h = j.value("h", std::string("flat"));
      if (h != "flat" && h != "torus_box") throw DomainError("static_product h must be flat or torus_box");
      return make_static_product(n, h == "flat" ? SpatialFactor::flat : SpatialFactor::torus_box, box);
    }
    if (family == "pp_wave") {
      const std::string profile = j.at("profile").get<std::string>();
      const auto& coeffs = j.at("coeffs");
      if (profile == "quadratic") {
        const int m = n - 2;
        if (!coeffs.is_array() || static_cast<int>(coeffs.size()) != m * m)
          throw DomainError("quadratic profile needs (n-2)^2 coefficients");
        Mat a(m, m);
        for (int r = 0; r < m; ++r)
          for (int c = 0; c < m; ++c) a(r, c) = coeffs.at(static_cast<std::size_t>(r * m + c)).get<double>();
        return make_pp_wave(n, quadratic_profile(a), box);
      }
      if (profile == "polynomial")
        return make_pp_wave(n, polynomial_profile(n, coeffs.get<std::vector<std::vector<double>>>()), box);
      throw DomainError("unknown pp-wave profile '" + profile + "'");
    }
    throw DomainError("unknown metric family '" + family + "'");
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed family descriptor: ") + e.what());
  }
}

}  // namespace spintractor
