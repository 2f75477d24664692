#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "spintractor/types.hpp"

namespace spintractor {

/// Axis-aligned coordinate box. Axes flagged periodic wrap when sampling.
struct Box {
  Vec lo;
  Vec hi;
  std::vector<bool> periodic;

  static Box cube(int n, double half_width);
  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const Vec& x) const;
  Vec center() const { return 0.5 * (lo + hi); }
  Vec wrap(const Vec& x) const;
};

/// g, ∂_k g and ∂_k∂_l g at a point: dg[k] = ∂_k g, d2g[k][l] = ∂_k∂_l g.
struct MetricJet {
  Mat g;
  std::vector<Mat> dg;
  std::vector<std::vector<Mat>> d2g;
};

/// Frame seed vectors (columns, coordinate components) and their partials.
/// Pseudo-Gram–Schmidt of the seeds in column order yields the frame; the
/// first seed must be timelike and future-directed.
struct SeedJet {
  Mat seed;
  std::vector<Mat> dseed;
};

/// Closed-form metric coefficients with analytic derivatives.
class MetricFamily {
 public:
  virtual ~MetricFamily() = default;
  virtual int dim() const = 0;
  virtual MetricJet jet(const Vec& x) const = 0;
  virtual SeedJet frame_seed(const Vec& x) const;
  /// True if the Gram–Schmidt frame does not depend on the point.
  virtual bool constant_frame() const { return false; }
};

enum class FamilyTag { minkowski, pp_wave, static_product, rescaled };

const char* to_string(FamilyTag t);

/// A coordinate chart carrying a Lorentzian metric family.
class MetricPatch {
 public:
  MetricPatch(std::shared_ptr<const MetricFamily> family, Box domain, FamilyTag tag);

  int dim() const { return family_->dim(); }
  const Box& domain() const { return domain_; }
  FamilyTag tag() const { return tag_; }
  GaugeId gauge() const { return gauge_; }
  const MetricFamily& family() const { return *family_; }
  std::shared_ptr<const MetricFamily> family_ptr() const { return family_; }

  Mat g(const Vec& x) const { return family_->jet(x).g; }
  MetricJet jet(const Vec& x) const { return family_->jet(x); }
  SeedJet frame_seed(const Vec& x) const { return family_->frame_seed(x); }
  bool constant_frame() const { return family_->constant_frame(); }

  /// Signature (1, n−1) by eigenvalue sign count.
  bool lorentzian_at(const Vec& x) const;
  /// Throws DomainError if x lies outside the chart.
  void require_inside(const Vec& x) const;

 private:
  std::shared_ptr<const MetricFamily> family_;
  Box domain_;
  FamilyTag tag_;
  GaugeId gauge_;
};

/// Scalar function with gradient and Hessian. Realized in closed form as
///   f(x) = c0 + b·x + ½ xᵀQx + a·exp(−|x − center|²/w²).
class RescaleFunction {
 public:
  static RescaleFunction zero(int n);
  static RescaleFunction linear(double c0, Vec b);
  static RescaleFunction quadratic(double c0, Vec b, Mat q);
  static RescaleFunction bump(double amplitude, Vec center, double width);

  int dim() const { return static_cast<int>(b_.size()); }
  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  Mat hessian(const Vec& x) const;
  RescaleFunction negated() const;
  nlohmann::json to_json() const;
  static RescaleFunction from_json(const nlohmann::json& j, int n);

 private:
  double c0_ = 0.0;
  Vec b_;
  Mat q_;
  double amp_ = 0.0;
  Vec center_;
  double width_ = 1.0;
  std::string kind_ = "zero";
};

/// Profile H of a pp-wave, a function of (u, v, x_2, …, x_{n−1}) that must
/// not depend on v.
struct Profile {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  std::function<Mat(const Vec&)> hessian;
};

/// Σ c·u^{k}·Π x_i^{e_i}; each term is {c, k, e_2, …, e_{n−1}}.
/// Transverse degree ≤ 4 and u-degree ≤ 4 per term.
Profile polynomial_profile(int n, const std::vector<std::vector<double>>& terms);
/// H = x_⊥ᵀ A x_⊥ with A an (n−2)×(n−2) matrix.
Profile quadratic_profile(const Mat& a);

MetricPatch make_minkowski(int n, const Box& domain);
inline MetricPatch make_minkowski(int n) { return make_minkowski(n, Box::cube(n, 1.0)); }

/// 2du dv + H du² + Σ dx_i² in coordinates (u, v, x_2, …). Checks the
/// profile's derivatives against central differences on a probe set and throws
/// DomainError on inconsistency.
MetricPatch make_pp_wave(int n, Profile h, const Box& domain);

enum class SpatialFactor { flat, torus_box };
/// −dt² + h, h flat; torus_box marks the spatial axes periodic.
MetricPatch make_static_product(int n, SpatialFactor h, const Box& domain);

/// e^{2f} g with partials by the product rule.
MetricPatch rescale(const MetricPatch& patch, const RescaleFunction& f);

/// Pseudo-orthonormal frame and its coordinate partials; e.col(a) is e_a.
struct FrameJet {
  Mat e;
  std::vector<Mat> de;
};

/// Pointwise frame field obtained by pseudo-Gram–Schmidt of the patch's seeds.
class FrameField {
 public:
  explicit FrameField(MetricPatch patch) : patch_(std::move(patch)) {}
  Mat at(const Vec& x) const;
  FrameJet jet(const Vec& x) const;
  const MetricPatch& patch() const { return patch_; }

 private:
  MetricPatch patch_;
};

FrameField make_frame(const MetricPatch& patch);

/// Build a patch from a family descriptor such as
///   {"family":"pp_wave","dim":4,"profile":"quadratic","coeffs":[…],"domain":[[lo,hi],…]}
/// Throws DomainError on malformed input.
MetricPatch patch_from_json(const nlohmann::json& j);

}  // namespace spintractor
