#include "spintractor/zero_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <set>

#include <Eigen/SVD>

#include "spintractor/parallel.hpp"

namespace spintractor {

namespace {

std::size_t u(int i) { return static_cast<std::size_t>(i); }

// Joint state: position, velocity, transported frame and optionally the
// spinor components with their first derivative.
struct Flow {
  Vec x;
  Vec v;
  Mat f;
  Spinor s;
  Spinor w;
};

Flow advance(const Flow& a, double h, const Flow& d) {
  Flow r{a.x + h * d.x, a.v + h * d.v, a.f + h * d.f, a.s, a.w};
  if (a.s.size() > 0) {
    r.s += h * d.s;
    r.w += h * d.w;
  }
  return r;
}

class FlowRhs {
 public:
  FlowRhs(const MetricPatch& patch, const CliffordRep* rep) : patch_(patch), rep_(rep) {}

  Flow operator()(const Flow& y) const {
    const int n = patch_.dim();
    const Vec xw = patch_.domain().wrap(y.x);
    const auto gam = christoffel_symbols(patch_, xw);
    Flow d;
    d.x = y.v;
    d.v.resize(n);
    d.f.resize(n, n);
    for (int k = 0; k < n; ++k) {
      const Vec gv = gam[u(k)] * y.v;
      d.v(k) = -y.v.dot(gv);
      d.f.row(k) = -gv.transpose() * y.f;
    }
    if (rep_ != nullptr) {
      d.s = y.w;
      const SchoutenAt sch = riemann_ricci_scal(patch_, xw);
      const Eigen::PartialPivLU<Mat> f_lu(y.f);
      const Vec c = f_lu.solve(y.v);
      const Vec p = f_lu.solve(sch.frame * (sch.schouten * sch.frame.partialPivLu().solve(y.v)));
      d.w = -0.5 * (rep_->vector_action(c) * (rep_->vector_action(p) * y.s));
    }
    return d;
  }

 private:
  const MetricPatch& patch_;
  const CliffordRep* rep_;
};

Flow rk4(const FlowRhs& rhs, const Flow& y, double h) {
  const Flow k1 = rhs(y);
  const Flow k2 = rhs(advance(y, 0.5 * h, k1));
  const Flow k3 = rhs(advance(y, 0.5 * h, k2));
  const Flow k4 = rhs(advance(y, h, k3));
  return advance(advance(advance(advance(y, h / 6.0, k1), h / 3.0, k2), h / 3.0, k3), h / 6.0, k4);
}

struct Run {
  std::vector<std::pair<double, Flow>> samples;  // excludes the start
  bool hit_boundary = false;
};

Run run_flow(const MetricPatch& patch, const FlowRhs& rhs, Flow y, double h, std::size_t steps) {
  Run r;
  r.samples.reserve(steps);
  for (std::size_t k = 1; k <= steps; ++k) {
    y = rk4(rhs, y, h);
    y.x = patch.domain().wrap(y.x);
    if (!patch.domain().contains(y.x)) {
      r.hit_boundary = true;
      break;
    }
    r.samples.emplace_back(static_cast<double>(k) * h, y);
  }
  return r;
}

std::size_t step_count(double span, double h) { return static_cast<std::size_t>(std::floor(span / h + 1e-9)); }

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

// min ‖H(s)‖ of the cubic Hermite interpolant on [t0, t1]
std::pair<double, double> hermite_min(double t0, double t1, const Spinor& p0, const Spinor& m0, const Spinor& p1,
                                      const Spinor& m1) {
  const double h = t1 - t0;
  auto eval = [&](double s) {
    const double s2 = s * s, s3 = s2 * s;
    return ((2 * s3 - 3 * s2 + 1) * p0 + (s3 - 2 * s2 + s) * h * m0 + (-2 * s3 + 3 * s2) * p1 + (s3 - s2) * h * m1)
        .norm();
  };
  constexpr int kCoarse = 32;
  int best = 0;
  double best_v = eval(0.0);
  for (int i = 1; i <= kCoarse; ++i) {
    const double v = eval(static_cast<double>(i) / kCoarse);
    if (v < best_v) {
      best_v = v;
      best = i;
    }
  }
  double a = std::max(0.0, (best - 1.0) / kCoarse), b = std::min(1.0, (best + 1.0) / kCoarse);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = eval(c), fd = eval(d);
  for (int it = 0; it < 80; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = eval(d);
    }
  }
  const double s = 0.5 * (a + b);
  const double v = eval(s);
  if (best_v <= v) return {t0 + h * best / kCoarse, best_v};
  return {t0 + h * s, v};
}

std::pair<double, double> refine_at(const PropagatedSpinor& p, std::size_t k) {
  std::pair<double, double> best{p.t[k], p.u[k].norm()};
  if (k > 0) {
    const auto r = hermite_min(p.t[k - 1], p.t[k], p.u[k - 1], p.udot[k - 1], p.u[k], p.udot[k]);
    if (r.second < best.second) best = r;
  }
  if (k + 1 < p.t.size()) {
    const auto r = hermite_min(p.t[k], p.t[k + 1], p.u[k], p.udot[k], p.u[k + 1], p.udot[k + 1]);
    if (r.second < best.second) best = r;
  }
  return best;
}

nlohmann::json vec_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

}  // namespace

Geodesic integrate_geodesic(const MetricPatch& patch, const Vec& x0, const Vec& v0, double t_min, double t_max,
                            double step) {
  const int n = patch.dim();
  if (v0.size() != n) throw DimensionMismatch("initial velocity dimension mismatch");
  if (!(step > 0.0) || t_min > 0.0 || t_max < 0.0) throw DomainError("need step > 0 and t_min ≤ 0 ≤ t_max");
  patch.require_inside(x0);
  const FlowRhs rhs(patch, nullptr);
  const Flow y0{x0, v0, make_frame(patch).at(x0), Spinor(), Spinor()};
  const Run fwd = run_flow(patch, rhs, y0, step, step_count(t_max, step));
  const Run bwd = run_flow(patch, rhs, y0, -step, step_count(-t_min, step));
  Geodesic g;
  g.step = step;
  g.hit_boundary_forward = fwd.hit_boundary;
  g.hit_boundary_backward = bwd.hit_boundary;
  g.states.reserve(fwd.samples.size() + bwd.samples.size() + 1);
  for (auto it = bwd.samples.rbegin(); it != bwd.samples.rend(); ++it)
    g.states.push_back({it->first, it->second.x, it->second.v, it->second.f});
  g.zero_index = g.states.size();
  g.states.push_back({0.0, y0.x, y0.v, y0.f});
  for (const auto& [t, y] : fwd.samples) g.states.push_back({t, y.x, y.v, y.f});
  return g;
}

PropagatedSpinor propagate_spinor(const MetricPatch& patch, const CliffordRep& rep, const Geodesic& geodesic,
                                  const Spinor& phi0, const Spinor& dphi0) {
  if (phi0.size() != rep.spinor_dim() || dphi0.size() != rep.spinor_dim())
    throw DimensionMismatch("spinor length mismatch");
  const GeodesicState& s0 = geodesic.states.at(geodesic.zero_index);
  const Vec c0 = s0.frame.partialPivLu().solve(s0.xdot);
  const Spinor w0 = -(1.0 / patch.dim()) * (rep.vector_action(c0) * dphi0);
  const FlowRhs rhs(patch, &rep);
  const Flow y0{s0.x, s0.xdot, s0.frame, phi0, w0};
  const std::size_t n_fwd = geodesic.states.size() - geodesic.zero_index - 1;
  const Run fwd = run_flow(patch, rhs, y0, geodesic.step, n_fwd);
  const Run bwd = run_flow(patch, rhs, y0, -geodesic.step, geodesic.zero_index);
  PropagatedSpinor p;
  for (auto it = bwd.samples.rbegin(); it != bwd.samples.rend(); ++it) {
    p.t.push_back(it->first);
    p.u.push_back(it->second.s);
    p.udot.push_back(it->second.w);
  }
  p.t.push_back(0.0);
  p.u.push_back(phi0);
  p.udot.push_back(w0);
  for (const auto& [t, y] : fwd.samples) {
    p.t.push_back(t);
    p.u.push_back(y.s);
    p.udot.push_back(y.w);
  }
  return p;
}

ZeroDetection detect_zeros(const PropagatedSpinor& prop, double tol) {
  ZeroDetection out;
  const std::size_t m = prop.t.size();
  if (m == 0) return out;
  std::vector<double> norms(m);
  for (std::size_t k = 0; k < m; ++k) norms[k] = prop.u[k].norm();
  out.tol = tol > 0.0 ? tol : std::max(1e-8 * median(norms), 1e-12);
  double step = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < m; ++k) step = std::min(step, prop.t[k] - prop.t[k - 1]);

  std::vector<std::pair<double, double>> found;  // (t, ‖U‖)
  for (std::size_t k = 0; k < m;) {
    if (norms[k] > out.tol) {
      ++k;
      continue;
    }
    std::size_t j = k;
    while (j + 1 < m && norms[j + 1] <= out.tol) ++j;
    if (j - k + 1 >= 3) {
      out.segments.emplace_back(prop.t[k], prop.t[j]);
    } else {
      const std::size_t best = norms[k] <= norms[j] ? k : j;
      found.push_back(refine_at(prop, best));
    }
    k = j + 1;
  }
  for (std::size_t k = 0; k < m; ++k) {
    if (norms[k] <= out.tol || m == 1) continue;
    const bool left = k == 0 || norms[k] <= norms[k - 1];
    const bool right = k + 1 == m || norms[k] <= norms[k + 1];
    if (!(left && right)) continue;
    const auto r = refine_at(prop, k);
    if (r.second <= out.tol) found.push_back(r);
  }
  std::sort(found.begin(), found.end());
  for (const auto& [t, v] : found) {
    bool in_segment = false;
    for (const auto& [a, b] : out.segments) in_segment |= t >= a - step && t <= b + step;
    if (in_segment) continue;
    if (!out.zeros.empty() && t - out.zeros.back() <= step * (1 + 1e-9)) continue;
    out.zeros.push_back(t);
  }
  return out;
}

std::vector<Vec> sphere_directions(int m, int count, std::uint64_t seed) {
  if (m < 1 || count < 1) throw DomainError("sphere sampling needs m ≥ 1 and count ≥ 1");
  std::vector<Vec> out;
  out.reserve(u(count));
  if (m == 1) {
    for (int k = 0; k < count; ++k) out.push_back(Vec::Constant(1, k % 2 == 0 ? 1.0 : -1.0));
  } else if (m == 2) {
    for (int k = 0; k < count; ++k) {
      const double a = 2.0 * std::numbers::pi * k / count;
      out.push_back((Vec(2) << std::cos(a), std::sin(a)).finished());
    }
  } else if (m == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < count; ++k) {
      const double z = 1.0 - (2.0 * k + 1.0) / count;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      out.push_back((Vec(3) << r * std::cos(golden * k), r * std::sin(golden * k), z).finished());
    }
  } else {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    while (static_cast<int>(out.size()) < count) {
      Vec v(m);
      for (int i = 0; i < m; ++i) v(i) = g(rng);
      if (v.norm() > 1e-3) out.push_back(v.normalized());
    }
  }
  return out;
}

bool ZeroSearchConfig::validate() const {
  return grid_per_axis >= 3 && step > 0.0 && cone_directions >= 1 && cone_stride >= 1 && isolation_steps > 0.0 &&
         isolation_samples >= 1 && zero_tol > 0.0 && angle_tol > 0.0;
}

nlohmann::json ZeroSearchConfig::to_json() const {
  return {{"grid_per_axis", grid_per_axis}, {"step", step},
          {"cone_directions", cone_directions}, {"cone_stride", cone_stride},
          {"isolation_steps", isolation_steps}, {"isolation_samples", isolation_samples},
          {"zero_tol", zero_tol}, {"angle_tol", angle_tol},
          {"seed", seed}};
}

ZeroSearchConfig ZeroSearchConfig::from_json(const nlohmann::json& j) {
  ZeroSearchConfig c;
  if (!j.is_object()) throw DomainError("zero-set search config must be an object");
  static const std::set<std::string> keys{"grid_per_axis", "step",     "cone_directions", "cone_stride", "isolation_steps",
                                          "isolation_samples", "zero_tol", "angle_tol", "seed"};
  for (const auto& [k, v] : j.items())
    if (!keys.count(k)) throw DomainError("unknown key '" + k + "' in zero-set search config");
  try {
    c.grid_per_axis = j.value("grid_per_axis", c.grid_per_axis);
    c.step = j.value("step", c.step);
    c.cone_directions = j.value("cone_directions", c.cone_directions);
    c.cone_stride = j.value("cone_stride", c.cone_stride);
    c.isolation_steps = j.value("isolation_steps", c.isolation_steps);
    c.isolation_samples = j.value("isolation_samples", c.isolation_samples);
    c.zero_tol = j.value("zero_tol", c.zero_tol);
    c.angle_tol = j.value("angle_tol", c.angle_tol);
    c.seed = j.value("seed", c.seed);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed zero-set search config: ") + e.what());
  }
  if (!c.validate()) throw DomainError("zero-set search config out of range");
  return c;
}

const char* to_string(ZeroSetKind k) {
  switch (k) {
    case ZeroSetKind::isolated_points: return "isolated_points";
    case ZeroSetKind::null_geodesic_images: return "null_geodesic_images";
    case ZeroSetKind::empty: return "empty";
    case ZeroSetKind::undetermined: return "undetermined";
  }
  return "undetermined";
}

nlohmann::json ZeroSetReport::to_json() const {
  nlohmann::json j;
  j["kind"] = to_string(kind);
  j["points"] = nlohmann::json::array();
  for (const auto& p : points) j["points"].push_back(vec_json(p));
  j["segments"] = nlohmann::json::array();
  for (const auto& s : segments)
    j["segments"].push_back({{"start", vec_json(s.start)},
                             {"end", vec_json(s.end)},
                             {"direction", vec_json(s.direction)},
                             {"max_residual", s.max_residual},
                             {"off_line_min", s.off_line_min}});
  j["singular_sample_count"] = singular_samples.size();
  j["cone_sample_count"] = cone_samples.size();
  j["max_cone_angle"] = max_cone_angle;
  j["cone_all_null"] = cone_all_null;
  j["isolation_margin"] = isolation_margin;
  j["max_nabla_v"] = max_nabla_v;
  j["note"] = note;
  return j;
}

void ZeroSetReport::write_cone_csv(std::ostream& os) const {
  const int n = cone_samples.empty() ? 0 : static_cast<int>(cone_samples.front().x.size());
  os << "direction,t";
  for (int i = 0; i < n; ++i) os << ",x" << i;
  os << ",v_norm2,phi_norm2,angle\n";
  os.precision(17);
  for (const auto& c : cone_samples) {
    os << c.direction << ',' << c.t;
    for (int i = 0; i < n; ++i) os << ',' << c.x(i);
    os << ',' << c.v_norm2 << ',' << c.phi_norm2 << ',' << c.angle << '\n';
  }
}

namespace {

struct Candidate {
  Vec x;
  double norm;
};

std::vector<Vec> grid_seeds(const MetricPatch& patch, const SpinorField& phi, int g, double& scale) {
  const int n = patch.dim();
  const Box& box = patch.domain();
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(g);
  auto point = [&](std::size_t idx) {
    Vec x(n);
    for (int i = 0; i < n; ++i) {
      const auto k = static_cast<double>(idx % static_cast<std::size_t>(g));
      idx /= static_cast<std::size_t>(g);
      x(i) = box.lo(i) + (box.hi(i) - box.lo(i)) * k / (g - 1);
    }
    return x;
  };
  std::vector<double> norms(total);
  parallel_for(total, [&](std::size_t i) { norms[i] = phi.value(point(i)).norm(); });
  scale = median(norms);
  std::vector<Candidate> minima;
  std::size_t stride = 1;
  std::vector<std::size_t> strides(u(n));
  for (int i = 0; i < n; ++i) {
    strides[u(i)] = stride;
    stride *= static_cast<std::size_t>(g);
  }
  for (std::size_t idx = 0; idx < total; ++idx) {
    bool is_min = true;
    std::size_t rest = idx;
    for (int i = 0; i < n && is_min; ++i) {
      const std::size_t k = rest % static_cast<std::size_t>(g);
      rest /= static_cast<std::size_t>(g);
      if (k > 0 && norms[idx - strides[u(i)]] < norms[idx]) is_min = false;
      if (k + 1 < static_cast<std::size_t>(g) && norms[idx + strides[u(i)]] < norms[idx]) is_min = false;
    }
    if (is_min) minima.push_back({point(idx), norms[idx]});
  }
  std::stable_sort(minima.begin(), minima.end(), [](const auto& a, const auto& b) { return a.norm < b.norm; });
  constexpr std::size_t kMaxSeeds = 64;
  std::vector<Vec> out;
  for (std::size_t i = 0; i < std::min(kMaxSeeds, minima.size()); ++i) out.push_back(minima[i].x);
  return out;
}

// Gauss–Newton on ‖φ‖² with a pseudo-inverse step.
std::optional<Vec> newton_zero(const MetricPatch& patch, const SpinorField& phi, Vec x, double accept) {
  const int n = patch.dim();
  for (int it = 0; it < 100; ++it) {
    const Spinor v = phi.value(x);
    if (v.norm() <= 1e-3 * accept) break;
    const CMat j = phi.jacobian(x);
    Mat jr(2 * j.rows(), n);
    jr << j.real(), j.imag();
    Vec r(2 * v.size());
    r << v.real(), v.imag();
    Eigen::JacobiSVD<Mat> svd(jr, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-10);
    const Vec dx = svd.solve(r);
    x -= dx;
    if (!patch.domain().contains(x)) return std::nullopt;
    if (dx.norm() <= 1e-15 * (1.0 + x.norm())) break;
  }
  if (phi.value(x).norm() > accept) return std::nullopt;
  return x;
}

}  // namespace

ZeroSetReport classify_zero_set(const MetricPatch& patch, const CliffordRep& rep, const KnownSolution& sol,
                                const ZeroSearchConfig& cfg) {
  if (!cfg.validate()) throw DomainError("zero-set search config out of range");
  require_gauge(patch, sol.phi);
  require_gauge(patch, sol.dirac);
  const int n = patch.dim();
  const Box& box = patch.domain();
  const double diag = (box.hi - box.lo).norm();
  double spacing = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) spacing = std::min(spacing, (box.hi(i) - box.lo(i)) / (cfg.grid_per_axis - 1));
  const FrameField frame = make_frame(patch);

  ZeroSetReport rep_out;
  double scale = 0.0;
  const auto seeds = grid_seeds(patch, sol.phi, cfg.grid_per_axis, scale);
  if (!(scale > 0.0)) {
    rep_out.kind = ZeroSetKind::undetermined;
    rep_out.note = "field vanishes on most of the grid";
    return rep_out;
  }
  const double accept = cfg.zero_tol * scale;

  std::vector<Vec> zeros;
  for (const auto& s : seeds) {
    const auto z = newton_zero(patch, sol.phi, s, accept);
    if (!z) continue;
    bool dup = false;
    for (const auto& q : zeros) dup |= (q - *z).norm() <= 1e-6 * diag;
    if (!dup) zeros.push_back(*z);
  }
  if (zeros.empty()) {
    rep_out.kind = ZeroSetKind::empty;
    return rep_out;
  }

  const OneFormField alpha = current_one_form(patch, rep, sol.phi);
  auto nabla_v = [&](const Vec& p) {
    const double h = 1e-4;
    const auto gam = christoffel_symbols(patch, p);
    const Vec a = alpha.value(p);
    Mat t(n, n);
    for (int nu = 0; nu < n; ++nu) {
      const Vec e = Vec::Unit(n, nu) * h;
      t.row(nu) = ((alpha.value(p + e) - alpha.value(p - e)) / (2 * h)).transpose();
      for (int k = 0; k < n; ++k) t.row(nu) -= a(k) * gam[u(k)].row(nu);
    }
    return t.cwiseAbs().maxCoeff();
  };

  bool any_null = false, any_timelike = false, undetermined = false;
  std::mt19937_64 rng(cfg.seed);
  for (std::size_t zi = 0; zi < zeros.size(); ++zi) {
    const Vec& p = zeros[zi];
    const Spinor dphi = sol.dirac.value(p);
    if (dphi.norm() <= accept) {
      undetermined = true;
      rep_out.note = "Dφ vanishes at a zero";
      continue;
    }
    rep_out.max_nabla_v = std::max(rep_out.max_nabla_v, nabla_v(p));
    const Vec v = current_vector(rep, dphi);
    const CausalType type = causal_type(v);
    const Mat e = frame.at(p);

    if (type == CausalType::null) {
      bool covered = false;
      for (const auto& s : rep_out.segments) {
        // distance from p to the segment's line (straight to the sampling resolution used below)
        const Vec d = p - s.start;
        covered |= (d - d.dot(s.direction) * s.direction).norm() <= 1e-6 * diag + cfg.step;
      }
      if (covered) continue;
      any_null = true;
      const Vec v0 = (e * v).normalized();
      const Geodesic geo = integrate_geodesic(patch, p, v0, -diag, diag, cfg.step);
      const PropagatedSpinor prop = propagate_spinor(patch, rep, geo, sol.phi.value(p), dphi);
      const ZeroDetection det = detect_zeros(prop, std::max(accept, 1e-12));
      const bool full = det.segments.size() == 1 && det.zeros.empty() &&
                        det.segments.front().first <= geo.states.front().t &&
                        det.segments.front().second >= geo.states.back().t;
      NullSegment seg;
      seg.start = geo.states.front().x;
      seg.end = geo.states.back().x;
      seg.direction = v0;
      std::normal_distribution<double> gauss;
      seg.off_line_min = std::numeric_limits<double>::infinity();
      const std::size_t stride = std::max<std::size_t>(1, geo.states.size() / 64);
      for (std::size_t k = 0; k < geo.states.size(); k += stride) {
        const auto& st = geo.states[k];
        seg.max_residual = std::max(seg.max_residual, sol.phi.value(st.x).norm());
        Vec off(n);
        for (int i = 0; i < n; ++i) off(i) = gauss(rng);
        off -= off.dot(st.xdot.normalized()) * st.xdot.normalized();
        const Vec q = st.x + 1e-3 * diag * off.normalized();
        if (box.contains(q)) seg.off_line_min = std::min(seg.off_line_min, sol.phi.value(q).norm());
      }
      rep_out.segments.push_back(seg);
      if (!full || seg.max_residual > accept || !(seg.off_line_min > accept)) {
        undetermined = true;
        rep_out.note = "null zero does not propagate along its geodesic";
      }
    } else if (type == CausalType::timelike) {
      any_timelike = true;
      rep_out.points.push_back(p);
      // punctured ball
      double to_boundary = std::numeric_limits<double>::infinity();
      for (int i = 0; i < n; ++i) {
        const bool periodic = !box.periodic.empty() && box.periodic[u(i)];
        if (!periodic) to_boundary = std::min({to_boundary, p(i) - box.lo(i), box.hi(i) - p(i)});
      }
      const double radius = std::min(cfg.isolation_steps * spacing, 0.999 * to_boundary);
      std::uniform_real_distribution<double> unif;
      std::normal_distribution<double> gauss;
      double margin = std::numeric_limits<double>::infinity();
      bool isolated = true;
      for (int s = 0; s < cfg.isolation_samples; ++s) {
        Vec d(n);
        for (int i = 0; i < n; ++i) d(i) = gauss(rng);
        const double r = radius * std::pow(10.0, -3.0 * unif(rng));
        const double m = sol.phi.value(box.wrap(p + r * d.normalized())).norm();
        isolated &= m > accept;
        margin = std::min(margin, m / (r * dphi.norm()));
      }
      rep_out.isolation_margin = rep_out.points.size() == 1 ? margin : std::min(rep_out.isolation_margin, margin);
      if (!isolated) {
        undetermined = true;
        rep_out.note = "zero with timelike V_Dφ is not isolated";
      }
      // null cone of p
      const auto dirs = sphere_directions(n - 1, cfg.cone_directions, cfg.seed + zi);
      std::vector<std::vector<ConeSample>> per_dir(dirs.size());
      parallel_for(dirs.size(), [&](std::size_t di) {
        Vec k(n);
        k << 1.0, dirs[di];
        const Geodesic geo = integrate_geodesic(patch, p, (e * k).normalized(), -diag, diag, cfg.step);
        for (std::size_t si = 0; si < geo.states.size(); ++si) {
          const auto offset = static_cast<long>(si) - static_cast<long>(geo.zero_index);
          if (offset == 0 || offset % cfg.cone_stride != 0) continue;
          const auto& st = geo.states[si];
          const Spinor phi = sol.phi.value(st.x);
          const Vec cv = current_vector(rep, phi);
          ConeSample c;
          c.direction = static_cast<int>(di);
          c.t = st.t;
          c.x = st.x;
          c.phi_norm2 = phi.squaredNorm();
          c.v_norm2 = -cv(0) * cv(0) + cv.tail(n - 1).squaredNorm();
          c.null = causal_type(cv) == CausalType::null;
          const Vec vc = frame.at(st.x) * cv;
          const Vec tu = st.xdot.normalized();
          const double par = vc.dot(tu);
          c.angle = std::atan2((vc - par * tu).norm(), std::abs(par));
          per_dir[di].push_back(std::move(c));
        }
      });
      for (auto& dir_samples : per_dir)
        for (auto& c : dir_samples) {
          rep_out.max_cone_angle = std::max(rep_out.max_cone_angle, c.angle);
          rep_out.cone_all_null &= c.null;
          if (c.null) rep_out.singular_samples.push_back(c.x);
          rep_out.cone_samples.push_back(std::move(c));
        }
    } else {
      undetermined = true;
      rep_out.note = std::string("V_Dφ at a zero is ") + to_string(type);
    }
  }

  if (undetermined || (any_null && any_timelike)) {
    rep_out.kind = ZeroSetKind::undetermined;
    if (rep_out.note.empty()) rep_out.note = "zeros of both causal types found";
  } else if (any_null) {
    rep_out.kind = ZeroSetKind::null_geodesic_images;
  } else {
    rep_out.kind = ZeroSetKind::isolated_points;
  }
  return rep_out;
}

}  // namespace spintractor
