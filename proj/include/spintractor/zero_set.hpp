#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "spintractor/squares.hpp"
#include "spintractor/tractor.hpp"

namespace spintractor {

/// Point on a geodesic with a parallel frame; frame.col(a) in coordinates.
struct GeodesicState {
  double t = 0.0;
  Vec x;
  Vec xdot;
  Mat frame;
};

/// Samples in increasing t. states[zero_index] is the initial point, and its
/// frame is the patch frame there.
struct Geodesic {
  std::vector<GeodesicState> states;
  std::size_t zero_index = 0;
  double step = 1e-3;
  bool hit_boundary_forward = false;
  bool hit_boundary_backward = false;
};

/// Classical RK4 for ẍ^k + Γ^k_ij ẋ^i ẋ^j = 0 together with parallel transport
/// of the frame, over t ∈ [t_min, t_max] (t_min ≤ 0 ≤ t_max), stopping at the
/// chart boundary. Periodic axes wrap.
Geodesic integrate_geodesic(const MetricPatch& patch, const Vec& x0, const Vec& v0, double t_min, double t_max,
                            double step = 1e-3);

/// Spinor components U(t) in the transported frame with U′(t).
struct PropagatedSpinor {
  std::vector<double> t;
  std::vector<Spinor> u;
  std::vector<Spinor> udot;
};

/// Integrates U″ = −½ C(t) U, C the matrix of φ ↦ γ′·P(γ′)·φ, jointly with the
/// geodesic using the same steps. U(0) = phi0, U′(0) = −(1/n) γ′·dphi0, with
/// both spinors in the patch frame at the initial point.
PropagatedSpinor propagate_spinor(const MetricPatch& patch, const CliffordRep& rep, const Geodesic& geodesic,
                                  const Spinor& phi0, const Spinor& dphi0);

struct ZeroDetection {
  std::vector<double> zeros;                           // isolated parameter values
  std::vector<std::pair<double, double>> segments;     // identically-zero stretches
  double tol = 0.0;
};

/// Zeros of ‖U‖ with tol = max(1e-8·median‖U‖, 1e-12) unless tol > 0 is given.
/// Local minima are refined by cubic Hermite interpolation; runs of at least
/// three samples below tol form segments.
ZeroDetection detect_zeros(const PropagatedSpinor& prop, double tol = 0.0);

/// Quasi-uniform unit vectors on S^{m−1}: equally spaced for m = 2, Fibonacci
/// lattice for m = 3, normalized Gaussian samples otherwise.
std::vector<Vec> sphere_directions(int m, int count, std::uint64_t seed);

struct ZeroSearchConfig {
  int grid_per_axis = 9;
  double step = 1e-3;
  int cone_directions = 64;
  int cone_stride = 50;           // geodesic steps between cone samples
  double isolation_steps = 10.0;  // isolation radius in coarse grid steps
  int isolation_samples = 512;
  double zero_tol = 1e-8;         // relative to the median ‖φ‖ on the grid
  double angle_tol = 1e-6;
  std::uint64_t seed = 0x5eed;
  bool validate() const;
  nlohmann::json to_json() const;
  static ZeroSearchConfig from_json(const nlohmann::json& j);
};

enum class ZeroSetKind { isolated_points, null_geodesic_images, empty, undetermined };
const char* to_string(ZeroSetKind k);

struct NullSegment {
  Vec start;
  Vec end;
  Vec direction;              // unit coordinate tangent
  double max_residual = 0.0;  // max ‖φ‖ along the sampled image
  double off_line_min = 0.0;  // min ‖φ‖ at transverse offsets
};

struct ConeSample {
  int direction = 0;
  double t = 0.0;
  Vec x;
  double v_norm2 = 0.0;  // g(V_φ, V_φ)
  double phi_norm2 = 0.0;
  double angle = 0.0;    // between V_φ and the geodesic tangent
  bool null = false;
};

struct ZeroSetReport {
  ZeroSetKind kind = ZeroSetKind::empty;
  std::vector<Vec> points;
  std::vector<NullSegment> segments;
  std::vector<Vec> singular_samples;
  std::vector<ConeSample> cone_samples;
  double max_cone_angle = 0.0;
  bool cone_all_null = true;
  double isolation_margin = 0.0;  // min ‖φ(q)‖/(r·‖Dφ(p)‖) over punctured-ball samples
  double max_nabla_v = 0.0;       // finite-difference ‖∇α_φ‖_max at zeros
  std::string note;

  nlohmann::json to_json() const;
  void write_cone_csv(std::ostream& os) const;
};

/// Coarse grid, local minima, Gauss–Newton refinement; then the causal type of
/// V_{Dφ} at each zero decides between following the null geodesic and
/// checking isolation with cone sampling.
ZeroSetReport classify_zero_set(const MetricPatch& patch, const CliffordRep& rep, const KnownSolution& sol,
                                const ZeroSearchConfig& cfg = {});

}  // namespace spintractor
