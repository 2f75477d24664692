#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "spintractor/zero_set.hpp"

namespace spintractor {

constexpr const char* kToolkitVersion = "1.0.0";
constexpr const char* kReportSchema = "spintractor/1";

enum class Campaign { verify_twistor, covariance, two_form, orbit, zero_set };
const char* to_string(Campaign c);
std::vector<Campaign> all_campaigns();

struct Tolerances {
  double twistor = 1e-9;        // Penrose residual and Dirac-field agreement
  double covariance = 1e-8;     // rescaled residuals
  double pair = 1e-9;           // split parallel-twistor residuals
  double integrability = 1e-8;  // ∇Dφ − (n/2)P·φ
  double two_form = 1e-8;       // algebraic vs differential components
  double simplicity = 1e-9;
  double relation = 1e-8;       // defining relation, relative
  double angle = 1e-6;
  double nabla_v = 1e-6;

  Tolerances scaled(double factor) const;
  nlohmann::json to_json() const;
  static Tolerances from_json(const nlohmann::json& j);
};

/// Spinor seed of a run:
///   constant           φ = S in the patch frame (parallel on flat charts)
///   position_clifford  φ = x·S + T on flat Cartesian charts
///   null_kernel        φ = (γ_0 + γ_1)·S/√2, constant in the patch frame
/// null_projection applies S ↦ (γ_0 + γ_1)·S/√2 before use for any kind.
struct SpinorSeed {
  std::string kind = "position_clifford";
  Spinor components;
  Spinor offset;  // T; empty means zero
  bool null_projection = false;
};

struct RunConfig {
  nlohmann::json family;
  SpinorSeed spinor_seed;
  nlohmann::json rescale;  // null when absent
  std::vector<Campaign> campaigns;
  int points = 100;
  std::uint64_t seed = 1;
  Tolerances tol;
  ZeroSearchConfig zero_search;

  /// Throws ConfigError on schema violations.
  static RunConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

/// A named table for plotting.
struct Series {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

struct CampaignReport {
  nlohmann::json body;  // schema-stable report
  std::vector<Series> series;
  bool pass = false;
};

/// Patch, representation and solution described by a config. Throws
/// ConfigError when the description is inconsistent.
struct Setup {
  MetricPatch patch;
  CliffordRep rep;
  KnownSolution solution;
};
Setup build_setup(const RunConfig& cfg);

/// Runs the selected campaigns deterministically under cfg.seed.
CampaignReport run(const RunConfig& cfg);

/// Report text with a trailing newline. The only non-deterministic field is
/// "wall_time_s".
std::string report_text(const CampaignReport& report);

/// One CSV per non-empty series, header row first. Returns the written paths;
/// an empty result means nothing was written.
std::vector<std::filesystem::path> emit_plot_data(const CampaignReport& report, const std::filesystem::path& dir);

}  // namespace spintractor
