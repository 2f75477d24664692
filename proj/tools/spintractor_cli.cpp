#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "spintractor/campaign.hpp"

namespace {

using namespace spintractor;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  double tol_scale = 1.0;
};

RunConfig load_config(const Options& opt, const std::vector<Campaign>& campaigns) {
  std::ifstream is(opt.config);
  if (!is) throw ConfigError("cannot open config '" + opt.config + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig cfg = RunConfig::from_json(j);
  cfg.campaigns = campaigns;
  if (opt.seed) cfg.seed = *opt.seed;
  if (!(opt.tol_scale > 0.0)) throw ConfigError("--tol-scale must be positive");
  cfg.tol = cfg.tol.scaled(opt.tol_scale);
  return cfg;
}

int execute(const Options& opt, const std::vector<Campaign>& campaigns) {
  RunConfig cfg;
  try {
    cfg = load_config(opt, campaigns);
    build_setup(cfg);
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  const CampaignReport report = run(cfg);
  const std::string text = report_text(report);
  if (opt.out.empty()) {
    std::cout << text;
  } else {
    const std::filesystem::path dir(opt.out);
    std::filesystem::create_directories(dir);
    std::ofstream os(dir / "report.json");
    os << text;
    if (!os) {
      std::cerr << "cannot write " << (dir / "report.json").string() << '\n';
      return kExitConfig;
    }
    const auto files = emit_plot_data(report, dir);
    if (files.empty()) std::cerr << "warning: report has no sampled series, no plot data written\n";
    for (const auto& [name, check] : report.body["checks"].items())
      std::cout << (check.value("pass", false) ? "PASS " : "FAIL ") << name << '\n';
  }
  return report.pass ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Twistor spinor and tractor verification campaigns"};
  app.set_version_flag("--version", kToolkitVersion);
  app.require_subcommand(1);

  Options opt;
  std::vector<Campaign> selected;
  const std::vector<std::pair<std::string, std::vector<Campaign>>> commands{
      {"verify-twistor", {Campaign::verify_twistor}},
      {"covariance-scan", {Campaign::covariance}},
      {"two-form", {Campaign::two_form}},
      {"classify-orbit", {Campaign::orbit}},
      {"zero-set", {Campaign::zero_set}},
      {"all", all_campaigns()}};
  for (const auto& [name, campaigns] : commands) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " campaign");
    sub->add_option("--config", opt.config, "run configuration (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "output directory for report.json and CSV series");
    sub->add_option("--seed", opt.seed, "override sampling.seed");
    sub->add_option("--tol-scale", opt.tol_scale, "multiply every tolerance");
    sub->callback([&selected, c = campaigns] { selected = c; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  return execute(opt, selected);
}
