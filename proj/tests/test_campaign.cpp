#include <filesystem>
#include <fstream>

#include "doctest.h"

#include "spintractor/campaign.hpp"

using namespace spintractor;
using nlohmann::json;

namespace {

json minkowski_config(int n, const std::string& campaign) {
  json comps = json::array();
  const int d = 1 << (n / 2);
  for (int i = 0; i < d; ++i) comps.push_back({1.0 / (i + 1), 0.25 * i});
  return {{"family", {{"family", "minkowski"}, {"dim", n}}},
          {"spinor_seed", {{"kind", "position_clifford"}, {"components", comps}}},
          {"campaign", campaign},
          {"sampling", {{"points", 20}, {"seed", 7}}}};
}

json without_time(json body) {
  body.erase("wall_time_s");
  return body;
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("spintractor_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("config parsing accepts the documented forms") {
  json j = minkowski_config(4, "verify_twistor");
  RunConfig c = RunConfig::from_json(j);
  CHECK(c.campaigns == std::vector<Campaign>{Campaign::verify_twistor});
  CHECK(c.points == 20);
  CHECK(c.seed == 7);
  CHECK(c.spinor_seed.components.size() == 4);
  CHECK(c.spinor_seed.components(1) == Complex(0.5, 0.25));

  j["campaign"] = {{"zero_set", true}, {"orbit", true}, {"two_form", false}};
  CHECK(RunConfig::from_json(j).campaigns == std::vector<Campaign>{Campaign::orbit, Campaign::zero_set});
  j["campaign"] = json::array({"covariance", "verify_twistor"});
  CHECK(RunConfig::from_json(j).campaigns == std::vector<Campaign>{Campaign::verify_twistor, Campaign::covariance});
  j.erase("campaign");
  CHECK(RunConfig::from_json(j).campaigns == all_campaigns());

  j["spinor_seed"]["components"] = {1.0, 0.0, 0.0, 2.0};
  CHECK(RunConfig::from_json(j).spinor_seed.components(3) == Complex(2.0, 0.0));
}

TEST_CASE("config round-trips through its echo") {
  json j = minkowski_config(5, "two_form");
  j["rescale"] = {{"kind", "linear"}, {"c0", 0.0}, {"b", {0.1, 0.0, 0.0, 0.0, -0.1}}};
  j["sampling"]["tolerances"] = {{"twistor", 2e-9}};
  const RunConfig c = RunConfig::from_json(j);
  CHECK(c.tol.twistor == 2e-9);
  CHECK(c.tol.pair == Tolerances{}.pair);
  const json echo = c.to_json();
  CHECK(RunConfig::from_json(echo).to_json() == echo);
}

TEST_CASE("schema violations raise ConfigError") {
  const json good = minkowski_config(4, "orbit");
  auto rejects = [&](auto mutate) {
    json j = good;
    mutate(j);
    INFO(j.dump());
    CHECK_THROWS_AS(RunConfig::from_json(j), ConfigError);
  };
  rejects([](json& j) { j.erase("family"); });
  rejects([](json& j) { j.erase("spinor_seed"); });
  rejects([](json& j) { j["spinor_seed"]["components"] = {1.0, 0.0}; });
  rejects([](json& j) { j["spinor_seed"]["components"] = {1.0, "x", 0.0, 0.0}; });
  rejects([](json& j) { j["spinor_seed"]["kind"] = "harmonic"; });
  rejects([](json& j) { j["campaign"] = "everything"; });
  rejects([](json& j) { j["campaign"] = json::object(); });
  rejects([](json& j) { j["colour"] = "blue"; });
  rejects([](json& j) { j["sampling"]["points"] = 0; });
  rejects([](json& j) { j["sampling"]["tolerances"] = {{"twistor", -1.0}}; });
  rejects([](json& j) { j["sampling"]["tolerances"] = {{"twister", 1.0}}; });
  rejects([](json& j) { j["zero_search"] = {{"grid", 1}}; });
  rejects([](json& j) { j["family"]["dim"] = "four"; });

  json bad_tag = good;
  bad_tag["family"]["family"] = "anti_de_sitter";
  const RunConfig c = RunConfig::from_json(bad_tag);
  CHECK_THROWS_AS(build_setup(c), ConfigError);
}

TEST_CASE("setups reject inconsistent seeds") {
  json j = minkowski_config(4, "verify_twistor");
  j["family"] = {{"family", "pp_wave"}, {"dim", 4}, {"profile", "quadratic"}, {"coeffs", {1.0, 0.0, 0.0, -1.0}}};
  CHECK_THROWS_AS(build_setup(RunConfig::from_json(j)), ConfigError);
  j["spinor_seed"]["kind"] = "null_kernel";
  j["rescale"] = {{"kind", "bump"}, {"amplitude", 0.2}, {"center", {0, 0, 0, 0}}, {"width", 1.0}};
  CHECK_THROWS_AS(build_setup(RunConfig::from_json(j)), ConfigError);
}

TEST_CASE("Minkowski verify_twistor passes with a tiny residual") {
  const CampaignReport r = run(RunConfig::from_json(minkowski_config(4, "verify_twistor")));
  CHECK(r.pass);
  const json& v = r.body["checks"]["verify_twistor"];
  CHECK(v["max_residual"].get<double>() <= 1e-10);
  CHECK(v["max_pair_penrose"].get<double>() <= 1e-9);
  CHECK(r.body["schema"] == kReportSchema);
  CHECK(r.body["toolkit_version"] == kToolkitVersion);
  CHECK(r.body["config"] == RunConfig::from_json(minkowski_config(4, "verify_twistor")).to_json());
  CHECK(r.body["wall_time_s"].get<double>() >= 0.0);
  REQUIRE(r.series.size() == 1);
  CHECK(r.series[0].rows.size() == 20);
}

TEST_CASE("Minkowski zero_set finds the isolated origin") {
  const CampaignReport r = run(RunConfig::from_json(minkowski_config(4, "zero_set")));
  const json& z = r.body["checks"]["zero_set"];
  CHECK(z["kind"] == "isolated_points");
  CHECK(r.pass);
  REQUIRE_FALSE(r.series.empty());
  CHECK(r.series[0].name == "cone_samples");
}

TEST_CASE("every campaign passes on the standard examples") {
  SUBCASE("rescaled Minkowski") {
    json j = minkowski_config(4, "verify_twistor");
    j.erase("campaign");
    j["rescale"] = {{"kind", "bump"}, {"amplitude", 0.3}, {"center", {0.1, 0.0, -0.1, 0.0}}, {"width", 1.2}};
    const CampaignReport r = run(RunConfig::from_json(j));
    INFO(r.body.dump(2));
    CHECK(r.pass);
    CHECK(r.body["checks"]["two_form"]["box_available"] == false);
  }
  SUBCASE("pp-wave with a parallel spinor") {
    json j = minkowski_config(4, "verify_twistor");
    j["campaign"] = json::array({"verify_twistor", "two_form", "orbit"});
    j["family"] = {{"family", "pp_wave"}, {"dim", 4}, {"profile", "quadratic"}, {"coeffs", {1.0, 0.2, 0.2, -0.5}}};
    j["spinor_seed"]["kind"] = "null_kernel";
    const CampaignReport r = run(RunConfig::from_json(j));
    INFO(r.body.dump(2));
    CHECK(r.pass);
    CHECK(r.body["checks"]["orbit"]["type"] == "null_wedge_null");
  }
}

TEST_CASE("runs are deterministic under a fixed seed") {
  json j = minkowski_config(3, "two_form");
  j["campaign"] = json::array({"verify_twistor", "covariance", "two_form", "orbit"});
  const RunConfig c = RunConfig::from_json(j);
  const CampaignReport a = run(c), b = run(c);
  CHECK(without_time(a.body).dump() == without_time(b.body).dump());
  RunConfig other = c;
  other.seed = 8;
  CHECK(without_time(run(other).body)["checks"] != without_time(a.body)["checks"]);
}

TEST_CASE("a failing tolerance flips the verdict") {
  json j = minkowski_config(4, "verify_twistor");
  j["rescale"] = {{"kind", "linear"}, {"c0", 0.0}, {"b", {0.2, 0.1, 0.0, -0.1}}};
  RunConfig c = RunConfig::from_json(j);
  CHECK(run(c).pass);
  c.tol = c.tol.scaled(1e-30);
  const CampaignReport r = run(c);
  CHECK_FALSE(r.pass);
  CHECK(r.body["pass"] == false);
  CHECK(r.body["checks"]["verify_twistor"]["pass"] == false);
}

TEST_CASE("plot data writes one CSV per series") {
  const auto dir = scratch_dir("plot");
  CampaignReport empty;
  CHECK(emit_plot_data(empty, dir).empty());
  CHECK_FALSE(std::filesystem::exists(dir));

  const CampaignReport r = run(RunConfig::from_json(minkowski_config(4, "verify_twistor")));
  const auto files = emit_plot_data(r, dir);
  REQUIRE(files.size() == 1);
  std::ifstream is(files[0]);
  std::string header, line;
  std::getline(is, header);
  CHECK(header == "point,x0,x1,x2,x3,residual");
  double last = -1.0;
  int rows = 0;
  while (std::getline(is, line)) {
    const double p = std::stod(line.substr(0, line.find(',')));
    CHECK(p > last);
    last = p;
    ++rows;
  }
  CHECK(rows == 20);
  std::filesystem::remove_all(dir);
}

TEST_CASE("simplicity gates only seeds with a zero") {
  json j = minkowski_config(4, "two_form");
  j["spinor_seed"]["offset"] = {0.3, -0.2, 0.5, 0.1};
  const CampaignReport r = run(RunConfig::from_json(j));
  const json& t = r.body["checks"]["two_form"];
  CHECK(t["simplicity_checked"] == false);
  CHECK(t["max_simplicity_defect"].get<double>() > 1e-3);
  CHECK(r.pass);
  j["spinor_seed"].erase("offset");
  const json u = run(RunConfig::from_json(j)).body["checks"]["two_form"];
  CHECK(u["simplicity_checked"] == true);
  CHECK(u["max_simplicity_defect"].get<double>() <= 1e-9);
}
