#include "doctest.h"
#include "cli_support.hpp"

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("spintractor_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("passing campaign exits 0 and writes the report and series") {
  const auto dir = scratch("pass");
  const auto cfg = cli::write_config(dir, "run.json", cli::minkowski_config(4));
  CHECK(cli::run("verify-twistor --config " + cfg.string() + " --out " + (dir / "out").string()) == 0);
  const auto report = nlohmann::json::parse(cli::read(dir / "out" / "report.json"));
  CHECK(report["schema"] == "spintractor/1");
  CHECK(report["pass"] == true);
  CHECK(report["checks"].size() == 1);
  CHECK(report["checks"]["verify_twistor"]["max_residual"].get<double>() <= 1e-10);
  CHECK(fs::exists(dir / "out" / "twistor_residual.csv"));
  fs::remove_all(dir);
}

TEST_CASE("numerical failure exits 1 with a report") {
  const auto dir = scratch("fail");
  auto j = nlohmann::json::parse(cli::minkowski_config(4));
  j["rescale"] = {{"kind", "linear"}, {"c0", 0.0}, {"b", {0.2, 0.1, 0.0, -0.1}}};
  const auto cfg = cli::write_config(dir, "run.json", j.dump());
  CHECK(cli::run("verify-twistor --config " + cfg.string() + " --tol-scale 1e-30 --out " + (dir / "out").string()) ==
        1);
  const auto report = nlohmann::json::parse(cli::read(dir / "out" / "report.json"));
  CHECK(report["pass"] == false);
  fs::remove_all(dir);
}

TEST_CASE("config and usage errors exit 2 without a report") {
  const auto dir = scratch("config");
  auto j = nlohmann::json::parse(cli::minkowski_config(4));
  j["family"]["family"] = "schwarzschild";
  const auto bad_tag = cli::write_config(dir, "tag.json", j.dump());
  const auto bad_json = cli::write_config(dir, "broken.json", "{ \"family\": ");
  j = nlohmann::json::parse(cli::minkowski_config(4));
  j["spinor_seed"]["components"] = {1.0, 2.0};
  const auto bad_len = cli::write_config(dir, "len.json", j.dump());
  const auto good = cli::write_config(dir, "good.json", cli::minkowski_config(4));
  const std::string out = " --out " + (dir / "out").string();

  CHECK(cli::run("zero-set --config " + bad_tag.string() + out) == 2);
  CHECK(cli::run("all --config " + bad_json.string() + out) == 2);
  CHECK(cli::run("two-form --config " + bad_len.string() + out) == 2);
  CHECK(cli::run("two-form --config " + (dir / "missing.json").string() + out) == 2);
  CHECK(cli::run("two-form" + out) == 2);
  CHECK(cli::run("--config " + good.string()) == 2);
  CHECK(cli::run("frobnicate --config " + good.string()) == 2);
  CHECK(cli::run("two-form --config " + good.string() + " --tol-scale 0" + out) == 2);
  CHECK(cli::run("two-form --config " + good.string() + " --seed minus-one" + out) == 2);
  CHECK_FALSE(fs::exists(dir / "out"));
  CHECK(cli::run("--help") == 0);
  fs::remove_all(dir);
}

TEST_CASE("repeated runs produce identical reports") {
  const auto dir = scratch("determinism");
  const auto cfg = cli::write_config(dir, "run.json", cli::minkowski_config(3));
  for (const char* out : {"a", "b"})
    CHECK(cli::run("two-form --config " + cfg.string() + " --seed 99 --out " + (dir / out).string()) == 0);
  CHECK(cli::untimed_report(dir / "a" / "report.json") == cli::untimed_report(dir / "b" / "report.json"));
  CHECK(cli::read(dir / "a" / "two_form_alpha_0.csv") == cli::read(dir / "b" / "two_form_alpha_0.csv"));
  const auto report = nlohmann::json::parse(cli::read(dir / "a" / "report.json"));
  CHECK(report["config"]["sampling"]["seed"] == 99);
  fs::remove_all(dir);
}

TEST_CASE("a report without series writes no plot data") {
  const auto dir = scratch("noseries");
  const auto cfg = cli::write_config(dir, "run.json", cli::minkowski_config(4));
  CHECK(cli::run("classify-orbit --config " + cfg.string() + " --out " + (dir / "out").string()) == 0);
  CHECK(fs::exists(dir / "out" / "report.json"));
  int csv = 0;
  for (const auto& e : fs::directory_iterator(dir / "out")) csv += e.path().extension() == ".csv";
  CHECK(csv == 0);
  fs::remove_all(dir);
}
