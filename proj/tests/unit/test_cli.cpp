#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "config.hpp"
#include "doctest.h"

using namespace levylap;
using namespace levylap::cli;

namespace {

ExperimentConfig cfg(const std::string& text, std::optional<std::uint64_t> seed = {}) {
  return load_config(json::parse(text), seed);
}

const char* kSmall = R"({"resolution": {"steps": 400, "grid": 6, "radial": 200, "angular": 4}})";

json with(const std::string& base, const std::string& patch) {
  json j = json::parse(base);
  j.merge_patch(json::parse(patch));
  return j;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(LEVYLAP_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("levylap_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("configuration errors") {
  CHECK_THROWS_AS(cfg(R"({"bogus": 1})"), ConfigError);
  CHECK_THROWS_AS(cfg(R"({"chart": {"preset": "hyperbolic"}})"), ConfigError);
  CHECK_THROWS_AS(cfg(R"({"chart": {"preset": "round_s4", "radius": -2}})"), ConfigError);
  CHECK_THROWS_AS(cfg(R"({"resolution": {"steps": "many"}})"), ConfigError);
  CHECK_THROWS_AS(cfg(R"({"resolution": {"steps": 0}})"), ConfigError);
  CHECK_THROWS_AS(cfg(R"({"connection": {"preset": "perturbed", "bump": {"polarisation": [1, 0, 0, 0]}}})"), ConfigError);
  CHECK_THROWS_AS(cfg(R"({"rotation_curves": [{"id": "a", "kind": "spiral"}]})"), ConfigError);
  CHECK_THROWS_AS(cfg(R"({"levy": {"expect": "maybe"}})"), ConfigError);
  CHECK_THROWS_AS(cfg(R"([1, 2])"), ConfigError);
  CHECK_THROWS_AS(load_config_file("/nonexistent/config.json"), ConfigError);
  CHECK_THROWS_AS(run_command("nonsense", cfg("{}"), 1), ConfigError);
}

TEST_CASE("defaults are written into the resolved configuration") {
  const ExperimentConfig c = cfg("{}");
  CHECK(c.resolved.contains("chart"));
  CHECK(c.resolved.contains("connection"));
  CHECK(c.resolved.contains("resolution"));
  CHECK(c.resolved["resolution"]["steps"] == 2000);
  CHECK(c.curves.size() == 20);
  CHECK(c.rotations.size() == 3);
  for (const auto& r : c.rotations) CHECK(r.w.side() == algebra::Side::Left);
  // resolving twice is a fixed point
  const ExperimentConfig again = load_config(c.resolved);
  CHECK(config_hash(again.resolved) == config_hash(c.resolved));
  CHECK(config_hash(c.resolved).size() == 16);
  CHECK(config_hash(cfg(R"({"seed": 5})").resolved) != config_hash(c.resolved));
  CHECK(cfg("{}", 99).seed == 99);
}

TEST_CASE("config files accept comments") {
  const auto dir = scratch("comments");
  std::ofstream(dir / "c.json") << "// instanton\n{\"seed\": 3, /* inline */ \"connection\": {\"preset\": \"instanton\"}}\n";
  const ExperimentConfig c = load_config_file((dir / "c.json").string());
  CHECK(c.seed == 3);
}

TEST_CASE("reports are deterministic and self-describing") {
  const json doc = with(kSmall, R"({"connection": {"preset": "instanton"}, "curves": {"count": 3}})");
  const ExperimentConfig c = load_config(doc);
  const CommandResult a = run_command("levy", c, 1);
  const CommandResult b = run_command("levy", load_config(doc), 3);
  CHECK(a.report.dump(2) == b.report.dump(2));
  CHECK(a.tables == b.tables);
  CHECK(a.report["config_hash"] == config_hash(c.resolved));
  CHECK(a.report["seed"] == c.seed);
  CHECK(a.report.contains("tolerances"));
  CHECK(a.report["diagnostics"]["route_discrepancy_max"].get<double>() < 1e-6);
  CHECK(a.exit_code == kPass);

  const CommandResult other = run_command("levy", load_config(doc, 12345), 1);
  CHECK(other.report["seed"] == 12345);
  CHECK(other.report["config_hash"] != a.report["config_hash"]);
}

TEST_CASE("verify-instanton") {
  const auto inst = run_command("verify-instanton", load_config(with(kSmall, R"({"connection": {"preset": "instanton"}})")), 1);
  CHECK(inst.exit_code == kPass);
  CHECK(inst.report["results"]["max_selfdual_ratio"].get<double>() < 1e-10);
  CHECK(inst.tables.count("verify_instanton.csv") == 1);
  const auto zero = run_command("verify-instanton", load_config(with(kSmall, R"({"connection": {"preset": "zero"}})")), 1);
  CHECK(zero.exit_code == kPass);
  const auto pert = run_command(
      "verify-instanton",
      load_config(with(kSmall, R"({"connection": {"preset": "perturbed", "base": {"preset": "instanton"}}})")), 1);
  CHECK(pert.exit_code == kCheckFailed);
  CHECK(pert.report["verdict"] == "fail");
  CHECK(pert.report["results"]["max_codifferential_entry"].get<double>() > 1e-6);
}

TEST_CASE("levy command") {
  const auto zero = run_command("levy", load_config(with(kSmall, R"({"connection": {"preset": "zero"}, "curves": {"count": 2}})")), 1);
  CHECK(zero.exit_code == kPass);
  for (const auto& j : zero.report["results"]["jobs"]) CHECK(j["norm_value"].get<double>() == 0.0);

  const auto right = run_command(
      "levy", load_config(with(kSmall, R"({"connection": {"preset": "instanton"}, "curves": {"count": 2},
          "rotation_curves": [{"id": "e1R", "kind": "constant", "generator": {"right": [1, 0, 0]}}],
          "levy": {"expect": "nonvanish"}})")), 1);
  CHECK(right.exit_code == kPass);
  for (const auto& j : right.report["results"]["jobs"]) {
    CHECK(j["norm_term_rot_minus"].get<double>() > 1e-3);
    CHECK(j["norm_term_rot_plus"].get<double>() < 1e-10);
  }
  // expecting zero from a right rotation fails the check
  const auto wrong = run_command(
      "levy", load_config(with(kSmall, R"({"connection": {"preset": "instanton"}, "curves": {"count": 2},
          "rotation_curves": [{"id": "e1R", "kind": "constant", "generator": {"right": [1, 0, 0]}}]})")), 1);
  CHECK(wrong.exit_code == kCheckFailed);
  CHECK(wrong.tables.count("levy.csv") == 1);
}

TEST_CASE("holonomy, charge and lemma2 commands") {
  const auto flat = run_command("holonomy", load_config(with(kSmall, R"({"chart": {"preset": "flat"}, "holonomy": {"loops": 10}})")), 1);
  CHECK(flat.report["results"]["class"] == "Trivial");

  const auto s4 = run_command(
      "holonomy", load_config(with(kSmall, R"({"chart": {"preset": "round_s4"}, "holonomy": {"loops": 10, "expect": "SO3"}})")), 1);
  CHECK(s4.exit_code == kPass);
  CHECK(s4.report["results"]["class"] == "SO3");
  const auto mismatch = run_command(
      "holonomy", load_config(with(kSmall, R"({"chart": {"preset": "round_s4"}, "holonomy": {"loops": 10, "expect": "Trivial"}})")), 1);
  CHECK(mismatch.exit_code == kCheckFailed);

  const auto charge = run_command(
      "charge", load_config(with(kSmall, R"({"connection": {"preset": "instanton"}, "charge": {"expect": -1},
          "resolution": {"radial": 400, "angular": 6}})")), 1);
  CHECK(charge.exit_code == kPass);
  CHECK(charge.report["results"]["charge"].get<double>() == doctest::Approx(-1.0).epsilon(0.02));
  CHECK(charge.report["results"]["action"].get<double>() == doctest::Approx(4 * M_PI * M_PI).epsilon(0.01));

  const auto l2 = run_command("lemma2", load_config_file(std::string(LEVYLAP_CONFIG_DIR) + "/perturbed.json"), 1);
  CHECK(l2.exit_code == kPass);
  CHECK(l2.report["results"]["r_squared"].get<double>() > 0.99);
  CHECK(l2.report["results"]["c_fit"].get<double>() > 0.0);
}

TEST_CASE("outputs on disk and exit codes of the binary") {
  const auto dir = scratch("outputs");
  const auto r = run_command("verify-instanton", load_config(with(kSmall, R"({"connection": {"preset": "instanton"}})")), 1);
  write_outputs(r, dir.string());
  CHECK(std::filesystem::exists(dir / "report.json"));
  CHECK(std::filesystem::exists(dir / "tables" / "verify_instanton.csv"));
  CHECK(json::parse(slurp(dir / "report.json")) == r.report);

  std::ofstream(dir / "bad.json") << R"({"unknown_key": true})";
  std::ofstream(dir / "good.json") << with(kSmall, R"({"connection": {"preset": "instanton"}})").dump();
  std::ofstream(dir / "pert.json") << with(kSmall, R"({"connection": {"preset": "perturbed", "base": {"preset": "instanton"}}})").dump();
  const std::string out = " --out-dir " + (dir / "o").string();
  CHECK(run_cli("verify-instanton --config " + (dir / "bad.json").string() + out) == 2);
  CHECK(run_cli("verify-instanton --config " + (dir / "missing.json").string() + out) == 2);
  CHECK(run_cli("no-such-command") == 2);
  CHECK(run_cli("verify-instanton --config " + (dir / "good.json").string() + " --jobs 0" + out) == 2);
  CHECK(run_cli("verify-instanton --config " + (dir / "good.json").string() + out) == 0);
  CHECK(run_cli("verify-instanton --config " + (dir / "pert.json").string() + out) == 1);

  // two runs of the binary write byte-identical reports
  const auto d1 = dir / "r1", d2 = dir / "r2";
  CHECK(run_cli("verify-instanton --config " + (dir / "good.json").string() + " --jobs 2 --out-dir " + d1.string()) == 0);
  CHECK(run_cli("verify-instanton --config " + (dir / "good.json").string() + " --out-dir " + d2.string()) == 0);
  CHECK(slurp(d1 / "report.json") == slurp(d2 / "report.json"));
  CHECK(slurp(d1 / "tables" / "verify_instanton.csv") == slurp(d2 / "tables" / "verify_instanton.csv"));
}
