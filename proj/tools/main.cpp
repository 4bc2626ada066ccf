#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "commands.hpp"
#include "levylap/errors.hpp"
#include "levylap/simd.hpp"

int main(int argc, char** argv) {
  using namespace levylap;
  CLI::App app{"levylap: Levy Laplacian of parallel transport, instantons and holonomy"};
  app.require_subcommand(1, 1);

  std::string config_path;
  int jobs = 1;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed_override;

  const std::map<std::string, std::string> help{
      {"verify-instanton", "sample F+ and D*F on a grid and check the instanton equations"},
      {"levy", "modified Levy Laplacian of the transport over curves x rotation curves"},
      {"holonomy", "classify the holonomy of self-dual 2-forms and check the W conditions"},
      {"charge", "Yang-Mills action and topological charge by radial quadrature"},
      {"lemma2", "shrinking-curve limit of the diagonal kernel integral"},
      {"selftest", "structural invariants of every module"}};
  for (const auto& name : cli::command_names()) {
    auto* sub = app.add_subcommand(name, help.count(name) ? help.at(name) : "");
    sub->add_option("--config", config_path, "JSON experiment configuration (defaults apply when omitted)");
    sub->add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1, 256));
    sub->add_option("--out-dir", out_dir, "directory for report.json and tables/");
    sub->add_option("--seed-override", seed_override, "replace the configured seed");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kUsage;
  }
  const std::string name = app.get_subcommands().front()->get_name();

  try {
    const cli::ExperimentConfig cfg =
        config_path.empty() ? cli::load_config(cli::json::object(), seed_override)
                            : cli::load_config_file(config_path, seed_override);
    const auto t0 = std::chrono::steady_clock::now();
    const cli::CommandResult r = cli::run_command(name, cfg, jobs);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    cli::write_outputs(r, out_dir);
    std::fprintf(stderr, "%s: %s (exit %d, %.1f s, isa %s) -> %s/report.json\n", name.c_str(),
                 r.report.value("verdict", std::string("?")).c_str(), r.exit_code, secs,
                 simd::active().name, out_dir.c_str());
    return r.exit_code;
  } catch (const cli::ConfigError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return cli::kUsage;
  } catch (const ContractViolation& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return cli::kUsage;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return cli::kUsage;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return cli::kNumeric;
  } catch (const ClassificationFailure& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return cli::kNumeric;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return cli::kNumeric;
  }
}
