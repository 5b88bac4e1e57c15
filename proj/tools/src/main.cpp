#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "hermitangent/verifier.hpp"

namespace ht = hermitangent;

int main(int argc, char** argv) {
  CLI::App app{"Verifies rational normal curves totally tangent to Hermitian varieties over F_{q^2}"};
  ht::RunConfig config;
  std::string mode_name = "full-theorem";
  std::string positional_mode;
  std::string out_path;
  bool spot_check = false;

  app.add_option("command", positional_mode,
                 "Mode as a subcommand word: canonical, tangency (tangency-check), orbit, conic-scan, uniqueness, "
                 "full-theorem, lang-solve, field-info");
  app.add_option("--mode", mode_name, "Mode (same values as the positional command)");
  app.add_option("--p", config.p, "Characteristic")->check(CLI::PositiveNumber);
  app.add_option("--nu", config.nu, "q = p^nu")->check(CLI::PositiveNumber);
  app.add_option("--n", config.n, "Curve degree / ambient dimension");
  app.add_option("--seed", config.seed, "Seed for generator sampling and spot checks");
  app.add_option("--shards", config.shards, "Number of scan shards")->check(CLI::PositiveNumber);
  app.add_option("--shard-index", config.shard_index, "Shard processed by this run");
  app.add_option("--threads", config.threads, "Worker threads for orbit and scans")->check(CLI::PositiveNumber);
  app.add_option("--out", out_path, "Report path (default stdout)");
  app.add_option("--in", config.in_path, "Input matrix, curve/variety pair or certificate bundle");
  app.add_option("--bundle", config.bundle_path, "Write the orbit certificate bundle (JSONL) here");
  app.add_option("--cap-elements", config.cap_elements, "Largest admissible |F_{q^2}|");
  auto* cap_matrices = app.add_option("--cap-matrices", config.cap_matrices, "Largest uniqueness scan");
  auto* cap_orbit = app.add_option("--cap-orbit", config.cap_orbit, "Largest orbit enumerated explicitly");
  app.add_option("--translates", config.translates, "Random unitary translates checked when the orbit is out of reach");
  app.add_flag("--verify-all-orbit,!--spot-check-orbit", config.verify_all_orbit,
               "Tangency check on every orbit member (default) or on a seeded sample");
  app.add_flag("--spot-check", spot_check, "Same as --spot-check-orbit");
  app.add_flag("--timings", config.timings, "Include stage timings in the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ht::exit_bad_input;
  }
  if (spot_check) config.verify_all_orbit = false;

  const std::string& chosen = positional_mode.empty() ? mode_name : positional_mode;
  const auto mode = ht::parse_mode(chosen);
  if (!mode) {
    std::cerr << nlohmann::json{{"stage", "error"}, {"kind", "invalid_argument"}, {"message", "unknown mode " + chosen}}
                     .dump()
              << '\n';
    return ht::exit_bad_input;
  }
  config.mode = *mode;

  try {
    ht::apply_cap_override(config, std::getenv("HERMITANGENT_CAP_OVERRIDE"), cap_matrices->count() > 0,
                           cap_orbit->count() > 0);
  } catch (const ht::Error& e) {
    std::cerr << nlohmann::json{{"stage", "error"}, {"kind", "invalid_argument"}, {"message", e.what()}}.dump()
              << '\n';
    return ht::exit_bad_input;
  }

  const ht::RunOutcome outcome = ht::run(config, std::cerr);
  const std::string text = outcome.report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    out << text;
    if (!out) {
      std::cerr << nlohmann::json{{"stage", "error"}, {"kind", "io"}, {"message", "cannot write " + out_path}}.dump()
                << '\n';
      return ht::exit_check_failed;
    }
  }
  return outcome.exit_code;
}
