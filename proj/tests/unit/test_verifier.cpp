#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "hermitangent/serialization.hpp"
#include "hermitangent/verifier.hpp"

using namespace hermitangent;

namespace {

RunConfig config(std::uint32_t p, std::uint32_t nu, std::uint32_t n, Mode mode) {
  RunConfig c;
  c.p = p;
  c.nu = nu;
  c.n = n;
  c.mode = mode;
  return c;
}

RunOutcome quiet_run(const RunConfig& c) {
  std::ostringstream progress;
  return run(c, progress);
}

int cli(const std::string& args) {
  const std::string command = std::string(HERMITANGENT_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("hermitangent_test_" + name);
}

}  // namespace

TEST_CASE("mode names") {
  CHECK(parse_mode("full-theorem") == Mode::full_theorem);
  CHECK(parse_mode("tangency-check") == Mode::tangency);
  CHECK(parse_mode("conic-scan") == Mode::conic_scan);
  CHECK_FALSE(parse_mode("everything").has_value());
  for (Mode m : {Mode::canonical, Mode::tangency, Mode::orbit, Mode::conic_scan, Mode::uniqueness,
                 Mode::full_theorem, Mode::lang_solve, Mode::field_info}) {
    CHECK(parse_mode(to_string(m)) == m);
  }
}

TEST_CASE("theorem hypotheses") {
  CHECK_FALSE(theorem_hypothesis_violation(config(5, 1, 2, Mode::full_theorem)).has_value());
  CHECK(theorem_hypothesis_violation(config(5, 1, 5, Mode::full_theorem)).has_value());
  CHECK(theorem_hypothesis_violation(config(3, 1, 2, Mode::full_theorem)).has_value());
  CHECK(theorem_hypothesis_violation(config(4, 1, 2, Mode::full_theorem)).has_value());
  CHECK_FALSE(theorem_hypothesis_violation(config(2, 3, 3, Mode::full_theorem)).has_value());
  CHECK(theorem_hypothesis_violation(config(2, 3, 5, Mode::full_theorem)).has_value());
}

TEST_CASE("full theorem at (2, 5)") {
  const RunOutcome out = quiet_run(config(5, 1, 2, Mode::full_theorem));
  CHECK(out.exit_code == exit_ok);
  const json& r = out.report;
  CHECK(r["orbit_size"] == 3150);
  CHECK(r["stabilizer_order"] == 120);
  CHECK(r["predicted_count"] == 3150);
  CHECK(r["counts_match"] == true);
  CHECK(r["canonical_identity_ok"] == true);
  CHECK(r["all_baer"] == true);
  CHECK(r["all_rational"] == true);
  CHECK(r["uniqueness_survivors"] == 4);
  CHECK(r["conic_scan"]["matches_orbit"] == true);
  CHECK(r["orbit_size"].get<std::uint64_t>() * r["stabilizer_order"].get<std::uint64_t>() == r["group_order"]);
  CHECK(r["failed_clauses"].empty());
  CHECK(r["config"]["seed"] == 1);
}

TEST_CASE("reports are byte-stable") {
  RunConfig c = config(3, 2, 2, Mode::orbit);
  c.seed = 5;
  CHECK(quiet_run(c).report.dump() == quiet_run(c).report.dump());
}

TEST_CASE("hypothesis violations and caps") {
  CHECK(quiet_run(config(5, 1, 5, Mode::full_theorem)).exit_code == exit_bad_input);
  CHECK(quiet_run(config(3, 1, 2, Mode::full_theorem)).exit_code == exit_bad_input);
  CHECK(quiet_run(config(6, 1, 2, Mode::field_info)).exit_code == exit_bad_input);
  CHECK(quiet_run(config(3, 1, 4, Mode::canonical)).exit_code == exit_bad_input);
  RunConfig big = config(2, 11, 3, Mode::field_info);
  CHECK(quiet_run(big).exit_code == exit_cap_exceeded);
  RunConfig orbit = config(5, 1, 2, Mode::orbit);
  orbit.cap_orbit = 10;
  CHECK(quiet_run(orbit).exit_code == exit_cap_exceeded);
  RunConfig scan = config(5, 1, 2, Mode::uniqueness);
  scan.cap_matrices = 1000;
  CHECK(quiet_run(scan).exit_code == exit_cap_exceeded);
  CHECK(quiet_run(config(3, 2, 2, Mode::conic_scan)).exit_code == exit_cap_exceeded);
  CHECK(quiet_run(config(7, 1, 3, Mode::conic_scan)).exit_code == exit_bad_input);
  RunConfig shard = config(5, 1, 2, Mode::uniqueness);
  shard.shards = 2;
  shard.shard_index = 2;
  CHECK(quiet_run(shard).exit_code == exit_bad_input);
}

TEST_CASE("cap override") {
  RunConfig c;
  apply_cap_override(c, "1234", false, true);
  CHECK(c.cap_matrices == 1234);
  CHECK(c.cap_orbit == 1'000'000);
  apply_cap_override(c, nullptr, false, false);
  CHECK(c.cap_matrices == 1234);
  CHECK_THROWS_AS(apply_cap_override(c, "12x", false, false), Error);
}

TEST_CASE("out-of-reach orbit is replaced by random translates") {
  RunConfig c = config(2, 3, 3, Mode::full_theorem);
  c.translates = 200;
  const RunOutcome out = quiet_run(c);
  CHECK(out.exit_code == exit_ok);
  CHECK(out.report["orbit"]["status"] == "out_of_reach");
  CHECK(out.report["orbit"]["translates_checked"] == 200);
  CHECK(out.report["orbit"]["translate_failures"] == 0);
  CHECK(out.report["canonical_identity_ok"] == true);
  CHECK(out.report["uniqueness"]["status"] == "skipped");
}

TEST_CASE("modes") {
  CHECK(quiet_run(config(3, 2, 2, Mode::field_info)).report["field"]["q2"] == 81);
  CHECK(quiet_run(config(7, 1, 3, Mode::canonical)).report["canonical_identity_ok"] == true);
  const RunOutcome tangency = quiet_run(config(7, 1, 2, Mode::tangency));
  CHECK(tangency.exit_code == exit_ok);
  CHECK(tangency.report["tangency"]["totally_tangent"] == true);
  const RunOutcome lang = quiet_run(config(2, 3, 3, Mode::lang_solve));
  CHECK(lang.exit_code == exit_ok);
  CHECK(lang.report["clauses"]["lang_roundtrip"] == true);
  const RunOutcome conics = quiet_run(config(3, 1, 2, Mode::conic_scan));
  CHECK(conics.exit_code == exit_ok);
  CHECK(conics.report["conic_scan"]["conics"] == 252);
}

TEST_CASE("tangency and lang-solve read matrix files") {
  const FieldTower t = FieldTower::make(5, 1);
  const HermitianVariety x = canonical_variety(t, 2);
  std::mt19937_64 rng(4);
  const SqMatrix u = random_unitary(t, x.matrix(), rng);

  const auto curve_path = temp_path("curve.json");
  std::ofstream(curve_path) << matrix_to_json(t, u).dump();
  RunConfig c = config(5, 1, 2, Mode::tangency);
  c.in_path = curve_path.string();
  CHECK(quiet_run(c).exit_code == exit_ok);

  // Against the Fermat form the same curve fails.
  const auto pair_path = temp_path("pair.json");
  std::ofstream(pair_path) << json{{"curve", matrix_to_json(t, u)},
                                   {"variety", matrix_to_json(t, HermitianVariety::fermat(t, 3).matrix())}}
                                  .dump();
  c.in_path = pair_path.string();
  const RunOutcome fermat = quiet_run(c);
  CHECK(fermat.exit_code == exit_check_failed);
  CHECK(fermat.report["failed_clauses"][0] == "certificate");

  const auto h_path = temp_path("h.json");
  SqMatrix h = SqMatrix::identity(3);
  h(0, 1) = Element{7};
  h(1, 0) = t.frobenius_q(Element{7});
  std::ofstream(h_path) << matrix_to_json(t, h).dump();
  RunConfig l = config(5, 1, 2, Mode::lang_solve);
  l.in_path = h_path.string();
  const RunOutcome lang = quiet_run(l);
  CHECK(lang.exit_code == exit_ok);
  CHECK(lang_map(t, matrix_from_json(t, lang.report["solution"])) == h);

  h(0, 1) = Element{8};
  std::ofstream(h_path) << matrix_to_json(t, h).dump();
  CHECK(quiet_run(l).exit_code == exit_bad_input);

  c.in_path = temp_path("missing.json").string();
  CHECK(quiet_run(c).exit_code == exit_bad_input);
}

TEST_CASE("command line exit codes and bundles") {
  CHECK(cli("--p 5 --nu 1 --n 5 --mode full-theorem") == 2);
  CHECK(cli("--p 3 --nu 1 --n 2 --mode full-theorem") == 2);
  CHECK(cli("--mode nonsense") == 2);
  CHECK(cli("--bogus-flag") == 2);
  CHECK(cli("field-info --p 5") == 0);
  CHECK(cli("uniqueness --p 5 --n 2 --cap-matrices 100") == 3);
  CHECK(cli("canonical --p 7 --n 3") == 0);

  const auto bundle = temp_path("bundle.jsonl");
  const auto report = temp_path("report.json");
  CHECK(cli("orbit --p 3 --n 2 --bundle " + bundle.string() + " --out " + report.string()) == 0);
  std::ifstream in(bundle);
  std::size_t lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  CHECK(lines == 253);
  CHECK(json::parse(std::ifstream(report))["orbit_size"] == 252);
  CHECK(cli("tangency-check --in " + bundle.string()) == 0);

  // Flip one certificate scalar and the re-check fails.
  std::ifstream original(bundle);
  std::ostringstream text;
  text << original.rdbuf();
  std::string s = text.str();
  const auto pos = s.find("\"scalar\":[", s.find('\n'));
  REQUIRE(pos != std::string::npos);
  s[pos + 10] = s[pos + 10] == '1' ? '2' : '1';
  std::ofstream(bundle) << s;
  CHECK(cli("tangency --in " + bundle.string()) == 1);
}
