#pragma once

// End-to-end verification runs behind the hermitangent command line tool.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>

#include <nlohmann/json.hpp>

#include "hermitangent/unitary_orbit.hpp"

namespace hermitangent {

enum class Mode {
  canonical,
  tangency,
  orbit,
  conic_scan,
  uniqueness,
  full_theorem,
  lang_solve,
  field_info,
};

std::optional<Mode> parse_mode(std::string_view name);
std::string_view to_string(Mode mode) noexcept;

enum ExitCode : int {
  exit_ok = 0,
  exit_check_failed = 1,
  exit_bad_input = 2,
  exit_cap_exceeded = 3,
};

struct RunConfig {
  std::uint32_t p = 5;
  std::uint32_t nu = 1;
  std::uint32_t n = 2;
  Mode mode = Mode::full_theorem;
  std::uint64_t seed = 1;
  std::size_t shards = 1;
  std::size_t shard_index = 0;
  std::size_t threads = 1;
  std::uint64_t cap_elements = kDefaultElementCap;
  std::uint64_t cap_matrices = std::uint64_t{1} << 22;
  std::uint64_t cap_orbit = 1'000'000;
  bool verify_all_orbit = true;
  bool timings = false;
  std::size_t translates = 1000;  // random translates when the orbit is out of reach
  std::string in_path;
  std::string bundle_path;
};

// Applies HERMITANGENT_CAP_OVERRIDE (an integer) to the matrix and orbit
// caps that were not set explicitly.
void apply_cap_override(RunConfig& config, const char* env_value, bool matrices_explicit, bool orbit_explicit);

struct RunOutcome {
  int exit_code = exit_ok;
  nlohmann::json report;
};

// Runs one mode. Progress is written to `progress` as JSON lines.
RunOutcome run(const RunConfig& config, std::ostream& progress);

// The hypothesis filter of full-theorem mode: p prime, n not divisible by p,
// 2n <= q. Returns the reason for rejection.
std::optional<std::string> theorem_hypothesis_violation(const RunConfig& config);

// X_{B'} with B' the Hermitian rescaling of the canonical matrix B.
HermitianVariety canonical_variety(const FieldTower& tower, std::size_t n);

struct TranslateCheck {
  std::size_t checked = 0;
  std::size_t failures = 0;
};

// Tangency certificates for Gamma_0 * [U] with U random unitary for X.
TranslateCheck check_random_translates(const FieldTower& tower, const HermitianVariety& x, std::size_t count,
                                       std::mt19937_64& rng);

}  // namespace hermitangent
