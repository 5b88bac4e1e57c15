#include "hermitangent/verifier.hpp"

#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

#include "hermitangent/serialization.hpp"

namespace hermitangent {

namespace {

constexpr std::array<std::pair<Mode, std::string_view>, 8> kModeNames{{
    {Mode::canonical, "canonical"},
    {Mode::tangency, "tangency"},
    {Mode::orbit, "orbit"},
    {Mode::conic_scan, "conic-scan"},
    {Mode::uniqueness, "uniqueness"},
    {Mode::full_theorem, "full-theorem"},
    {Mode::lang_solve, "lang-solve"},
    {Mode::field_info, "field-info"},
}};

using Clock = std::chrono::steady_clock;

// Shared state of one run: report under construction, failed clauses and
// progress stream.
class Run {
 public:
  Run(const RunConfig& config, std::ostream& progress) : config_(config), progress_(progress), start_(Clock::now()) {}

  const RunConfig& config() const noexcept { return config_; }
  json& report() noexcept { return report_; }

  void stage(const std::string& name, json fields = json::object()) {
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start_).count();
    fields["stage"] = name;
    fields["elapsed_ms"] = ms;
    progress_ << fields.dump() << std::endl;
    if (config_.timings) report_["timings"][name] = ms;
  }

  void clause(const std::string& name, bool ok) {
    report_["clauses"][name] = ok;
    if (!ok) {
      failed_.push_back(name);
      progress_ << json{{"stage", "check"}, {"failed_clause", name}}.dump() << std::endl;
    }
  }

  int finish() {
    report_["failed_clauses"] = failed_;
    report_["ok"] = failed_.empty();
    return failed_.empty() ? exit_ok : exit_check_failed;
  }

 private:
  const RunConfig& config_;
  std::ostream& progress_;
  Clock::time_point start_;
  json report_ = json::object();
  std::vector<std::string> failed_;
};

json config_echo(const RunConfig& c) {
  return {{"p", c.p},
          {"nu", c.nu},
          {"n", c.n},
          {"mode", to_string(c.mode)},
          {"seed", c.seed},
          {"shards", c.shards},
          {"shard_index", c.shard_index},
          {"threads", c.threads},
          {"caps", {{"elements", c.cap_elements}, {"matrices", c.cap_matrices}, {"orbit", c.cap_orbit}}},
          {"verify_all_orbit", c.verify_all_orbit}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::invalid_argument, "cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::invalid_argument, std::string("invalid JSON input: ") + e.what());
  }
}

FieldTower make_tower(const RunConfig& c) { return FieldTower::make(c.p, c.nu, c.cap_elements); }

Poly canonical_target(const FieldTower& tower, std::size_t n) {
  const Field& f = tower.fq2();
  return pow(f, sub(f, Poly::monomial(Field::one(), tower.q()), Poly::variable()), n);
}

bool canonical_identity(Run& run, const FieldTower& tower, std::size_t n) {
  const SqMatrix b = canonical_matrix_b(tower, n);
  const HomogPair pb = pullback(tower, RationalNormalCurve::canonical(n), HermitianVariety(tower, b));
  const bool ok = pb.degree == n * (tower.q() + 1) && pb.poly == canonical_target(tower, n);
  run.report()["matrix_b"] = matrix_to_json(tower, b);
  run.report()["canonical_identity_ok"] = ok;
  run.clause("canonical_identity", ok);
  run.stage("canonical", {{"ok", ok}});
  return ok;
}

void describe_variety(Run& run, const FieldTower& tower, const HermitianVariety& x, const SqMatrix& b) {
  const auto c = proportionality(tower.fq2(), b, x.matrix());
  run.report()["hermitian_scalar"] = element_to_json(tower.fq2(), *c);
  run.report()["hermitian_matrix"] = matrix_to_json(tower, x.matrix());
}

json tangency_json(const FieldTower& tower, const TangencyOutcome& outcome) {
  if (const auto* cert = std::get_if<TangencyCertificate>(&outcome)) {
    return {{"totally_tangent", true}, {"certificate", certificate_to_json(tower, *cert)}};
  }
  return {{"totally_tangent", false}, {"failure", to_string(std::get<TangencyFailure>(outcome))}};
}

bool certified(const FieldTower& tower, const RationalNormalCurve& curve, const HermitianVariety& x,
               const TangencyOutcome& outcome) {
  const auto* cert = std::get_if<TangencyCertificate>(&outcome);
  return cert != nullptr && verify_certificate(tower, curve, x, *cert);
}

// Orbit with sampled generators; a generator is added while the orbit-stabilizer
// product falls short of |PGU|.
OrbitResult sampled_orbit(Run& run, const FieldTower& tower, const HermitianVariety& x) {
  const std::size_t n = x.ambient_dimension();
  const std::uint64_t group = order_pgu(n + 1, tower.q());
  std::mt19937_64 rng(run.config().seed);
  std::vector<SqMatrix> generators;
  for (int i = 0; i < 2; ++i) generators.push_back(random_unitary(tower, x.matrix(), rng));
  OrbitOptions options;
  options.cap = run.config().cap_orbit;
  options.verify_all = run.config().verify_all_orbit;
  options.seed = run.config().seed;
  options.threads = run.config().threads;
  for (;;) {
    OrbitResult orbit = orbit_enumerate(tower, x, RationalNormalCurve::canonical(n), generators, options);
    run.stage("orbit", {{"generators", generators.size()},
                        {"orbit_size", orbit.curves.size()},
                        {"stabilizer_order", orbit.stabilizer_order}});
    if (orbit.group_order() == group || generators.size() >= 8) return orbit;
    generators.push_back(random_unitary(tower, x.matrix(), rng));
  }
}

void report_orbit(Run& run, const FieldTower& tower, const HermitianVariety& x, const OrbitResult& orbit) {
  const std::size_t n = x.ambient_dimension();
  const GroupOrderTable orders = group_order_table(n + 1, tower.q());
  json& r = run.report();
  r["generator_count_used"] = orbit.generator_count_used;
  r["orbit_size"] = orbit.curves.size();
  r["stabilizer_order"] = orbit.stabilizer_order;
  r["predicted_count"] = orders.predicted_count;
  r["group_order"] = orders.pgu_order;
  r["counts_match"] = orbit.curves.size() == orders.predicted_count;
  r["tangency_checked"] = orbit.tangency_checked;
  r["tangency_failures"] = orbit.tangency_failures;
  r["all_tangent"] = orbit.tangency_failures == 0;
  r["all_baer"] = orbit.baer_failures == 0 && orbit.tangency_failures == 0;
  r["all_rational"] = orbit.rationality_failures == 0 && orbit.tangency_failures == 0;
  run.clause("counts_match", r["counts_match"].get<bool>());
  run.clause("orbit_stabilizer", orbit.group_order() == orders.pgu_order);
  run.clause("all_tangent", r["all_tangent"].get<bool>());
  run.clause("all_baer", r["all_baer"].get<bool>());
  run.clause("all_rational", r["all_rational"].get<bool>());

  const StabilizerRecord s =
      stabilizer_as_pgl2(tower, x, RationalNormalCurve::canonical(n), orbit.stabilizer_elements);
  r["stabilizer"] = {{"image_order", s.image_order},
                     {"injective", s.injective},
                     {"homomorphism", s.homomorphism},
                     {"preserves_baer", s.preserves_baer},
                     {"conjugate_into_pgl2_fq", s.conjugate_into_pgl2_fq},
                     {"order_matches", s.order_matches}};
  run.clause("stabilizer_is_pgl2", s.ok());
  run.stage("stabilizer", {{"ok", s.ok()}});

  if (!run.config().bundle_path.empty()) {
    std::ofstream out(run.config().bundle_path);
    if (!out) fail(ErrorKind::invalid_argument, "cannot write " + run.config().bundle_path);
    write_certificate_bundle(out, tower, x, orbit);
    out.flush();
    if (!out) fail(ErrorKind::internal_check, "write failed for " + run.config().bundle_path);
    r["bundle"] = {{"path", run.config().bundle_path}, {"records", orbit.curves.size()}};
    run.stage("bundle", {{"records", orbit.curves.size()}});
  }
}

ScanOptions scan_options(const RunConfig& c) {
  ScanOptions o;
  o.cap = c.cap_matrices;
  o.shards = c.shards;
  o.shard_index = c.shard_index;
  o.threads = c.threads;
  return o;
}

ConicScanResult conic_scan(Run& run, const FieldTower& tower, const HermitianVariety& x) {
  const ConicScanResult scan = brute_force_conic_scan(tower, x, scan_options(run.config()));
  run.report()["conic_scan"] = {{"conics", scan.keys.size()},
                                {"candidates", scan.candidates},
                                {"scanned", scan.scanned},
                                {"prefilter_survivors", scan.prefilter_survivors}};
  run.stage("conic-scan", {{"conics", scan.keys.size()}});
  return scan;
}

void uniqueness(Run& run, const FieldTower& tower, const HermitianVariety& x) {
  const Field& f = tower.fq2();
  const UniquenessScanResult scan = uniqueness_scan(tower, x.ambient_dimension(), scan_options(run.config()));
  std::set<SqMatrix> classes;
  bool proportional = true;
  for (const auto& a : scan.survivors) {
    classes.insert(projective_normalize(f, a));
    proportional = proportional && proportionality(f, x.matrix(), a).has_value();
  }
  const bool full = run.config().shards == 1;
  run.report()["uniqueness_survivors"] = scan.survivors.size();
  run.report()["uniqueness"] = {{"scope", "invertible Hermitian matrices over F_{q^2}"},
                                {"candidates", scan.candidates},
                                {"scanned", scan.scanned},
                                {"survivors", scan.survivors.size()},
                                {"projective_classes", classes.size()},
                                {"proportional_to_canonical", proportional}};
  if (full) {
    run.clause("uniqueness", classes.size() == 1 && proportional && scan.survivors.size() == tower.q() - 1);
  } else {
    run.clause("uniqueness", proportional);
  }
  run.stage("uniqueness", {{"survivors", scan.survivors.size()}});
}

void mode_field_info(Run& run, const FieldTower& tower) {
  run.report()["field"] = field_info(tower);
}

void mode_canonical(Run& run, const FieldTower& tower) {
  const std::size_t n = run.config().n;
  canonical_identity(run, tower, n);
  const HermitianVariety x = canonical_variety(tower, n);
  describe_variety(run, tower, x, canonical_matrix_b(tower, n));
}

void mode_tangency(Run& run, const FieldTower& config_tower) {
  const RunConfig& c = run.config();
  if (c.in_path.empty()) {
    const HermitianVariety x = canonical_variety(config_tower, c.n);
    const RationalNormalCurve curve = RationalNormalCurve::canonical(c.n);
    const TangencyOutcome outcome = total_tangency_check(config_tower, curve, x);
    run.report()["tangency"] = tangency_json(config_tower, outcome);
    run.clause("certificate", certified(config_tower, curve, x, outcome));
    return;
  }

  const std::string text = read_file(c.in_path);
  const std::string first_line = text.substr(0, text.find('\n'));
  json head;
  try {
    head = json::parse(first_line);
  } catch (const json::exception&) {
    head = json();
  }
  if (head.is_object() && head.value("format", "") == "hermitangent.bundle") {
    std::istringstream in(text);
    const BundleCheck check = verify_certificate_bundle(in);
    run.report()["bundle"] = {{"records", check.records}, {"failures", check.failures}, {"messages", check.messages}};
    run.clause("bundle", check.failures == 0);
    run.stage("bundle-check", {{"records", check.records}, {"failures", check.failures}});
    return;
  }

  // A curve matrix, optionally paired with a variety: {"curve": ..., "variety": ...}.
  const json doc = parse_json(text);
  const json& curve_doc = doc.contains("curve") ? doc["curve"] : doc;
  const auto [p, nu] = matrix_tower_params(curve_doc);
  const FieldTower tower = FieldTower::make(p, nu, c.cap_elements);
  const RationalNormalCurve curve(tower.fq2(), matrix_from_json(tower, curve_doc));
  const HermitianVariety x = doc.contains("variety")
                                 ? HermitianVariety(tower, matrix_from_json(tower, doc["variety"]))
                                 : canonical_variety(tower, curve.degree());
  const TangencyOutcome outcome = total_tangency_check(tower, curve, x);
  run.report()["tangency"] = tangency_json(tower, outcome);
  run.clause("certificate", certified(tower, curve, x, outcome));
}

void mode_orbit(Run& run, const FieldTower& tower) {
  const HermitianVariety x = canonical_variety(tower, run.config().n);
  report_orbit(run, tower, x, sampled_orbit(run, tower, x));
}

void mode_conic_scan(Run& run, const FieldTower& tower) {
  if (run.config().n != 2) fail(ErrorKind::invalid_argument, "conic-scan needs n = 2");
  const HermitianVariety x = canonical_variety(tower, 2);
  const ConicScanResult scan = conic_scan(run, tower, x);
  if (run.config().shards == 1) {
    const std::uint64_t predicted = group_order_table(3, tower.q()).predicted_count;
    run.report()["predicted_count"] = predicted;
    run.clause("conic_count", scan.keys.size() == predicted);
  }
}

void mode_uniqueness(Run& run, const FieldTower& tower) {
  uniqueness(run, tower, canonical_variety(tower, run.config().n));
}

void mode_lang_solve(Run& run, const FieldTower& config_tower) {
  const RunConfig& c = run.config();
  std::optional<FieldTower> tower;
  SqMatrix h;
  if (c.in_path.empty()) {
    tower = config_tower;
    h = canonical_variety(*tower, c.n).matrix();
  } else {
    const json doc = parse_json(read_file(c.in_path));
    const auto [p, nu] = matrix_tower_params(doc);
    tower = FieldTower::make(p, nu, c.cap_elements);
    h = matrix_from_json(*tower, doc);
  }
  if (!is_hermitian(*tower, h)) fail(ErrorKind::not_hermitian, "lang-solve input is not Hermitian");
  const SqMatrix t = lang_decompose(*tower, h);
  const bool ok = lang_map(*tower, t) == h;
  run.report()["input"] = matrix_to_json(*tower, h);
  run.report()["solution"] = matrix_to_json(*tower, t);
  run.clause("lang_roundtrip", ok);
}

void mode_full_theorem(Run& run, const FieldTower& tower) {
  const RunConfig& c = run.config();
  const std::size_t n = c.n;
  canonical_identity(run, tower, n);
  const HermitianVariety x = canonical_variety(tower, n);
  describe_variety(run, tower, x, canonical_matrix_b(tower, n));

  const GroupOrderTable orders = group_order_table(n + 1, tower.q());
  if (orders.predicted_count > c.cap_orbit) {
    // Orbit out of reach: canonical certificate plus random unitary translates.
    const RationalNormalCurve gamma0 = RationalNormalCurve::canonical(n);
    const bool canonical_ok = certified(tower, gamma0, x, total_tangency_check(tower, gamma0, x));
    std::mt19937_64 rng(c.seed);
    const TranslateCheck t = check_random_translates(tower, x, c.translates, rng);
    run.report()["predicted_count"] = orders.predicted_count;
    run.report()["group_order"] = orders.pgu_order;
    run.report()["orbit"] = {{"status", "out_of_reach"},
                             {"cap", c.cap_orbit},
                             {"canonical_certificate", canonical_ok},
                             {"translates_checked", t.checked},
                             {"translate_failures", t.failures}};
    run.clause("canonical_certificate", canonical_ok);
    run.clause("random_translates", t.failures == 0);
    run.stage("translates", {{"checked", t.checked}, {"failures", t.failures}});
  } else {
    const OrbitResult orbit = sampled_orbit(run, tower, x);
    report_orbit(run, tower, x, orbit);
    if (n == 2 && tower.q() <= 7 && tower.p() % 2 == 1) {
      const ConicScanResult scan = conic_scan(run, tower, x);
      std::vector<CurveKey> orbit_keys = orbit.keys;
      std::sort(orbit_keys.begin(), orbit_keys.end());
      const bool same = c.shards == 1 ? scan.keys == orbit_keys
                                      : std::includes(orbit_keys.begin(), orbit_keys.end(), scan.keys.begin(),
                                                      scan.keys.end());
      run.report()["conic_scan"]["matches_orbit"] = same;
      run.clause("conic_scan_matches_orbit", same);
    }
  }

  std::uint64_t candidates = 1;
  bool within_cap = true;
  for (std::size_t i = 0; i < (n + 1) * (n + 1) && within_cap; ++i) {
    within_cap = !__builtin_mul_overflow(candidates, tower.q(), &candidates) && candidates <= c.cap_matrices;
  }
  if (within_cap) {
    uniqueness(run, tower, x);
  } else {
    run.report()["uniqueness"] = {{"status", "skipped"}, {"cap", c.cap_matrices}};
    run.stage("uniqueness", {{"skipped", true}});
  }
}

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument:
    case ErrorKind::hypothesis_violation:
    case ErrorKind::not_hermitian:
    case ErrorKind::singular_matrix:
    case ErrorKind::mixed_field:
      return exit_bad_input;
    case ErrorKind::cap_exceeded:
      return exit_cap_exceeded;
    default:
      return exit_check_failed;
  }
}

}  // namespace

std::optional<Mode> parse_mode(std::string_view name) {
  if (name == "tangency-check") return Mode::tangency;
  for (const auto& [mode, text] : kModeNames) {
    if (text == name) return mode;
  }
  return std::nullopt;
}

std::string_view to_string(Mode mode) noexcept {
  for (const auto& [m, text] : kModeNames) {
    if (m == mode) return text;
  }
  return "unknown";
}

void apply_cap_override(RunConfig& config, const char* env_value, bool matrices_explicit, bool orbit_explicit) {
  if (env_value == nullptr || *env_value == '\0') return;
  std::uint64_t cap = 0;
  try {
    std::size_t used = 0;
    cap = std::stoull(env_value, &used);
    if (used != std::string_view(env_value).size()) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    fail(ErrorKind::invalid_argument, std::string("HERMITANGENT_CAP_OVERRIDE is not an integer: ") + env_value);
  }
  if (!matrices_explicit) config.cap_matrices = cap;
  if (!orbit_explicit) config.cap_orbit = cap;
}

std::optional<std::string> theorem_hypothesis_violation(const RunConfig& c) {
  if (!is_prime(c.p)) return std::to_string(c.p) + " is not prime";
  if (c.nu == 0) return std::string("nu must be positive");
  if (c.n < 2) return std::string("n must be at least 2");
  if (c.n % c.p == 0) return "n = " + std::to_string(c.n) + " is divisible by p = " + std::to_string(c.p);
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < c.nu; ++i) {
    q *= c.p;
    if (q > (std::uint64_t{1} << 32)) break;
  }
  if (2 * std::uint64_t{c.n} > q) {
    return "2n = " + std::to_string(2 * c.n) + " exceeds q = " + std::to_string(q);
  }
  return std::nullopt;
}

HermitianVariety canonical_variety(const FieldTower& tower, std::size_t n) {
  const auto rescaled = hermitian_rescale(tower, canonical_matrix_b(tower, n));
  require(rescaled.has_value(), ErrorKind::internal_check, "no Hermitian multiple of B");
  return HermitianVariety(tower, rescaled->matrix);
}

TranslateCheck check_random_translates(const FieldTower& tower, const HermitianVariety& x, std::size_t count,
                                       std::mt19937_64& rng) {
  TranslateCheck t;
  for (std::size_t i = 0; i < count; ++i) {
    const RationalNormalCurve curve(tower.fq2(), random_unitary(tower, x.matrix(), rng));
    ++t.checked;
    if (!certified(tower, curve, x, total_tangency_check(tower, curve, x))) ++t.failures;
  }
  return t;
}

RunOutcome run(const RunConfig& config, std::ostream& progress) {
  Run state(config, progress);
  state.report()["config"] = config_echo(config);
  try {
    if (config.shards == 0 || config.shard_index >= config.shards) {
      fail(ErrorKind::invalid_argument, "shard index must be below the shard count");
    }
    if (config.mode == Mode::full_theorem) {
      if (const auto why = theorem_hypothesis_violation(config)) fail(ErrorKind::hypothesis_violation, *why);
    }
    const FieldTower tower = make_tower(config);
    state.report()["config"]["q"] = tower.q();
    state.stage("tower", {{"q", tower.q()}});
    switch (config.mode) {
      case Mode::field_info: mode_field_info(state, tower); break;
      case Mode::canonical: mode_canonical(state, tower); break;
      case Mode::tangency: mode_tangency(state, tower); break;
      case Mode::orbit: mode_orbit(state, tower); break;
      case Mode::conic_scan: mode_conic_scan(state, tower); break;
      case Mode::uniqueness: mode_uniqueness(state, tower); break;
      case Mode::full_theorem: mode_full_theorem(state, tower); break;
      case Mode::lang_solve: mode_lang_solve(state, tower); break;
    }
  } catch (const Error& e) {
    state.report()["error"] = {{"kind", to_string(e.kind())}, {"message", e.what()}};
    progress << json{{"stage", "error"}, {"kind", to_string(e.kind())}, {"message", e.what()}}.dump() << std::endl;
    state.finish();
    state.report()["ok"] = false;
    return {exit_code_for(e.kind()), std::move(state.report())};
  }
  const int code = state.finish();
  return {code, std::move(state.report())};
}

}  // namespace hermitangent
