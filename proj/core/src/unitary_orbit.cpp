#include "hermitangent/unitary_orbit.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <unordered_map>

#include "hermitangent/concurrent_key_set.hpp"
#include "parallel.hpp"

namespace hermitangent {

std::vector<CurveKey> ConcurrentKeySet::sorted() const {
  std::lock_guard lock(mutex_);
  std::vector<CurveKey> out(keys_.begin(), keys_.end());
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) fail(ErrorKind::cap_exceeded, "group order overflows 64 bits");
  return r;
}

std::uint64_t checked_pow(std::uint64_t base, std::uint64_t e) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < e; ++i) r = checked_mul(r, base);
  return r;
}

bool is_prime_power(std::uint64_t q) {
  if (q < 2) return false;
  const auto factors = prime_factors(q);
  return factors.size() == 1;
}

}  // namespace

std::uint64_t order_pgl2(std::uint64_t q) {
  if (!is_prime_power(q)) fail(ErrorKind::invalid_argument, std::to_string(q) + " is not a prime power");
  return checked_mul(q, checked_mul(q - 1, q + 1));
}

std::uint64_t order_pgu(std::uint64_t n_plus_1, std::uint64_t q) {
  require(n_plus_1 >= 1, ErrorKind::invalid_argument, "matrix size must be positive");
  if (!is_prime_power(q)) fail(ErrorKind::invalid_argument, std::to_string(q) + " is not a prime power");
  const std::uint64_t m = n_plus_1;
  // The i = 1 factor q + 1 is the order of the centre.
  std::uint64_t order = checked_pow(q, m * (m - 1) / 2);
  for (std::uint64_t i = 2; i <= m; ++i) {
    const std::uint64_t qi = checked_pow(q, i);
    order = checked_mul(order, i % 2 == 0 ? qi - 1 : qi + 1);
  }
  return order;
}

GroupOrderTable group_order_table(std::uint64_t n_plus_1, std::uint64_t q) {
  GroupOrderTable t;
  t.pgu_order = order_pgu(n_plus_1, q);
  t.pgl2_q_order = order_pgl2(q);
  require(t.pgu_order % t.pgl2_q_order == 0, ErrorKind::internal_check, "|PGL_2(F_q)| does not divide |PGU|");
  t.predicted_count = t.pgu_order / t.pgl2_q_order;
  return t;
}

bool is_unitary_for(const FieldTower& tower, const SqMatrix& u, const SqMatrix& a) {
  const Field& f = tower.fq2();
  return mul(f, mul(f, u, a), conj_transpose(tower, u)) == a;
}

bool preserves_variety(const FieldTower& tower, const SqMatrix& u, const HermitianVariety& x) {
  const Field& f = tower.fq2();
  if (u.size() != x.matrix().size() || !is_invertible(f, u)) return false;
  const SqMatrix image = mul(f, mul(f, u, x.matrix()), conj_transpose(tower, u));
  return proportionality(f, x.matrix(), image).has_value();
}

SqMatrix random_invertible(const FieldTower& tower, std::size_t size, std::mt19937_64& rng) {
  const Field& f = tower.fq2();
  for (int attempt = 0; attempt < 256; ++attempt) {
    std::vector<Element> e(size * size);
    for (auto& x : e) x = Element{static_cast<std::uint32_t>(rng() % f.size())};
    SqMatrix m(size, std::move(e));
    if (is_invertible(f, m)) return m;
  }
  fail(ErrorKind::internal_check, "failed to sample an invertible matrix");
}

SqMatrix random_unitary(const FieldTower& tower, const SqMatrix& a, std::mt19937_64& rng) {
  const Field& f = tower.fq2();
  const SqMatrix t = lang_decompose(tower, a);
  const SqMatrix t_inv = invert(f, t);
  for (int attempt = 0; attempt < 16; ++attempt) {
    const SqMatrix r = random_invertible(tower, a.size(), rng);
    const SqMatrix v = mul(f, invert(f, lang_decompose(tower, lang_map(tower, r))), r);
    SqMatrix u = mul(f, mul(f, t, v), t_inv);
    if (is_unitary_for(tower, u, a)) return u;
  }
  fail(ErrorKind::internal_check, "random_unitary produced no verified element");
}

// ---------------------------------------------------------------------------
// Orbit enumeration

namespace {

// Closure of a set of projectively normalized matrices under multiplication.
class ProjectiveClosure {
 public:
  ProjectiveClosure(const Field& f, std::size_t n) : f_(f), identity_(SqMatrix::identity(n)) {
    elements_.insert(identity_);
  }

  bool contains(const SqMatrix& normalized) const { return elements_.count(normalized) != 0; }

  // Returns false when g is already in the group.
  bool add_generator(const SqMatrix& normalized) {
    if (contains(normalized)) return false;
    generators_.push_back(normalized);
    elements_.clear();
    elements_.insert(identity_);
    std::vector<SqMatrix> queue{identity_};
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (const auto& g : generators_) {
        SqMatrix next = projective_normalize(f_, mul(f_, queue[head], g));
        if (elements_.insert(next).second) queue.push_back(std::move(next));
      }
    }
    return true;
  }

  const std::vector<SqMatrix>& generators() const noexcept { return generators_; }
  std::vector<SqMatrix> elements() const { return {elements_.begin(), elements_.end()}; }
  std::size_t order() const noexcept { return elements_.size(); }

 private:
  const Field& f_;
  SqMatrix identity_;
  std::vector<SqMatrix> generators_;
  std::set<SqMatrix> elements_;
};

}  // namespace

OrbitResult orbit_enumerate(const FieldTower& tower, const HermitianVariety& x, const RationalNormalCurve& seed_curve,
                            std::span<const SqMatrix> generators, const OrbitOptions& options) {
  const Field& f = tower.fq2();
  const std::size_t size = seed_curve.matrix().size();
  require(x.matrix().size() == size, ErrorKind::invalid_argument, "curve and variety live in different spaces");
  for (const auto& g : generators) {
    if (!preserves_variety(tower, g, x)) fail(ErrorKind::not_in_group, "orbit generator does not preserve X");
  }
  if (!std::holds_alternative<TangencyCertificate>(total_tangency_check(tower, seed_curve, x))) {
    fail(ErrorKind::invalid_argument, "orbit seed curve is not totally tangent to X");
  }

  OrbitResult result;
  result.generator_count_used = generators.size();
  const SqMatrix& seed = seed_curve.matrix();
  std::vector<SqMatrix> transversal{SqMatrix::identity(size)};
  result.curves.push_back(seed);
  result.keys.push_back(curve_point_set(tower, seed_curve));
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> by_digest;
  by_digest[key_digest(result.keys.front())].push_back(0);

  ProjectiveClosure stabilizer(f, size);
  const std::size_t gens = generators.size();

  std::size_t level_begin = 0;
  while (level_begin < result.curves.size() && gens > 0) {
    const std::size_t level_end = result.curves.size();
    const std::size_t tasks = (level_end - level_begin) * gens;
    std::vector<SqMatrix> child(tasks);
    std::vector<CurveKey> child_key(tasks);
    detail::parallel_chunks(options.threads, 0, tasks, [&](std::size_t, std::uint64_t lo, std::uint64_t hi) {
      for (std::uint64_t t = lo; t < hi; ++t) {
        const std::size_t from = level_begin + t / gens;
        child[t] = mul(f, transversal[from], generators[t % gens]);
        child_key[t] = curve_point_set(tower, RationalNormalCurve(f, mul(f, seed, child[t])));
      }
    });

    for (std::size_t t = 0; t < tasks; ++t) {
      const std::uint64_t digest = key_digest(child_key[t]);
      auto& bucket = by_digest[digest];
      const auto hit = std::find_if(bucket.begin(), bucket.end(),
                                    [&](std::uint32_t idx) { return result.keys[idx] == child_key[t]; });
      if (hit != bucket.end()) {
        // Schreier generator u_x s u_y^-1 fixes the seed curve.
        const SqMatrix schreier = mul(f, child[t], invert(f, transversal[*hit]));
        stabilizer.add_generator(projective_normalize(f, schreier));
        continue;
      }
      if (result.curves.size() >= options.cap) {
        fail(ErrorKind::cap_exceeded, "orbit exceeds the cap of " + std::to_string(options.cap) + " curves");
      }
      bucket.push_back(static_cast<std::uint32_t>(result.curves.size()));
      result.curves.push_back(mul(f, seed, child[t]));
      result.keys.push_back(std::move(child_key[t]));
      transversal.push_back(std::move(child[t]));
    }
    level_begin = level_end;
  }

  result.stabilizer_generators = stabilizer.generators();
  result.stabilizer_elements = stabilizer.elements();
  result.stabilizer_order = stabilizer.order();

  // Tangency sweep.
  std::vector<std::size_t> members;
  if (options.verify_all || options.spot_checks >= result.curves.size()) {
    members.resize(result.curves.size());
    for (std::size_t i = 0; i < members.size(); ++i) members[i] = i;
  } else {
    std::mt19937_64 rng(options.seed);
    members.push_back(0);
    for (std::size_t i = 0; i < options.spot_checks; ++i) members.push_back(rng() % result.curves.size());
  }
  struct Tally {
    std::size_t failures = 0, baer = 0, rational = 0;
  };
  std::vector<Tally> tallies(std::max<std::size_t>(options.threads, 1));
  detail::parallel_chunks(options.threads, 0, members.size(), [&](std::size_t w, std::uint64_t lo, std::uint64_t hi) {
    Tally& tally = tallies[w];
    for (std::uint64_t i = lo; i < hi; ++i) {
      const RationalNormalCurve curve(f, result.curves[members[i]]);
      const TangencyOutcome outcome = total_tangency_check(tower, curve, x);
      if (const auto* cert = std::get_if<TangencyCertificate>(&outcome)) {
        if (!verify_certificate(tower, curve, x, *cert)) ++tally.failures;
        continue;
      }
      ++tally.failures;
      const auto failure = std::get<TangencyFailure>(outcome);
      if (failure == TangencyFailure::not_baer) ++tally.baer;
      if (failure == TangencyFailure::does_not_split) ++tally.rational;
    }
  });
  result.tangency_checked = members.size();
  for (const auto& t : tallies) {
    result.tangency_failures += t.failures;
    result.baer_failures += t.baer;
    result.rationality_failures += t.rational;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Stabilizer as PGL_2(F_q)

Mobius induced_mobius(const FieldTower& tower, const RationalNormalCurve& curve, const SqMatrix& u) {
  const Field& f = tower.fq2();
  auto image_param = [&](const Param& t) {
    const auto z = curve.parameter_of(f, apply(f, curve.point(f, t), u));
    if (!z) fail(ErrorKind::not_in_group, "element does not stabilize the curve");
    return *z;
  };
  const Param z0 = image_param(Param::finite(Field::zero()));
  const Param z1 = image_param(Param::finite(Field::one()));
  const Param zinf = image_param(Param::infinity());
  const Mobius g = invert(f, mobius_to_triple(f, z0, z1, zinf));
  for (const Param& t : projective_line(f)) {
    if (apply(f, curve.point(f, t), u) != curve.point(f, mobius_apply(f, g, t))) {
      fail(ErrorKind::not_in_group, "element does not act on the curve through a Moebius map");
    }
  }
  return projective_normalize(f, g);
}

StabilizerRecord stabilizer_as_pgl2(const FieldTower& tower, const HermitianVariety& x,
                                    const RationalNormalCurve& curve, std::span<const SqMatrix> stabilizer) {
  const Field& f = tower.fq2();
  StabilizerRecord record;
  record.element_count = stabilizer.size();

  const TangencyOutcome outcome = total_tangency_check(tower, curve, x);
  const auto* cert = std::get_if<TangencyCertificate>(&outcome);
  require(cert != nullptr, ErrorKind::invalid_argument, "stabilizer check needs a totally tangent curve");

  std::map<SqMatrix, std::size_t> index;
  for (std::size_t i = 0; i < stabilizer.size(); ++i) {
    if (!preserves_variety(tower, stabilizer[i], x)) fail(ErrorKind::not_in_group, "element does not preserve X");
    index.emplace(projective_normalize(f, stabilizer[i]), i);
    record.images.push_back(induced_mobius(tower, curve, stabilizer[i]));
  }

  const std::set<SqMatrix> distinct(record.images.begin(), record.images.end());
  record.image_order = distinct.size();
  record.injective = distinct.size() == stabilizer.size() && index.size() == stabilizer.size();
  record.order_matches = record.image_order == order_pgl2(tower.q());

  record.homomorphism = true;
  for (std::size_t i = 0; i < stabilizer.size() && record.homomorphism; ++i) {
    for (std::size_t j = 0; j < stabilizer.size(); ++j) {
      const auto it = index.find(projective_normalize(f, mul(f, stabilizer[i], stabilizer[j])));
      if (it == index.end() ||
          projective_normalize(f, mul(f, record.images[i], record.images[j])) != record.images[it->second]) {
        record.homomorphism = false;
        break;
      }
    }
  }

  const Mobius& w = cert->baer_witness;
  const Mobius w_inv = invert(f, w);
  record.preserves_baer = true;
  record.conjugate_into_pgl2_fq = true;
  for (const Mobius& g : record.images) {
    std::vector<Param> moved;
    for (const Param& z : cert->parameters) moved.push_back(mobius_apply(f, g, z));
    std::sort(moved.begin(), moved.end(), param_less);
    if (moved != cert->parameters) record.preserves_baer = false;
    // w^-1 g w acts on P^1(F_q).
    const SqMatrix conj_g = projective_normalize(f, mul(f, mul(f, w_inv, g), w));
    for (Element e : conj_g.entries()) {
      if (!tower.in_base(e)) record.conjugate_into_pgl2_fq = false;
    }
  }
  return record;
}

// ---------------------------------------------------------------------------
// Brute-force conic scan

namespace {

struct HermitianPoint {
  std::array<Element, 3> x;
  std::array<Element, 6> mono;     // x0^2, x1^2, x2^2, 2x0x1, 2x0x2, 2x1x2
  std::array<Element, 3> tangent;  // A conj(x)^t
};

// Symmetric matrix entries in the order s00, s01, s02, s11, s12, s22.
using Sym = std::array<Element, 6>;

SqMatrix sym_matrix(const Sym& s) { return SqMatrix(3, {s[0], s[1], s[2], s[1], s[3], s[4], s[2], s[4], s[5]}); }

std::array<Element, 3> cross(const Field& f, const std::array<Element, 3>& a, const std::array<Element, 3>& b) {
  return {f.sub(f.mul(a[1], b[2]), f.mul(a[2], b[1])), f.sub(f.mul(a[2], b[0]), f.mul(a[0], b[2])),
          f.sub(f.mul(a[0], b[1]), f.mul(a[1], b[0]))};
}

std::array<Element, 3> polar(const Field& f, const Sym& s, const std::array<Element, 3>& x) {
  return {f.add(f.add(f.mul(s[0], x[0]), f.mul(s[1], x[1])), f.mul(s[2], x[2])),
          f.add(f.add(f.mul(s[1], x[0]), f.mul(s[3], x[1])), f.mul(s[4], x[2])),
          f.add(f.add(f.mul(s[2], x[0]), f.mul(s[4], x[1])), f.mul(s[5], x[2]))};
}

bool is_zero3(const std::array<Element, 3>& v) {
  return v[0] == Field::zero() && v[1] == Field::zero() && v[2] == Field::zero();
}

// Necessary condition for total tangency of the conic x S x^t = 0: it meets
// X in exactly q + 1 rational points and is tangent to X at each of them.
// By Bezout (2(q + 1) intersections) this is also what a certificate needs.
bool passes_prefilter(const Field& f, const Sym& s, std::span<const HermitianPoint> points, std::size_t wanted) {
  std::size_t hits = 0;
  for (const auto& p : points) {
    Element v = f.mul(s[0], p.mono[0]);
    v = f.add(v, f.mul(s[3], p.mono[1]));
    v = f.add(v, f.mul(s[5], p.mono[2]));
    v = f.add(v, f.mul(s[1], p.mono[3]));
    v = f.add(v, f.mul(s[2], p.mono[4]));
    v = f.add(v, f.mul(s[4], p.mono[5]));
    if (v != Field::zero()) continue;
    const auto line = polar(f, s, p.x);
    if (is_zero3(line) || !is_zero3(cross(f, line, p.tangent))) return false;
    if (++hits > wanted) return false;
  }
  return hits == wanted;
}

// Gamma_0 * [M] equal to the smooth conic S, from a tangent frame: M sends
// phi0(0), phi0(inf) to two conic points, [0:1:0] to the pole R of the chord
// joining them, and phi0(1) to a third conic point.
SqMatrix parametrize_conic(const Field& f, const Sym& s, const std::vector<ProjectivePoint>& conic_points) {
  auto arr = [](const ProjectivePoint& p) { return std::array<Element, 3>{p[0], p[1], p[2]}; };
  const auto q0 = arr(conic_points[0]);
  const auto qinf = arr(conic_points[1]);
  const auto q1 = arr(conic_points[2]);
  const auto r = cross(f, polar(f, s, q0), polar(f, s, qinf));
  const SqMatrix frame(3, {q0[0], q0[1], q0[2], r[0], r[1], r[2], qinf[0], qinf[1], qinf[2]});
  const auto lambda = row_times(f, q1, invert(f, frame));
  SqMatrix m(3);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) m(i, j) = f.mul(lambda[i], frame(i, j));
  }
  return m;
}

}  // namespace

ConicScanResult brute_force_conic_scan(const FieldTower& tower, const HermitianVariety& x, const ScanOptions& options,
                                       std::uint32_t max_q) {
  const Field& f = tower.fq2();
  require(x.ambient_dimension() == 2, ErrorKind::invalid_argument, "conic scan needs n = 2");
  require(tower.p() % 2 == 1, ErrorKind::invalid_argument, "conic scan needs odd characteristic");
  if (tower.q() > max_q) {
    fail(ErrorKind::cap_exceeded, "conic scan is capped at q <= " + std::to_string(max_q));
  }
  require(options.shards >= 1 && options.shard_index < options.shards, ErrorKind::invalid_argument,
          "invalid shard selection");

  std::vector<HermitianPoint> points;
  const auto plane = projective_space(f, 2);
  for (const auto& p : plane) {
    if (!contains(tower, x, p)) continue;
    HermitianPoint h;
    h.x = {p[0], p[1], p[2]};
    auto twice = [&](Element e) { return f.add(e, e); };
    h.mono = {f.mul(p[0], p[0]),         f.mul(p[1], p[1]),         f.mul(p[2], p[2]),
              twice(f.mul(p[0], p[1])), twice(f.mul(p[0], p[2])), twice(f.mul(p[1], p[2]))};
    for (std::size_t i = 0; i < 3; ++i) {
      Element acc = Field::zero();
      for (std::size_t j = 0; j < 3; ++j) acc = f.add(acc, f.mul(x.matrix()(i, j), tower.frobenius_q(p[j])));
      h.tangent[i] = acc;
    }
    points.push_back(h);
  }

  // Symmetric matrices up to scalar: first nonzero of the six entries is 1.
  // Block k (leading 1 at entry k) has size^(5 - k) members.
  const std::uint64_t size = f.size();
  std::array<std::uint64_t, 7> block_start{};
  for (std::size_t k = 0; k < 6; ++k) {
    std::uint64_t block = 1;
    for (std::size_t i = k + 1; i < 6; ++i) block *= size;
    block_start[k + 1] = block_start[k] + block;
  }
  ConicScanResult result;
  result.candidates = block_start[6];
  const std::uint64_t lo = result.candidates * options.shard_index / options.shards;
  const std::uint64_t hi = result.candidates * (options.shard_index + 1) / options.shards;
  result.scanned = hi - lo;
  const std::size_t wanted = tower.q() + 1;

  std::vector<std::vector<Sym>> found(std::max<std::size_t>(options.threads, 1));
  detail::parallel_chunks(options.threads, lo, hi, [&](std::size_t w, std::uint64_t begin, std::uint64_t end) {
    if (begin >= end) return;
    // Decode the starting candidate, then advance an odometer.
    std::size_t k = 0;
    while (begin >= block_start[k + 1]) ++k;
    Sym s{};
    std::uint64_t offset = begin - block_start[k];
    s[k] = Field::one();
    for (std::size_t i = 5; i > k; --i) {
      s[i] = Element{static_cast<std::uint32_t>(offset % size)};
      offset /= size;
    }
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      if (passes_prefilter(f, s, points, wanted) && is_invertible(f, sym_matrix(s))) found[w].push_back(s);
      std::size_t i = 5;
      while (i > k && s[i].code == size - 1) s[i--] = Field::zero();
      if (i > k) {
        ++s[i].code;
      } else if (k < 5) {
        s[k] = Field::zero();
        ++k;
        s[k] = Field::one();
      }
    }
  });

  ConcurrentKeySet keys;
  std::vector<std::pair<CurveKey, SqMatrix>> certified;
  std::mutex certified_mutex;
  std::vector<Sym> survivors;
  for (auto& chunk : found) survivors.insert(survivors.end(), chunk.begin(), chunk.end());
  result.prefilter_survivors = survivors.size();
  detail::parallel_chunks(options.threads, 0, survivors.size(), [&](std::size_t, std::uint64_t b, std::uint64_t e) {
    for (std::uint64_t i = b; i < e; ++i) {
      const Sym& s = survivors[i];
      std::vector<ProjectivePoint> conic_points;
      CurveKey conic_key;
      for (const auto& p : plane) {
        Element v = Field::zero();
        const auto line = polar(f, s, {p[0], p[1], p[2]});
        for (std::size_t j = 0; j < 3; ++j) v = f.add(v, f.mul(line[j], p[j]));
        if (v != Field::zero()) continue;
        conic_points.push_back(p);
        for (Element c : p.coords()) conic_key.push_back(c.code);
      }
      const RationalNormalCurve curve(f, parametrize_conic(f, s, conic_points));
      CurveKey key = curve_point_set(tower, curve);
      require(key == conic_key, ErrorKind::internal_check, "conic parametrization does not cover the conic");
      if (!std::holds_alternative<TangencyCertificate>(total_tangency_check(tower, curve, x))) continue;
      if (keys.insert_if_absent(key)) {
        std::lock_guard lock(certified_mutex);
        certified.emplace_back(std::move(key), curve.matrix());
      }
    }
  });

  std::sort(certified.begin(), certified.end());
  for (auto& [key, m] : certified) {
    result.keys.push_back(std::move(key));
    result.curves.push_back(std::move(m));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Incidence and uniqueness

bool is_incident(const FieldTower& tower, const HermitianVariety& x, const RationalNormalCurve& curve,
                 std::span<const ProjectivePoint, 3> marks) {
  const Field& f = tower.fq2();
  if (x.matrix().size() != curve.matrix().size()) return false;
  for (const auto& m : marks) {
    if (!curve.contains(f, m) || !contains(tower, x, m)) return false;
  }
  if (marks[0] == marks[1] || marks[0] == marks[2] || marks[1] == marks[2]) return false;
  try {
    return std::holds_alternative<TangencyCertificate>(total_tangency_check(tower, curve, x));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::zero_pullback) return false;
    throw;
  }
}

IncidenceTriple make_incidence_triple(const FieldTower& tower, HermitianVariety x, MarkedCurve marked) {
  if (!is_incident(tower, x, marked.curve(), marked.marks())) {
    fail(ErrorKind::invalid_argument, "triple is not in the incidence set");
  }
  return IncidenceTriple{std::move(x), std::move(marked)};
}

UniquenessScanResult uniqueness_scan(const FieldTower& tower, const RationalNormalCurve& curve,
                                     std::span<const ProjectivePoint, 3> marks, const ScanOptions& options) {
  const Field& f = tower.fq2();
  const std::size_t size = curve.matrix().size();
  const std::size_t n = size - 1;
  require(n % tower.p() != 0, ErrorKind::invalid_argument, "uniqueness scan needs n not divisible by p");
  require(options.shards >= 1 && options.shard_index < options.shards, ErrorKind::invalid_argument,
          "invalid shard selection");
  const std::uint64_t q = tower.q();

  // Diagonal entries from F_q, upper entries from F_{q^2}: q^{(n+1)^2} total.
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < size * size; ++i) {
    if (__builtin_mul_overflow(total, q, &total) || total > options.cap) {
      fail(ErrorKind::cap_exceeded, "uniqueness scan exceeds the cap of " + std::to_string(options.cap) + " matrices");
    }
  }

  UniquenessScanResult result;
  result.candidates = total;
  const std::uint64_t lo = total * options.shard_index / options.shards;
  const std::uint64_t hi = total * (options.shard_index + 1) / options.shards;
  result.scanned = hi - lo;

  for (const auto& m : marks) {
    if (!curve.contains(f, m)) return result;
  }

  std::vector<std::vector<std::pair<std::uint64_t, SqMatrix>>> found(std::max<std::size_t>(options.threads, 1));
  detail::parallel_chunks(options.threads, lo, hi, [&](std::size_t w, std::uint64_t begin, std::uint64_t end) {
    SqMatrix a(size);
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      std::uint64_t rest = idx;
      for (std::size_t i = 0; i < size; ++i) {
        a(i, i) = tower.embed(Element{static_cast<std::uint32_t>(rest % q)});
        rest /= q;
      }
      for (std::size_t i = 0; i < size; ++i) {
        for (std::size_t j = i + 1; j < size; ++j) {
          a(i, j) = Element{static_cast<std::uint32_t>(rest % (q * q))};
          rest /= q * q;
          a(j, i) = tower.frobenius_q(a(i, j));
        }
      }
      bool on_marks = true;
      for (const auto& m : marks) {
        if (eval_form(tower, a, m.coords()) != Field::zero()) {
          on_marks = false;
          break;
        }
      }
      if (!on_marks || !is_invertible(f, a)) continue;
      const HermitianVariety x(tower, a);
      if (is_incident(tower, x, curve, marks)) found[w].emplace_back(idx, a);
    }
  });

  for (auto& chunk : found) {
    for (auto& [idx, a] : chunk) result.survivors.push_back(std::move(a));
  }
  return result;
}

UniquenessScanResult uniqueness_scan(const FieldTower& tower, std::size_t n, const ScanOptions& options) {
  const MarkedCurve marked = MarkedCurve::canonical(tower.fq2(), n);
  return uniqueness_scan(tower, marked.curve(), marked.marks(), options);
}

}  // namespace hermitangent
