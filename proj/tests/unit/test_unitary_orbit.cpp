#include <doctest.h>

#include <set>
#include <thread>

#include "hermitangent/concurrent_key_set.hpp"
#include "oracles.hpp"

using namespace hermitangent;

namespace {

template <class F>
void expect_error(ErrorKind kind, F&& fn) {
  try {
    fn();
    FAIL("no exception");
  } catch (const Error& e) {
    CHECK(e.kind() == kind);
  }
}

HermitianVariety variety_b(const FieldTower& t, std::size_t n) {
  return HermitianVariety(t, hermitian_rescale(t, canonical_matrix_b(t, n))->matrix);
}

// |PGL_2(F_q)| by counting invertible 2x2 matrices over F_q modulo scalars.
std::uint64_t brute_pgl2(std::uint32_t p) {
  const FieldTower t = FieldTower::make(p, 1);
  const Field& f = t.fp();
  std::uint64_t count = 0;
  for (std::uint32_t a = 0; a < p; ++a)
    for (std::uint32_t b = 0; b < p; ++b)
      for (std::uint32_t c = 0; c < p; ++c)
        for (std::uint32_t d = 0; d < p; ++d)
          if (f.sub(f.mul(Element{a}, Element{d}), f.mul(Element{b}, Element{c})) != Field::zero()) ++count;
  return count / (p - 1);
}

// |PGU_m(F_{q^2})| for q = 2: unitary matrices for the identity form over
// F_4, modulo the q + 1 scalars of norm one.
std::uint64_t brute_pgu_q2(std::size_t m) {
  const FieldTower t = FieldTower::make(2, 1);
  const Field& f = t.fq2();
  const SqMatrix id = SqMatrix::identity(m);
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < m * m; ++i) total *= f.size();
  std::uint64_t unitary = 0;
  std::vector<Element> e(m * m);
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    for (auto& x : e) {
      x = Element{static_cast<std::uint32_t>(c % 4)};
      c /= 4;
    }
    if (is_unitary_for(t, SqMatrix(m, e), id)) ++unitary;
  }
  return unitary / (t.q() + 1);
}

}  // namespace

TEST_CASE("group orders") {
  CHECK(order_pgl2(2) == 6);
  CHECK(order_pgl2(5) == 120);
  CHECK(order_pgl2(7) == 336);
  CHECK(order_pgl2(5) == brute_pgl2(5));
  CHECK(order_pgl2(7) == brute_pgl2(7));
  CHECK(order_pgl2(3) == brute_pgl2(3));

  CHECK(order_pgu(2, 2) == 6);
  CHECK(order_pgu(2, 2) == brute_pgu_q2(2));
  CHECK(order_pgu(3, 2) == brute_pgu_q2(3));
  CHECK(order_pgu(3, 2) == 216);
  CHECK(order_pgu(3, 5) == 378000);
  CHECK(order_pgu(3, 7) == 5663616);
  CHECK(order_pgu(2, 5) == order_pgl2(5));

  const GroupOrderTable t = group_order_table(3, 5);
  CHECK(t.pgu_order == 378000);
  CHECK(t.pgl2_q_order == 120);
  CHECK(t.predicted_count == 3150);
  CHECK(group_order_table(3, 7).predicted_count == 16856);
  CHECK(group_order_table(3, 9).predicted_count == 59130);

  expect_error(ErrorKind::invalid_argument, [] { order_pgl2(6); });
  expect_error(ErrorKind::invalid_argument, [] { order_pgu(3, 10); });
  expect_error(ErrorKind::cap_exceeded, [] { order_pgu(12, 1024); });
}

TEST_CASE("random unitary elements") {
  for (auto [p, nu, n] : std::vector<std::array<std::uint32_t, 3>>{{5, 1, 2}, {2, 3, 3}, {3, 2, 2}}) {
    const FieldTower t = FieldTower::make(p, nu);
    std::mt19937_64 rng(99);
    const SqMatrix h = oracle::random_hermitian(t, n + 1, rng);
    const HermitianVariety x(t, h);
    for (int trial = 0; trial < 50; ++trial) {
      const SqMatrix u = random_unitary(t, h, rng);
      CHECK(is_unitary_for(t, u, h));
      CHECK(preserves_variety(t, u, x));
      // The image of a point of X lies on X.
      const auto plane = projective_space(t.fq2(), n);
      for (std::size_t i = 0; i < plane.size(); i += 37) {
        if (contains(t, x, plane[i])) CHECK(contains(t, x, apply(t.fq2(), plane[i], u)));
      }
    }
  }
}

TEST_CASE("orbit at (2, 5)") {
  const FieldTower t = FieldTower::make(5, 1);
  const HermitianVariety x = variety_b(t, 2);
  std::mt19937_64 rng(1);
  const std::vector<SqMatrix> gens{random_unitary(t, x.matrix(), rng), random_unitary(t, x.matrix(), rng)};
  const OrbitResult orbit = orbit_enumerate(t, x, RationalNormalCurve::canonical(2), gens);
  CHECK(orbit.curves.size() == 3150);
  CHECK(orbit.stabilizer_order == 120);
  CHECK(orbit.group_order() == order_pgu(3, 5));
  CHECK(orbit.tangency_checked == 3150);
  CHECK(orbit.tangency_failures == 0);
  CHECK(std::set<CurveKey>(orbit.keys.begin(), orbit.keys.end()).size() == 3150);
  CHECK(orbit.curves.front() == SqMatrix::identity(3));

  const StabilizerRecord s = stabilizer_as_pgl2(t, x, RationalNormalCurve::canonical(2), orbit.stabilizer_elements);
  CHECK(s.injective);
  CHECK(s.homomorphism);
  CHECK(s.preserves_baer);
  CHECK(s.conjugate_into_pgl2_fq);
  CHECK(s.image_order == 120);
  CHECK(s.ok());

  // Same orbit under a different seed.
  std::mt19937_64 rng2(77);
  const std::vector<SqMatrix> gens2{random_unitary(t, x.matrix(), rng2), random_unitary(t, x.matrix(), rng2)};
  OrbitOptions spot;
  spot.verify_all = false;
  spot.spot_checks = 25;
  const OrbitResult again = orbit_enumerate(t, x, RationalNormalCurve::canonical(2), gens2, spot);
  CHECK(std::set<CurveKey>(again.keys.begin(), again.keys.end()) ==
        std::set<CurveKey>(orbit.keys.begin(), orbit.keys.end()));
  CHECK(again.tangency_checked == 26);
}

TEST_CASE("orbit edge cases") {
  const FieldTower t = FieldTower::make(5, 1);
  const HermitianVariety x = variety_b(t, 2);
  const std::vector<SqMatrix> identity{SqMatrix::identity(3)};
  const OrbitResult trivial = orbit_enumerate(t, x, RationalNormalCurve::canonical(2), identity);
  CHECK(trivial.curves.size() == 1);
  CHECK(trivial.stabilizer_order == 1);

  std::mt19937_64 rng(3);
  SqMatrix outside;
  do outside = oracle::random_matrix(t.fq2(), 3, rng);
  while (oracle::det(t.fq2(), outside) == Field::zero() || preserves_variety(t, outside, x));
  const std::vector<SqMatrix> bad{outside};
  expect_error(ErrorKind::not_in_group, [&] { orbit_enumerate(t, x, RationalNormalCurve::canonical(2), bad); });
  expect_error(ErrorKind::invalid_argument,
               [&] { orbit_enumerate(t, HermitianVariety::fermat(t, 3), RationalNormalCurve::canonical(2), identity); });

  const std::vector<SqMatrix> gens{random_unitary(t, x.matrix(), rng), random_unitary(t, x.matrix(), rng)};
  OrbitOptions capped;
  capped.cap = 100;
  expect_error(ErrorKind::cap_exceeded, [&] { orbit_enumerate(t, x, RationalNormalCurve::canonical(2), gens, capped); });
}

TEST_CASE("induced Moebius maps") {
  const FieldTower t = FieldTower::make(5, 1);
  const Field& f = t.fq2();
  const RationalNormalCurve gamma0 = RationalNormalCurve::canonical(2);
  CHECK(induced_mobius(t, gamma0, SqMatrix::identity(3)) == SqMatrix::identity(2));
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    SqMatrix g;
    do g = oracle::random_matrix(f, 2, rng);
    while (oracle::det(f, g) == Field::zero());
    CHECK(induced_mobius(t, gamma0, mobius_to_ambient(f, g, 2)) == projective_normalize(f, g));
  }
  SqMatrix swap01(3, {Field::zero(), Field::one(), Field::zero(), Field::one(), Field::zero(), Field::zero(),
                      Field::zero(), Field::zero(), Field::one()});
  expect_error(ErrorKind::not_in_group, [&] { induced_mobius(t, gamma0, swap01); });
}

TEST_CASE("conic scan agrees with the orbit at q = 3") {
  const FieldTower t = FieldTower::make(3, 1);
  const HermitianVariety x = variety_b(t, 2);
  std::mt19937_64 rng(1);
  const std::vector<SqMatrix> gens{random_unitary(t, x.matrix(), rng), random_unitary(t, x.matrix(), rng),
                                   random_unitary(t, x.matrix(), rng)};
  const OrbitResult orbit = orbit_enumerate(t, x, RationalNormalCurve::canonical(2), gens);
  CHECK(orbit.curves.size() == group_order_table(3, 3).predicted_count);
  CHECK(orbit.stabilizer_order == 24);

  const ConicScanResult scan = brute_force_conic_scan(t, x);
  std::vector<CurveKey> keys = orbit.keys;
  std::sort(keys.begin(), keys.end());
  CHECK(scan.keys == keys);
  // Nonzero symmetric 3x3 matrices over F_9 up to scalars.
  CHECK(scan.candidates == (531441ULL - 1) / 8);
  for (std::size_t i = 0; i < scan.curves.size(); ++i) {
    CHECK(curve_point_set(t, RationalNormalCurve(t.fq2(), scan.curves[i])) == scan.keys[i]);
  }

  // Shards partition the candidates; two threads give the same set.
  std::vector<CurveKey> merged;
  std::uint64_t scanned = 0;
  for (std::size_t shard = 0; shard < 3; ++shard) {
    ScanOptions o;
    o.shards = 3;
    o.shard_index = shard;
    o.threads = 2;
    const ConicScanResult part = brute_force_conic_scan(t, x, o);
    scanned += part.scanned;
    merged.insert(merged.end(), part.keys.begin(), part.keys.end());
  }
  std::sort(merged.begin(), merged.end());
  CHECK(scanned == scan.candidates);
  CHECK(merged == scan.keys);

  expect_error(ErrorKind::cap_exceeded, [&] { brute_force_conic_scan(FieldTower::make(3, 2), variety_b(FieldTower::make(3, 2), 2)); });
  expect_error(ErrorKind::invalid_argument, [&] {
    brute_force_conic_scan(FieldTower::make(2, 2), HermitianVariety::fermat(FieldTower::make(2, 2), 3));
  });
}

TEST_CASE("incidence and uniqueness at q = 3") {
  const FieldTower t = FieldTower::make(3, 1);
  const Field& f = t.fq2();
  const HermitianVariety x = variety_b(t, 2);
  const MarkedCurve marked = MarkedCurve::canonical(f, 2);
  CHECK(is_incident(t, x, marked.curve(), marked.marks()));
  CHECK_FALSE(is_incident(t, HermitianVariety::fermat(t, 3), marked.curve(), marked.marks()));
  CHECK_NOTHROW(make_incidence_triple(t, x, marked));
  expect_error(ErrorKind::invalid_argument, [&] { make_incidence_triple(t, HermitianVariety::fermat(t, 3), marked); });

  const UniquenessScanResult scan = uniqueness_scan(t, 2);
  CHECK(scan.candidates == 19683);
  REQUIRE(scan.survivors.size() == t.q() - 1);
  for (const auto& a : scan.survivors) {
    const auto c = proportionality(f, x.matrix(), a);
    REQUIRE(c.has_value());
    CHECK(t.in_base(*c));
  }

  // Marks off the curve: nothing survives.
  const std::array<ProjectivePoint, 3> off{ProjectivePoint(f, {Field::one(), Field::zero(), Field::one()}),
                                           marked.marks()[1], marked.marks()[2]};
  CHECK(uniqueness_scan(t, marked.curve(), off).survivors.empty());

  ScanOptions small;
  small.cap = 1000;
  expect_error(ErrorKind::cap_exceeded, [&] { uniqueness_scan(t, 2, small); });
}

TEST_CASE("concurrent key set") {
  ConcurrentKeySet set;
  std::vector<std::thread> workers;
  for (int w = 0; w < 4; ++w) {
    workers.emplace_back([&set, w] {
      for (std::uint32_t i = 0; i < 1000; ++i) set.insert_if_absent({i % 500, static_cast<std::uint32_t>(w % 2)});
    });
  }
  for (auto& th : workers) th.join();
  CHECK(set.size() == 1000);
  const auto sorted = set.sorted();
  CHECK(std::is_sorted(sorted.begin(), sorted.end()));
  CHECK_FALSE(set.insert_if_absent({0, 0}));
  CHECK(set.insert_if_absent({0, 2}));
}
