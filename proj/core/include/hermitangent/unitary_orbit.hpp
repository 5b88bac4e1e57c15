#pragma once

// Group orders, random elements of the unitary group of a Hermitian form,
// orbit/stabilizer enumeration of totally tangent curves, and the two
// brute-force oracles (conic scan and uniqueness scan).

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "hermitangent/curve.hpp"

namespace hermitangent {

// q(q^2 - 1). Throws Error(invalid_argument) when q is not a prime power.
std::uint64_t order_pgl2(std::uint64_t q);

// q^{m(m-1)/2} prod_{i=1..m} (q^i - (-1)^i) / (q + 1). Throws
// Error(cap_exceeded) on 64-bit overflow.
std::uint64_t order_pgu(std::uint64_t n_plus_1, std::uint64_t q);

struct GroupOrderTable {
  std::uint64_t pgu_order = 0;
  std::uint64_t pgl2_q_order = 0;
  std::uint64_t predicted_count = 0;
};

// Throws Error(internal_check) if |PGL_2(F_q)| does not divide |PGU|.
GroupOrderTable group_order_table(std::uint64_t n_plus_1, std::uint64_t q);

// U A conj(U)^t == A
bool is_unitary_for(const FieldTower& tower, const SqMatrix& u, const SqMatrix& a);
// U A conj(U)^t is a scalar multiple of A, i.e. [U] is in Aut(X_A).
bool preserves_variety(const FieldTower& tower, const SqMatrix& u, const HermitianVariety& x);

SqMatrix random_invertible(const FieldTower& tower, std::size_t size, std::mt19937_64& rng);

// Uniform element of the unitary group of the nondegenerate Hermitian form A,
// as T V T^-1 with T = lang_decompose(A) and V = lang_decompose(R R*)^-1 R
// for random invertible R. Throws Error(not_hermitian)/(singular_matrix)
// for unusable A.
SqMatrix random_unitary(const FieldTower& tower, const SqMatrix& a, std::mt19937_64& rng);

struct OrbitOptions {
  std::uint64_t cap = 1'000'000;  // maximal orbit size
  bool verify_all = true;         // tangency check on every member
  std::size_t spot_checks = 100;  // members checked when !verify_all
  std::uint64_t seed = 0;         // picks spot-check members
  std::size_t threads = 1;
};

struct OrbitResult {
  std::vector<SqMatrix> curves;  // curve matrices, BFS order, curves[0] = seed
  std::vector<CurveKey> keys;
  std::vector<SqMatrix> stabilizer_generators;
  std::vector<SqMatrix> stabilizer_elements;  // projectively normalized closure
  std::uint64_t stabilizer_order = 0;
  std::size_t generator_count_used = 0;
  std::size_t tangency_checked = 0;
  std::size_t tangency_failures = 0;
  std::size_t baer_failures = 0;
  std::size_t rationality_failures = 0;

  std::uint64_t group_order() const noexcept { return curves.size() * stabilizer_order; }
};

// Breadth-first closure of seed_curve under the generators, with Schreier
// generators of the seed's stabilizer and their closure. Throws
// Error(invalid_argument) for a non-tangent seed, Error(not_in_group) for a
// generator outside Aut(X) and Error(cap_exceeded) above options.cap.
OrbitResult orbit_enumerate(const FieldTower& tower, const HermitianVariety& x, const RationalNormalCurve& seed_curve,
                            std::span<const SqMatrix> generators, const OrbitOptions& options = {});

struct StabilizerRecord {
  std::size_t element_count = 0;
  std::uint64_t image_order = 0;
  bool injective = false;
  bool homomorphism = false;
  bool preserves_baer = false;
  bool conjugate_into_pgl2_fq = false;
  bool order_matches = false;  // image order == q(q^2 - 1)
  std::vector<Mobius> images;  // aligned with the input elements

  bool ok() const noexcept {
    return injective && homomorphism && preserves_baer && conjugate_into_pgl2_fq && order_matches;
  }
};

// The Moebius map induced on curve parameters by an element stabilizing the
// curve, from the images of 0, 1, infinity; checked on every F_{q^2}-point.
// Throws Error(not_in_group) if u does not stabilize the curve.
Mobius induced_mobius(const FieldTower& tower, const RationalNormalCurve& curve, const SqMatrix& u);

// Certifies that the stabilizer (a closed set of projectively normalized
// matrices) maps isomorphically onto a conjugate of PGL_2(F_q) inside
// Aut(curve). Throws Error(not_in_group) if an element fails to stabilize
// the curve or X.
StabilizerRecord stabilizer_as_pgl2(const FieldTower& tower, const HermitianVariety& x,
                                    const RationalNormalCurve& curve, std::span<const SqMatrix> stabilizer);

struct ScanOptions {
  std::uint64_t cap = std::uint64_t{1} << 22;  // candidate count limit
  std::size_t shards = 1;
  std::size_t shard_index = 0;
  std::size_t threads = 1;
};

struct ConicScanResult {
  std::vector<CurveKey> keys;  // sorted
  std::vector<SqMatrix> curves;  // parametrizations aligned with keys
  std::uint64_t candidates = 0;  // symmetric matrices up to scalar, all shards
  std::uint64_t scanned = 0;     // in this shard
  std::uint64_t prefilter_survivors = 0;
};

// Every smooth conic of P^2(F_{q^2}) totally tangent to X. Requires n = 2,
// odd q and q <= max_q. Throws Error(cap_exceeded) beyond max_q.
ConicScanResult brute_force_conic_scan(const FieldTower& tower, const HermitianVariety& x,
                                       const ScanOptions& options = {}, std::uint32_t max_q = 7);

// A variety, a curve and three marks in the incidence set: marks on the
// curve and on X, curve totally tangent to X.
struct IncidenceTriple {
  HermitianVariety variety;
  MarkedCurve marked;
};

bool is_incident(const FieldTower& tower, const HermitianVariety& x, const RationalNormalCurve& curve,
                 std::span<const ProjectivePoint, 3> marks);
// Throws Error(invalid_argument) unless is_incident holds.
IncidenceTriple make_incidence_triple(const FieldTower& tower, HermitianVariety x, MarkedCurve marked);

struct UniquenessScanResult {
  std::vector<SqMatrix> survivors;  // in candidate order
  std::uint64_t candidates = 0;     // q^{(n+1)^2}, all shards
  std::uint64_t scanned = 0;        // in this shard
};

// All invertible Hermitian A over F_{q^2} such that (X_A, curve, marks) is
// incident. Throws Error(cap_exceeded) when q^{(n+1)^2} > options.cap.
UniquenessScanResult uniqueness_scan(const FieldTower& tower, const RationalNormalCurve& curve,
                                     std::span<const ProjectivePoint, 3> marks, const ScanOptions& options = {});
// Canonical marked curve Gamma_0, (P_0, P_1, P_inf).
UniquenessScanResult uniqueness_scan(const FieldTower& tower, std::size_t n, const ScanOptions& options = {});

}  // namespace hermitangent
