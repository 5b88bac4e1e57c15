#pragma once

// Rational normal curves Gamma_0 * [M], pullbacks of Hermitian forms along
// the parametrization t -> [1 : t : ... : t^n], total tangency certificates
// and Baer subline witnesses.
//
// Moebius maps are 2x2 matrices acting on row vectors [s, t] of P^1 from
// the right, so the map sending the affine coordinate t to (a t + b)/(c t + d)
// is [[d, b], [c, a]] and composition "g then h" is the product g * h.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "hermitangent/polynomial.hpp"
#include "hermitangent/projective.hpp"

namespace hermitangent {

using Mobius = SqMatrix;

Mobius mobius_from_affine(Element a, Element b, Element c, Element d);
// Throws Error(singular_matrix) for a singular g.
Param mobius_apply(const Field& f, const Mobius& g, const Param& z);
// The unique map sending z1, z2, z3 to 0, 1, infinity. Throws
// Error(invalid_argument) unless the three points are distinct.
Mobius mobius_to_triple(const Field& f, const Param& z1, const Param& z2, const Param& z3);

// [alpha^n : alpha^{n-1} beta : ... : beta^n]
ProjectivePoint phi0(const Field& f, const Param& t, std::size_t n);

// S_g with phi0(t * g) = phi0(t) * S_g for every t.
SqMatrix mobius_to_ambient(const Field& f, const Mobius& g, std::size_t n);

// Anti-diagonal b_{i, n-i} = binom(n, i) (-1)^i. Throws
// Error(invalid_argument) for n < 2 or p | n, and Error(singular_matrix)
// when some binom(n, i) vanishes mod p.
SqMatrix canonical_matrix_b(const FieldTower& tower, std::size_t n);

// Gamma_0 * [M].
class RationalNormalCurve {
 public:
  // Throws Error(singular_matrix).
  RationalNormalCurve(const Field& f, SqMatrix m);

  static RationalNormalCurve canonical(std::size_t n) { return RationalNormalCurve(SqMatrix::identity(n + 1)); }

  std::size_t degree() const noexcept { return m_.size() - 1; }
  const SqMatrix& matrix() const noexcept { return m_; }
  const SqMatrix& inverse() const noexcept { return m_inv_; }

  ProjectivePoint point(const Field& f, const Param& t) const;
  // Curve parameter of p, or nullopt when p is not on the curve.
  std::optional<Param> parameter_of(const Field& f, const ProjectivePoint& p) const;
  bool contains(const Field& f, const ProjectivePoint& p) const { return parameter_of(f, p).has_value(); }

 private:
  explicit RationalNormalCurve(SqMatrix identity) : m_(identity), m_inv_(std::move(identity)) {}

  SqMatrix m_;
  SqMatrix m_inv_;
};

// Three ordered, distinct marked points on a curve.
class MarkedCurve {
 public:
  // Throws Error(invalid_argument) when a mark is off the curve or marks repeat.
  MarkedCurve(const Field& f, RationalNormalCurve curve, std::array<ProjectivePoint, 3> marks);

  // Gamma_0 with (phi0(0), phi0(1), phi0(infinity)).
  static MarkedCurve canonical(const Field& f, std::size_t n);

  const RationalNormalCurve& curve() const noexcept { return curve_; }
  const std::array<ProjectivePoint, 3>& marks() const noexcept { return marks_; }

 private:
  RationalNormalCurve curve_;
  std::array<ProjectivePoint, 3> marks_;
};

// phi^* f_A as a binary form of degree n (q + 1). Throws Error(zero_pullback)
// when the curve lies inside the variety.
HomogPair pullback(const FieldTower& tower, const RationalNormalCurve& curve, const HermitianVariety& x);

struct TangencyCertificate {
  std::vector<Param> parameters;  // q + 1 distinct, canonical order
  std::size_t multiplicity = 0;
  Element scalar;                 // pullback = scalar * h^multiplicity, h monic
  Mobius baer_witness;            // maps parameters onto P^1(F_q)

  friend bool operator==(const TangencyCertificate&, const TangencyCertificate&) = default;
};

enum class TangencyFailure : std::uint8_t {
  not_nth_power,
  not_squarefree,
  does_not_split,
  wrong_root_count,
  not_baer,
};

std::string_view to_string(TangencyFailure failure) noexcept;

using TangencyOutcome = std::variant<TangencyCertificate, TangencyFailure>;

// Throws Error(invalid_argument) on dimension mismatch or p | n, and
// Error(zero_pullback) when the curve lies in the variety.
TangencyOutcome total_tangency_check(const FieldTower& tower, const RationalNormalCurve& curve,
                                     const HermitianVariety& x);

// Re-verifies a certificate against a fresh pullback by re-expansion.
bool verify_certificate(const FieldTower& tower, const RationalNormalCurve& curve, const HermitianVariety& x,
                        const TangencyCertificate& cert);

// Moebius witness sending params onto P^1(F_q), built from the first three
// params in canonical order. Throws Error(invalid_argument) unless params
// holds exactly q + 1 distinct points.
std::optional<Mobius> baer_check(const FieldTower& tower, std::span<const Param> params);

// True when the normalized image of every param lies in P^1(F_q).
bool maps_into_baer_line(const FieldTower& tower, const Mobius& g, std::span<const Param> params);

// Sorted F_{q^2}-points of the curve, flattened to element codes.
using CurveKey = std::vector<std::uint32_t>;

struct CurveKeyHash {
  std::size_t operator()(const CurveKey& key) const noexcept;
};

CurveKey curve_point_set(const FieldTower& tower, const RationalNormalCurve& curve);
// 64-bit FNV-1a of the key codes.
std::uint64_t key_digest(const CurveKey& key) noexcept;

// True when every dim + 1 of the points are linearly independent.
bool in_general_position(const Field& f, std::span<const ProjectivePoint> points);

}  // namespace hermitangent
