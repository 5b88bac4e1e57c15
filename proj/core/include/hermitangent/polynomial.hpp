#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "hermitangent/galois_field.hpp"

namespace hermitangent {

// Dense univariate polynomial, low degree first. The zero polynomial has
// no coefficients; otherwise the leading coefficient is nonzero.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Element> coeffs);

  static Poly constant(Element c) { return Poly({c}); }
  static Poly monomial(Element c, std::size_t degree);
  // t
  static Poly variable() { return monomial(Field::one(), 1); }

  bool is_zero() const noexcept { return c_.empty(); }
  // -1 for the zero polynomial.
  std::ptrdiff_t degree() const noexcept { return static_cast<std::ptrdiff_t>(c_.size()) - 1; }
  const std::vector<Element>& coeffs() const noexcept { return c_; }
  Element coeff(std::size_t i) const noexcept { return i < c_.size() ? c_[i] : Field::zero(); }
  Element leading() const noexcept { return c_.empty() ? Field::zero() : c_.back(); }

  friend bool operator==(const Poly&, const Poly&) = default;

 private:
  std::vector<Element> c_;
};

Poly add(const Field& f, const Poly& a, const Poly& b);
Poly sub(const Field& f, const Poly& a, const Poly& b);
Poly mul(const Field& f, const Poly& a, const Poly& b);
Poly scale(const Field& f, const Poly& a, Element c);
Poly pow(const Field& f, const Poly& a, std::uint64_t e);

struct DivMod {
  Poly quotient;
  Poly remainder;
};

// Throws Error(division_by_zero) for a zero divisor.
DivMod divmod(const Field& f, const Poly& a, const Poly& b);
Poly mod(const Field& f, const Poly& a, const Poly& b);

// Formal derivative; in characteristic p the t^{kp} terms vanish.
Poly derivative(const Field& f, const Poly& a);
Element eval(const Field& f, const Poly& a, Element x);
Poly monic(const Field& f, const Poly& a);

// Monic gcd. Throws Error(invalid_argument) when both inputs are zero.
Poly gcd(const Field& f, const Poly& a, const Poly& b);

// base^e mod m.
Poly pow_mod(const Field& f, const Poly& base, std::uint64_t e, const Poly& m);

// A binary form of declared degree d in [s:t]: s^{d - deg(poly)} * poly
// homogenized. The point t = infinity, i.e. [0:1], is a root of
// multiplicity d - deg(poly).
struct HomogPair {
  Poly poly;
  std::size_t degree = 0;

  std::size_t infinity_multiplicity() const noexcept {
    return degree - static_cast<std::size_t>(poly.degree());
  }
  friend bool operator==(const HomogPair&, const HomogPair&) = default;
};

// Point [alpha:beta] of P^1, identified with t = beta/alpha. Normalized
// representatives are [1:t] and [0:1] = infinity.
struct Param {
  Element alpha = Field::one();
  Element beta = Field::zero();

  static Param finite(Element t) noexcept { return {Field::one(), t}; }
  static Param infinity() noexcept { return {Field::zero(), Field::one()}; }

  bool is_infinity() const noexcept { return alpha == Field::zero(); }

  friend bool operator==(const Param&, const Param&) = default;
};

// Throws Error(invalid_argument) on [0:0].
Param normalize(const Field& f, Param x);

// Finite parameters by code of t, infinity last. Inputs must be normalized.
bool param_less(const Param& a, const Param& b) noexcept;

// All of P^1(F) in canonical order.
std::vector<Param> projective_line(const Field& f);

struct NthPowerDecomposition {
  Element scalar;
  Poly base;  // monic and squarefree
};

// Writes P = c * h^n with h monic squarefree, or returns nullopt when P has
// no such shape. Throws Error(invalid_argument) when P is zero, n == 0 or
// n is divisible by the characteristic.
std::optional<NthPowerDecomposition> nth_power_decompose(const Field& f, const Poly& p, std::uint32_t n);

enum class RootFailure : std::uint8_t { not_squarefree, does_not_split };

using RootsOutcome = std::variant<std::vector<Param>, RootFailure>;

// Distinct roots of the binary form h over F_{q^2}, each of multiplicity
// one, in canonical order. Throws Error(invalid_argument) for h == 0.
RootsOutcome distinct_roots_in_fq2(const FieldTower& tower, const HomogPair& h);

}  // namespace hermitangent
