#pragma once

// Exact arithmetic in the tower F_p ⊂ F_q ⊂ F_{q^2}, q = p^nu.
//
// Elements are stored as an integer code: the coefficient vector
// (c_0, ..., c_{d-1}) of the polynomial basis packed as sum c_i p^i.
// A Field object is the arithmetic context that gives the code meaning.
// Both F_q and F_{q^2} are built directly over F_p; F_q is mapped into
// F_{q^2} by an explicit, verified embedding.

#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "hermitangent/error.hpp"

namespace hermitangent {

struct Element {
  std::uint32_t code = 0;

  friend constexpr auto operator<=>(Element, Element) = default;
};

inline constexpr std::uint64_t kDefaultElementCap = std::uint64_t{1} << 20;

bool is_prime(std::uint64_t n) noexcept;

// Returns the prime factors of n without multiplicity, ascending.
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

// Monic polynomials over F_p are coefficient vectors, low degree first,
// with the trailing 1 included.
bool is_irreducible_mod_p(std::uint32_t p, std::span<const std::uint32_t> monic);

// Lexicographically smallest monic irreducible polynomial of the given
// degree, comparing (c_0, c_1, ..., c_{d-1}) with c_0 most significant.
std::vector<std::uint32_t> smallest_irreducible(std::uint32_t p, std::uint32_t degree);

class Field {
 public:
  // modulus: monic irreducible of degree >= 1 over F_p, low degree first.
  Field(std::uint32_t p, std::vector<std::uint32_t> modulus);

  std::uint32_t characteristic() const noexcept { return p_; }
  std::uint32_t degree() const noexcept { return degree_; }
  std::uint32_t size() const noexcept { return size_; }
  const std::vector<std::uint32_t>& modulus() const noexcept { return modulus_; }
  Element primitive_element() const noexcept { return Element{exp_[1]}; }

  static constexpr Element zero() noexcept { return Element{0}; }
  static constexpr Element one() noexcept { return Element{1}; }
  bool contains(Element x) const noexcept { return x.code < size_; }

  // Image of the integer k under Z -> F_p -> this field.
  Element from_integer(std::int64_t k) const noexcept;
  Element from_coeffs(std::span<const std::uint32_t> coeffs) const;
  std::vector<std::uint32_t> coeffs(Element x) const;

  Element add(Element a, Element b) const noexcept {
    if (!add_table_.empty()) return Element{add_table_[a.code * size_ + b.code]};
    if (p_ == 2) return Element{a.code ^ b.code};
    return add_slow(a, b);
  }
  Element neg(Element a) const noexcept { return Element{neg_[a.code]}; }
  Element sub(Element a, Element b) const noexcept { return add(a, neg(b)); }

  Element mul(Element a, Element b) const noexcept {
    if (!mul_table_.empty()) return Element{mul_table_[a.code * size_ + b.code]};
    if (a.code == 0 || b.code == 0) return zero();
    std::uint32_t e = log_[a.code] + log_[b.code];
    if (e >= size_ - 1) e -= size_ - 1;
    return Element{exp_[e]};
  }

  // Throws Error(division_by_zero) on zero.
  Element inv(Element a) const;
  Element div(Element a, Element b) const { return mul(a, inv(b)); }

  // Square-and-multiply; pow(0, 0) == 1.
  Element pow(Element a, std::uint64_t e) const noexcept;

  // Discrete log / exp with respect to primitive_element().
  std::uint32_t log(Element a) const;
  Element exp(std::uint64_t e) const noexcept { return Element{exp_[e % (size_ - 1)]}; }

 private:
  Element add_slow(Element a, Element b) const noexcept;
  std::uint32_t mul_slow(std::uint32_t a, std::uint32_t b) const;

  std::uint32_t p_;
  std::uint32_t degree_;
  std::uint32_t size_;
  std::vector<std::uint32_t> modulus_;
  std::vector<std::uint32_t> neg_;
  std::vector<std::uint32_t> exp_;
  std::vector<std::uint32_t> log_;
  std::vector<std::uint32_t> add_table_;
  std::vector<std::uint32_t> mul_table_;
};

enum class FieldLevel : std::uint8_t { prime, base, extension };

// An element together with the level of the tower it lives in.
struct FieldElement {
  FieldLevel level = FieldLevel::extension;
  Element value;

  friend constexpr bool operator==(const FieldElement&, const FieldElement&) = default;
};

enum class ArithOp : std::uint8_t { add, sub, mul, inv, pow };

class FieldTower {
 public:
  // Throws Error(invalid_argument) for non-prime p or nu == 0 and
  // Error(cap_exceeded) when p^(2 nu) exceeds element_cap.
  static FieldTower make(std::uint32_t p, std::uint32_t nu,
                         std::uint64_t element_cap = kDefaultElementCap);

  std::uint32_t p() const noexcept { return p_; }
  std::uint32_t nu() const noexcept { return nu_; }
  std::uint32_t q() const noexcept { return q_; }

  // The fields live as long as the tower; binding them from a temporary
  // tower would dangle.
  const Field& fp() const& noexcept { return *fp_; }
  const Field& fq() const& noexcept { return *fq_; }
  const Field& fq2() const& noexcept { return *fq2_; }
  const Field& field(FieldLevel level) const& noexcept;
  const Field& fp() const&& = delete;
  const Field& fq() const&& = delete;
  const Field& fq2() const&& = delete;
  const Field& field(FieldLevel level) const&& = delete;

  // F_q -> F_{q^2}.
  Element embed(Element x_in_fq) const;
  // F_p -> F_{q^2}; a constant polynomial in either representation.
  Element embed_prime(Element x_in_fp) const { return Element{x_in_fp.code}; }
  // Inverse of embed on its image; throws Error(invalid_argument) otherwise.
  Element restrict_to_base(Element x) const;
  bool in_base(Element x) const noexcept { return frobenius_q(x) == x; }

  Element frobenius_q(Element x) const noexcept { return Element{frobenius_[x.code]}; }
  // x^{q+1}; always lands in the embedded F_q.
  Element norm(Element x) const noexcept { return fq2_->mul(x, frobenius_q(x)); }
  // Some x with x^{q+1} = a, chosen as the first solution in code order.
  // Throws Error(invalid_argument) when a is zero or not in the embedded F_q.
  Element solve_norm_equation(Element a) const;

  // All elements of the given level in code order.
  std::vector<Element> enumerate(FieldLevel level) const;

  // Checked arithmetic on tagged elements; mixed levels are rejected.
  FieldElement arith(ArithOp op, FieldElement x, FieldElement y) const;
  FieldElement arith(ArithOp op, FieldElement x, std::uint64_t exponent) const;

 private:
  FieldTower() = default;

  std::uint32_t p_ = 0;
  std::uint32_t nu_ = 0;
  std::uint32_t q_ = 0;
  std::shared_ptr<const Field> fp_;
  std::shared_ptr<const Field> fq_;
  std::shared_ptr<const Field> fq2_;
  std::shared_ptr<const std::vector<std::uint32_t>> embed_table_;
  std::shared_ptr<const std::vector<std::uint32_t>> restrict_table_;
  std::shared_ptr<const std::vector<std::uint32_t>> norm_root_table_;
  // Shared with copies; immutable after make().
  std::shared_ptr<const std::vector<std::uint32_t>> frobenius_holder_;
  const std::uint32_t* frobenius_ = nullptr;
};

}  // namespace hermitangent
