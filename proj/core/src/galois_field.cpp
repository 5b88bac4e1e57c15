#include "hermitangent/galois_field.hpp"

#include <algorithm>
#include <string>

namespace hermitangent {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::cap_exceeded: return "cap_exceeded";
    case ErrorKind::hypothesis_violation: return "hypothesis_violation";
    case ErrorKind::division_by_zero: return "division_by_zero";
    case ErrorKind::singular_matrix: return "singular_matrix";
    case ErrorKind::mixed_field: return "mixed_field";
    case ErrorKind::not_hermitian: return "not_hermitian";
    case ErrorKind::zero_pullback: return "zero_pullback";
    case ErrorKind::not_in_group: return "not_in_group";
    case ErrorKind::internal_check: return "internal_check";
  }
  return "unknown";
}

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

namespace {

// Dense polynomials over F_p, low degree first, trimmed.
using PolyP = std::vector<std::uint32_t>;

void trim(PolyP& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

PolyP mod_p(const PolyP& a, const PolyP& m, std::uint32_t p) {
  PolyP r = a;
  trim(r);
  const std::size_t dm = m.size() - 1;
  const std::uint32_t lead_inv = [&] {
    std::uint64_t x = 1;
    for (std::uint32_t k = 0; k < p - 2; ++k) x = x * m.back() % p;
    return static_cast<std::uint32_t>(p == 2 ? 1 : x);
  }();
  while (r.size() > dm) {
    const std::uint64_t factor = static_cast<std::uint64_t>(r.back()) * lead_inv % p;
    const std::size_t shift = r.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) {
      const std::uint64_t sub = factor * m[i] % p;
      r[shift + i] = static_cast<std::uint32_t>((r[shift + i] + p - sub) % p);
    }
    trim(r);
  }
  return r;
}

PolyP mulmod_p(const PolyP& a, const PolyP& b, const PolyP& m, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  PolyP r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      r[i + j] = static_cast<std::uint32_t>((r[i + j] + static_cast<std::uint64_t>(a[i]) * b[j]) % p);
    }
  }
  return mod_p(r, m, p);
}

PolyP gcd_p(PolyP a, PolyP b, std::uint32_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    PolyP r = mod_p(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// x^(p^k) mod m.
PolyP frobenius_power_of_x(const PolyP& m, std::uint32_t p, std::uint32_t k) {
  PolyP result = mod_p({0, 1}, m, p);
  for (std::uint32_t step = 0; step < k; ++step) {
    PolyP base = result;
    PolyP acc = {1};
    for (std::uint32_t e = p; e > 0; e >>= 1) {
      if (e & 1) acc = mulmod_p(acc, base, m, p);
      base = mulmod_p(base, base, m, p);
    }
    result = std::move(acc);
  }
  return result;
}

PolyP sub_x(PolyP a, std::uint32_t p) {
  if (a.size() < 2) a.resize(2, 0);
  a[1] = (a[1] + p - 1) % p;
  trim(a);
  return a;
}

}  // namespace

bool is_irreducible_mod_p(std::uint32_t p, std::span<const std::uint32_t> monic) {
  if (monic.size() < 2 || monic.back() != 1) return false;
  const PolyP m(monic.begin(), monic.end());
  const auto d = static_cast<std::uint32_t>(m.size() - 1);
  if (d == 1) return true;
  // Rabin: x^{p^d} = x mod m, and gcd(x^{p^{d/r}} - x, m) = 1 for primes r | d.
  if (!sub_x(frobenius_power_of_x(m, p, d), p).empty()) return false;
  for (std::uint64_t r : prime_factors(d)) {
    const PolyP g = gcd_p(sub_x(frobenius_power_of_x(m, p, static_cast<std::uint32_t>(d / r)), p), m, p);
    if (g.size() != 1) return false;
  }
  return true;
}

std::vector<std::uint32_t> smallest_irreducible(std::uint32_t p, std::uint32_t degree) {
  require(degree >= 1, ErrorKind::invalid_argument, "degree must be positive");
  std::vector<std::uint32_t> poly(degree + 1, 0);
  poly[degree] = 1;
  // Odometer over (c_0, ..., c_{d-1}) with c_{d-1} least significant.
  while (true) {
    if (is_irreducible_mod_p(p, poly)) return poly;
    std::int64_t i = static_cast<std::int64_t>(degree) - 1;
    while (i >= 0 && poly[static_cast<std::size_t>(i)] == p - 1) {
      poly[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
    ++poly[static_cast<std::size_t>(i)];
  }
  fail(ErrorKind::internal_check, "no irreducible polynomial found");
}

// ---------------------------------------------------------------------------
// Field

Field::Field(std::uint32_t p, std::vector<std::uint32_t> modulus)
    : p_(p), degree_(static_cast<std::uint32_t>(modulus.size() - 1)), size_(1), modulus_(std::move(modulus)) {
  require(is_prime(p_), ErrorKind::invalid_argument, "field characteristic must be prime");
  require(degree_ >= 1, ErrorKind::invalid_argument, "modulus must have positive degree");
  require(is_irreducible_mod_p(p_, modulus_), ErrorKind::invalid_argument, "modulus is not monic irreducible");
  for (std::uint32_t i = 0; i < degree_; ++i) {
    require(static_cast<std::uint64_t>(size_) * p_ <= (std::uint64_t{1} << 31), ErrorKind::cap_exceeded,
            "field too large for 32-bit element codes");
    size_ *= p_;
  }

  neg_.resize(size_);
  for (std::uint32_t a = 0; a < size_; ++a) {
    std::uint32_t code = 0;
    std::uint32_t weight = 1;
    for (std::uint32_t k = 0, x = a; k < degree_; ++k, x /= p_) {
      code += ((p_ - x % p_) % p_) * weight;
      weight *= p_;
    }
    neg_[a] = code;
  }

  // Primitive element: g with g^((size-1)/r) != 1 for all primes r | size-1.
  const std::uint32_t order = size_ - 1;
  const auto factors = prime_factors(order);
  auto slow_pow = [&](std::uint32_t g, std::uint64_t e) {
    std::uint32_t acc = 1;
    while (e > 0) {
      if (e & 1) acc = mul_slow(acc, g);
      g = mul_slow(g, g);
      e >>= 1;
    }
    return acc;
  };
  std::uint32_t generator = 0;
  for (std::uint32_t g = 1; g < size_; ++g) {
    const bool primitive = std::all_of(factors.begin(), factors.end(),
                                       [&](std::uint64_t r) { return slow_pow(g, order / r) != 1; });
    if (primitive) {
      generator = g;
      break;
    }
  }
  require(generator != 0, ErrorKind::internal_check, "no primitive element found");

  exp_.resize(order);
  log_.assign(size_, 0);
  std::uint32_t x = 1;
  for (std::uint32_t e = 0; e < order; ++e) {
    exp_[e] = x;
    log_[x] = e;
    x = mul_slow(x, generator);
  }

  if (size_ <= 1024) {
    add_table_.resize(static_cast<std::size_t>(size_) * size_);
    mul_table_.resize(static_cast<std::size_t>(size_) * size_);
    for (std::uint32_t a = 0; a < size_; ++a) {
      for (std::uint32_t b = 0; b < size_; ++b) {
        add_table_[a * size_ + b] = p_ == 2 ? (a ^ b) : add_slow(Element{a}, Element{b}).code;
        std::uint32_t prod = 0;
        if (a != 0 && b != 0) {
          std::uint32_t e = log_[a] + log_[b];
          if (e >= order) e -= order;
          prod = exp_[e];
        }
        mul_table_[a * size_ + b] = prod;
      }
    }
  }
}

Element Field::from_integer(std::int64_t k) const noexcept {
  const auto pp = static_cast<std::int64_t>(p_);
  return Element{static_cast<std::uint32_t>(((k % pp) + pp) % pp)};
}

Element Field::from_coeffs(std::span<const std::uint32_t> coeffs) const {
  require(coeffs.size() == degree_, ErrorKind::invalid_argument, "coefficient vector has wrong length");
  std::uint32_t code = 0;
  std::uint32_t weight = 1;
  for (std::uint32_t c : coeffs) {
    require(c < p_, ErrorKind::invalid_argument, "coefficient out of range");
    code += c * weight;
    weight *= p_;
  }
  return Element{code};
}

std::vector<std::uint32_t> Field::coeffs(Element x) const {
  std::vector<std::uint32_t> out(degree_);
  std::uint32_t code = x.code;
  for (auto& c : out) {
    c = code % p_;
    code /= p_;
  }
  return out;
}

Element Field::add_slow(Element a, Element b) const noexcept {
  std::uint32_t code = 0;
  std::uint32_t weight = 1;
  std::uint32_t x = a.code;
  std::uint32_t y = b.code;
  for (std::uint32_t k = 0; k < degree_; ++k) {
    code += ((x % p_ + y % p_) % p_) * weight;
    x /= p_;
    y /= p_;
    weight *= p_;
  }
  return Element{code};
}

std::uint32_t Field::mul_slow(std::uint32_t a, std::uint32_t b) const {
  std::vector<std::uint32_t> pa(degree_), pb(degree_);
  for (std::uint32_t k = 0; k < degree_; ++k, a /= p_, b /= p_) {
    pa[k] = a % p_;
    pb[k] = b % p_;
  }
  const auto r = mulmod_p(pa, pb, modulus_, p_);
  std::uint32_t code = 0;
  std::uint32_t weight = 1;
  for (std::uint32_t c : r) {
    code += c * weight;
    weight *= p_;
  }
  return code;
}

Element Field::inv(Element a) const {
  if (a.code == 0) fail(ErrorKind::division_by_zero, "inversion of zero");
  const std::uint32_t order = size_ - 1;
  return Element{exp_[(order - log_[a.code]) % order]};
}

Element Field::pow(Element a, std::uint64_t e) const noexcept {
  Element acc = one();
  while (e > 0) {
    if (e & 1) acc = mul(acc, a);
    a = mul(a, a);
    e >>= 1;
  }
  return acc;
}

std::uint32_t Field::log(Element a) const {
  if (a.code == 0) fail(ErrorKind::division_by_zero, "logarithm of zero");
  return log_[a.code];
}

// ---------------------------------------------------------------------------
// FieldTower

FieldTower FieldTower::make(std::uint32_t p, std::uint32_t nu, std::uint64_t element_cap) {
  if (!is_prime(p)) fail(ErrorKind::invalid_argument, "p = " + std::to_string(p) + " is not prime");
  require(nu >= 1, ErrorKind::invalid_argument, "nu must be positive");
  std::uint64_t total = 1;
  for (std::uint32_t i = 0; i < 2 * nu; ++i) {
    total *= p;
    if (total > element_cap) {
      fail(ErrorKind::cap_exceeded, "|F_{q^2}| = p^(2 nu) exceeds the element cap " + std::to_string(element_cap));
    }
  }

  FieldTower t;
  t.p_ = p;
  t.nu_ = nu;
  t.fp_ = std::make_shared<const Field>(p, smallest_irreducible(p, 1));
  t.fq_ = std::make_shared<const Field>(p, smallest_irreducible(p, nu));
  t.fq2_ = std::make_shared<const Field>(p, smallest_irreducible(p, 2 * nu));
  t.q_ = t.fq_->size();
  const Field& base = *t.fq_;
  const Field& ext = *t.fq2_;
  const std::uint32_t q = t.q_;
  const std::uint32_t q2 = ext.size();

  auto frob = std::make_shared<std::vector<std::uint32_t>>(q2);
  for (std::uint32_t x = 0; x < q2; ++x) (*frob)[x] = ext.pow(Element{x}, q).code;
  t.frobenius_ = frob->data();
  t.frobenius_holder_ = frob;

  // Embedding: send the basis generator of F_q to the first root in F_{q^2}
  // of modulus_q.
  const auto& mq = base.modulus();
  auto eval_modulus = [&](Element r) {
    Element acc = Field::zero();
    for (auto it = mq.rbegin(); it != mq.rend(); ++it) acc = ext.add(ext.mul(acc, r), Element{*it});
    return acc;
  };
  Element root{0};
  bool found = false;
  for (std::uint32_t r = 0; r < q2 && !found; ++r) {
    if (eval_modulus(Element{r}) == Field::zero()) {
      root = Element{r};
      found = true;
    }
  }
  require(found, ErrorKind::internal_check, "modulus of F_q has no root in F_{q^2}");

  auto embed = std::make_shared<std::vector<std::uint32_t>>(q);
  auto restrict = std::make_shared<std::vector<std::uint32_t>>(q2, UINT32_MAX);
  for (std::uint32_t x = 0; x < q; ++x) {
    const auto c = base.coeffs(Element{x});
    Element acc = Field::zero();
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = ext.add(ext.mul(acc, root), Element{*it});
    (*embed)[x] = acc.code;
    require((*restrict)[acc.code] == UINT32_MAX, ErrorKind::internal_check, "embedding is not injective");
    (*restrict)[acc.code] = x;
  }
  // Homomorphism check, exhaustive.
  for (std::uint32_t a = 0; a < q; ++a) {
    for (std::uint32_t b = 0; b < q; ++b) {
      const Element ea{(*embed)[a]}, eb{(*embed)[b]};
      require(ext.add(ea, eb).code == (*embed)[base.add(Element{a}, Element{b}).code], ErrorKind::internal_check,
              "embedding does not respect addition");
      require(ext.mul(ea, eb).code == (*embed)[base.mul(Element{a}, Element{b}).code], ErrorKind::internal_check,
              "embedding does not respect multiplication");
    }
  }
  // Image equals the Frobenius-fixed set.
  std::uint32_t fixed = 0;
  for (std::uint32_t x = 0; x < q2; ++x) {
    const bool is_fixed = (*frob)[x] == x;
    fixed += is_fixed ? 1 : 0;
    require(is_fixed == ((*restrict)[x] != UINT32_MAX), ErrorKind::internal_check,
            "embedding image differs from the fixed field of Frobenius");
  }
  require(fixed == q, ErrorKind::internal_check, "Frobenius fixed field has wrong size");

  auto roots = std::make_shared<std::vector<std::uint32_t>>(q2, UINT32_MAX);
  for (std::uint32_t x = 1; x < q2; ++x) {
    const std::uint32_t a = ext.mul(Element{x}, Element{(*frob)[x]}).code;
    if ((*roots)[a] == UINT32_MAX) (*roots)[a] = x;
  }

  t.embed_table_ = std::move(embed);
  t.restrict_table_ = std::move(restrict);
  t.norm_root_table_ = std::move(roots);
  return t;
}

const Field& FieldTower::field(FieldLevel level) const& noexcept {
  switch (level) {
    case FieldLevel::prime: return *fp_;
    case FieldLevel::base: return *fq_;
    case FieldLevel::extension: break;
  }
  return *fq2_;
}

Element FieldTower::embed(Element x_in_fq) const {
  require(x_in_fq.code < q_, ErrorKind::invalid_argument, "element is not in F_q");
  return Element{(*embed_table_)[x_in_fq.code]};
}

Element FieldTower::restrict_to_base(Element x) const {
  require(fq2_->contains(x), ErrorKind::invalid_argument, "element is not in F_{q^2}");
  const std::uint32_t r = (*restrict_table_)[x.code];
  require(r != UINT32_MAX, ErrorKind::invalid_argument, "element is not in the embedded F_q");
  return Element{r};
}

Element FieldTower::solve_norm_equation(Element a) const {
  require(fq2_->contains(a), ErrorKind::invalid_argument, "element is not in F_{q^2}");
  require(a != Field::zero(), ErrorKind::invalid_argument, "norm equation with zero right-hand side");
  require(in_base(a), ErrorKind::invalid_argument, "norm equation right-hand side is not in F_q");
  const std::uint32_t x = (*norm_root_table_)[a.code];
  require(x != UINT32_MAX, ErrorKind::internal_check, "norm map is not surjective");
  return Element{x};
}

std::vector<Element> FieldTower::enumerate(FieldLevel level) const {
  const Field& f = field(level);
  std::vector<Element> out(f.size());
  for (std::uint32_t i = 0; i < f.size(); ++i) out[i] = Element{i};
  return out;
}

FieldElement FieldTower::arith(ArithOp op, FieldElement x, FieldElement y) const {
  if (op == ArithOp::pow) fail(ErrorKind::invalid_argument, "pow takes an integer exponent");
  if (op != ArithOp::inv && x.level != y.level) {
    fail(ErrorKind::mixed_field, "operands live in different fields of the tower");
  }
  const Field& f = field(x.level);
  require(f.contains(x.value) && f.contains(y.value), ErrorKind::invalid_argument, "operand out of range");
  switch (op) {
    case ArithOp::add: return {x.level, f.add(x.value, y.value)};
    case ArithOp::sub: return {x.level, f.sub(x.value, y.value)};
    case ArithOp::mul: return {x.level, f.mul(x.value, y.value)};
    case ArithOp::inv: return {x.level, f.inv(x.value)};
    case ArithOp::pow: break;
  }
  fail(ErrorKind::invalid_argument, "unknown operation");
}

FieldElement FieldTower::arith(ArithOp op, FieldElement x, std::uint64_t exponent) const {
  const Field& f = field(x.level);
  require(f.contains(x.value), ErrorKind::invalid_argument, "operand out of range");
  if (op == ArithOp::inv) return {x.level, f.inv(x.value)};
  require(op == ArithOp::pow, ErrorKind::invalid_argument, "integer operand is only valid for pow");
  return {x.level, f.pow(x.value, exponent)};
}

}  // namespace hermitangent
