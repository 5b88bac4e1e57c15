#include "hermitangent/polynomial.hpp"

#include <algorithm>

namespace hermitangent {

namespace {

void trim(std::vector<Element>& c) {
  while (!c.empty() && c.back() == Field::zero()) c.pop_back();
}

}  // namespace

Poly::Poly(std::vector<Element> coeffs) : c_(std::move(coeffs)) { trim(c_); }

Poly Poly::monomial(Element c, std::size_t degree) {
  std::vector<Element> v(degree + 1, Field::zero());
  v[degree] = c;
  return Poly(std::move(v));
}

Poly add(const Field& f, const Poly& a, const Poly& b) {
  std::vector<Element> out(std::max(a.coeffs().size(), b.coeffs().size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f.add(a.coeff(i), b.coeff(i));
  return Poly(std::move(out));
}

Poly sub(const Field& f, const Poly& a, const Poly& b) {
  std::vector<Element> out(std::max(a.coeffs().size(), b.coeffs().size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f.sub(a.coeff(i), b.coeff(i));
  return Poly(std::move(out));
}

Poly mul(const Field& f, const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  const auto& x = a.coeffs();
  const auto& y = b.coeffs();
  std::vector<Element> out(x.size() + y.size() - 1, Field::zero());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == Field::zero()) continue;
    for (std::size_t j = 0; j < y.size(); ++j) out[i + j] = f.add(out[i + j], f.mul(x[i], y[j]));
  }
  return Poly(std::move(out));
}

Poly scale(const Field& f, const Poly& a, Element c) {
  std::vector<Element> out = a.coeffs();
  for (auto& x : out) x = f.mul(x, c);
  return Poly(std::move(out));
}

Poly pow(const Field& f, const Poly& a, std::uint64_t e) {
  Poly acc = Poly::constant(Field::one());
  Poly base = a;
  while (e > 0) {
    if (e & 1) acc = mul(f, acc, base);
    e >>= 1;
    if (e > 0) base = mul(f, base, base);
  }
  return acc;
}

DivMod divmod(const Field& f, const Poly& a, const Poly& b) {
  if (b.is_zero()) fail(ErrorKind::division_by_zero, "polynomial division by zero");
  if (a.degree() < b.degree()) return {Poly{}, a};
  std::vector<Element> rem = a.coeffs();
  const auto& d = b.coeffs();
  const std::size_t db = d.size() - 1;
  const Element lead_inv = f.inv(d.back());
  std::vector<Element> quot(rem.size() - db, Field::zero());
  for (std::size_t k = rem.size(); k-- > db;) {
    const Element factor = f.mul(rem[k], lead_inv);
    if (factor == Field::zero()) continue;
    const std::size_t shift = k - db;
    quot[shift] = factor;
    for (std::size_t i = 0; i <= db; ++i) rem[shift + i] = f.sub(rem[shift + i], f.mul(factor, d[i]));
  }
  rem.resize(db);
  return {Poly(std::move(quot)), Poly(std::move(rem))};
}

Poly mod(const Field& f, const Poly& a, const Poly& b) { return divmod(f, a, b).remainder; }

Poly derivative(const Field& f, const Poly& a) {
  if (a.degree() < 1) return {};
  std::vector<Element> out(a.coeffs().size() - 1);
  for (std::size_t i = 1; i < a.coeffs().size(); ++i) {
    out[i - 1] = f.mul(f.from_integer(static_cast<std::int64_t>(i % f.characteristic())), a.coeffs()[i]);
  }
  return Poly(std::move(out));
}

Element eval(const Field& f, const Poly& a, Element x) {
  Element acc = Field::zero();
  const auto& c = a.coeffs();
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = f.add(f.mul(acc, x), *it);
  return acc;
}

Poly monic(const Field& f, const Poly& a) {
  if (a.is_zero()) return a;
  return scale(f, a, f.inv(a.leading()));
}

Poly gcd(const Field& f, const Poly& a, const Poly& b) {
  if (a.is_zero() && b.is_zero()) fail(ErrorKind::invalid_argument, "gcd of two zero polynomials");
  Poly x = a;
  Poly y = b;
  while (!y.is_zero()) {
    Poly r = mod(f, x, y);
    x = std::move(y);
    y = std::move(r);
  }
  return monic(f, x);
}

Poly pow_mod(const Field& f, const Poly& base, std::uint64_t e, const Poly& m) {
  Poly acc = mod(f, Poly::constant(Field::one()), m);
  Poly b = mod(f, base, m);
  while (e > 0) {
    if (e & 1) acc = mod(f, mul(f, acc, b), m);
    e >>= 1;
    if (e > 0) b = mod(f, mul(f, b, b), m);
  }
  return acc;
}

Param normalize(const Field& f, Param x) {
  if (x.alpha != Field::zero()) return Param::finite(f.div(x.beta, x.alpha));
  if (x.beta == Field::zero()) fail(ErrorKind::invalid_argument, "[0:0] is not a point of P^1");
  return Param::infinity();
}

bool param_less(const Param& a, const Param& b) noexcept {
  if (a.is_infinity() != b.is_infinity()) return b.is_infinity();
  return a.beta < b.beta;
}

std::vector<Param> projective_line(const Field& f) {
  std::vector<Param> out;
  out.reserve(f.size() + 1);
  for (std::uint32_t t = 0; t < f.size(); ++t) out.push_back(Param::finite(Element{t}));
  out.push_back(Param::infinity());
  return out;
}

std::optional<NthPowerDecomposition> nth_power_decompose(const Field& f, const Poly& p, std::uint32_t n) {
  require(!p.is_zero(), ErrorKind::invalid_argument, "nth_power_decompose of the zero polynomial");
  require(n >= 1, ErrorKind::invalid_argument, "exponent must be positive");
  require(n % f.characteristic() != 0, ErrorKind::invalid_argument, "exponent is divisible by the characteristic");

  const auto deg = static_cast<std::size_t>(p.degree());
  if (deg % n != 0) return std::nullopt;
  // For P = c h^n with h squarefree, gcd(P, P') = h^{n-1} since n is a unit.
  const Poly g = gcd(f, p, derivative(f, p));
  const DivMod qr = divmod(f, p, g);
  if (!qr.remainder.is_zero()) return std::nullopt;
  Poly h = monic(f, qr.quotient);
  if (static_cast<std::size_t>(h.degree()) * n != deg) return std::nullopt;
  const Element c = p.leading();
  if (scale(f, pow(f, h, n), c) != p) return std::nullopt;
  return NthPowerDecomposition{c, std::move(h)};
}

RootsOutcome distinct_roots_in_fq2(const FieldTower& tower, const HomogPair& h) {
  const Field& f = tower.fq2();
  require(!h.poly.is_zero(), ErrorKind::invalid_argument, "roots of the zero form");
  require(static_cast<std::size_t>(h.poly.degree()) <= h.degree, ErrorKind::invalid_argument,
          "polynomial degree exceeds the declared form degree");
  if (h.infinity_multiplicity() > 1) return RootFailure::not_squarefree;
  if (h.poly.degree() > 0) {
    if (gcd(f, h.poly, derivative(f, h.poly)).degree() > 0) return RootFailure::not_squarefree;
    // h | t^{q^2} - t
    const Poly frob = pow_mod(f, Poly::variable(), f.size(), h.poly);
    if (!sub(f, frob, mod(f, Poly::variable(), h.poly)).is_zero()) return RootFailure::does_not_split;
  }

  std::vector<Param> roots;
  roots.reserve(h.degree);
  for (std::uint32_t t = 0; t < f.size(); ++t) {
    if (eval(f, h.poly, Element{t}) == Field::zero()) roots.push_back(Param::finite(Element{t}));
  }
  require(static_cast<std::ptrdiff_t>(roots.size()) == h.poly.degree(), ErrorKind::internal_check,
          "split squarefree polynomial has the wrong number of roots");
  if (h.infinity_multiplicity() == 1) roots.push_back(Param::infinity());
  return roots;
}

}  // namespace hermitangent
