#pragma once

// Reference implementations used to cross-check the library. They work on
// raw coefficient vectors and integers and never touch the field tables.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "hermitangent/unitary_orbit.hpp"

namespace oracle {

using Coeffs = std::vector<std::uint32_t>;

inline void trim(Coeffs& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Coeffs poly_mul_mod_p(const Coeffs& a, const Coeffs& b, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Coeffs r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  }
  trim(r);
  return r;
}

// Remainder of a modulo a monic m.
inline Coeffs poly_rem_monic(Coeffs a, const Coeffs& m, std::uint32_t p) {
  trim(a);
  const std::size_t d = m.size() - 1;
  while (a.size() > d) {
    const std::uint32_t lead = a.back();
    const std::size_t shift = a.size() - 1 - d;
    for (std::size_t i = 0; i <= d; ++i) a[shift + i] = (a[shift + i] + p - (lead * m[i]) % p) % p;
    trim(a);
  }
  return a;
}

// Every monic polynomial of degree 1..d/2 is tried as a divisor.
inline bool brute_irreducible(const Coeffs& monic, std::uint32_t p) {
  const std::size_t d = monic.size() - 1;
  for (std::size_t k = 1; k <= d / 2; ++k) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < k; ++i) count *= p;
    for (std::uint64_t code = 0; code < count; ++code) {
      Coeffs g(k + 1, 0);
      std::uint64_t c = code;
      for (std::size_t i = 0; i < k; ++i) {
        g[i] = static_cast<std::uint32_t>(c % p);
        c /= p;
      }
      g[k] = 1;
      if (poly_rem_monic(monic, g, p).empty()) return false;
    }
  }
  return true;
}

// Product in F_p[x]/(m) on packed codes.
inline std::uint32_t naive_mul(const hermitangent::Field& f, std::uint32_t a, std::uint32_t b) {
  const std::uint32_t p = f.characteristic();
  auto unpack = [&](std::uint32_t x) {
    Coeffs c;
    while (x) {
      c.push_back(x % p);
      x /= p;
    }
    return c;
  };
  const Coeffs r = poly_rem_monic(poly_mul_mod_p(unpack(a), unpack(b), p), f.modulus(), p);
  std::uint32_t code = 0;
  for (std::size_t i = r.size(); i-- > 0;) code = code * p + r[i];
  return code;
}

inline std::uint32_t naive_add(const hermitangent::Field& f, std::uint32_t a, std::uint32_t b) {
  const std::uint32_t p = f.characteristic();
  std::uint32_t code = 0, scale = 1;
  for (std::uint32_t i = 0; i < f.degree(); ++i) {
    code += ((a % p + b % p) % p) * scale;
    a /= p;
    b /= p;
    scale *= p;
  }
  return code;
}

inline std::uint32_t naive_pow(const hermitangent::Field& f, std::uint32_t a, std::uint64_t e) {
  std::uint32_t r = 1;
  for (std::uint64_t i = 0; i < e; ++i) r = naive_mul(f, r, a);
  return r;
}

// Naive 3x3 or 2x2 determinant by cofactor expansion.
inline hermitangent::Element det(const hermitangent::Field& f, const hermitangent::SqMatrix& m) {
  using hermitangent::Element;
  const std::size_t n = m.size();
  if (n == 1) return m(0, 0);
  Element acc = hermitangent::Field::zero();
  for (std::size_t j = 0; j < n; ++j) {
    hermitangent::SqMatrix minor(n - 1);
    for (std::size_t r = 1; r < n; ++r) {
      for (std::size_t c = 0, cc = 0; c < n; ++c) {
        if (c != j) minor(r - 1, cc++) = m(r, c);
      }
    }
    const Element term = f.mul(m(0, j), det(f, minor));
    acc = j % 2 == 0 ? f.add(acc, term) : f.sub(acc, term);
  }
  return acc;
}

inline hermitangent::SqMatrix random_matrix(const hermitangent::Field& f, std::size_t n, std::mt19937_64& rng) {
  std::vector<hermitangent::Element> e(n * n);
  for (auto& x : e) x = hermitangent::Element{static_cast<std::uint32_t>(rng() % f.size())};
  return hermitangent::SqMatrix(n, std::move(e));
}

// Random invertible Hermitian matrix: F_q diagonal, conj-symmetric off diagonal.
inline hermitangent::SqMatrix random_hermitian(const hermitangent::FieldTower& tower, std::size_t n,
                                               std::mt19937_64& rng) {
  const auto& f = tower.fq2();
  for (;;) {
    hermitangent::SqMatrix h(n);
    for (std::size_t i = 0; i < n; ++i) {
      h(i, i) = tower.embed(hermitangent::Element{static_cast<std::uint32_t>(rng() % tower.q())});
      for (std::size_t j = i + 1; j < n; ++j) {
        h(i, j) = hermitangent::Element{static_cast<std::uint32_t>(rng() % f.size())};
        h(j, i) = tower.frobenius_q(h(i, j));
      }
    }
    if (det(f, h) != hermitangent::Field::zero()) return h;
  }
}

// Direct evaluation of sum a_ij x_i x_j^q using naive powers.
inline hermitangent::Element hermitian_form(const hermitangent::FieldTower& tower, const hermitangent::SqMatrix& a,
                                            const std::vector<hermitangent::Element>& x) {
  const auto& f = tower.fq2();
  hermitangent::Element acc = hermitangent::Field::zero();
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      const hermitangent::Element xq{naive_pow(f, x[j].code, tower.q())};
      acc = f.add(acc, f.mul(a(i, j), f.mul(x[i], xq)));
    }
  }
  return acc;
}

}  // namespace oracle
