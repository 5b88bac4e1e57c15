#include "hermitangent/curve.hpp"

#include <algorithm>
#include <string>

namespace hermitangent {

Mobius mobius_from_affine(Element a, Element b, Element c, Element d) { return SqMatrix(2, {d, b, c, a}); }

Param mobius_apply(const Field& f, const Mobius& g, const Param& z) {
  require(g.size() == 2, ErrorKind::invalid_argument, "Moebius map must be 2x2");
  const Element s = f.add(f.mul(z.alpha, g(0, 0)), f.mul(z.beta, g(1, 0)));
  const Element t = f.add(f.mul(z.alpha, g(0, 1)), f.mul(z.beta, g(1, 1)));
  if (s == Field::zero() && t == Field::zero()) fail(ErrorKind::singular_matrix, "Moebius map is singular");
  return normalize(f, {s, t});
}

Mobius mobius_to_triple(const Field& f, const Param& z1, const Param& z2, const Param& z3) {
  // L_j(z) = s_j t - t_j s vanishes exactly at z_j.
  auto linear = [&](const Param& zj, const Param& z) { return f.sub(f.mul(zj.alpha, z.beta), f.mul(zj.beta, z.alpha)); };
  const Element l1_at_2 = linear(z1, z2);
  const Element l3_at_2 = linear(z3, z2);
  require(l1_at_2 != Field::zero() && l3_at_2 != Field::zero() && linear(z1, z3) != Field::zero(),
          ErrorKind::invalid_argument, "Moebius triple must consist of distinct points");
  // s' = L1(z2) L3(z), t' = L3(z2) L1(z)
  Mobius w(2);
  w(0, 0) = f.neg(f.mul(l1_at_2, z3.beta));
  w(1, 0) = f.mul(l1_at_2, z3.alpha);
  w(0, 1) = f.neg(f.mul(l3_at_2, z1.beta));
  w(1, 1) = f.mul(l3_at_2, z1.alpha);
  return w;
}

ProjectivePoint phi0(const Field& f, const Param& t, std::size_t n) {
  require(t.alpha != Field::zero() || t.beta != Field::zero(), ErrorKind::invalid_argument,
          "[0:0] is not a curve parameter");
  std::vector<Element> c(n + 1);
  for (std::size_t i = 0; i <= n; ++i) c[i] = f.mul(f.pow(t.alpha, n - i), f.pow(t.beta, i));
  return ProjectivePoint(f, std::move(c));
}

SqMatrix mobius_to_ambient(const Field& f, const Mobius& g, std::size_t n) {
  require(g.size() == 2, ErrorKind::invalid_argument, "Moebius map must be 2x2");
  require(is_invertible(f, g), ErrorKind::singular_matrix, "Moebius map is singular");
  // Coordinate i of phi0([s,t] g) is (g00 s + g10 t)^{n-i} (g01 s + g11 t)^i;
  // its coefficient of s^{n-k} t^k is entry (k, i).
  const Poly first({g(0, 0), g(1, 0)});
  const Poly second({g(0, 1), g(1, 1)});
  SqMatrix s(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const Poly column = mul(f, pow(f, first, n - i), pow(f, second, i));
    for (std::size_t k = 0; k <= n; ++k) s(k, i) = column.coeff(k);
  }
  return s;
}

SqMatrix canonical_matrix_b(const FieldTower& tower, std::size_t n) {
  const std::uint32_t p = tower.p();
  require(n >= 2, ErrorKind::invalid_argument, "canonical matrix needs n >= 2");
  if (n % p == 0) fail(ErrorKind::invalid_argument, "n = " + std::to_string(n) + " is divisible by p");
  std::vector<std::uint32_t> row{1};
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<std::uint32_t> next(k + 1, 1);
    for (std::size_t i = 1; i < k; ++i) next[i] = (row[i - 1] + row[i]) % p;
    row = std::move(next);
  }
  const Field& f = tower.fq2();
  SqMatrix b(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    if (row[i] == 0) {
      fail(ErrorKind::singular_matrix, "binom(" + std::to_string(n) + ", " + std::to_string(i) +
                                           ") vanishes mod " + std::to_string(p) + "; B is singular");
    }
    const Element v{row[i]};
    b(i, n - i) = (i % 2 == 0) ? v : f.neg(v);
  }
  return b;
}

// ---------------------------------------------------------------------------

RationalNormalCurve::RationalNormalCurve(const Field& f, SqMatrix m) : m_(std::move(m)) {
  auto inv = try_invert(f, m_);
  if (!inv) fail(ErrorKind::singular_matrix, "curve matrix is singular");
  m_inv_ = *std::move(inv);
}

ProjectivePoint RationalNormalCurve::point(const Field& f, const Param& t) const {
  return apply(f, phi0(f, t, degree()), m_);
}

std::optional<Param> RationalNormalCurve::parameter_of(const Field& f, const ProjectivePoint& p) const {
  if (p.coords().size() != m_.size()) return std::nullopt;
  const ProjectivePoint x = apply(f, p, m_inv_);
  const Param t = x[0] == Field::zero() ? Param::infinity() : Param::finite(x[1]);
  if (phi0(f, t, degree()) != x) return std::nullopt;
  return t;
}

MarkedCurve::MarkedCurve(const Field& f, RationalNormalCurve curve, std::array<ProjectivePoint, 3> marks)
    : curve_(std::move(curve)), marks_(std::move(marks)) {
  for (const auto& m : marks_) {
    require(curve_.contains(f, m), ErrorKind::invalid_argument, "marked point is not on the curve");
  }
  require(marks_[0] != marks_[1] && marks_[0] != marks_[2] && marks_[1] != marks_[2], ErrorKind::invalid_argument,
          "marked points must be distinct");
}

MarkedCurve MarkedCurve::canonical(const Field& f, std::size_t n) {
  return MarkedCurve(f, RationalNormalCurve::canonical(n),
                     {phi0(f, Param::finite(Field::zero()), n), phi0(f, Param::finite(Field::one()), n),
                      phi0(f, Param::infinity(), n)});
}

// ---------------------------------------------------------------------------

HomogPair pullback(const FieldTower& tower, const RationalNormalCurve& curve, const HermitianVariety& x) {
  const Field& f = tower.fq2();
  const std::size_t n = curve.degree();
  require(x.ambient_dimension() == n, ErrorKind::invalid_argument, "curve and variety live in different spaces");
  const std::size_t q = tower.q();
  const SqMatrix& m = curve.matrix();
  const SqMatrix& a = x.matrix();

  // y_j(t) = sum_k m_kj t^k and its twist y_j(t)^q = sum_k m_kj^q t^{kq}.
  std::vector<Poly> y(n + 1);
  std::vector<Poly> y_twist(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    std::vector<Element> c(n + 1);
    std::vector<Element> ct(n * q + 1, Field::zero());
    for (std::size_t k = 0; k <= n; ++k) {
      c[k] = m(k, j);
      ct[k * q] = tower.frobenius_q(m(k, j));
    }
    y[j] = Poly(std::move(c));
    y_twist[j] = Poly(std::move(ct));
  }

  Poly total;
  for (std::size_t i = 0; i <= n; ++i) {
    Poly inner;
    for (std::size_t j = 0; j <= n; ++j) {
      if (a(i, j) != Field::zero()) inner = add(f, inner, scale(f, y_twist[j], a(i, j)));
    }
    total = add(f, total, mul(f, y[i], inner));
  }
  if (total.is_zero()) fail(ErrorKind::zero_pullback, "curve is contained in the variety");
  return {std::move(total), n * (q + 1)};
}

std::string_view to_string(TangencyFailure failure) noexcept {
  switch (failure) {
    case TangencyFailure::not_nth_power: return "pullback is not c * h^n";
    case TangencyFailure::not_squarefree: return "h is not squarefree";
    case TangencyFailure::does_not_split: return "h does not split over F_{q^2}";
    case TangencyFailure::wrong_root_count: return "h does not have q + 1 roots";
    case TangencyFailure::not_baer: return "tangency parameters are not a Baer subline";
  }
  return "unknown";
}

TangencyOutcome total_tangency_check(const FieldTower& tower, const RationalNormalCurve& curve,
                                     const HermitianVariety& x) {
  const Field& f = tower.fq2();
  const std::size_t n = curve.degree();
  require(n % tower.p() != 0, ErrorKind::invalid_argument, "total tangency check needs n not divisible by p");
  const HomogPair pb = pullback(tower, curve, x);

  if (pb.infinity_multiplicity() % n != 0) return TangencyFailure::not_nth_power;
  const auto decomposition = nth_power_decompose(f, pb.poly, static_cast<std::uint32_t>(n));
  if (!decomposition) return TangencyFailure::not_nth_power;

  const HomogPair h{decomposition->base, pb.degree / n};
  auto roots = distinct_roots_in_fq2(tower, h);
  if (const auto* failure = std::get_if<RootFailure>(&roots)) {
    return *failure == RootFailure::not_squarefree ? TangencyFailure::not_squarefree
                                                   : TangencyFailure::does_not_split;
  }
  auto params = std::get<std::vector<Param>>(std::move(roots));
  if (params.size() != tower.q() + 1) return TangencyFailure::wrong_root_count;

  auto witness = baer_check(tower, params);
  if (!witness) return TangencyFailure::not_baer;
  return TangencyCertificate{std::move(params), n, decomposition->scalar, *std::move(witness)};
}

bool verify_certificate(const FieldTower& tower, const RationalNormalCurve& curve, const HermitianVariety& x,
                        const TangencyCertificate& cert) {
  const Field& f = tower.fq2();
  const std::size_t n = curve.degree();
  if (cert.multiplicity != n || cert.parameters.size() != tower.q() + 1) return false;
  if (cert.scalar == Field::zero() || cert.baer_witness.size() != 2) return false;
  for (std::size_t i = 0; i + 1 < cert.parameters.size(); ++i) {
    if (!param_less(cert.parameters[i], cert.parameters[i + 1])) return false;
  }
  if (!is_invertible(f, cert.baer_witness) || !maps_into_baer_line(tower, cert.baer_witness, cert.parameters)) {
    return false;
  }

  HomogPair pb;
  try {
    pb = pullback(tower, curve, x);
  } catch (const Error&) {
    return false;
  }
  // c * prod (t - r)^n over finite r; a root at infinity lowers the degree by n.
  Poly expansion = Poly::constant(cert.scalar);
  std::size_t at_infinity = 0;
  for (const Param& z : cert.parameters) {
    if (z.is_infinity()) {
      at_infinity = n;
      continue;
    }
    expansion = mul(f, expansion, pow(f, Poly({f.neg(z.beta), Field::one()}), n));
  }
  return expansion == pb.poly && pb.infinity_multiplicity() == at_infinity;
}

bool maps_into_baer_line(const FieldTower& tower, const Mobius& g, std::span<const Param> params) {
  return std::all_of(params.begin(), params.end(), [&](const Param& z) {
    const Param image = mobius_apply(tower.fq2(), g, z);
    return image.is_infinity() || tower.in_base(image.beta);
  });
}

std::optional<Mobius> baer_check(const FieldTower& tower, std::span<const Param> params) {
  const Field& f = tower.fq2();
  require(params.size() == tower.q() + 1, ErrorKind::invalid_argument, "Baer check needs exactly q + 1 parameters");
  std::vector<Param> sorted;
  sorted.reserve(params.size());
  for (const Param& z : params) sorted.push_back(normalize(f, z));
  std::sort(sorted.begin(), sorted.end(), param_less);
  require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), ErrorKind::invalid_argument,
          "Baer check parameters must be distinct");

  Mobius w = mobius_to_triple(f, sorted[0], sorted[1], sorted[2]);
  // Distinct images in a set of q + 1 elements: landing inside means onto.
  if (!maps_into_baer_line(tower, w, sorted)) return std::nullopt;
  return w;
}

// ---------------------------------------------------------------------------

CurveKey curve_point_set(const FieldTower& tower, const RationalNormalCurve& curve) {
  const Field& f = tower.fq2();
  const std::size_t n = curve.degree();
  const SqMatrix& m = curve.matrix();
  std::vector<std::vector<Element>> points;
  points.reserve(f.size() + 1);
  std::vector<Element> powers(n + 1);
  for (std::uint32_t code = 0; code <= f.size(); ++code) {
    if (code < f.size()) {
      Element acc = Field::one();
      for (std::size_t i = 0; i <= n; ++i) {
        powers[i] = acc;
        acc = f.mul(acc, Element{code});
      }
    } else {
      std::fill(powers.begin(), powers.end(), Field::zero());
      powers[n] = Field::one();
    }
    points.push_back(ProjectivePoint(f, row_times(f, powers, m)).coords());
  }
  std::sort(points.begin(), points.end());
  CurveKey key;
  key.reserve(points.size() * (n + 1));
  for (const auto& p : points) {
    for (Element e : p) key.push_back(e.code);
  }
  return key;
}

std::uint64_t key_digest(const CurveKey& key) noexcept {
  std::uint64_t h = 14695981039346656037ull;
  for (std::uint32_t code : key) {
    for (int byte = 0; byte < 4; ++byte) {
      h ^= (code >> (8 * byte)) & 0xffu;
      h *= 1099511628211ull;
    }
  }
  return h;
}

std::size_t CurveKeyHash::operator()(const CurveKey& key) const noexcept {
  return static_cast<std::size_t>(key_digest(key));
}

bool in_general_position(const Field& f, std::span<const ProjectivePoint> points) {
  if (points.empty()) return true;
  const std::size_t k = points.front().coords().size();
  if (points.size() < k) return rank(f, [&] {
                                   std::vector<std::vector<Element>> rows;
                                   for (const auto& p : points) rows.push_back(p.coords());
                                   return rows;
                                 }()) == points.size();
  // Every k-subset via a selection mask.
  std::vector<bool> mask(points.size(), false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(k), true);
  do {
    std::vector<std::vector<Element>> rows;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (mask[i]) rows.push_back(points[i].coords());
    }
    if (rank(f, std::move(rows)) != k) return false;
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return true;
}

}  // namespace hermitangent
