#include "hermitangent/projective.hpp"

#include <algorithm>

namespace hermitangent {

SqMatrix::SqMatrix(std::size_t n, std::vector<Element> row_major) : n_(n), e_(std::move(row_major)) {
  require(e_.size() == n_ * n_, ErrorKind::invalid_argument, "matrix entry count does not match its size");
}

SqMatrix SqMatrix::identity(std::size_t n) {
  SqMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Field::one();
  return m;
}

SqMatrix SqMatrix::diagonal(std::span<const Element> d) {
  SqMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

SqMatrix mul(const Field& f, const SqMatrix& a, const SqMatrix& b) {
  require(a.size() == b.size(), ErrorKind::invalid_argument, "matrix size mismatch");
  const std::size_t n = a.size();
  SqMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const Element x = a(i, k);
      if (x == Field::zero()) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) = f.add(out(i, j), f.mul(x, b(k, j)));
    }
  }
  return out;
}

SqMatrix scale(const Field& f, const SqMatrix& a, Element c) {
  std::vector<Element> e = a.entries();
  for (auto& x : e) x = f.mul(x, c);
  return SqMatrix(a.size(), std::move(e));
}

SqMatrix transpose(const SqMatrix& a) {
  SqMatrix out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) out(j, i) = a(i, j);
  }
  return out;
}

std::optional<SqMatrix> try_invert(const Field& f, const SqMatrix& a) {
  const std::size_t n = a.size();
  SqMatrix work = a;
  SqMatrix inv = SqMatrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && work(pivot, col) == Field::zero()) ++pivot;
    if (pivot == n) return std::nullopt;
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(work(pivot, j), work(col, j));
        std::swap(inv(pivot, j), inv(col, j));
      }
    }
    const Element s = f.inv(work(col, col));
    for (std::size_t j = 0; j < n; ++j) {
      work(col, j) = f.mul(work(col, j), s);
      inv(col, j) = f.mul(inv(col, j), s);
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const Element factor = work(r, col);
      if (factor == Field::zero()) continue;
      for (std::size_t j = 0; j < n; ++j) {
        work(r, j) = f.sub(work(r, j), f.mul(factor, work(col, j)));
        inv(r, j) = f.sub(inv(r, j), f.mul(factor, inv(col, j)));
      }
    }
  }
  return inv;
}

SqMatrix invert(const Field& f, const SqMatrix& a) {
  auto inv = try_invert(f, a);
  if (!inv) fail(ErrorKind::singular_matrix, "matrix is singular");
  return *std::move(inv);
}

std::size_t rank(const Field& f, std::vector<std::vector<Element>> rows) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t pivot = r;
    while (pivot < rows.size() && rows[pivot][c] == Field::zero()) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[r]);
    const Element s = f.inv(rows[r][c]);
    for (std::size_t i = r + 1; i < rows.size(); ++i) {
      const Element factor = f.mul(rows[i][c], s);
      if (factor == Field::zero()) continue;
      for (std::size_t j = c; j < cols; ++j) rows[i][j] = f.sub(rows[i][j], f.mul(factor, rows[r][j]));
    }
    ++r;
  }
  return r;
}

bool is_invertible(const Field& f, const SqMatrix& a) { return try_invert(f, a).has_value(); }

SqMatrix conj(const FieldTower& tower, const SqMatrix& a) {
  std::vector<Element> e = a.entries();
  for (auto& x : e) x = tower.frobenius_q(x);
  return SqMatrix(a.size(), std::move(e));
}

SqMatrix conj_transpose(const FieldTower& tower, const SqMatrix& a) { return transpose(conj(tower, a)); }

bool is_hermitian(const FieldTower& tower, const SqMatrix& a) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i; j < a.size(); ++j) {
      if (a(i, j) != tower.frobenius_q(a(j, i))) return false;
    }
  }
  return true;
}

std::optional<Element> proportionality(const Field& f, const SqMatrix& a, const SqMatrix& b) {
  if (a.size() != b.size()) return std::nullopt;
  const auto& x = a.entries();
  const auto& y = b.entries();
  const auto it = std::find_if(x.begin(), x.end(), [](Element e) { return e != Field::zero(); });
  if (it == x.end()) return std::nullopt;
  const auto k = static_cast<std::size_t>(it - x.begin());
  const Element c = f.div(y[k], x[k]);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (f.mul(c, x[i]) != y[i]) return std::nullopt;
  }
  return c;
}

SqMatrix projective_normalize(const Field& f, const SqMatrix& a) {
  const auto& x = a.entries();
  const auto it = std::find_if(x.begin(), x.end(), [](Element e) { return e != Field::zero(); });
  if (it == x.end()) return a;
  return scale(f, a, f.inv(*it));
}

std::vector<Element> row_times(const Field& f, std::span<const Element> v, const SqMatrix& m) {
  require(v.size() == m.size(), ErrorKind::invalid_argument, "vector and matrix sizes differ");
  std::vector<Element> out(m.size(), Field::zero());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == Field::zero()) continue;
    for (std::size_t j = 0; j < m.size(); ++j) out[j] = f.add(out[j], f.mul(v[i], m(i, j)));
  }
  return out;
}

ProjectivePoint::ProjectivePoint(const Field& f, std::vector<Element> coords) : c_(std::move(coords)) {
  const auto it = std::find_if(c_.begin(), c_.end(), [](Element e) { return e != Field::zero(); });
  require(it != c_.end(), ErrorKind::invalid_argument, "the zero vector is not a projective point");
  if (*it != Field::one()) {
    const Element s = f.inv(*it);
    for (auto& x : c_) x = f.mul(x, s);
  }
}

ProjectivePoint apply(const Field& f, const ProjectivePoint& p, const SqMatrix& m) {
  return ProjectivePoint(f, row_times(f, p.coords(), m));
}

std::vector<ProjectivePoint> projective_space(const Field& f, std::size_t dim) {
  std::vector<ProjectivePoint> out;
  const std::size_t len = dim + 1;
  // Leading 1 at position k, zeros before, anything after.
  for (std::size_t k = 0; k < len; ++k) {
    const std::size_t free = len - 1 - k;
    std::vector<std::uint32_t> digits(free, 0);
    while (true) {
      std::vector<Element> c(len, Field::zero());
      c[k] = Field::one();
      for (std::size_t i = 0; i < free; ++i) c[k + 1 + i] = Element{digits[i]};
      out.emplace_back(f, std::move(c));
      std::size_t i = free;
      while (i > 0 && digits[i - 1] == f.size() - 1) digits[--i] = 0;
      if (i == 0) break;
      ++digits[i - 1];
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------

HermitianVariety::HermitianVariety(const FieldTower& tower, SqMatrix a) : a_(std::move(a)) {
  require(a_.size() >= 2, ErrorKind::invalid_argument, "variety needs an ambient space of dimension >= 1");
  require(is_invertible(tower.fq2(), a_), ErrorKind::singular_matrix, "defining matrix is singular");
  hermitian_ = is_hermitian(tower, a_);
}

HermitianVariety HermitianVariety::fermat(const FieldTower& tower, std::size_t n_plus_1) {
  return HermitianVariety(tower, SqMatrix::identity(n_plus_1));
}

bool same_variety(const FieldTower& tower, const HermitianVariety& x, const HermitianVariety& y) {
  return proportionality(tower.fq2(), x.matrix(), y.matrix()).has_value();
}

SqMatrix lang_map(const FieldTower& tower, const SqMatrix& t) {
  return mul(tower.fq2(), t, conj_transpose(tower, t));
}

namespace {

using Vec = std::vector<Element>;

// x H conj(y)^t
Element hermitian_product(const FieldTower& tower, const SqMatrix& h, const Vec& x, const Vec& y) {
  const Field& f = tower.fq2();
  Element acc = Field::zero();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == Field::zero()) continue;
    Element inner = Field::zero();
    for (std::size_t j = 0; j < y.size(); ++j) inner = f.add(inner, f.mul(h(i, j), tower.frobenius_q(y[j])));
    acc = f.add(acc, f.mul(x[i], inner));
  }
  return acc;
}

Vec axpy(const Field& f, const Vec& x, Element a, const Vec& y) {
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = f.add(x[i], f.mul(a, y[i]));
  return out;
}

struct Pivot {
  Vec vector;
  std::size_t dropped;  // basis index with nonzero coefficient in vector
};

Pivot find_anisotropic(const FieldTower& tower, const SqMatrix& h, const std::vector<Vec>& basis) {
  const Field& f = tower.fq2();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (hermitian_product(tower, h, basis[i], basis[i]) != Field::zero()) return {basis[i], i};
  }
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = i + 1; j < basis.size(); ++j) {
      Vec v = axpy(f, basis[i], Field::one(), basis[j]);
      if (hermitian_product(tower, h, v, v) != Field::zero()) return {std::move(v), i};
    }
  }
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = i + 1; j < basis.size(); ++j) {
      for (std::uint32_t c = 2; c < f.size(); ++c) {
        Vec v = axpy(f, basis[i], Element{c}, basis[j]);
        if (hermitian_product(tower, h, v, v) != Field::zero()) return {std::move(v), i};
      }
    }
  }
  fail(ErrorKind::internal_check, "no anisotropic vector in a nondegenerate Hermitian space");
}

}  // namespace

SqMatrix lang_decompose(const FieldTower& tower, const SqMatrix& h) {
  const Field& f = tower.fq2();
  require(is_invertible(f, h), ErrorKind::singular_matrix, "lang_decompose: matrix is singular");
  require(is_hermitian(tower, h), ErrorKind::not_hermitian, "lang_decompose: matrix is not Hermitian");
  const std::size_t n = h.size();

  std::vector<Vec> basis;
  for (std::size_t i = 0; i < n; ++i) {
    Vec e(n, Field::zero());
    e[i] = Field::one();
    basis.push_back(std::move(e));
  }

  // Rows of P form an orthonormal basis: P H conj(P)^t = I.
  SqMatrix p(n);
  for (std::size_t row = 0; row < n; ++row) {
    Pivot pivot = find_anisotropic(tower, h, basis);
    const Element value = hermitian_product(tower, h, pivot.vector, pivot.vector);
    const Element root = tower.solve_norm_equation(value);
    const Element s = f.inv(root);
    Vec v = pivot.vector;
    for (auto& x : v) x = f.mul(x, s);
    for (std::size_t j = 0; j < n; ++j) p(row, j) = v[j];

    std::vector<Vec> next;
    for (std::size_t k = 0; k < basis.size(); ++k) {
      if (k == pivot.dropped) continue;
      next.push_back(axpy(f, basis[k], f.neg(hermitian_product(tower, h, basis[k], v)), v));
    }
    basis = std::move(next);
  }

  SqMatrix t = invert(f, p);
  require(lang_map(tower, t) == h, ErrorKind::internal_check, "lang_decompose verification failed");
  return t;
}

Element eval_form(const FieldTower& tower, const HermitianVariety& x, std::span<const Element> coords) {
  return eval_form(tower, x.matrix(), coords);
}

Element eval_form(const FieldTower& tower, const SqMatrix& a, std::span<const Element> coords) {
  const Field& f = tower.fq2();
  require(coords.size() == a.size(), ErrorKind::invalid_argument, "point and variety dimensions differ");
  Element acc = Field::zero();
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] == Field::zero()) continue;
    Element inner = Field::zero();
    for (std::size_t j = 0; j < coords.size(); ++j) {
      inner = f.add(inner, f.mul(a(i, j), tower.frobenius_q(coords[j])));
    }
    acc = f.add(acc, f.mul(coords[i], inner));
  }
  return acc;
}

Element eval_form(const FieldTower& tower, const HermitianVariety& x, const ProjectivePoint& p) {
  return eval_form(tower, x, p.coords());
}

bool contains(const FieldTower& tower, const HermitianVariety& x, const ProjectivePoint& p) {
  return eval_form(tower, x, p) == Field::zero();
}

HermitianVariety transform_variety(const FieldTower& tower, const HermitianVariety& x, const SqMatrix& t) {
  const Field& f = tower.fq2();
  const auto t_inv = try_invert(f, t);
  if (!t_inv) fail(ErrorKind::singular_matrix, "transform_variety: singular transformation");
  return HermitianVariety(tower, mul(f, mul(f, *t_inv, x.matrix()), conj_transpose(tower, *t_inv)));
}

std::optional<HermitianRescale> hermitian_rescale(const FieldTower& tower, const SqMatrix& a) {
  const Field& f = tower.fq2();
  if (is_hermitian(tower, a)) return HermitianRescale{Field::one(), a};
  // c a_ij = (c a_ji)^q forces c^{q-1} = a_ij / a_ji^q on any nonzero entry.
  std::size_t bi = a.size(), bj = a.size();
  for (std::size_t i = 0; i < a.size() && bi == a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (a(i, j) != Field::zero()) {
        bi = i;
        bj = j;
        break;
      }
    }
  }
  if (bi == a.size()) return std::nullopt;
  if (a(bj, bi) == Field::zero()) return std::nullopt;
  const Element target = f.div(a(bi, bj), tower.frobenius_q(a(bj, bi)));
  const std::uint64_t exponent = tower.q() - 1;
  // Solutions differ by factors in F_q^x, which preserve Hermitian-ness, so
  // the first solution decides.
  for (std::uint32_t c = 1; c < f.size(); ++c) {
    if (f.pow(Element{c}, exponent) != target) continue;
    SqMatrix h = scale(f, a, Element{c});
    if (!is_hermitian(tower, h)) return std::nullopt;
    return HermitianRescale{Element{c}, std::move(h)};
  }
  return std::nullopt;
}

}  // namespace hermitangent
