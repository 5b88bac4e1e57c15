#pragma once

// Matrices and points over F_{q^2}, Hermitian forms f_A = sum a_ij x_i x_j^q,
// and the map T -> T * conj(T)^t together with its constructive inverse on
// Hermitian matrices.
//
// Points are row vectors and matrices act from the right: P -> P * T.

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hermitangent/galois_field.hpp"

namespace hermitangent {

class SqMatrix {
 public:
  SqMatrix() = default;
  explicit SqMatrix(std::size_t n) : n_(n), e_(n * n, Field::zero()) {}
  SqMatrix(std::size_t n, std::vector<Element> row_major);

  static SqMatrix identity(std::size_t n);
  static SqMatrix diagonal(std::span<const Element> d);

  std::size_t size() const noexcept { return n_; }
  Element& operator()(std::size_t i, std::size_t j) noexcept { return e_[i * n_ + j]; }
  Element operator()(std::size_t i, std::size_t j) const noexcept { return e_[i * n_ + j]; }
  const std::vector<Element>& entries() const& noexcept { return e_; }
  std::vector<Element> entries() && noexcept { return std::move(e_); }
  std::span<const Element> row(std::size_t i) const noexcept { return {e_.data() + i * n_, n_}; }

  friend bool operator==(const SqMatrix&, const SqMatrix&) = default;
  friend auto operator<=>(const SqMatrix& a, const SqMatrix& b) { return a.e_ <=> b.e_; }

 private:
  std::size_t n_ = 0;
  std::vector<Element> e_;
};

SqMatrix mul(const Field& f, const SqMatrix& a, const SqMatrix& b);
SqMatrix scale(const Field& f, const SqMatrix& a, Element c);
SqMatrix transpose(const SqMatrix& a);
std::optional<SqMatrix> try_invert(const Field& f, const SqMatrix& a);
// Throws Error(singular_matrix).
SqMatrix invert(const Field& f, const SqMatrix& a);
std::size_t rank(const Field& f, std::vector<std::vector<Element>> rows);
bool is_invertible(const Field& f, const SqMatrix& a);

// Entrywise x -> x^q.
SqMatrix conj(const FieldTower& tower, const SqMatrix& a);
// conj(M)^t
SqMatrix conj_transpose(const FieldTower& tower, const SqMatrix& a);
bool is_hermitian(const FieldTower& tower, const SqMatrix& a);

// c with b = c * a, if one exists (a nonzero).
std::optional<Element> proportionality(const Field& f, const SqMatrix& a, const SqMatrix& b);
// Scaled so the first nonzero entry (row-major) is 1.
SqMatrix projective_normalize(const Field& f, const SqMatrix& a);

// v * M
std::vector<Element> row_times(const Field& f, std::span<const Element> v, const SqMatrix& m);

// Homogeneous coordinates with first nonzero coordinate equal to 1.
class ProjectivePoint {
 public:
  ProjectivePoint() = default;
  // Throws Error(invalid_argument) for the zero vector.
  ProjectivePoint(const Field& f, std::vector<Element> coords);

  std::size_t dimension() const noexcept { return c_.empty() ? 0 : c_.size() - 1; }
  const std::vector<Element>& coords() const& noexcept { return c_; }
  std::vector<Element> coords() && noexcept { return std::move(c_); }
  Element operator[](std::size_t i) const noexcept { return c_[i]; }

  friend bool operator==(const ProjectivePoint&, const ProjectivePoint&) = default;
  friend auto operator<=>(const ProjectivePoint& a, const ProjectivePoint& b) { return a.c_ <=> b.c_; }

 private:
  std::vector<Element> c_;
};

ProjectivePoint apply(const Field& f, const ProjectivePoint& p, const SqMatrix& m);

// All points of P^dim(F), sorted.
std::vector<ProjectivePoint> projective_space(const Field& f, std::size_t dim);

// The hypersurface f_A = 0 for an invertible A over F_{q^2}.
class HermitianVariety {
 public:
  // Throws Error(singular_matrix) for singular A.
  HermitianVariety(const FieldTower& tower, SqMatrix a);

  static HermitianVariety fermat(const FieldTower& tower, std::size_t n_plus_1);

  const SqMatrix& matrix() const noexcept { return a_; }
  bool hermitian() const noexcept { return hermitian_; }
  std::size_t ambient_dimension() const noexcept { return a_.size() - 1; }

 private:
  SqMatrix a_;
  bool hermitian_ = false;
};

// Projective equality of the defining matrices.
bool same_variety(const FieldTower& tower, const HermitianVariety& x, const HermitianVariety& y);

// T * conj(T)^t
SqMatrix lang_map(const FieldTower& tower, const SqMatrix& t);

// Some T over F_{q^2} with T * conj(T)^t = H, by Gram-Schmidt with respect
// to the form <x, y> = x H conj(y)^t. Throws Error(singular_matrix) or
// Error(not_hermitian) when H is outside the image.
SqMatrix lang_decompose(const FieldTower& tower, const SqMatrix& h);

// sum a_ij x_i x_j^q
Element eval_form(const FieldTower& tower, const SqMatrix& a, std::span<const Element> coords);
Element eval_form(const FieldTower& tower, const HermitianVariety& x, std::span<const Element> coords);
Element eval_form(const FieldTower& tower, const HermitianVariety& x, const ProjectivePoint& p);
bool contains(const FieldTower& tower, const HermitianVariety& x, const ProjectivePoint& p);

// The image X * [T], defined by T^-1 A conj(T^-1)^t.
HermitianVariety transform_variety(const FieldTower& tower, const HermitianVariety& x, const SqMatrix& t);

struct HermitianRescale {
  Element scalar;
  SqMatrix matrix;
};

// c and H = c A with H Hermitian; c is the first admissible scalar in code
// order. nullopt when no multiple of A is Hermitian.
std::optional<HermitianRescale> hermitian_rescale(const FieldTower& tower, const SqMatrix& a);

}  // namespace hermitangent
