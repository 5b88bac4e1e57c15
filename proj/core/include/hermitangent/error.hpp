#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hermitangent {

enum class ErrorKind {
  invalid_argument,
  cap_exceeded,
  hypothesis_violation,
  division_by_zero,
  singular_matrix,
  mixed_field,
  not_hermitian,
  zero_pullback,
  not_in_group,
  internal_check,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, ErrorKind kind, const char* what) {
  if (!condition) throw Error(kind, what);
}

}  // namespace hermitangent
