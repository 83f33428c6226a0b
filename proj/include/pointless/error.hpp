#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace pointless {

enum class Errc {
  not_prime,
  size_cap_exceeded,
  degree_not_dividing,
  field_mismatch,
  degree_bound_violated,
  singular_model,
  cap_exceeded,
  inconsistent_counts,
  negative_count,
  budget_exhausted,
  not_a_solution,
  syntax_error,
  not_compiled,
  prescription_invalid,
  assertion_failed,
  undetermined,
  invalid_argument,
  io_error,
};

/// Base of every error thrown by the library. `code()` identifies the
/// failure class; the message is meant for humans.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

class SingularModel : public Error {
 public:
  SingularModel(std::string chart, std::optional<std::uint64_t> witness_x, const std::string& what)
      : Error(Errc::singular_model, what), chart_(std::move(chart)), witness_x_(witness_x) {}
  /// "affine" or "infinity".
  const std::string& chart() const noexcept { return chart_; }
  /// Packed base-field x (or u) coordinate of a singular point, when one is rational.
  std::optional<std::uint64_t> witness_x() const noexcept { return witness_x_; }

 private:
  std::string chart_;
  std::optional<std::uint64_t> witness_x_;
};

class BudgetExhausted : public Error {
 public:
  BudgetExhausted(bool space_exhausted, unsigned genus, const std::string& what)
      : Error(Errc::budget_exhausted, what), space_exhausted_(space_exhausted), genus_(genus) {}
  /// True when every candidate of the genus was examined, i.e. none exists.
  bool space_exhausted() const noexcept { return space_exhausted_; }
  unsigned genus() const noexcept { return genus_; }

 private:
  bool space_exhausted_;
  unsigned genus_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& what)
      : Error(Errc::syntax_error, what + " at offset " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class AssertionFailed : public Error {
 public:
  AssertionFailed(std::uint64_t m, const std::string& what) : Error(Errc::assertion_failed, what), m_(m) {}
  /// The extension degree at which the check failed.
  std::uint64_t m() const noexcept { return m_; }

 private:
  std::uint64_t m_;
};

}  // namespace pointless
