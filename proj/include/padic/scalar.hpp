#pragma once

#include <gmpxx.h>

#include <compare>
#include <iosfwd>
#include <string>
#include <string_view>

namespace padic {

using Rational = mpq_class;
using BigInt = mpz_class;

enum class Mode { exact, floating };

std::string to_string(Mode mode);
Mode parse_mode(std::string_view text);

// Dual-mode number: an exact rational or a double, plus an explicit +infinity
// state used for confining potentials. Arithmetic between the two modes throws
// ModeError; nothing is converted implicitly.
//
// Infinity follows measure-theory conventions: inf + x = inf, inf * 0 = 0,
// inf * x = inf for x > 0. Anything producing -inf or inf - inf throws.
class Scalar {
 public:
  // Exact zero.
  Scalar() = default;
  explicit Scalar(Rational q);
  explicit Scalar(double x);

  static Scalar zero(Mode mode);
  static Scalar one(Mode mode);
  static Scalar integer(long value, Mode mode);
  static Scalar fraction(long num, long den, Mode mode);
  static Scalar infinity(Mode mode);

  Mode mode() const { return mode_; }
  bool is_exact() const { return mode_ == Mode::exact; }
  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }
  bool is_zero() const;
  int sign() const;

  // Exact value; throws ModeError in float mode and DomainError when infinite.
  const Rational& rational() const;
  double to_double() const;
  // Exact -> float is allowed; float -> exact throws.
  Scalar to_mode(Mode mode) const;

  // "num/den" (or "num" for integers), shortest round-trip decimal for
  // floats, "inf" for infinity.
  std::string str() const;
  // Inverse of str(); float mode also accepts "a/b" and plain decimals.
  static Scalar parse(std::string_view text, Mode mode);

  Scalar abs() const;

  Scalar& operator+=(const Scalar& rhs);
  Scalar& operator-=(const Scalar& rhs);
  Scalar& operator*=(const Scalar& rhs);
  Scalar& operator/=(const Scalar& rhs);

  friend Scalar operator+(Scalar lhs, const Scalar& rhs) { return lhs += rhs; }
  friend Scalar operator-(Scalar lhs, const Scalar& rhs) { return lhs -= rhs; }
  friend Scalar operator*(Scalar lhs, const Scalar& rhs) { return lhs *= rhs; }
  friend Scalar operator/(Scalar lhs, const Scalar& rhs) { return lhs /= rhs; }
  Scalar operator-() const;

  friend bool operator==(const Scalar& a, const Scalar& b);
  friend std::partial_ordering operator<=>(const Scalar& a, const Scalar& b);

 private:
  void require_same_mode(const Scalar& other, const char* op) const;

  Mode mode_ = Mode::exact;
  bool infinite_ = false;
  Rational q_;
  double x_ = 0.0;
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

// p^k as an exact rational.
Rational rational_power(long p, long k);
// p^k in the requested mode.
Scalar pow_p(long p, long k, Mode mode);

// Relative difference |a-b| / max(|a|,|b|,tiny), as a double.
double relative_difference(const Scalar& a, const Scalar& b);

}  // namespace padic
