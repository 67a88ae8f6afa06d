#include "padic/scalar.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "padic/errors.hpp"

namespace padic {

std::string to_string(Mode mode) { return mode == Mode::exact ? "exact" : "float"; }

Mode parse_mode(std::string_view text) {
  if (text == "exact") return Mode::exact;
  if (text == "float" || text == "floating") return Mode::floating;
  throw ParameterError("unknown mode '" + std::string(text) + "' (expected exact|float)");
}

Scalar::Scalar(Rational q) : mode_(Mode::exact), q_(std::move(q)) { q_.canonicalize(); }

Scalar::Scalar(double x) : mode_(Mode::floating), x_(x) {
  if (std::isnan(x)) throw DomainError("NaN scalar");
  if (std::isinf(x)) {
    if (x < 0) throw DomainError("negative infinity is not representable");
    infinite_ = true;
    x_ = 0.0;
  }
}

Scalar Scalar::zero(Mode mode) { return integer(0, mode); }
Scalar Scalar::one(Mode mode) { return integer(1, mode); }

Scalar Scalar::integer(long value, Mode mode) {
  if (mode == Mode::exact) return Scalar(Rational(value));
  return Scalar(static_cast<double>(value));
}

Scalar Scalar::fraction(long num, long den, Mode mode) {
  if (den == 0) throw DomainError("zero denominator");
  if (mode == Mode::exact) return Scalar(Rational(num, den));
  return Scalar(static_cast<double>(num) / static_cast<double>(den));
}

Scalar Scalar::infinity(Mode mode) {
  Scalar s = zero(mode);
  s.infinite_ = true;
  return s;
}

bool Scalar::is_zero() const { return !infinite_ && sign() == 0; }

int Scalar::sign() const {
  if (infinite_) return 1;
  if (mode_ == Mode::exact) return sgn(q_);
  return (x_ > 0) - (x_ < 0);
}

const Rational& Scalar::rational() const {
  if (mode_ != Mode::exact) throw ModeError("rational() requested from a float scalar");
  if (infinite_) throw DomainError("rational() requested from an infinite scalar");
  return q_;
}

double Scalar::to_double() const {
  if (infinite_) return std::numeric_limits<double>::infinity();
  return mode_ == Mode::exact ? q_.get_d() : x_;
}

Scalar Scalar::to_mode(Mode mode) const {
  if (mode == mode_) return *this;
  if (mode == Mode::exact) throw ModeError("float scalars cannot be converted to exact mode");
  if (infinite_) return infinity(mode);
  return Scalar(q_.get_d());
}

std::string Scalar::str() const {
  if (infinite_) return "inf";
  if (mode_ == Mode::exact) return q_.get_str();
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x_);
  (void)ec;
  return std::string(buf, end);
}

Scalar Scalar::parse(std::string_view text, Mode mode) {
  std::string s(text);
  if (s == "inf" || s == "+inf" || s == "infinity") return infinity(mode);
  if (mode == Mode::exact) {
    Rational q;
    // A decimal literal such as "0.25" is read as the exact fraction it denotes.
    if (auto dot = s.find('.'); dot != std::string::npos && s.find('/') == std::string::npos) {
      std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      std::size_t frac = s.size() - dot - 1;
      if (q.set_str(digits.empty() ? "0" : digits, 10) != 0)
        throw ParameterError("cannot parse exact scalar '" + s + "'");
      mpz_class den;
      mpz_ui_pow_ui(den.get_mpz_t(), 10, frac);
      q /= den;
      q.canonicalize();
      return Scalar(q);
    }
    if (q.set_str(s, 10) != 0) throw ParameterError("cannot parse exact scalar '" + s + "'");
    if (q.get_den() == 0) throw ParameterError("zero denominator in '" + s + "'");
    q.canonicalize();
    return Scalar(q);
  }
  if (auto slash = s.find('/'); slash != std::string::npos) {
    return parse(s, Mode::exact).to_mode(Mode::floating);
  }
  double x = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParameterError("cannot parse float scalar '" + s + "'");
  return Scalar(x);
}

Scalar Scalar::abs() const { return sign() < 0 ? -*this : *this; }

void Scalar::require_same_mode(const Scalar& other, const char* op) const {
  if (mode_ != other.mode_)
    throw ModeError(std::string("mixed exact/float operands in '") + op + "'");
}

Scalar& Scalar::operator+=(const Scalar& rhs) {
  require_same_mode(rhs, "+");
  if (infinite_ || rhs.infinite_) {
    *this = infinity(mode_);
    return *this;
  }
  if (mode_ == Mode::exact)
    q_ += rhs.q_;
  else
    x_ += rhs.x_;
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& rhs) {
  require_same_mode(rhs, "-");
  if (rhs.infinite_) throw DomainError("subtracting an infinite scalar");
  if (infinite_) return *this;
  if (mode_ == Mode::exact)
    q_ -= rhs.q_;
  else
    x_ -= rhs.x_;
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& rhs) {
  require_same_mode(rhs, "*");
  if (infinite_ || rhs.infinite_) {
    const int s = (infinite_ ? 1 : sign()) * (rhs.infinite_ ? 1 : rhs.sign());
    if (s < 0) throw DomainError("product yields negative infinity");
    *this = s == 0 ? zero(mode_) : infinity(mode_);
    return *this;
  }
  if (mode_ == Mode::exact)
    q_ *= rhs.q_;
  else
    x_ *= rhs.x_;
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& rhs) {
  require_same_mode(rhs, "/");
  if (rhs.infinite_) throw DomainError("division by an infinite scalar");
  if (rhs.is_zero()) throw DomainError("division by zero");
  if (infinite_) {
    if (rhs.sign() < 0) throw DomainError("quotient yields negative infinity");
    return *this;
  }
  if (mode_ == Mode::exact)
    q_ /= rhs.q_;
  else
    x_ /= rhs.x_;
  return *this;
}

Scalar Scalar::operator-() const {
  if (infinite_) throw DomainError("negating an infinite scalar");
  Scalar r = *this;
  if (mode_ == Mode::exact)
    r.q_ = -q_;
  else
    r.x_ = -x_;
  return r;
}

bool operator==(const Scalar& a, const Scalar& b) {
  a.require_same_mode(b, "==");
  if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
  return a.mode_ == Mode::exact ? a.q_ == b.q_ : a.x_ == b.x_;
}

std::partial_ordering operator<=>(const Scalar& a, const Scalar& b) {
  a.require_same_mode(b, "<=>");
  if (a.infinite_ || b.infinite_) {
    if (a.infinite_ && b.infinite_) return std::partial_ordering::equivalent;
    return a.infinite_ ? std::partial_ordering::greater : std::partial_ordering::less;
  }
  if (a.mode_ == Mode::exact) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }
  return a.x_ <=> b.x_;
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) {
  return os << s.str() << (s.is_exact() ? "" : "f");
}

Rational rational_power(long p, long k) {
  mpz_class pk;
  mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p),
                static_cast<unsigned long>(k < 0 ? -k : k));
  if (k >= 0) return Rational(pk);
  return Rational(mpz_class(1), pk);
}

Scalar pow_p(long p, long k, Mode mode) {
  if (mode == Mode::exact) return Scalar(rational_power(p, k));
  return Scalar(std::pow(static_cast<double>(p), static_cast<double>(k)));
}

double relative_difference(const Scalar& a, const Scalar& b) {
  const double x = a.to_double();
  const double y = b.to_double();
  const double scale = std::max({std::fabs(x), std::fabs(y), 1e-300});
  return std::fabs(x - y) / scale;
}

}  // namespace padic
