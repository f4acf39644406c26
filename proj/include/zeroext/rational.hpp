#pragma once

// Exact arithmetic used throughout the library: GMP rationals plus an
// "extended" rational that may take the value +infinity.

#include <gmpxx.h>

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace zeroext {

using Rational = mpq_class;

/// Parses "p", "-p" or "p/q" (q > 0 after normalisation). Returns nullopt on
/// malformed input or a zero denominator.
inline std::optional<Rational> parse_rational(std::string_view text) {
  if (text.empty()) return std::nullopt;
  auto is_int = [](std::string_view s) {
    std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i >= s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  const auto slash = text.find('/');
  std::string num(text.substr(0, slash));
  std::string den = slash == std::string_view::npos ? "1" : std::string(text.substr(slash + 1));
  if (!is_int(num) || !is_int(den) || den[0] == '-' || den[0] == '+') return std::nullopt;
  if (num[0] == '+') num.erase(0, 1);
  mpz_class n(num, 10), d(den, 10);
  if (d == 0) return std::nullopt;
  Rational r(n, d);
  r.canonicalize();
  return r;
}

/// Canonical text: integers print without a denominator, otherwise "p/q".
inline std::string to_string(const Rational& r) { return r.get_str(10); }

/// Rational extended by +infinity. Arithmetic follows the conventions
/// inf + x = inf, inf * 0 = 0, c * inf = inf for c > 0.
class Extended {
 public:
  Extended() = default;
  Extended(const Rational& v) : value_(v) {}  // NOLINT(google-explicit-constructor)
  Extended(long v) : value_(v) {}             // NOLINT(google-explicit-constructor)
  Extended(int v) : value_(v) {}              // NOLINT(google-explicit-constructor)

  static Extended infinity() {
    Extended e;
    e.infinite_ = true;
    return e;
  }

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }

  const Rational& value() const {
    if (infinite_) throw std::logic_error("value() of infinite Extended");
    return value_;
  }

  Extended& operator+=(const Extended& o) {
    if (infinite_ || o.infinite_) {
      infinite_ = true;
      value_ = 0;
    } else {
      value_ += o.value_;
    }
    return *this;
  }
  friend Extended operator+(Extended a, const Extended& b) { return a += b; }

  /// Nonnegative scaling; 0 * inf = 0.
  friend Extended operator*(const Rational& c, const Extended& e) {
    if (c < 0) throw std::domain_error("negative scaling of an extended value");
    if (c == 0) return Extended(Rational(0));
    if (e.infinite_) return infinity();
    return Extended(Rational(c * e.value_));
  }

  friend bool operator==(const Extended& a, const Extended& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }
  friend bool operator<(const Extended& a, const Extended& b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }
  friend bool operator!=(const Extended& a, const Extended& b) { return !(a == b); }
  friend bool operator>(const Extended& a, const Extended& b) { return b < a; }
  friend bool operator<=(const Extended& a, const Extended& b) { return !(b < a); }
  friend bool operator>=(const Extended& a, const Extended& b) { return !(a < b); }

  std::string str() const { return infinite_ ? "inf" : to_string(value_); }
  friend std::ostream& operator<<(std::ostream& os, const Extended& e) { return os << e.str(); }

 private:
  Rational value_{0};
  bool infinite_ = false;
};

inline std::optional<Extended> parse_extended(std::string_view text) {
  if (text == "inf") return Extended::infinity();
  auto r = parse_rational(text);
  if (!r) return std::nullopt;
  return Extended(*r);
}

}  // namespace zeroext
