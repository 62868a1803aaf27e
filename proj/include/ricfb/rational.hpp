#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ricfb {

/// Exact rational number on 64-bit numerator / denominator, always stored in
/// lowest terms with a positive denominator. Intermediate products are carried
/// in 128-bit arithmetic; results that do not fit back into 64 bits throw
/// std::overflow_error instead of silently wrapping.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(long long n) : num_(n), den_(1) {}  // NOLINT: implicit by design
  Rational(long long num, long long den) { assign(num, den); }

  long long num() const { return num_; }
  long long den() const { return den_; }

  bool is_integer() const { return den_ == 1; }
  bool is_zero() const { return num_ == 0; }
  int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  /// Renders "n" for integers, "p/q" otherwise.
  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  /// Parses "n" or "p/q".
  static Rational parse(const std::string& text) {
    auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(std::stoll(text));
    return Rational(std::stoll(text.substr(0, slash)),
                    std::stoll(text.substr(slash + 1)));
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from128(i128(a.num_) * b.den_ + i128(b.num_) * a.den_,
                   i128(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return from128(i128(a.num_) * b.den_ - i128(b.num_) * a.den_,
                   i128(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from128(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
    return from128(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
  }
  Rational operator-() const {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) {
    return !(a == b);
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
  }
  friend bool operator<=(const Rational& a, const Rational& b) {
    return !(b < a);
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) {
    return !(a < b);
  }

 private:
  using i128 = __int128;

  void assign(long long num, long long den) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    long long g = std::gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    num_ = num;
    den_ = den;
  }

  static Rational from128(i128 num, i128 den) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    i128 g = gcd128(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    constexpr i128 lo = INT64_MIN, hi = INT64_MAX;
    if (num < lo || num > hi || den > hi)
      throw std::overflow_error("Rational: 64-bit overflow");
    Rational r;
    r.num_ = static_cast<long long>(num);
    r.den_ = static_cast<long long>(den);
    return r;
  }

  static i128 gcd128(i128 a, i128 b) {
    while (b != 0) {
      i128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  long long num_;
  long long den_;
};

inline Rational rat_min(const Rational& a, const Rational& b) {
  return a < b ? a : b;
}
inline Rational rat_max(const Rational& a, const Rational& b) {
  return a < b ? b : a;
}

}  // namespace ricfb
