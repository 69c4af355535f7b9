#pragma once

#include <cctype>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "ruelle/errors.hpp"

namespace ruelle {

// Exact rational arithmetic for character angles (units of full turns).
// int64 numerator/denominator is plenty at desk scale; overflow is checked.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1) : p_(num), q_(den) {
    if (q_ == 0) throw InputError("Rational: zero denominator");
    reduce();
  }

  static Rational parse(const std::string& text) {
    std::string s;
    for (char c : text)
      if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw InputError("Rational: empty token");
    auto slash = s.find('/');
    try {
      if (slash != std::string::npos) {
        std::int64_t p = std::stoll(s.substr(0, slash));
        std::int64_t q = std::stoll(s.substr(slash + 1));
        return Rational(p, q);
      }
      auto dot = s.find('.');
      if (dot == std::string::npos) return Rational(std::stoll(s), 1);
      // Decimal literal -> exact rational (scale by a power of ten).
      std::string frac = s.substr(dot + 1);
      if (frac.size() > 15) throw InputError("Rational: too many decimal digits: " + s);
      std::string digits = s.substr(0, dot) + frac;
      std::int64_t q = 1;
      for (size_t i = 0; i < frac.size(); ++i) q *= 10;
      return Rational(std::stoll(digits), q);
    } catch (const std::invalid_argument&) {
      throw InputError("Rational: cannot parse '" + text + "'");
    } catch (const std::out_of_range&) {
      throw InputError("Rational: out of range '" + text + "'");
    }
  }

  std::int64_t num() const { return p_; }
  std::int64_t den() const { return q_; }
  bool is_integer() const { return q_ == 1; }
  bool is_zero() const { return p_ == 0; }
  double to_double() const { return static_cast<double>(p_) / static_cast<double>(q_); }

  Rational operator+(const Rational& o) const {
    return from128(i128(p_) * o.q_ + i128(o.p_) * q_, i128(q_) * o.q_);
  }
  Rational operator-(const Rational& o) const {
    return from128(i128(p_) * o.q_ - i128(o.p_) * q_, i128(q_) * o.q_);
  }
  Rational operator*(const Rational& o) const {
    return from128(i128(p_) * o.p_, i128(q_) * o.q_);
  }
  Rational operator*(std::int64_t n) const { return from128(i128(p_) * n, i128(q_)); }
  Rational operator-() const { return Rational(-p_, q_); }
  bool operator==(const Rational& o) const { return p_ == o.p_ && q_ == o.q_; }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const { return i128(p_) * o.q_ < i128(o.p_) * q_; }

  // Representative of the class mod 1 in [0, 1).
  Rational mod1() const {
    std::int64_t r = p_ % q_;
    if (r < 0) r += q_;
    return Rational(r, q_);
  }

  std::string str() const {
    return q_ == 1 ? std::to_string(p_) : std::to_string(p_) + "/" + std::to_string(q_);
  }

 private:
  using i128 = __int128;
  static Rational from128(i128 p, i128 q) {
    if (q < 0) {
      p = -p;
      q = -q;
    }
    i128 g = gcd128(p < 0 ? -p : p, q);
    if (g > 1) {
      p /= g;
      q /= g;
    }
    constexpr i128 lim = INT64_MAX;
    if (p > lim || p < -lim || q > lim)
      throw InputError("Rational: overflow in exact angle arithmetic");
    Rational r;
    r.p_ = static_cast<std::int64_t>(p);
    r.q_ = static_cast<std::int64_t>(q);
    return r;
  }
  static i128 gcd128(i128 a, i128 b) {
    while (b != 0) {
      i128 t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }
  void reduce() {
    if (q_ < 0) {
      p_ = -p_;
      q_ = -q_;
    }
    std::int64_t g = std::gcd(p_ < 0 ? -p_ : p_, q_);
    if (g > 1) {
      p_ /= g;
      q_ /= g;
    }
  }

  std::int64_t p_ = 0;
  std::int64_t q_ = 1;
};

// A point on the unit circle stored as an exact rational angle. Products add
// angles exactly, so multiplicativity of characters holds with zero drift; the
// complex value is materialized only at the very end.
class UnitPhase {
 public:
  UnitPhase() : turns_(0, 1) {}
  explicit UnitPhase(const Rational& turns) : turns_(canonical(turns)) {}

  const Rational& turns() const { return turns_; }

  UnitPhase operator*(const UnitPhase& o) const { return UnitPhase(turns_ + o.turns_); }
  UnitPhase conj() const { return UnitPhase(-turns_); }
  UnitPhase pow(std::int64_t n) const { return UnitPhase(turns_ * n); }
  bool operator==(const UnitPhase& o) const { return turns_ == o.turns_; }
  bool is_one() const { return turns_.is_zero(); }

  // Quarter turns are exact so that e.g. a character value of i is bit-exact;
  // elsewhere the canonical angle in (-1/2, 1/2] keeps conjugation symmetric.
  std::complex<double> value() const {
    const std::int64_t p = turns_.num(), q = turns_.den();
    if (p == 0) return {1.0, 0.0};
    if (q == 1) return {1.0, 0.0};
    if (q == 2) return {-1.0, 0.0};
    if (q == 4) return (p == 1) ? std::complex<double>(0.0, 1.0)
                                : std::complex<double>(0.0, -1.0);
    const double a = 2.0 * std::numbers::pi * turns_.to_double();
    return {std::cos(a), std::sin(a)};
  }

 private:
  // Reduce mod 1 into (-1/2, 1/2].
  static Rational canonical(const Rational& r) {
    Rational m = r.mod1();  // [0,1)
    if (Rational(1, 2) < m) m = m - Rational(1);
    return m;
  }
  Rational turns_;
};

}  // namespace ruelle
