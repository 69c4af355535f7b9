#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <sstream>
#include <string>

#include "ruelle/errors.hpp"
#include "ruelle/gamma.hpp"

namespace ruelle {

// Laurent polynomial in one variable t with complex coefficients, stored as
// exponent -> coefficient. The zero polynomial is the empty map.
struct LaurentPoly {
  std::map<int, cplx> c;

  LaurentPoly() = default;
  explicit LaurentPoly(cplx a, int power = 0) {
    if (a != cplx{0.0, 0.0}) c[power] = a;
  }
  static LaurentPoly one() { return LaurentPoly(cplx{1.0, 0.0}); }
  static LaurentPoly monomial(cplx a, int power) { return LaurentPoly(a, power); }

  bool is_zero() const { return c.empty(); }

  LaurentPoly& operator+=(const LaurentPoly& o) {
    for (auto& [p, a] : o.c) {
      auto it = c.find(p);
      if (it == c.end())
        c[p] = a;
      else {
        it->second += a;
        if (it->second == cplx{0.0, 0.0}) c.erase(it);
      }
    }
    return *this;
  }
  LaurentPoly& operator-=(const LaurentPoly& o) {
    for (auto& [p, a] : o.c) {
      auto it = c.find(p);
      if (it == c.end())
        c[p] = -a;
      else {
        it->second -= a;
        if (it->second == cplx{0.0, 0.0}) c.erase(it);
      }
    }
    return *this;
  }
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly out;
    for (auto& [p, x] : a.c)
      for (auto& [q, y] : b.c) {
        auto it = out.c.find(p + q);
        if (it == out.c.end())
          out.c[p + q] = x * y;
        else
          it->second += x * y;
      }
    for (auto it = out.c.begin(); it != out.c.end();)
      it = (it->second == cplx{0.0, 0.0}) ? out.c.erase(it) : std::next(it);
    return out;
  }
  LaurentPoly operator-() const {
    LaurentPoly out = *this;
    for (auto& [p, a] : out.c) a = -a;
    return out;
  }
  friend LaurentPoly operator*(cplx s, const LaurentPoly& a) {
    return LaurentPoly(s) * a;
  }

  cplx eval(cplx t) const {
    cplx out{0.0, 0.0};
    for (auto& [p, a] : c) out += a * std::pow(t, p);
    return out;
  }

  double max_abs() const {
    double m = 0.0;
    for (auto& [p, a] : c) m = std::max(m, std::abs(a));
    return m;
  }

  // Drop coefficients that are numerically zero relative to the largest one.
  LaurentPoly pruned(double rel = 1e-11) const {
    LaurentPoly out;
    const double cut = rel * max_abs();
    for (auto& [p, a] : c)
      if (std::abs(a) > cut) out.c[p] = a;
    return out;
  }

  int lowest_power() const { return c.empty() ? 0 : c.begin()->first; }
  int highest_power() const { return c.empty() ? 0 : c.rbegin()->first; }

  // Canonical form up to units +-t^k and a phase: shift the lowest exponent to
  // zero and rotate so the leading (highest-degree) coefficient is a positive
  // real number.
  LaurentPoly normalized(double rel = 1e-11) const {
    LaurentPoly p = pruned(rel);
    if (p.is_zero()) return p;
    const int shift = p.lowest_power();
    cplx lead = p.c.rbegin()->second;
    cplx phase = lead / std::abs(lead);
    LaurentPoly out;
    for (auto& [q, a] : p.c) out.c[q - shift] = a / phase;
    // force the leading coefficient exactly real
    out.c.rbegin()->second = cplx{std::abs(lead), 0.0};
    return out;
  }

  std::string str() const {
    if (c.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [p, a] : c) {
      if (!first) os << " + ";
      first = false;
      os << "(";
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.12g", a.real());
      os << buf;
      std::snprintf(buf, sizeof buf, "%+.12g", a.imag());
      os << buf << "i)";
      if (p != 0) os << "*t^" << p;
    }
    return os.str();
  }
};

}  // namespace ruelle
