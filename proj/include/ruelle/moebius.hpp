#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "ruelle/errors.hpp"
#include "ruelle/gamma.hpp"
#include "ruelle/tolerances.hpp"

namespace ruelle {

// Elements of PSL(2,C) as unit-determinant 2x2 complex matrices with a
// canonical sign choice: after renormalization, the first entry (row-major)
// whose modulus exceeds a hard zero threshold gets its argument put in
// (-pi/2, pi/2]. That makes hashing and equality deterministic.
struct Mat2c {
  cplx a{1.0, 0.0}, b{0.0, 0.0}, c{0.0, 0.0}, d{1.0, 0.0};

  cplx det() const { return a * d - b * c; }
  cplx trace() const { return a + d; }

  Mat2c operator*(const Mat2c& o) const {
    return Mat2c{a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c,
                 c * o.b + d * o.d};
  }

  // Inverse of a unit-determinant matrix.
  Mat2c inverse() const { return Mat2c{d, -b, -c, a}; }

  Mat2c& renormalize() {
    const cplx dt = det();
    // Drift correction only: a determinant materially away from 1 means the
    // caller fed a non-SL(2) matrix, not accumulated rounding.
    if (std::abs(dt - 1.0) > 1e-6)
      throw PreconditionError("NonUnimodular: determinant far from 1");
    const cplx r = std::sqrt(dt);
    a /= r;
    b /= r;
    c /= r;
    d /= r;
    canonicalize_sign();
    return *this;
  }

  void canonicalize_sign() {
    const cplx* entries[4] = {&a, &b, &c, &d};
    for (const cplx* e : entries) {
      if (std::abs(*e) <= 1e-14) continue;
      // arg in (-pi/2, pi/2]: keep for Re > 0, flip for Re < 0; on the
      // imaginary axis keep the upper half.
      const double re = e->real(), im = e->imag();
      if (re > 0.0) return;
      if (re == 0.0 && im >= 0.0) return;
      a = -a;
      b = -b;
      c = -c;
      d = -d;
      return;
    }
  }

  double distance(const Mat2c& o) const {
    return std::abs(a - o.a) + std::abs(b - o.b) + std::abs(c - o.c) +
           std::abs(d - o.d);
  }

  // PSL equality: matrices agree up to a global sign.
  bool psl_equal(const Mat2c& o, double tolerance = tol::compare) const {
    const Mat2c neg{-o.a, -o.b, -o.c, -o.d};
    return distance(o) <= tolerance || distance(neg) <= tolerance;
  }

  bool is_identity(double tolerance = tol::compare) const {
    return psl_equal(Mat2c{}, tolerance);
  }
};

enum class MoebiusClass { Identity, Parabolic, Elliptic, Loxodromic };

inline std::string to_string(MoebiusClass k) {
  switch (k) {
    case MoebiusClass::Identity: return "Identity";
    case MoebiusClass::Parabolic: return "Parabolic";
    case MoebiusClass::Elliptic: return "Elliptic";
    default: return "Loxodromic";
  }
}

// Boundary ties resolve to Parabolic: a cusp element drifted by rounding must
// never be misread as a very short geodesic.
inline MoebiusClass classify(const Mat2c& g, double tolerance = tol::compare) {
  if (std::abs(g.det() - 1.0) > tol::det_gate)
    throw PreconditionError("NonUnimodular: |det - 1| > 1e-9");
  if (g.is_identity(tolerance)) return MoebiusClass::Identity;
  const cplx tr2 = g.trace() * g.trace();
  if (std::abs(tr2 - 4.0) <= tolerance) return MoebiusClass::Parabolic;
  if (std::abs(tr2.imag()) <= tolerance && tr2.real() >= 0.0 && tr2.real() < 4.0)
    return MoebiusClass::Elliptic;
  return MoebiusClass::Loxodromic;
}

struct GeodesicInvariants {
  double l = 0.0;      // translation length, 2 ln |lambda|
  double theta = 0.0;  // holonomy angle in (-pi, pi]
  cplx trace{0.0, 0.0};
};

// lambda = the eigenvalue with |lambda| > 1. Both the sign ambiguity of the
// trace (PSL) and the eigenvalue swap leave (l, theta mod 2 pi) unchanged.
inline GeodesicInvariants geodesic_invariants(const Mat2c& g) {
  if (classify(g) != MoebiusClass::Loxodromic)
    throw PreconditionError("NotLoxodromic: geodesic invariants need a loxodromic element");
  const cplx tr = g.trace();
  const cplx disc = std::sqrt(tr * tr - 4.0);
  cplx lambda = 0.5 * (tr + disc);
  if (std::abs(lambda) < 1.0) lambda = 0.5 * (tr - disc);
  GeodesicInvariants inv;
  inv.l = 2.0 * std::log(std::abs(lambda));
  double th = 2.0 * std::arg(lambda);  // in (-2 pi, 2 pi]
  if (th > pi) th -= 2.0 * pi;
  if (th <= -pi) th += 2.0 * pi;
  inv.theta = th;
  inv.trace = tr;
  return inv;
}

// Delta(gamma) = (1 - e^{-l + i theta})(1 - e^{-l - i theta})
//              = 1 - 2 e^{-l} cos(theta) + e^{-2l}  > 0 for l > 0.
inline double delta_gamma(const GeodesicInvariants& inv) {
  if (inv.l <= 0.0) throw PreconditionError("delta_gamma: length must be positive");
  const double e = std::exp(-inv.l);
  return 1.0 - 2.0 * e * std::cos(inv.theta) + e * e;
}

}  // namespace ruelle
