#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "ruelle/errors.hpp"
#include "ruelle/gamma.hpp"
#include "ruelle/quadrature.hpp"

namespace ruelle {

// Closed-form transform values are kept symbolic -- a sum of terms
// coefficient * z^{z_power} * Gamma(gamma_argument) -- so that evaluation at
// z = 0 or z = -1 means continuation of the closed form, never an integral at
// invalid parameters, and so that cancellation identities can be checked by
// exact coefficient arithmetic instead of float subtraction of large values.
struct TransformTerm {
  cplx coeff{0.0, 0.0};
  cplx z_power{0.0, 0.0};
  std::optional<cplx> gamma_argument;
};

struct TransformValue {
  std::vector<TransformTerm> terms;

  TransformValue& add(cplx coeff, cplx z_power,
                      std::optional<cplx> gamma_argument = std::nullopt) {
    terms.push_back({coeff, z_power, gamma_argument});
    return *this;
  }

  cplx eval(cplx z) const {
    cplx out{0.0, 0.0};
    for (const TransformTerm& t : terms) {
      cplx factor;
      if (z == cplx(0.0, 0.0)) {
        if (t.z_power.real() > 0.0)
          factor = 0.0;
        else if (t.z_power == cplx(0.0, 0.0))
          factor = 1.0;
        else
          throw PreconditionError("TransformValue: pole at z = 0 (negative power)");
      } else {
        factor = std::pow(z, t.z_power);
      }
      if (t.gamma_argument) factor *= gamma_fn(*t.gamma_argument);  // GammaPole propagates
      out += t.coeff * factor;
    }
    return out;
  }

  // Merge terms sharing the (z_power, gamma_argument) key; exact-cancelling
  // coefficients vanish bit-exactly because both sides were built from the
  // same expressions.
  TransformValue collected() const {
    TransformValue out;
    for (const TransformTerm& t : terms) {
      bool merged = false;
      for (TransformTerm& o : out.terms) {
        if (o.z_power == t.z_power && o.gamma_argument == t.gamma_argument) {
          o.coeff += t.coeff;
          merged = true;
          break;
        }
      }
      if (!merged) out.terms.push_back(t);
    }
    return out;
  }

  double max_abs_coeff() const {
    double m = 0.0;
    for (const TransformTerm& t : terms) m = std::max(m, std::abs(t.coeff));
    return m;
  }

  TransformValue operator+(const TransformValue& o) const {
    TransformValue out = *this;
    out.terms.insert(out.terms.end(), o.terms.begin(), o.terms.end());
    return out;
  }
  TransformValue operator-(const TransformValue& o) const {
    TransformValue out = *this;
    for (TransformTerm t : o.terms) {
      t.coeff = -t.coeff;
      out.terms.push_back(t);
    }
    return out;
  }
};

// C_0 = 1, C_k = prod_{m=0}^{k-1} (m + 1/2): the Gaussian moment constants.
inline double gaussian_moment_constant(int k) {
  double c = 1.0;
  for (int m = 0; m < k; ++m) c *= (m + 0.5);
  return c;
}

// Half-line Gaussian moments p_k(t) = int_0^infty x^{2k} e^{-t x^2} dx.
// Elementary calculus gives (sqrt_pi C_k / 2) t^{-1/2-k}; the nested-quadrature
// version below recomputes the x-integral numerically for oracle spot checks.
inline double pk_half_line(int k, double t) {
  return 0.5 * sqrt_pi * gaussian_moment_constant(k) * std::pow(t, -0.5 - k);
}

inline double pk_by_quadrature(int k, double t) {
  const double xmax = std::sqrt(50.0 / t) + 1.0;
  auto f = [k, t](double x) { return cplx(std::pow(x, 2 * k) * std::exp(-t * x * x), 0.0); };
  return integrate_adaptive(f, 0.0, xmax).value.real();
}

// Laplace transform of the model heat kernel (4 pi t)^{-1/2} e^{-l^2 / 4t}:
// L(f)(z) = e^{-l z} / l for Re z > 0, and by continuation everywhere.
inline cplx laplace_gaussian_kernel(double l, cplx z) {
  if (l <= 0.0) throw PreconditionError("NonpositiveLength: kernel needs l > 0");
  return std::exp(-l * z) / l;
}

// Laplace-Mellin transform of p_k:
//   (sqrt_pi C_k / 2) z^{1 + 2k - 2s} Gamma(s - 1/2 - k).
inline TransformValue laplace_mellin_pk_value(int k, cplx s) {
  TransformValue v;
  v.add(0.5 * sqrt_pi * gaussian_moment_constant(k), 1.0 + 2.0 * k - 2.0 * s,
        s - (0.5 + k));
  return v;
}

inline cplx laplace_mellin_pk(int k, cplx s, cplx z) {
  return laplace_mellin_pk_value(k, s).eval(z);  // GammaPole at s - 1/2 - k <= 0 integer
}

// Laplace transform of p_k, defined over the whole z-plane:
//   (sqrt_pi C_k / 2) Gamma(-1/2 - k) z^{1 + 2k}.
inline cplx laplace_pk(int k, cplx z) {
  return 0.5 * sqrt_pi * gaussian_moment_constant(k) * gamma_fn(cplx(-0.5 - k, 0.0)) *
         std::pow(z, cplx(1.0 + 2.0 * k, 0.0));
}

enum class HeatTermKind { L_expI0, L_I1, L_expU0, L_U1 };

// Identity-term transforms (volume-proportional cubic polynomials in z):
//   L(e^t I_0)(z) = (pi/3) vol z^3,   L(I_1)(z) = 2 pi vol (z^3/3 - z).
inline TransformValue identity_term_transform(HeatTermKind which, double vol) {
  if (vol <= 0.0) throw PreconditionError("identity term: volume must be positive");
  TransformValue v;
  if (which == HeatTermKind::L_expI0) {
    v.add(pi / 3.0 * vol, 3.0);
  } else if (which == HeatTermKind::L_I1) {
    v.add(2.0 * pi * vol / 3.0, 3.0);
    v.add(-2.0 * pi * vol, 1.0);
  } else {
    throw PreconditionError("identity term: wrong kind");
  }
  return v;
}

// Unipotent-term transforms, linear in z with the cusp constant c as input:
//   L(U_1)(z) = -pi c z,   L(e^t U_0)(z) = -pi c z / 2.
inline TransformValue unipotent_term_transform(HeatTermKind which, double c) {
  TransformValue v;
  if (which == HeatTermKind::L_U1) {
    v.add(-pi * c, 1.0);
  } else if (which == HeatTermKind::L_expU0) {
    v.add(-pi * c / 2.0, 1.0);
  } else {
    throw PreconditionError("unipotent term: wrong kind");
  }
  return v;
}

// Model heat densities consistent with the transform conventions above; the
// quadrature oracle integrates these to cross-check the Laplace-Mellin forms:
//   e^t I_0(t) = vol p_1(t);      I_1(t) = 2 vol (p_0 + p_1)(t);
//   e^t U_0(t) = (c/2) p_0(t);    U_1(t) = c p_0(t) = 2 e^t U_0(t).
inline double model_heat_density(HeatTermKind which, double t, double vol_or_c) {
  switch (which) {
    case HeatTermKind::L_expI0: return vol_or_c * pk_half_line(1, t);
    case HeatTermKind::L_I1: return 2.0 * vol_or_c * (pk_half_line(0, t) + pk_half_line(1, t));
    case HeatTermKind::L_expU0: return 0.5 * vol_or_c * pk_half_line(0, t);
    default: return vol_or_c * pk_half_line(0, t);
  }
}

enum class CancellationKind { Identity, Unipotent };

namespace detail {
// coeff * point^{z_power} with point in {-1, 0, +1} and integer power, kept as
// a (power -> contribution) record so like powers cancel exactly.
inline cplx unit_point_power(int point, cplx z_power) {
  const long p = std::lround(z_power.real());
  if (point == 0) return p > 0 ? 0.0 : 1.0;
  if (point == 1) return 1.0;
  return (p % 2 == 0) ? 1.0 : -1.0;  // point == -1
}
}  // namespace detail

// The mirrored-argument cancellations
//   L(I_1)(0) - L(e^t I_0)(-1) - L(e^t I_0)(1) = 0
//   L(U_1)(0) - L(e^t U_0)(-1) - L(e^t U_0)(1) = 0
// checked by coefficient arithmetic: the returned residual keeps the original
// z-powers as keys, and every collected coefficient must be 0 (up to 1e-12).
inline TransformValue cancellation_check(CancellationKind which, double param) {
  const TransformValue one = which == CancellationKind::Identity
                                 ? identity_term_transform(HeatTermKind::L_I1, param)
                                 : unipotent_term_transform(HeatTermKind::L_U1, param);
  const TransformValue half = which == CancellationKind::Identity
                                  ? identity_term_transform(HeatTermKind::L_expI0, param)
                                  : unipotent_term_transform(HeatTermKind::L_expU0, param);
  TransformValue residual;
  for (const TransformTerm& t : one.terms)
    residual.add(t.coeff * detail::unit_point_power(0, t.z_power), t.z_power);
  for (const TransformTerm& t : half.terms) {
    residual.add(-t.coeff * detail::unit_point_power(-1, t.z_power), t.z_power);
    residual.add(-t.coeff * detail::unit_point_power(+1, t.z_power), t.z_power);
  }
  return residual.collected();
}

}  // namespace ruelle
