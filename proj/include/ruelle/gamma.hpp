#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "ruelle/errors.hpp"

namespace ruelle {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline const double sqrt_pi = std::sqrt(pi);

// Lanczos approximation (g = 7, 9 coefficients), valid for Re z >= 1/2;
// the reflection formula Gamma(z)Gamma(1-z) = pi / sin(pi z) covers the rest.
// Relative accuracy ~1e-14 away from poles, comfortably beyond the 1e-12
// needed at the negative half-integers.
namespace detail {
inline constexpr double lanczos_g = 7.0;
inline constexpr double lanczos_c[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,       -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};
}  // namespace detail

inline bool gamma_is_pole(const cplx& z, double tolerance = 1e-13) {
  if (std::abs(z.imag()) > tolerance) return false;
  double r = std::round(z.real());
  return r <= 0.5 && std::abs(z.real() - r) <= tolerance;
}

inline cplx gamma_fn(cplx z) {
  if (gamma_is_pole(z))
    throw PreconditionError("GammaPole: Gamma evaluated at nonpositive integer " +
                            std::to_string(z.real()));
  if (z.real() < 0.5) {
    // reflection
    return pi / (std::sin(pi * z) * gamma_fn(1.0 - z));
  }
  z -= 1.0;
  cplx x = detail::lanczos_c[0];
  for (int i = 1; i < 9; ++i) x += detail::lanczos_c[i] / (z + cplx(i, 0));
  cplx t = z + detail::lanczos_g + 0.5;
  return std::sqrt(2.0 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

}  // namespace ruelle
