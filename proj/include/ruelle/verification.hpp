#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include "ruelle/character.hpp"
#include "ruelle/errors.hpp"
#include "ruelle/presentation.hpp"
#include "ruelle/series.hpp"
#include "ruelle/spectrum.hpp"
#include "ruelle/transforms.hpp"

namespace ruelle {

// Pinned pass thresholds for the named verification suites.
namespace check {
inline constexpr double rel_closed = 1e-8;          // quadrature vs closed form
inline constexpr double spot = 1e-12;               // exact special values
inline constexpr double coeff = 1e-12;              // cancellation coefficients
inline constexpr double evenness = 1e-12;           // transform evenness in z
inline constexpr double assembly_quadrature = 1e-7; // shifted-identity quadrature path
inline constexpr double assembly_closed = 1e-10;    // shifted-identity closed path
inline constexpr double rs_synthetic = 1e-10;       // complete synthetic spectrum
inline constexpr double torsion_match = 1e-9;       // chain torsion vs specialization
}  // namespace check

struct CheckLine {
  std::string name;
  double residual = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct CheckReport {
  std::string title;
  std::vector<CheckLine> lines;
  bool passed() const {
    for (const CheckLine& l : lines)
      if (!l.pass) return false;
    return true;
  }
  void add(const std::string& name, double residual, double bound) {
    lines.push_back({name, residual, bound, residual <= bound});
  }
};

namespace detail {

inline double gaussian_kernel_density(double l, double t) {
  return std::exp(-l * l / (4.0 * t)) / std::sqrt(4.0 * pi * t);
}

// Laplace-Mellin value at (k, s, z) by quadrature, extended below the
// convergence line s > k + 1/2 by the downward recurrence
//   value(s) = z^2 value(s+1) / (s - 1/2 - k),
// which integration by parts yields independently of the closed form.
inline cplx laplace_mellin_pk_oracle(int k, double s, cplx z) {
  int m = 0;
  while (s + m <= k + 0.5 + 0.25) ++m;  // margin keeps the integrand integrable
  auto density = [k](double t) { return pk_half_line(k, t); };
  cplx val = laplace_mellin_quadrature(density, s + m, z).value;
  for (int j = m - 1; j >= 0; --j) val = z * z * val / (s + j - 0.5 - k);
  return val;
}

}  // namespace detail

// Gaussian-kernel Laplace transforms and Laplace-Mellin closed forms against
// adaptive quadrature, the exact spot values, and evenness in z.
inline CheckReport verify_transforms() {
  CheckReport rep;
  rep.title = "transforms";

  const double ls[] = {0.5, 1.0, 1.7, 3.0};
  const double zs1[] = {0.7, 1.0, 2.3};
  for (double l : ls)
    for (double z : zs1) {
      auto density = [l](double t) { return detail::gaussian_kernel_density(l, t); };
      const cplx q = laplace_quadrature(density, cplx{z, 0.0}).value;
      const cplx closed = laplace_gaussian_kernel(l, cplx{z, 0.0});
      const double rel = std::abs(q - closed) / std::abs(closed);
      rep.add("gaussian kernel l=" + std::to_string(l) + " z=" + std::to_string(z),
              rel, check::rel_closed);
    }

  const double zs2[] = {0.7, 1.0, 1.5, 2.3};
  for (int k = 0; k <= 2; ++k)
    for (int s = 1; s <= 3; ++s)
      for (double z : zs2) {
        const cplx closed = laplace_mellin_pk(k, cplx(static_cast<double>(s)), cplx{z, 0.0});
        const cplx oracle = detail::laplace_mellin_pk_oracle(k, s, cplx{z, 0.0});
        const double rel = std::abs(oracle - closed) / std::abs(closed);
        rep.add("moment transform k=" + std::to_string(k) + " s=" + std::to_string(s) +
                    " z=" + std::to_string(z),
                rel, check::rel_closed);
      }

  {
    const cplx closed = laplace_mellin_pk(0, cplx(1.0), cplx{2.0, 0.0});
    rep.add("spot value pi/4", std::abs(closed - pi / 4.0), check::spot);
    const cplx oracle = detail::laplace_mellin_pk_oracle(0, 1.0, cplx{2.0, 0.0});
    rep.add("spot value pi/4 (quadrature)", std::abs(oracle - pi / 4.0) / (pi / 4.0),
            check::rel_closed);
  }
  {
    const cplx closed = laplace_mellin_pk(0, cplx(0.0), cplx{1.0, 0.0});
    rep.add("limit value -pi", std::abs(closed + pi), check::spot);
    const cplx oracle = detail::laplace_mellin_pk_oracle(0, 0.0, cplx{1.0, 0.0});
    rep.add("limit value -pi (quadrature)", std::abs(oracle + pi) / pi,
            check::rel_closed);
  }

  for (double z : zs2) {
    auto density = [](double t) { return pk_half_line(1, t); };
    const cplx plus = laplace_mellin_quadrature(density, 2.0, cplx{z, 0.0}).value;
    const cplx minus = laplace_mellin_quadrature(density, 2.0, cplx{-z, 0.0}).value;
    rep.add("evenness k=1 s=2 z=" + std::to_string(z), std::abs(plus - minus),
            check::evenness);
    auto kernel = [](double t) { return detail::gaussian_kernel_density(1.0, t); };
    const cplx kp = laplace_quadrature(kernel, cplx{z, 0.0}).value;
    const cplx km = laplace_quadrature(kernel, cplx{-z, 0.0}).value;
    rep.add("evenness kernel l=1 z=" + std::to_string(z), std::abs(kp - km),
            check::evenness);
  }
  return rep;
}

// Elliptic/unipotent cancellation: the residual transform collapses to the
// zero polynomial coefficient by coefficient.
inline CheckReport verify_cancellation(std::uint64_t seed) {
  CheckReport rep;
  rep.title = "cancellation";
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> log_range(-1.0, 2.0);

  std::vector<std::pair<double, double>> draws;
  draws.emplace_back(1.0e6, 1.0);  // the large-volume pin
  for (int i = 1; i < 20; ++i)
    draws.emplace_back(std::pow(10.0, log_range(rng)), std::pow(10.0, log_range(rng)));

  for (std::size_t i = 0; i < draws.size(); ++i) {
    const auto [vol, c] = draws[i];
    const double ri = cancellation_check(CancellationKind::Identity, vol).max_abs_coeff();
    const double ru = cancellation_check(CancellationKind::Unipotent, c).max_abs_coeff();
    rep.add("identity terms vol=" + std::to_string(vol), ri, check::coeff);
    rep.add("unipotent terms c=" + std::to_string(c), ru, check::coeff);
  }
  return rep;
}

// Product-vs-series factorization residuals with their truncation bounds.
inline CheckReport verify_rs(const SpectrumSeries& series) {
  if (series.abscissa <= 2.0)
    throw PreconditionError("BelowAbscissa: convergence abscissa " +
                            std::to_string(series.abscissa) +
                            " must exceed 2 (geodesic counting grows like e^{2L})");
  CheckReport rep;
  rep.title = "rs";
  const cplx zs[] = {{2.5, 0.0}, {3.0, 0.0}, {3.0, 1.0}};
  for (cplx z : zs) {
    ResidualReport r = rs_factorization_check(series, z);
    std::string name = "factorization z=" + std::to_string(z.real());
    if (z.imag() != 0.0) name += "+" + std::to_string(z.imag()) + "i";
    rep.add(name, r.residual, r.bound);
  }
  return rep;
}

// Shifted transform identities and their assembled combination at z = 3.
inline CheckReport verify_prop31(const SpectrumSeries& series) {
  CheckReport rep;
  rep.title = "prop31";
  AssemblyCheck ac = log_product_assembly_check(series, cplx{3.0, 0.0});
  rep.add("transform identities, closed form", ac.transform_residual_closed,
          check::assembly_closed);
  rep.add("transform identities, quadrature", ac.transform_residual_quadrature,
          check::assembly_quadrature);
  rep.add("assembled combination vs row series", ac.assembly_residual_closed,
          check::assembly_closed);
  rep.add("assembled combination vs full log product", ac.assembly_residual_full_log,
          ac.full_log_bound);
  return rep;
}

}  // namespace ruelle
