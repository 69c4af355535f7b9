#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ruelle/errors.hpp"
#include "ruelle/kahan.hpp"
#include "ruelle/quadrature.hpp"
#include "ruelle/spectrum.hpp"
#include "ruelle/tolerances.hpp"

namespace ruelle {

// Geodesic-side series data: one row per conjugacy class with the twisted
// coefficients  a_0 = rho(gamma) l_0 / Delta,  a_1 = rho(gamma) 2cos(theta) l_0 / Delta.
struct SpectrumRow {
  double l = 0.0, theta = 0.0, l0 = 0.0;
  int mu = 1;
  cplx rho{1.0, 0.0};
  cplx a0{0.0, 0.0}, a1{0.0, 0.0};
  std::string word;
  std::vector<std::int64_t> ab;  // exact class key for power accounting; not serialized
};

struct SpectrumSeries {
  std::vector<SpectrumRow> rows;  // ascending l
  double cutoff_L = 0.0;
  double abscissa = tol::abscissa;
  double counting_K = 4.0;  // N(l) <= K e^{2l} calibration from the enumeration
};

inline SpectrumRow make_row(double l, double theta, double l0, int mu, cplx rho,
                            const std::string& word = "") {
  SpectrumRow r;
  r.l = l;
  r.theta = theta;
  r.l0 = l0;
  r.mu = mu;
  r.rho = rho;
  const double e = std::exp(-l);
  const double delta = 1.0 - 2.0 * e * std::cos(theta) + e * e;
  r.a0 = rho * l0 / delta;
  r.a1 = rho * 2.0 * std::cos(theta) * l0 / delta;
  r.word = word;
  return r;
}

inline SpectrumSeries make_series(const GroupPresentation& p, const Spectrum& spec) {
  SpectrumSeries s;
  s.cutoff_L = spec.cutoff_length;
  s.counting_K = std::max(spec.counting_K, 1.0);
  for (const GeodesicClass& gc : spec.classes) {
    SpectrumRow r = make_row(gc.inv.l, gc.inv.theta, gc.l0, gc.mu,
                             gc.rho_phase.value(), p.spell(gc.representative));
    r.ab = gc.ab;
    s.rows.push_back(std::move(r));
  }
  return s;
}

// All powers gamma^n (n <= n_max) of one primitive class: the spectrum whose
// power tails are explicitly complete, used by the geometric-tail oracles.
inline SpectrumSeries synthetic_power_spectrum(double l0, double theta0,
                                               const UnitPhase& rho0, int n_max) {
  SpectrumSeries s;
  s.cutoff_L = l0 * n_max;
  for (int n = 1; n <= n_max; ++n) {
    double th = std::fmod(theta0 * n, 2.0 * pi);
    if (th > pi) th -= 2.0 * pi;
    if (th <= -pi) th += 2.0 * pi;
    s.rows.push_back(make_row(l0 * n, th, l0, n, rho0.pow(n).value()));
  }
  return s;
}

struct Bounded {
  cplx value{0.0, 0.0};
  double bound = 0.0;
};

namespace detail {

inline void require_abscissa(const SpectrumSeries& s, cplx z) {
  if (z.real() < s.abscissa)
    throw PreconditionError("BelowAbscissa: Re z = " + std::to_string(z.real()) +
                            " < " + std::to_string(s.abscissa));
}

// Coefficient bound sup |a_j| / l over possible classes: |a_j| <= 2 l_0 / Delta
// and Delta >= (1 - e^{-l_min})^2 for any class at least as long as the
// shortest enumerated one.
inline double coefficient_bound(const SpectrumSeries& s, int j) {
  if (s.rows.empty()) return 1.0;
  const double lmin = s.rows.front().l;
  const double dmin = std::pow(1.0 - std::exp(-lmin), 2);
  return (j == 0 ? 1.0 : 2.0) / dmin;
}

// Tail of sum_{l > L} e^{-x l} against counting N(l) <= K e^{2l}:
// integration by parts gives K e^{(2-x)L} x/(x-2) <= 2K e^{(2-x)L}/(x-2).
inline double counting_tail(double K, double L, double x) {
  if (x <= 2.0) return std::numeric_limits<double>::infinity();
  return 2.0 * K * std::exp((2.0 - x) * L) / (x - 2.0);
}

}  // namespace detail

// sum over ALL classes of (a_j / l) e^{-z l}; S_j(z) = exp(-sum).
inline Bounded s_series_log_sum(const SpectrumSeries& s, int j, cplx z) {
  detail::require_abscissa(s, z);
  KahanSumC acc;
  for (const SpectrumRow& r : s.rows)  // rows ascend in l
    acc.add((j == 0 ? r.a0 : r.a1) / r.l * std::exp(-z * r.l));
  Bounded out;
  out.value = acc.value();
  out.bound = detail::coefficient_bound(s, j) *
              detail::counting_tail(s.counting_K, s.cutoff_L, z.real());
  return out;
}

inline Bounded s_series(const SpectrumSeries& s, int j, cplx z) {
  Bounded sum = s_series_log_sum(s, j, z);
  Bounded out;
  out.value = std::exp(-sum.value);
  out.bound = sum.bound;  // log-scale bound; |dS/S| <= bound for small bounds
  return out;
}

// Euler product over primitive classes of (1 - rho(gamma) e^{-z l(gamma)}).
inline Bounded ruelle_product(const SpectrumSeries& s, cplx z) {
  detail::require_abscissa(s, z);
  cplx prod{1.0, 0.0};
  for (const SpectrumRow& r : s.rows)
    if (r.mu == 1) prod *= (1.0 - r.rho * std::exp(-z * r.l));
  Bounded out;
  out.value = prod;
  out.bound = detail::counting_tail(s.counting_K, s.cutoff_L, z.real());
  return out;
}

// log of the Euler product, with every factor's full logarithm (the factors
// sit near 1 in the convergence region, so the principal branch is safe).
inline cplx log_ruelle_product(const SpectrumSeries& s, cplx z) {
  detail::require_abscissa(s, z);
  KahanSumC acc;
  for (const SpectrumRow& r : s.rows)
    if (r.mu == 1) acc.add(std::log(1.0 - r.rho * std::exp(-z * r.l)));
  return acc.value();
}

// log of the product reconstructed from the rows themselves: every row gamma^n
// contributes its expansion term -(rho^n / n) e^{-z n l_0}. Matches the row
// set of the S-series sums term for term.
inline cplx log_ruelle_from_rows(const SpectrumSeries& s, cplx z) {
  detail::require_abscissa(s, z);
  KahanSumC acc;
  for (const SpectrumRow& r : s.rows)
    acc.add(-(r.rho / static_cast<double>(r.mu)) * std::exp(-z * r.l));
  return acc.value();
}

// Powers of enumerated primitives missing from the row set. Primitives are
// pooled by (l0, theta0, ab): distinct classes can share all three invariants
// and must then each supply their own power rows, so a pool of m primitives
// needs m rows at every power n. Each short slot costs its expansion term
// e^{-x n l0}/n, plus the k >= 2 log tail a power left labeled mu = 1 would
// add as a spurious Euler factor; powers past the cutoff cost the geometric
// tail sum_{n >= n1} e^{-x n l0}/n <= e^{-x n1 l0}/(n1 (1 - e^{-x l0})) per
// pool member.
inline double missing_power_bound(const SpectrumSeries& s, double x) {
  struct Pool {
    double l0, theta0;
    std::vector<std::int64_t> ab;
    int m = 0;
  };
  std::vector<Pool> pools;
  for (const SpectrumRow& r : s.rows) {
    if (r.mu != 1) continue;
    bool placed = false;
    for (Pool& p : pools) {
      if (std::abs(p.l0 - r.l) <= 2 * tol::dedup &&
          detail::circ_dist(p.theta0, r.theta) <= 2 * tol::dedup && p.ab == r.ab) {
        ++p.m;
        placed = true;
        break;
      }
    }
    if (!placed) pools.push_back({r.l, r.theta, r.ab, 1});
  }
  double bound = 0.0;
  for (const Pool& p : pools) {
    int n = 2;
    for (; n * p.l0 <= s.cutoff_L + tol::dedup; ++n) {
      std::vector<std::int64_t> ab_n = p.ab;
      for (auto& v : ab_n) v *= n;
      int supply = 0;
      for (const SpectrumRow& r : s.rows)
        if (r.mu == n && std::abs(r.l0 - p.l0) <= 2 * tol::dedup && r.ab == ab_n &&
            detail::circ_dist(n * p.theta0, r.theta) <= (n + 1) * tol::dedup)
          ++supply;
      if (supply < p.m) {
        const double term = std::exp(-x * n * p.l0);
        bound += (p.m - supply) * (term / n + term * term / (2.0 * (1.0 - term)));
      }
    }
    bound += p.m * std::exp(-x * n * p.l0) / (n * (1.0 - std::exp(-x * p.l0)));
  }
  return bound;
}

// | log R(z) - (log S_0(z) + log S_0(z+2) - log S_1(z+1)) |, with the bound
// from the missing power tails (the factorization holds per term once every
// power of every primitive is present).
struct ResidualReport {
  double residual = 0.0;
  double bound = 0.0;
};

inline ResidualReport rs_factorization_check(const SpectrumSeries& s, cplx z) {
  detail::require_abscissa(s, z);
  const cplx logR = log_ruelle_product(s, z);
  const cplx logS0a = -s_series_log_sum(s, 0, z).value;
  const cplx logS0b = -s_series_log_sum(s, 0, z + 2.0).value;
  const cplx logS1 = -s_series_log_sum(s, 1, z + 1.0).value;
  ResidualReport out;
  out.residual = std::abs(logR - (logS0a + logS0b - logS1));
  out.bound = missing_power_bound(s, z.real()) + 1e-12 * (1.0 + std::abs(logR));
  return out;
}

// Truncated hyperbolic orbital sums
//   H_0(t) = sum a_0 (4 pi t)^{-1/2} exp(-(l^2/4t + t + l))
//   H_1(t) = sum a_1 (4 pi t)^{-1/2} exp(-(l^2/4t + l))
// cancel_exp_t drops the e^{-t} factor of H_0 (the combination e^t H_0 is what
// gets Laplace-transformed). Small-t tail beyond the cutoff is reported via
// the leading e^{-L^2/4t} factor against the counting calibration.
inline Bounded theta_sum(const SpectrumSeries& s, int j, double t,
                         bool cancel_exp_t = false) {
  if (t <= 0.0) throw PreconditionError("theta_sum: t must be positive");
  KahanSumC acc;
  const double pref = 1.0 / std::sqrt(4.0 * pi * t);
  for (const SpectrumRow& r : s.rows) {
    double expo = -(r.l * r.l / (4.0 * t) + r.l);
    if (j == 0 && !cancel_exp_t) expo -= t;
    acc.add((j == 0 ? r.a0 : r.a1) * (pref * std::exp(expo)));
  }
  Bounded out;
  out.value = acc.value();
  const double L = s.cutoff_L;
  const double rate = L / (2.0 * t) - 1.0;  // valid small-t regime: t < L/2
  out.bound = rate > 0.0 ? 2.0 * s.counting_K * detail::coefficient_bound(s, j) * pref *
                               std::exp(-L * L / (4.0 * t) + L) / rate
                         : std::numeric_limits<double>::infinity();
  return out;
}

// Per-class closed-form Laplace transforms of the hyperbolic sums: by the
// Gaussian-kernel formula each class contributes (a_j / l) e^{-l (z+1)}, so
//   L(H_1)(z) = -log S_1(z+1)  and  L(e^t H_0)(z) = -log S_0(z+1)
// hold with the same truncation on both sides.
inline cplx hyperbolic_laplace_closed(const SpectrumSeries& s, int j, cplx z) {
  return s_series_log_sum(s, j, z + 1.0).value;
}

// The assembled log-product identity at shifted arguments:
//   log R(z) = L(H_1)(z) - L(e^t H_0)(z-1) - L(e^t H_0)(z+1).
// Evaluated three ways; the quadrature path integrates the truncated orbital
// sums numerically and is the independent oracle.
struct AssemblyCheck {
  double transform_residual_closed = 0.0;  // closed form vs -log S, same rows
  double transform_residual_quadrature = 0.0;  // quadrature vs -log S
  double assembly_residual_closed = 0.0;  // combination vs row-matched log R
  double assembly_residual_full_log = 0.0;  // combination vs full-log Euler product
  double full_log_bound = 0.0;             // missing-power tail bound for the above
  double quadrature_error = 0.0;           // accumulated integrator estimates
  double max_residual = 0.0;  // max of the row-matched residuals (criterion scale)
};

inline AssemblyCheck log_product_assembly_check(const SpectrumSeries& s, cplx z) {
  detail::require_abscissa(s, z);
  AssemblyCheck out;

  const cplx LH1 = hyperbolic_laplace_closed(s, 1, z);
  const cplx LH0m = hyperbolic_laplace_closed(s, 0, z - 1.0);
  const cplx LH0p = hyperbolic_laplace_closed(s, 0, z + 1.0);

  const cplx S1 = -s_series_log_sum(s, 1, z + 1.0).value;
  const cplx S0m = -s_series_log_sum(s, 0, z).value;
  const cplx S0p = -s_series_log_sum(s, 0, z + 2.0).value;

  out.transform_residual_closed =
      std::max({std::abs(LH1 - (-S1)), std::abs(LH0m - (-S0m)), std::abs(LH0p - (-S0p))});

  const cplx combo = LH1 - LH0m - LH0p;
  out.assembly_residual_closed = std::abs(combo - log_ruelle_from_rows(s, z));
  out.assembly_residual_full_log = std::abs(combo - log_ruelle_product(s, z));
  out.full_log_bound =
      missing_power_bound(s, z.real()) + 1e-12 * (1.0 + std::abs(combo));

  if (!s.rows.empty()) {
    const cplx args[3] = {z, z - 1.0, z + 1.0};
    const int js[3] = {1, 0, 0};
    const cplx targets[3] = {-S1, -S0m, -S0p};
    double worst = 0.0, err = 0.0;
    for (int i = 0; i < 3; ++i) {
      auto integrand = [&](double t) {
        return theta_sum(s, js[i], t, /*cancel_exp_t=*/js[i] == 0).value;
      };
      QuadResult q = laplace_quadrature(integrand, args[i]);
      worst = std::max(worst, std::abs(q.value - targets[i]));
      err += q.error;
    }
    out.transform_residual_quadrature = worst;
    out.quadrature_error = err;
  }

  out.max_residual =
      std::max(out.transform_residual_closed, out.assembly_residual_closed);
  return out;
}

}  // namespace ruelle
