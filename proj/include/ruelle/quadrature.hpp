#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "ruelle/errors.hpp"
#include "ruelle/gamma.hpp"
#include "ruelle/kahan.hpp"
#include "ruelle/tolerances.hpp"

namespace ruelle {

// Adaptive Gauss-Kronrod 15(7) quadrature for complex-valued integrands.
// Serves as the independent oracle for every closed-form transform: it never
// looks at the formulas it is checking.

namespace gk {
// 15-point Kronrod nodes (positive half) and weights; embedded 7-point Gauss
// weights sit on the odd-indexed nodes.
inline constexpr double xk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
inline constexpr double wk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double wg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};
}  // namespace gk

struct QuadResult {
  cplx value{0.0, 0.0};
  double error = 0.0;  // accumulated local error estimates + tail truncation
  long evaluations = 0;
};

namespace detail {

template <class F>
inline void gk15(F&& f, double a, double b, cplx& kron, double& err, long& evals) {
  const double h = 0.5 * (b - a), mid = 0.5 * (a + b);
  cplx resk = gk::wk[7] * f(mid);
  cplx resg = gk::wg[3] * f(mid);
  for (int i = 0; i < 7; ++i) {
    const double d = h * gk::xk[i];
    const cplx fv = f(mid - d) + f(mid + d);
    resk += gk::wk[i] * fv;
    if (i % 2 == 1) resg += gk::wg[i / 2] * fv;
  }
  evals += 15;
  kron = resk * h;
  err = std::abs((resk - resg) * h);
}

}  // namespace detail

// Adaptive bisection on [a, b] until the summed local error estimates drop
// below max(rel_target * |integral|, abs_floor).
template <class F>
QuadResult integrate_adaptive(F&& f, double a, double b,
                              double rel_target = tol::quad_rel,
                              double abs_floor = 1e-280, int max_intervals = 4000) {
  struct Seg {
    double a, b, err;
    cplx val;
  };
  QuadResult out;
  if (a == b) return out;
  Seg first{a, b, 0.0, {}};
  detail::gk15(f, a, b, first.val, first.err, out.evaluations);
  std::vector<Seg> segs{first};
  for (;;) {
    cplx total{0.0, 0.0};
    double err_total = 0.0;
    size_t worst = 0;
    for (size_t i = 0; i < segs.size(); ++i) {
      total += segs[i].val;
      err_total += segs[i].err;
      if (segs[i].err > segs[worst].err) worst = i;
    }
    if (!std::isfinite(err_total) || !std::isfinite(std::abs(total)))
      throw ResidualError("NoConvergence: integrand produced non-finite samples");
    if (err_total <= std::max(rel_target * std::abs(total), abs_floor)) {
      // Deterministic compensated reduction, ordered by left endpoint.
      std::sort(segs.begin(), segs.end(),
                [](const Seg& x, const Seg& y) { return x.a < y.a; });
      KahanSumC acc;
      for (const Seg& s : segs) acc.add(s.val);
      out.value = acc.value();
      out.error = err_total;
      return out;
    }
    if (static_cast<int>(segs.size()) >= max_intervals)
      throw ResidualError("NoConvergence: adaptive quadrature budget exhausted");
    Seg s = segs[worst];
    const double m = 0.5 * (s.a + s.b);
    Seg left{s.a, m, 0.0, {}}, right{m, s.b, 0.0, {}};
    detail::gk15(f, left.a, left.b, left.val, left.err, out.evaluations);
    detail::gk15(f, right.a, right.b, right.val, right.err, out.evaluations);
    segs[worst] = left;
    segs.push_back(right);
  }
}

// Numerical Laplace-Mellin transform  integral_{t_min}^{t_max} e^{-t z^2} t^{s-1} f(t) dt.
//
// Domain handling:
//   (t_min, 1]  via the substitution t = e^u (regularizes the t^{s-1} factor);
//               when t_min = 0 the u-blocks extend downward until a block
//               contributes nothing at working precision.
//   [1, t_max)  geometric blocks doubling in width; the e^{-t Re z^2} decay
//               (Re z^2 > 0 required for an infinite tail) terminates them.
// The reported error adds the local quadrature estimates and the magnitude of
// the first omitted block as a truncation proxy.
template <class F>
QuadResult laplace_mellin_quadrature(F&& f, cplx s, cplx z, double t_min = 0.0,
                                     double t_max = std::numeric_limits<double>::infinity(),
                                     double rel_target = tol::quad_rel) {
  const cplx z2 = z * z;
  const bool infinite_tail = !std::isfinite(t_max);
  if (infinite_tail && z2.real() <= 0.0)
    throw PreconditionError("quadrature: Re z^2 must be positive for an infinite tail");

  QuadResult out;
  KahanSumC acc;
  double err = 0.0;
  double scale = 0.0;  // running magnitude reference for block cutoffs

  auto integrand_u = [&](double u) {
    const double t = std::exp(u);
    return std::exp(-t * z2 + s * u) * f(t);
  };
  auto integrand_t = [&](double t) {
    return std::exp(-t * z2) * std::pow(cplx(t, 0.0), s - 1.0) * f(t);
  };

  // Lower part (t_min, 1], walked in u = log t blocks of width 4.
  const double u_top = std::log(std::min(1.0, t_max));
  const double u_bottom = t_min > 0.0 ? std::log(t_min) : -700.0;
  if (u_bottom < u_top) {
    double hi = u_top;
    for (int block = 0; block < 200 && hi > u_bottom; ++block) {
      const double lo = std::max(u_bottom, hi - 4.0);
      QuadResult piece = integrate_adaptive(integrand_u, lo, hi, rel_target);
      acc.add(piece.value);
      err += piece.error;
      out.evaluations += piece.evaluations;
      scale = std::max(scale, std::abs(acc.value()));
      hi = lo;
      if (t_min == 0.0 && std::abs(piece.value) <= 1e-16 * scale + 1e-290) break;
    }
  }

  // Upper part [1, t_max), geometric blocks.
  if (t_max > 1.0) {
    double lo = 1.0;
    for (int block = 0; block < 200 && lo < t_max; ++block) {
      const double hi = std::min(t_max, lo * 2.0);
      QuadResult piece = integrate_adaptive(integrand_t, lo, hi, rel_target);
      acc.add(piece.value);
      err += piece.error;
      out.evaluations += piece.evaluations;
      scale = std::max(scale, std::abs(acc.value()));
      const bool negligible = std::abs(piece.value) <= 1e-16 * scale + 1e-290;
      lo = hi;
      if (infinite_tail && negligible) {
        err += std::abs(piece.value);  // first-omitted-block truncation proxy
        break;
      }
    }
  }

  out.value = acc.value();
  out.error = err;
  return out;
}

// Plain Laplace transform  L(f)(z) = integral_0^infty e^{-t z^2} f(t) dt / t,
// i.e. the s = 0 instance of the Laplace-Mellin integral.
template <class F>
QuadResult laplace_quadrature(F&& f, cplx z, double t_min = 0.0,
                              double t_max = std::numeric_limits<double>::infinity(),
                              double rel_target = tol::quad_rel) {
  return laplace_mellin_quadrature(std::forward<F>(f), cplx(0.0, 0.0), z, t_min,
                                   t_max, rel_target);
}

}  // namespace ruelle
