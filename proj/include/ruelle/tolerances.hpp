#pragma once

namespace ruelle::tol {

// Centralized numeric tolerances. Word enumeration compounds rounding, so the
// comparison tolerances are deliberately looser than the renormalization drift.
inline constexpr double compare = 1e-10;     // matrix equality, classification ties
inline constexpr double renorm = 1e-12;      // |det - 1| drift after renormalization
inline constexpr double det_gate = 1e-9;     // NonUnimodular threshold
inline constexpr double relator = 1e-8;      // relator-evaluates-to-+-I validation
inline constexpr double dedup = 1e-8;        // spectrum bucket radius in (l, theta)
inline constexpr double rank_cut = 1e-8;     // relative singular-value cut (acyclicity)
inline constexpr double chain = 1e-10;       // boundary composition = 0
inline constexpr double quad_rel = 1e-10;    // adaptive quadrature relative target
inline constexpr double coeff_zero = 1e-12;  // residual polynomial coefficient noise

// Euler products / exponential series over the length spectrum converge for
// Re z > 2 (geodesic counting grows like e^{2L}); default working margin.
inline constexpr double abscissa = 2.1;

}  // namespace ruelle::tol
