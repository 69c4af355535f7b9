#pragma once

#include <string>
#include <vector>

#include "ruelle/character.hpp"
#include "ruelle/errors.hpp"
#include "ruelle/laurent.hpp"
#include "ruelle/presentation.hpp"
#include "ruelle/word.hpp"

namespace ruelle {

// Images of the generators under a multiplicative map into Laurent
// polynomials, with precomputed inverses (units c t^k with |c| = 1).
struct FoxImages {
  std::vector<LaurentPoly> img, inv;
};

// Phi(a_j) = rho(a_j) t^{epim(a_j)}; with_t = false drops the t factor (the
// specialization used by the chain complex).
inline FoxImages character_images(const GroupPresentation& p, const Character& rho,
                                  bool with_t) {
  FoxImages out;
  for (int j = 0; j < p.rank(); ++j) {
    UnitPhase ph = phase_on_ab(rho, p.abelianization[j]);
    int e = with_t ? p.epimorphism[j] : 0;
    out.img.push_back(LaurentPoly::monomial(ph.value(), e));
    out.inv.push_back(LaurentPoly::monomial(ph.conj().value(), -e));
  }
  return out;
}

inline LaurentPoly image_of_word(const Word& w, const FoxImages& im) {
  LaurentPoly acc = LaurentPoly::one();
  for (const Letter& x : w.letters())
    acc = acc * (x.exp > 0 ? im.img[x.gen] : im.inv[x.gen]);
  return acc;
}

// Fox derivative d(w)/d(a_j) pushed through Phi:
//   d(uv) = d(u) + Phi(u) d(v),  d(a_j) = 1,  d(a_j^{-1}) = -Phi(a_j^{-1}).
inline LaurentPoly fox_derivative(const Word& w, int j, const FoxImages& im) {
  LaurentPoly deriv;
  LaurentPoly prefix = LaurentPoly::one();
  for (const Letter& x : w.letters()) {
    if (x.exp > 0) {
      if (x.gen == j) deriv += prefix;
      prefix = prefix * im.img[x.gen];
    } else {
      prefix = prefix * im.inv[x.gen];
      if (x.gen == j) deriv -= prefix;
    }
  }
  return deriv;
}

// r x g Jacobian of the relators.
inline std::vector<std::vector<LaurentPoly>> fox_matrix(const GroupPresentation& p,
                                                        const FoxImages& im) {
  std::vector<std::vector<LaurentPoly>> m;
  for (const Word& rel : p.relators) {
    std::vector<LaurentPoly> row;
    for (int j = 0; j < p.rank(); ++j) row.push_back(fox_derivative(rel, j, im));
    m.push_back(std::move(row));
  }
  return m;
}

namespace detail {

inline LaurentPoly laurent_det(const std::vector<std::vector<LaurentPoly>>& m) {
  const int n = static_cast<int>(m.size());
  if (n == 0) return LaurentPoly::one();
  if (n > 8) throw InputError("determinant: relator count too large");
  if (n == 1) return m[0][0];
  LaurentPoly out;
  for (int i = 0; i < n; ++i) {  // expand along the first column
    std::vector<std::vector<LaurentPoly>> minor;
    for (int r = 0; r < n; ++r) {
      if (r == i) continue;
      std::vector<LaurentPoly> row(m[r].begin() + 1, m[r].end());
      minor.push_back(std::move(row));
    }
    LaurentPoly term = m[i][0] * laurent_det(minor);
    if (i % 2 == 0)
      out += term;
    else
      out -= term;
  }
  return out;
}

}  // namespace detail

struct TwistedAlexander {
  LaurentPoly numerator;    // normalized: t^0 lowest, leading coefficient > 0
  LaurentPoly denominator;  // normalized the same way
  int removed_column = 0;
};

// Numerator det(Fox Jacobian with column j0 removed) over denominator
// Phi(a_{j0}) - 1, for deficiency-one presentations.
inline TwistedAlexander twisted_alexander(const GroupPresentation& p,
                                          const Character& rho, int column = -1) {
  const int g = p.rank();
  const int r = static_cast<int>(p.relators.size());
  if (g - r != 1)
    throw InputError("presentation deficiency is " + std::to_string(g - r) +
                     ", need 1 for the Alexander invariant");
  FoxImages im = character_images(p, rho, /*with_t=*/true);

  int j0 = column;
  if (j0 < 0) {
    for (int j = 0; j < g; ++j) {
      LaurentPoly den = im.img[j] - LaurentPoly::one();
      if (!den.pruned().is_zero()) {
        j0 = j;
        break;
      }
    }
  }
  if (j0 < 0 || j0 >= g)
    throw PreconditionError("DegenerateDenominator: no generator with Phi(a_j) != 1");
  LaurentPoly den = im.img[j0] - LaurentPoly::one();
  if (den.pruned().is_zero())
    throw PreconditionError("DegenerateDenominator: Phi(a_" + std::to_string(j0) +
                            ") - 1 vanishes");

  std::vector<std::vector<LaurentPoly>> jac = fox_matrix(p, im);
  std::vector<std::vector<LaurentPoly>> cut;
  for (int i = 0; i < r; ++i) {
    std::vector<LaurentPoly> row;
    for (int j = 0; j < g; ++j)
      if (j != j0) row.push_back(jac[i][j]);
    cut.push_back(std::move(row));
  }

  TwistedAlexander out;
  out.numerator = detail::laurent_det(cut).normalized();
  out.denominator = den.normalized();
  out.removed_column = j0;
  return out;
}

// Specialization numerator(1)/denominator(1) of the normalized quotient.
inline cplx alexander_at_one(const TwistedAlexander& ta) {
  const cplx den = ta.denominator.eval(cplx{1.0, 0.0});
  if (std::abs(den) < 1e-12 * std::max(1.0, ta.denominator.max_abs()))
    throw PreconditionError("PoleAtOne: denominator vanishes at t = 1");
  return ta.numerator.eval(cplx{1.0, 0.0}) / den;
}

}  // namespace ruelle
