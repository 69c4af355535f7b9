#pragma once

#include <optional>
#include <string>

#include "ruelle/character.hpp"
#include "ruelle/errors.hpp"
#include "ruelle/fox.hpp"
#include "ruelle/presentation.hpp"
#include "ruelle/series.hpp"
#include "ruelle/torsion.hpp"

namespace ruelle {

// Everything the torsion side of the main identity can certify at desk scale,
// plus the convergent-region series residuals when a spectrum is available.
struct TheoremReport {
  std::string presentation_name;
  std::string character_text;

  double tau_magnitude = 0.0;
  double tau_magnitude_squared = 0.0;
  int removed_row = 0;
  double chain_residual = 0.0;

  std::string alexander_numerator;
  std::string alexander_denominator;
  cplx a_star_one{0.0, 0.0};
  double a_star_one_abs = 0.0;

  bool delta_supplied = false;
  double delta_rho = 0.0;
  double delta_identity_value = 0.0;  // (delta_rho * |A*(1)|)^2

  bool has_spectrum = false;
  double eval_re = 3.0;  // Re z of the convergent-region evaluations
  ResidualReport rs;
  AssemblyCheck assembly;

  std::string continuation_note;
};

inline TheoremReport theorem_report(const GroupPresentation& p, const Character& rho,
                                    const SpectrumSeries* series = nullptr,
                                    std::optional<double> delta_rho = std::nullopt,
                                    double eval_re = 3.0) {
  if (rho.is_trivial())
    throw HypothesisError("character is trivial; the identity requires a character "
                          "that is nontrivial on the cusp subgroup");
  if (!cusp_nontrivial(rho, p))
    throw HypothesisError("character restricts trivially to every cusp subgroup");

  TheoremReport rep;
  rep.presentation_name = p.name;
  rep.character_text = rho.str();

  TorsionResult tr = reidemeister_torsion(p, rho);
  rep.tau_magnitude = tr.magnitude;
  rep.tau_magnitude_squared = tr.magnitude * tr.magnitude;
  rep.removed_row = tr.removed_row;
  rep.chain_residual = tr.chain_residual;

  TwistedAlexander ta = twisted_alexander(p, rho, tr.removed_row);
  rep.alexander_numerator = ta.numerator.str();
  rep.alexander_denominator = ta.denominator.str();
  rep.a_star_one = alexander_at_one(ta);
  rep.a_star_one_abs = std::abs(rep.a_star_one);

  if (delta_rho) {
    rep.delta_supplied = true;
    rep.delta_rho = *delta_rho;
    const double v = *delta_rho * rep.a_star_one_abs;
    rep.delta_identity_value = v * v;
  }

  if (series && !series->rows.empty()) {
    rep.has_spectrum = true;
    rep.eval_re = eval_re;
    rep.rs = rs_factorization_check(*series, cplx{eval_re, 0.0});
    rep.assembly = log_product_assembly_check(*series, cplx{eval_re, 0.0});
  }

  rep.continuation_note =
      "The L-function value at z = 0 is defined by meromorphic continuation and is "
      "not computed here; the identity is certified through the torsion side and "
      "the convergent-region residuals above.";
  return rep;
}

}  // namespace ruelle
