#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <string>
#include <vector>

#include "ruelle/character.hpp"
#include "ruelle/errors.hpp"
#include "ruelle/fox.hpp"
#include "ruelle/presentation.hpp"
#include "ruelle/tolerances.hpp"

namespace ruelle {

// Chain complex  C_2 = C^r --d2--> C_1 = C^g --d1--> C_0 = C  of the
// presentation 2-complex, twisted by the character: d2 is the transposed Fox
// Jacobian evaluated at Phi = rho, d1[j] = rho(a_j) - 1.
struct TwistedChainComplex {
  Eigen::MatrixXcd d2;  // g x r
  Eigen::VectorXcd d1;  // g
  double chain_residual = 0.0;  // max |d1^T d2| entry, must vanish
};

inline TwistedChainComplex twisted_chain_complex(const GroupPresentation& p,
                                                 const Character& rho) {
  const int g = p.rank();
  const int r = static_cast<int>(p.relators.size());
  FoxImages im = character_images(p, rho, /*with_t=*/false);

  TwistedChainComplex cc;
  cc.d2.resize(g, r);
  std::vector<std::vector<LaurentPoly>> jac = fox_matrix(p, im);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < g; ++j) cc.d2(j, i) = jac[i][j].eval(cplx{1.0, 0.0});
  cc.d1.resize(g);
  for (int j = 0; j < g; ++j) cc.d1(j) = im.img[j].eval(cplx{1.0, 0.0}) - 1.0;

  for (int i = 0; i < r; ++i) {
    cplx dot{0.0, 0.0};
    for (int j = 0; j < g; ++j) dot += cc.d1(j) * cc.d2(j, i);
    cc.chain_residual = std::max(cc.chain_residual, std::abs(dot));
  }
  if (cc.chain_residual > tol::chain)
    throw InputError("InconsistentPresentation: d1 * d2 residual " +
                     std::to_string(cc.chain_residual));
  return cc;
}

struct ComplexRanks {
  int rank_d2 = 0;
  int rank_d1 = 0;
};

inline ComplexRanks complex_ranks(const TwistedChainComplex& cc) {
  ComplexRanks out;
  if (cc.d2.cols() > 0) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(cc.d2);
    const auto& sv = svd.singularValues();
    // The cut needs an absolute floor: character values have modulus 1, so a
    // d2 that is uniformly ~1e-16 is a vanished Fox derivative (the twist
    // sits on a zero of the numerator polynomial), not a rank-1 map.
    const double cut = tol::rank_cut * std::max(sv.size() ? sv(0) : 0.0, 1.0);
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > cut) ++out.rank_d2;
  }
  out.rank_d1 = cc.d1.cwiseAbs().maxCoeff() > tol::rank_cut ? 1 : 0;
  return out;
}

// The complex is acyclic iff d2 has full column rank, d1 is onto, and the
// ranks exhaust the middle dimension: r + 1 = g.
inline void require_acyclic(const TwistedChainComplex& cc) {
  const int g = static_cast<int>(cc.d1.size());
  const int r = static_cast<int>(cc.d2.cols());
  const ComplexRanks rk = complex_ranks(cc);
  if (rk.rank_d2 != r || rk.rank_d1 != 1 || r + 1 != g)
    throw HypothesisError("NotAcyclic: rank(d2) = " + std::to_string(rk.rank_d2) +
                          "/" + std::to_string(r) + ", rank(d1) = " +
                          std::to_string(rk.rank_d1) + ", generators " +
                          std::to_string(g));
}

struct TorsionResult {
  cplx tau{0.0, 0.0};
  double magnitude = 0.0;
  int removed_row = 0;          // subbasis vector dropped from C_1
  double chain_residual = 0.0;  // carried over from the complex
};

// Subbasis / alternating-determinant torsion of the acyclic three-term
// complex: drop one C_1 basis vector j0 so that the remaining rows of d2 form
// an invertible square block, then tau = det(d2 minus row j0) / d1[j0]; for
// the relator-free complex the single map d1 is the top map and tau = d1[j0].
// Rows are tried in decreasing |d1[j]| until the block is nonsingular; the
// choice changes tau only by a unit.
inline TorsionResult reidemeister_torsion(const TwistedChainComplex& cc) {
  require_acyclic(cc);
  const int g = static_cast<int>(cc.d1.size());
  const int r = static_cast<int>(cc.d2.cols());

  std::vector<int> order(g);
  for (int j = 0; j < g; ++j) order[j] = j;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(cc.d1(a)) > std::abs(cc.d1(b));
  });

  TorsionResult out;
  out.chain_residual = cc.chain_residual;
  if (r == 0) {
    out.removed_row = order[0];
    out.tau = cc.d1(order[0]);
    out.magnitude = std::abs(out.tau);
    return out;
  }

  const double scale = cc.d2.cwiseAbs().maxCoeff();
  for (int j0 : order) {
    if (std::abs(cc.d1(j0)) <= tol::rank_cut) break;
    Eigen::MatrixXcd block(g - 1, r);
    int rr = 0;
    for (int j = 0; j < g; ++j) {
      if (j == j0) continue;
      block.row(rr++) = cc.d2.row(j);
    }
    const cplx det = block.determinant();
    if (std::abs(det) <= std::pow(tol::rank_cut * scale, r)) continue;
    out.removed_row = j0;
    out.tau = det / cc.d1(j0);
    out.magnitude = std::abs(out.tau);
    return out;
  }
  throw HypothesisError("NotAcyclic: no invertible subbasis block found");
}

inline TorsionResult reidemeister_torsion(const GroupPresentation& p,
                                          const Character& rho) {
  return reidemeister_torsion(twisted_chain_complex(p, rho));
}

inline double reidemeister_torsion_magnitude(const TwistedChainComplex& cc) {
  return reidemeister_torsion(cc).magnitude;
}

}  // namespace ruelle
