#pragma once

#include <string>
#include <vector>

#include "ruelle/errors.hpp"
#include "ruelle/presentation.hpp"
#include "ruelle/rational.hpp"

namespace ruelle {

// A rank-one unitary character of the group, stored as exact rational angles
// (units of full turns) on the abelianization coordinates. Evaluation goes
// through the integer abelianization image, so multiplicativity is exact and
// long products never drift off the unit circle.
struct Character {
  std::vector<Rational> v;

  static Character parse(const std::string& text) {
    Character c;
    std::string token;
    for (char ch : text + ",") {
      if (ch == ',' || ch == ';') {
        if (!token.empty()) c.v.push_back(Rational::parse(token));
        token.clear();
      } else if (ch != '[' && ch != ']') {
        token += ch;
      }
    }
    if (c.v.empty()) throw InputError("character: empty angle list");
    return c;
  }

  bool is_trivial() const {
    for (const Rational& r : v)
      if (!r.mod1().is_zero()) return false;
    return true;
  }

  std::string str() const {
    std::string s = "[";
    for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].str();
    return s + "]";
  }
};

inline Rational pairing(const Character& rho, const std::vector<std::int64_t>& ab) {
  if (rho.v.size() != ab.size())
    throw InputError("character: angle vector length " + std::to_string(rho.v.size()) +
                     " does not match b1 = " + std::to_string(ab.size()));
  Rational s(0);
  for (size_t i = 0; i < ab.size(); ++i) s = s + rho.v[i] * ab[i];
  return s;
}

inline UnitPhase phase_on_ab(const Character& rho, const std::vector<std::int64_t>& ab) {
  return UnitPhase(pairing(rho, ab));
}

inline UnitPhase phase(const Character& rho, const Word& w, const GroupPresentation& p) {
  return phase_on_ab(rho, p.ab(w));
}

// rho(w) = exp(2 pi i <v, ab(w)>), materialized from the exact angle.
inline cplx evaluate(const Character& rho, const Word& w, const GroupPresentation& p) {
  return phase(rho, w, p).value();
}

// True iff some cusp word has non-integral pairing with the character: the
// restriction of rho to the cusp subgroup is then a nontrivial character.
inline bool cusp_nontrivial(const Character& rho, const GroupPresentation& p) {
  if (p.cusp_words.empty())
    throw InputError("NoCuspData: presentation has no cusp words");
  for (const Word& w : p.cusp_words)
    if (!pairing(rho, p.ab(w)).mod1().is_zero()) return true;
  return false;
}

}  // namespace ruelle
