#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ruelle/character.hpp"
#include "ruelle/errors.hpp"
#include "ruelle/moebius.hpp"
#include "ruelle/presentation.hpp"
#include "ruelle/word.hpp"

namespace ruelle {

// Depth-first enumeration of every freely reduced word of length <= max_len,
// each paired with its matrix. Deterministic order (generator index, then
// exponent +1 before -1), no renormalization mid-product: det drift over desk-
// scale depths stays far below the classification tolerances.
template <class Fn>
void enumerate_words(const GroupPresentation& p, int max_len, Fn&& visit) {
  if (max_len < 1) throw PreconditionError("enumerate_words: max_len must be >= 1");
  const int n = static_cast<int>(p.rank());
  std::vector<Letter> letters;
  letters.reserve(static_cast<size_t>(max_len));
  std::vector<Mat2c> stack;
  stack.reserve(static_cast<size_t>(max_len) + 1);
  stack.push_back(Mat2c{});

  std::function<void()> dfs = [&]() {
    if (!letters.empty()) visit(letters, stack.back());
    if (static_cast<int>(letters.size()) == max_len) return;
    for (int g = 0; g < n; ++g) {
      for (int e : {1, -1}) {
        const Letter l{g, e};
        if (!letters.empty() && letters.back() == l.inverse()) continue;
        letters.push_back(l);
        const Mat2c& gm = e > 0 ? p.generator_matrices[static_cast<size_t>(g)]
                                : p.generator_inverses[static_cast<size_t>(g)];
        stack.push_back(stack.back() * gm);
        dfs();
        stack.pop_back();
        letters.pop_back();
      }
    }
  };
  dfs();
}

// Variant with an abort signal: the visitor returns true to stop the walk.
template <class Fn>
void enumerate_words_until(const GroupPresentation& p, int max_len, Fn&& visit) {
  if (max_len < 1) throw PreconditionError("enumerate_words: max_len must be >= 1");
  const int n = static_cast<int>(p.rank());
  std::vector<Letter> letters;
  std::vector<Mat2c> stack;
  stack.push_back(Mat2c{});
  bool stop = false;
  std::function<void()> dfs = [&]() {
    if (stop) return;
    if (!letters.empty() && visit(letters, stack.back())) {
      stop = true;
      return;
    }
    if (static_cast<int>(letters.size()) == max_len) return;
    for (int g = 0; g < n && !stop; ++g) {
      for (int e : {1, -1}) {
        const Letter l{g, e};
        if (!letters.empty() && letters.back() == l.inverse()) continue;
        letters.push_back(l);
        const Mat2c& gm = e > 0 ? p.generator_matrices[static_cast<size_t>(g)]
                                : p.generator_inverses[static_cast<size_t>(g)];
        stack.push_back(stack.back() * gm);
        dfs();
        stack.pop_back();
        letters.pop_back();
        if (stop) return;
      }
    }
  };
  dfs();
}

// Conjugacy certificate: search u with |u| <= depth and u w u^{-1} = +-v.
// A success is an explicit witness that w and v generate conjugate classes;
// a failure only says no conjugator exists within the budget.
inline bool conjugacy_certificate(const GroupPresentation& p, const Word& w, const Word& v,
                                  int depth, double tolerance = 1e-8) {
  Mat2c mw = p.evaluate(w), mv = p.evaluate(v);
  if (mw.psl_equal(mv, tolerance)) return true;
  bool found = false;
  enumerate_words_until(p, depth, [&](const std::vector<Letter>&, const Mat2c& mu) {
    Mat2c mu_inv = mu;
    std::swap(mu_inv.a, mu_inv.d);
    mu_inv.b = -mu_inv.b;
    mu_inv.c = -mu_inv.c;  // det ~ 1, so the adjugate inverts
    const Mat2c conj = (mu * mw) * mu_inv;
    found = conj.psl_equal(mv, tolerance);
    return found;
  });
  return found;
}

struct GeodesicClass {
  Word representative;  // shortest spelling found, ties broken lexicographically
  GeodesicInvariants inv;
  double l0 = 0.0;
  int mu = 1;
  bool is_primitive = true;
  std::vector<std::int64_t> ab;  // exact conjugation-invariant dedup key part
  UnitPhase rho_phase;           // character value (exact angle)
  bool ambiguous = false;        // class separation not settled by a certificate
};

struct Spectrum {
  std::vector<GeodesicClass> classes;  // sorted by (l, theta, ab, word)
  bool stabilized = false;  // multiset of (l, theta, mu) identical at depth W and W+2
  double cutoff_length = 0.0;
  int max_word_length = 0;
  double counting_K = 0.0;  // sup over enumerated classes of N(l) e^{-2l}, x4 safety
};

struct SpectrumOptions {
  double max_geodesic_length = 3.0;
  int max_word_length = 8;
  double dedup_tol = tol::dedup;
  int certificate_depth = 10;    // conjugator search depth (fixed, W-independent)
  bool run_stability = true;     // re-enumerate at W+2 and compare multisets
  bool run_certificates = true;  // attempt conjugacy certificates on merged spellings
};

namespace detail {

struct Candidate {
  std::vector<Letter> letters;  // canonical rotation of the cyclically reduced word
  double l, theta;
  cplx trace;
  std::vector<std::int64_t> ab;
};

// True iff the letter sequence is the lexicographically least among its
// rotations; equal rotations (proper powers of a pattern) keep the first.
inline bool is_least_rotation(const std::vector<Letter>& ls) {
  const size_t n = ls.size();
  for (size_t shift = 1; shift < n; ++shift) {
    for (size_t i = 0; i < n; ++i) {
      const Letter& rot = ls[(i + shift) % n];
      if (rot < ls[i]) return false;
      if (ls[i] < rot) break;
    }
  }
  return true;
}

inline double circ_dist(double x, double y) {
  double d = std::fmod(std::abs(x - y), 2.0 * pi);
  return std::min(d, 2.0 * pi - d);
}

// One enumeration pass: loxodromic, cyclically reduced, least-rotation
// spellings with l <= cutoff, deduplicated into invariant clusters.
//
// A cluster gathers every spelling sharing (l, theta) within tolerance plus
// the exact abelianization image. Those invariants cannot settle conjugacy:
// distinct classes can share all three (gamma and its inverse when ab = 0,
// and images under non-inner symmetries of the manifold). The spellings are
// therefore partitioned into FAMILIES: certificates (explicit conjugators)
// merge spellings, and the inverse-word relation separates them exactly -- in
// a torsion-free matrix group a loxodromic element is never conjugate to its
// inverse, since a conjugator would reverse the axis and hence be elliptic.
// Each family is one geodesic class. Family pairs with neither a certificate
// nor the inverse separator stay split but are flagged uncertain.
struct Cluster {
  double l, theta;
  cplx trace;
  std::vector<std::int64_t> ab;
  std::vector<std::vector<Letter>> spellings;  // canonical order (length, lex), capped
  std::vector<std::vector<size_t>> families;   // partition of spelling indices
  bool overflow = false;   // spellings beyond the cap were dropped
  bool uncertain = false;  // some family pair lacks both certificate and separator
};

// Canonical rotation of the inverse word: the exact separator key.
inline std::vector<Letter> inverse_canonical(const std::vector<Letter>& ls) {
  std::vector<Letter> inv;
  inv.reserve(ls.size());
  for (size_t i = ls.size(); i-- > 0;) inv.push_back(ls[i].inverse());
  Word w{inv};
  return w.canonical_rotation().letters();
}

// Partition a cluster's spellings into conjugacy families. Certificates
// (explicit conjugators) merge spellings transitively; the inverse separator
// marks pairs that can never be conjugate. One tree walk over conjugators u
// serves every pending pair at once: u carrying spelling i onto spelling j is
// discovered wherever u appears, and the reverse direction is covered because
// u^{-1} is also a word within the depth. The walk stops as soon as every
// pair is either connected or separated; clusters whose families are genuine
// distinct classes are the only ones that pay for the full depth.
inline void partition_families(const GroupPresentation& p, Cluster& cl,
                               int certificate_depth, bool run_certificates) {
  cl.families.clear();
  const size_t n = cl.spellings.size();
  if (n == 0) return;
  std::vector<std::vector<Letter>> inv_canon(n);
  for (size_t i = 0; i < n; ++i) inv_canon[i] = inverse_canonical(cl.spellings[i]);
  std::vector<std::vector<char>> sep(n, std::vector<char>(n, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (inv_canon[i] == cl.spellings[j]) sep[i][j] = sep[j][i] = 1;

  std::vector<size_t> parent(n);
  for (size_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](size_t x, size_t y) { parent[find(x)] = find(y); };

  if (!run_certificates) {
    // No search budget: lump everything the separator allows into one family.
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j)
        if (!sep[i][j] && find(i) != find(j)) unite(i, j);
  } else if (n > 1) {
    const double tolerance = 1e-8;
    std::vector<Mat2c> m(n);
    for (size_t i = 0; i < n; ++i) m[i] = p.evaluate(Word(cl.spellings[i]));
    // Cheap reject before the full PSL comparison (no square roots).
    auto same_psl = [&](const Mat2c& x, const Mat2c& y) {
      const double t2 = tolerance * tolerance;
      if (std::norm(x.a - y.a) > t2 && std::norm(x.a + y.a) > t2) return false;
      return x.psl_equal(y, tolerance);
    };
    // One representative pair per unresolved component pair: a conjugator
    // between any two members merges the whole components, so testing the
    // least members is enough. A component pair with an inverse-separated
    // member pair is separated outright (separation is a class statement).
    std::vector<std::pair<size_t, size_t>> pending;
    auto rebuild = [&]() {
      pending.clear();
      std::vector<size_t> reps, comp_of(n);
      std::vector<size_t> root_comp(n, n);
      for (size_t i = 0; i < n; ++i) {
        const size_t r = find(i);
        if (root_comp[r] == n) {
          root_comp[r] = reps.size();
          reps.push_back(i);
        }
        comp_of[i] = root_comp[r];
      }
      const size_t k = reps.size();
      std::vector<std::vector<char>> comp_sep(k, std::vector<char>(k, 0));
      for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
          if (sep[i][j])
            comp_sep[comp_of[i]][comp_of[j]] = comp_sep[comp_of[j]][comp_of[i]] = 1;
      for (size_t x = 0; x < k; ++x)
        for (size_t y = x + 1; y < k; ++y)
          if (!comp_sep[x][y]) pending.push_back({reps[x], reps[y]});
    };
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j)
        if (!sep[i][j] && same_psl(m[i], m[j])) unite(i, j);
    rebuild();
    if (!pending.empty()) {
      std::vector<Mat2c> conj(n);
      std::vector<unsigned> stamp(n, 0);
      unsigned tick = 0;
      enumerate_words_until(
          p, certificate_depth, [&](const std::vector<Letter>&, const Mat2c& mu) {
            Mat2c mu_inv = mu;
            std::swap(mu_inv.a, mu_inv.d);
            mu_inv.b = -mu_inv.b;
            mu_inv.c = -mu_inv.c;  // det ~ 1, so the adjugate inverts
            ++tick;
            auto conj_of = [&](size_t i) -> const Mat2c& {
              if (stamp[i] != tick) {
                conj[i] = (mu * m[i]) * mu_inv;
                stamp[i] = tick;
              }
              return conj[i];
            };
            bool merged = false;
            for (const auto& [i, j] : pending) {
              if (find(i) == find(j)) continue;
              if (same_psl(conj_of(i), m[j]) || same_psl(conj_of(j), m[i])) {
                unite(i, j);
                merged = true;
              }
            }
            if (merged) rebuild();
            return pending.empty();
          });
    }
  }

  std::vector<size_t> family_of(n, n);
  for (size_t i = 0; i < n; ++i) {
    const size_t r = find(i);
    if (family_of[r] == n) {
      family_of[r] = cl.families.size();
      cl.families.push_back({});
    }
    cl.families[family_of[r]].push_back(i);
  }

  // The split is certain only if every family pair is inverse-separated.
  cl.uncertain = cl.overflow && cl.families.size() > 1;
  for (size_t i = 0; i + 1 < cl.families.size() && !cl.uncertain; ++i) {
    for (size_t j = i + 1; j < cl.families.size() && !cl.uncertain; ++j) {
      bool separated = false;
      for (size_t x : cl.families[i]) {
        for (size_t y : cl.families[j]) {
          if (sep[x][y]) {
            separated = true;
            break;
          }
        }
        if (separated) break;
      }
      if (!separated) cl.uncertain = true;
    }
  }
}

inline std::vector<Cluster> enumerate_clusters(const GroupPresentation& p,
                                               double cutoff, int max_word,
                                               double dedup_tol,
                                               int certificate_depth,
                                               bool run_certificates) {
  std::vector<Candidate> cands;
  enumerate_words(p, max_word, [&](const std::vector<Letter>& ls, const Mat2c& m) {
    if (ls.size() >= 2 && ls.front() == ls.back().inverse()) return;  // not cyclically reduced
    if (!is_least_rotation(ls)) return;
    Mat2c g = m;
    g.renormalize();
    if (classify(g) != MoebiusClass::Loxodromic) return;
    GeodesicInvariants inv = geodesic_invariants(g);
    if (inv.l > cutoff) return;
    Candidate c;
    c.letters = ls;
    c.l = inv.l;
    // Classes straddling theta = +-pi are the same point on the circle; park
    // them all on the +pi side before sorting so adjacency merging sees them.
    c.theta = (inv.theta <= -pi + dedup_tol) ? inv.theta + 2.0 * pi : inv.theta;
    c.trace = inv.trace;
    c.ab = ab_image(Word(ls), p.abelianization);
    cands.push_back(std::move(c));
  });

  std::sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) {
    if (x.l != y.l) return x.l < y.l;
    if (x.theta != y.theta) return x.theta < y.theta;
    if (x.ab != y.ab) return x.ab < y.ab;
    if (x.letters.size() != y.letters.size()) return x.letters.size() < y.letters.size();
    return x.letters < y.letters;
  });

  // Each canonical rotation is visited exactly once, so spellings never repeat.
  // The per-cluster list keeps the canonically least spellings (length, then
  // lex): candidate order carries float noise and must not decide what is kept.
  const auto word_order = [](const std::vector<Letter>& x, const std::vector<Letter>& y) {
    if (x.size() != y.size()) return x.size() < y.size();
    return x < y;
  };
  std::vector<Cluster> clusters;
  constexpr size_t spelling_cap = 64;
  for (const Candidate& c : cands) {
    Cluster* home = nullptr;
    // Scan back over clusters within the length radius; radii are ~1e-8 and
    // class gaps are orders of magnitude larger, so this stays local.
    for (size_t k = clusters.size(); k-- > 0;) {
      Cluster& cl = clusters[k];
      if (c.l - cl.l > dedup_tol) break;
      if (circ_dist(cl.theta, c.theta) <= dedup_tol && cl.ab == c.ab) {
        home = &cl;
        break;
      }
    }
    if (!home) {
      Cluster cl;
      cl.l = c.l;
      cl.theta = c.theta;
      cl.trace = c.trace;
      cl.ab = c.ab;
      cl.spellings.push_back(c.letters);
      clusters.push_back(std::move(cl));
    } else {
      auto pos = std::lower_bound(home->spellings.begin(), home->spellings.end(),
                                  c.letters, word_order);
      if (home->spellings.size() < spelling_cap) {
        home->spellings.insert(pos, c.letters);
      } else if (pos != home->spellings.end()) {
        home->spellings.insert(pos, c.letters);
        home->spellings.pop_back();
        home->overflow = true;
      } else {
        home->overflow = true;
      }
    }
  }

  std::sort(clusters.begin(), clusters.end(), [&](const Cluster& x, const Cluster& y) {
    if (x.l != y.l) return x.l < y.l;
    if (x.theta != y.theta) return x.theta < y.theta;
    if (x.ab != y.ab) return x.ab < y.ab;
    return word_order(x.spellings.front(), y.spellings.front());
  });

  // Distinct classes can share (l, theta) exactly (inverse and symmetry
  // partners differ only in ab). Their float invariants differ by ~1e-15 of
  // spelling noise, so inside each invariant tie run the order is redone on
  // exact keys only; otherwise class order would depend on enumeration depth.
  const auto exact_key = [&](const Cluster& x, const Cluster& y) {
    if (x.ab != y.ab) return x.ab < y.ab;
    return word_order(x.spellings.front(), y.spellings.front());
  };
  for (size_t lo = 0; lo < clusters.size();) {
    size_t hi = lo + 1;
    while (hi < clusters.size() && clusters[hi].l - clusters[hi - 1].l <= dedup_tol) ++hi;
    std::sort(clusters.begin() + lo, clusters.begin() + hi,
              [&](const Cluster& x, const Cluster& y) {
                if (x.theta != y.theta) return x.theta < y.theta;
                return exact_key(x, y);
              });
    for (size_t tlo = lo; tlo < hi;) {
      size_t thi = tlo + 1;
      while (thi < hi &&
             circ_dist(clusters[thi].theta, clusters[thi - 1].theta) <= dedup_tol)
        ++thi;
      std::sort(clusters.begin() + tlo, clusters.begin() + thi, exact_key);
      tlo = thi;
    }
    lo = hi;
  }

  for (Cluster& cl : clusters)
    partition_families(p, cl, certificate_depth, run_certificates);
  return clusters;
}

// Which family of the cluster holds the given canonical spelling; -1 if the
// spelling is not in the (possibly capped) list.
inline int family_of_spelling(const Cluster& cl, const std::vector<Letter>& w) {
  const auto word_order = [](const std::vector<Letter>& x, const std::vector<Letter>& y) {
    if (x.size() != y.size()) return x.size() < y.size();
    return x < y;
  };
  auto it = std::lower_bound(cl.spellings.begin(), cl.spellings.end(), w, word_order);
  if (it == cl.spellings.end() || *it != w) return -1;
  const size_t idx = static_cast<size_t>(it - cl.spellings.begin());
  for (size_t f = 0; f < cl.families.size(); ++f)
    for (size_t s : cl.families[f])
      if (s == idx) return static_cast<int>(f);
  return -1;
}

// One entry per conjugacy family, in cluster order.
struct FlatClass {
  double l, theta;
  const std::vector<std::int64_t>* ab;
};

inline std::vector<FlatClass> flatten_families(const std::vector<Cluster>& cs) {
  std::vector<FlatClass> v;
  for (const Cluster& c : cs)
    for (size_t f = 0; f < c.families.size(); ++f) v.push_back({c.l, c.theta, &c.ab});
  return v;
}

// Tolerant multiset equality on family-level (l, theta, ab). Index-wise
// comparison would be fragile: near-equal lengths can reorder between runs by
// ~1e-14 float drift, so entries are paired greedily inside an l-window.
inline bool multisets_match(const std::vector<Cluster>& A, const std::vector<Cluster>& B,
                            double tolerance) {
  const std::vector<FlatClass> fa = flatten_families(A), fb = flatten_families(B);
  if (fa.size() != fb.size()) return false;
  std::vector<bool> used(fb.size(), false);
  size_t lo = 0;
  for (const FlatClass& a : fa) {
    while (lo < fb.size() && fb[lo].l < a.l - tolerance) ++lo;
    bool matched = false;
    for (size_t j = lo; j < fb.size() && fb[j].l <= a.l + tolerance; ++j) {
      if (used[j]) continue;
      if (circ_dist(fb[j].theta, a.theta) <= tolerance && *fb[j].ab == *a.ab) {
        used[j] = true;
        matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  return true;
}

}  // namespace detail

// The geodesic length spectrum: loxodromic conjugacy classes found among
// words of length <= max_word_length, truncated at l <= max_geodesic_length.
// Spellings are clustered by the conjugation invariants (l, theta) within
// tolerance plus the exact abelianization image, then split into certified
// conjugacy families: one class per family. Inverse classes stay distinct
// (negated ab, or the inverse separator when ab = 0). Multiplicity links each
// class to the shorter class it is a proper power of.
inline Spectrum length_spectrum(const GroupPresentation& p, const Character& rho,
                                const SpectrumOptions& opt) {
  p.validate();  // InconsistentPresentation rather than silent corruption
  if (!p.hyperbolic)
    throw PreconditionError(
        "length_spectrum: presentation is marked non-hyperbolic; "
        "its matrix group has no geodesic spectrum");
  if (opt.max_geodesic_length <= 0.0)
    throw PreconditionError("length_spectrum: max_geodesic_length must be positive");
  if (!rho.v.empty() && rho.v.size() != p.b1())
    throw InputError("length_spectrum: character dimension mismatch");

  auto clusters = detail::enumerate_clusters(p, opt.max_geodesic_length,
                                             opt.max_word_length, opt.dedup_tol,
                                             opt.certificate_depth, opt.run_certificates);

  Spectrum spec;
  spec.cutoff_length = opt.max_geodesic_length;
  spec.max_word_length = opt.max_word_length;

  if (opt.run_stability) {
    auto deeper = detail::enumerate_clusters(p, opt.max_geodesic_length,
                                             opt.max_word_length + 2, opt.dedup_tol,
                                             opt.certificate_depth, opt.run_certificates);
    spec.stabilized = detail::multisets_match(clusters, deeper, opt.dedup_tol);
  }

  std::vector<std::pair<size_t, size_t>> origin;  // class index -> (cluster, family)
  for (size_t ci = 0; ci < clusters.size(); ++ci) {
    const detail::Cluster& c = clusters[ci];
    for (size_t fi = 0; fi < c.families.size(); ++fi) {
      GeodesicClass gc;
      gc.representative = Word(c.spellings[c.families[fi].front()]);
      gc.inv.l = c.l;
      gc.inv.theta = c.theta > pi ? c.theta - 2.0 * pi : c.theta;  // report in (-pi, pi]
      gc.inv.trace = c.trace;
      gc.ab = c.ab;
      gc.rho_phase = rho.v.empty() ? UnitPhase() : phase_on_ab(rho, c.ab);
      gc.ambiguous = c.uncertain;
      spec.classes.push_back(std::move(gc));
      origin.emplace_back(ci, fi);
    }
  }

  // Multiplicity. Invariants alone only NOMINATE (primitive, n) pairs: distinct
  // classes share (l, theta, ab) systematically here, so a nominee needs a
  // witness. The witness is the power word itself: rep(primitive)^n spells an
  // element of this class iff the two are conjugate, and since the n-th power
  // of a least-rotation spelling is again cyclically reduced and of least
  // rotation, it is exactly what the enumeration stores. Membership in this
  // class's family confirms mu = n; membership in a sibling family refutes the
  // nominee (the power IS the sibling); absence from an uncapped cluster whose
  // word cap covers the power word refutes it too. Only power words too long
  // to have been enumerated fall back to a conjugator search, and when that
  // search is inconclusive the class keeps mu = 1 and is flagged ambiguous --
  // the series-side tail accounting absorbs an unclaimed power, whereas a
  // wrongly claimed one would corrupt the expansion weight 1/mu silently.
  const double tolerance = opt.dedup_tol;
  if (!spec.classes.empty()) {
    const double l_min = spec.classes.front().inv.l;
    for (size_t i = 0; i < spec.classes.size(); ++i) {
      GeodesicClass& gc = spec.classes[i];
      const detail::Cluster& home = clusters[origin[i].first];
      const int home_family = static_cast<int>(origin[i].second);
      int best_n = 1;
      bool inconclusive = false;
      for (int n = static_cast<int>(std::floor(gc.inv.l / l_min + tolerance));
           n >= 2 && best_n == 1; --n) {
        const double l0 = gc.inv.l / n;
        for (size_t k = 0; k < i && spec.classes[k].inv.l <= l0 + 2 * tolerance; ++k) {
          const GeodesicClass& cand = spec.classes[k];
          if (cand.mu != 1) continue;
          if (std::abs(cand.inv.l - l0) > 2 * tolerance) continue;
          std::vector<std::int64_t> ab_n = cand.ab;
          for (auto& x : ab_n) x *= n;
          if (ab_n != gc.ab) continue;
          if (detail::circ_dist(n * cand.inv.theta, gc.inv.theta) > (n + 1) * tolerance)
            continue;
          const std::vector<Letter>& base = cand.representative.letters();
          std::vector<Letter> pw;
          pw.reserve(base.size() * static_cast<size_t>(n));
          for (int rep = 0; rep < n; ++rep) pw.insert(pw.end(), base.begin(), base.end());
          const int pf = detail::family_of_spelling(home, pw);
          if (pf == home_family) {
            best_n = n;
            break;
          }
          if (pf >= 0) continue;  // the power is a sibling family of this cluster
          if (static_cast<int>(pw.size()) <= opt.max_word_length && !home.overflow)
            continue;  // enumerable and absent: the nominee's power is elsewhere
          if (opt.run_certificates &&
              conjugacy_certificate(p, Word(pw), gc.representative,
                                    opt.certificate_depth, tolerance)) {
            best_n = n;
            break;
          }
          inconclusive = true;
        }
      }
      gc.mu = best_n;
      gc.l0 = gc.inv.l / best_n;
      gc.is_primitive = (best_n == 1);
      if (inconclusive && best_n == 1) gc.ambiguous = true;
    }
  }

  // Counting-function calibration for tail bounds: N(l) <= K e^{2l} on the
  // enumerated range, with a x4 safety margin for the unexplored tail.
  double K = 0.0;
  for (size_t i = 0; i < spec.classes.size(); ++i)
    K = std::max(K, static_cast<double>(i + 1) * std::exp(-2.0 * spec.classes[i].inv.l));
  spec.counting_K = 4.0 * std::max(K, 1.0);

  return spec;
}

// (l0, mu) of a single loxodromic word against an existing spectrum, by
// invariant matching alone (largest compatible n). Advisory: a caller who
// needs the certified answer has the word and can run conjugacy_certificate
// against rep^n directly; the in-spectrum assignment does exactly that.
inline std::pair<double, int> primitive_decomposition(const GroupPresentation& p,
                                                      const Word& w,
                                                      const Spectrum& spec,
                                                      double tolerance = tol::dedup) {
  Mat2c m = p.evaluate(w);
  if (classify(m) != MoebiusClass::Loxodromic)
    throw PreconditionError("NotLoxodromic: primitive decomposition needs a loxodromic word");
  GeodesicInvariants inv = geodesic_invariants(m);
  const auto ab = p.ab(w);
  int best_n = 1;
  for (const GeodesicClass& gc : spec.classes) {
    if (gc.inv.l > inv.l - tolerance) break;
    const double ratio = inv.l / gc.inv.l;
    const int n = static_cast<int>(std::llround(ratio));
    if (n < 2 || std::abs(ratio - n) * gc.inv.l > 2 * tolerance) continue;
    std::vector<std::int64_t> ab_n = gc.ab;
    for (auto& x : ab_n) x *= n;
    if (ab_n != ab) continue;
    if (detail::circ_dist(n * gc.inv.theta, inv.theta) > (n + 1) * tolerance) continue;
    best_n = std::max(best_n, n);
  }
  return {inv.l / best_n, best_n};
}

}  // namespace ruelle
