#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "ruelle/character.hpp"
#include "ruelle/fox.hpp"
#include "ruelle/presentation.hpp"
#include "ruelle/torsion.hpp"

using namespace ruelle;

namespace {

GroupPresentation fig8() {
  return load_presentation(std::string(DATA_DIR) + "/figure_eight.json");
}

GroupPresentation trefoil() {
  return load_presentation(std::string(DATA_DIR) + "/trefoil.json");
}

bool poly_close(const LaurentPoly& x, const LaurentPoly& y, double tol = 1e-10) {
  return (x - y).max_abs() <= tol * std::max(1.0, x.max_abs());
}

LaurentPoly quadratic(double c2, double c1, double c0) {
  return LaurentPoly(c2, 2) + LaurentPoly(c1, 1) + LaurentPoly(c0, 0);
}

Word random_word(std::mt19937_64& rng, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<int> gen(0, 1);
  std::uniform_int_distribution<int> sgn(0, 1);
  std::vector<Letter> ls;
  const int n = len(rng);
  for (int i = 0; i < n; ++i) ls.push_back({gen(rng), sgn(rng) ? 1 : -1});
  return Word(std::move(ls));
}

}  // namespace

TEST_CASE("derivative base cases") {
  GroupPresentation p = fig8();
  FoxImages im = character_images(p, Character::parse("1/3"), true);

  REQUIRE(poly_close(fox_derivative(p.word("a b"), 0, im), LaurentPoly::one()));
  REQUIRE(poly_close(fox_derivative(p.word("a b"), 1, im), im.img[0]));
  REQUIRE(poly_close(fox_derivative(p.word("A"), 0, im), -im.inv[0]));
  REQUIRE(fox_derivative(p.word("b"), 0, im).is_zero());
  REQUIRE(fox_derivative(Word(), 0, im).is_zero());
}

TEST_CASE("derivative satisfies the product rule on random word pairs") {
  GroupPresentation p = fig8();
  FoxImages im = character_images(p, Character::parse("2/7"), true);
  std::mt19937_64 rng(20260822);
  for (int trial = 0; trial < 500; ++trial) {
    const Word u = random_word(rng, 8);
    const Word v = random_word(rng, 8);
    for (int j = 0; j < 2; ++j) {
      const LaurentPoly lhs = fox_derivative(u * v, j, im);
      const LaurentPoly rhs =
          fox_derivative(u, j, im) + image_of_word(u, im) * fox_derivative(v, j, im);
      INFO("trial " << trial << ", j = " << j);
      REQUIRE(poly_close(lhs, rhs, 1e-12));
    }
  }
}

TEST_CASE("untwisted polynomial of the two knot presentations") {
  TwistedAlexander tref = twisted_alexander(trefoil(), Character::parse("0"));
  REQUIRE(poly_close(tref.numerator, quadratic(1, -1, 1), 1e-12));
  REQUIRE(poly_close(tref.denominator, LaurentPoly(1.0, 1) - LaurentPoly::one(), 1e-12));

  TwistedAlexander f8 = twisted_alexander(fig8(), Character::parse("0"));
  REQUIRE(poly_close(f8.numerator, quadratic(1, -3, 1), 1e-12));
  REQUIRE(poly_close(f8.denominator, LaurentPoly(1.0, 1) - LaurentPoly::one(), 1e-12));

  // denominator t - 1 vanishes at the specialization point
  REQUIRE_THROWS_AS(alexander_at_one(f8), PreconditionError);
  REQUIRE_THROWS_WITH(alexander_at_one(f8),
                      Catch::Matchers::ContainsSubstring("PoleAtOne"));
}

TEST_CASE("removed column does not change the normalized invariant") {
  GroupPresentation p = fig8();
  for (const char* text : {"1/3", "1/4", "2/5"}) {
    Character rho = Character::parse(text);
    TwistedAlexander t0 = twisted_alexander(p, rho, 0);
    TwistedAlexander t1 = twisted_alexander(p, rho, 1);
    REQUIRE(t0.removed_column == 0);
    REQUIRE(t1.removed_column == 1);
    REQUIRE(poly_close(t0.numerator, t1.numerator, 1e-10));
    REQUIRE(poly_close(t0.denominator, t1.denominator, 1e-10));

    // quotient magnitudes agree at a unit-modulus point, where the residual
    // t-power and phase units cannot change the absolute value
    const cplx t = std::exp(cplx{0.0, 0.7});
    const double f0 = std::abs(t0.numerator.eval(t) / t0.denominator.eval(t));
    const double f1 = std::abs(t1.numerator.eval(t) / t1.denominator.eval(t));
    REQUIRE(std::abs(f0 - f1) <= 1e-9 * std::max(1.0, f0));
  }
}

TEST_CASE("deficiency other than one is refused") {
  GroupPresentation p = fig8();
  p.relators.push_back(p.relators[0]);  // still a valid presentation, deficiency 0
  REQUIRE_THROWS_AS(twisted_alexander(p, Character::parse("1/3")), InputError);
}

TEST_CASE("conjugate character conjugates the specialization") {
  GroupPresentation p = fig8();
  TwistedAlexander plus = twisted_alexander(p, Character::parse("1/3"));
  TwistedAlexander minus = twisted_alexander(p, Character::parse("-1/3"));
  const cplx a = alexander_at_one(plus);
  const cplx b = alexander_at_one(minus);
  REQUIRE(std::abs(a - std::conj(b)) <= 1e-12 * std::max(1.0, std::abs(a)));
}

TEST_CASE("swapping the generators preserves the specialization magnitude") {
  GroupPresentation p = fig8();
  GroupPresentation q = p;
  std::swap(q.generator_matrices[0], q.generator_matrices[1]);
  std::swap(q.generator_inverses[0], q.generator_inverses[1]);
  auto swap_ab = [](const Word& w) {
    std::vector<Letter> ls = w.letters();
    for (Letter& l : ls) l.gen ^= 1;
    return Word(std::move(ls));
  };
  for (Word& r : q.relators) r = swap_ab(r);
  for (Word& w : q.cusp_words) w = swap_ab(w);
  q.validate();

  Character rho = Character::parse("1/3");
  const double a = std::abs(alexander_at_one(twisted_alexander(p, rho)));
  const double b = std::abs(alexander_at_one(twisted_alexander(q, rho)));
  REQUIRE(std::abs(a - b) <= 1e-9 * std::max(1.0, a));

  const double ta = reidemeister_torsion(p, rho).magnitude;
  const double tb = reidemeister_torsion(q, rho).magnitude;
  REQUIRE(std::abs(ta - tb) <= 1e-9 * std::max(1.0, ta));
}

TEST_CASE("chain complex composes to zero and is acyclic off the pole set") {
  for (const char* text : {"1/4", "1/3", "2/5", "1/7"}) {
    TwistedChainComplex cc = twisted_chain_complex(fig8(), Character::parse(text));
    REQUIRE(cc.chain_residual <= 1e-12);
    REQUIRE_NOTHROW(require_acyclic(cc));
    ComplexRanks rk = complex_ranks(cc);
    REQUIRE(rk.rank_d2 == 1);
    REQUIRE(rk.rank_d1 == 1);
  }
}

TEST_CASE("torsion magnitude equals the Alexander specialization magnitude") {
  struct Case {
    const GroupPresentation p;
    const char* rho;
  };
  const Case cases[] = {{fig8(), "1/4"}, {fig8(), "1/3"}, {fig8(), "2/5"},
                        {fig8(), "1/7"}, {trefoil(), "1/2"}, {trefoil(), "1/3"}};
  for (const Case& c : cases) {
    Character rho = Character::parse(c.rho);
    TorsionResult tr = reidemeister_torsion(c.p, rho);
    TwistedAlexander ta = twisted_alexander(c.p, rho, tr.removed_row);
    const double mag = std::abs(alexander_at_one(ta));
    INFO(c.p.name << " with rho = " << c.rho);
    REQUIRE(std::abs(tr.magnitude - mag) <= 1e-9 * std::max(1.0, mag));
  }
}

TEST_CASE("quarter-turn character on the figure-eight group") {
  TorsionResult tr = reidemeister_torsion(fig8(), Character::parse("1/4"));
  REQUIRE(std::abs(tr.magnitude - 3.0 / std::sqrt(2.0)) <= 1e-9);
  REQUIRE(std::abs(tr.magnitude * tr.magnitude - 4.5) <= 1e-9);
  REQUIRE(tr.chain_residual <= 1e-12);
}

TEST_CASE("relator-free rank-one group: torsion is the single boundary value") {
  GroupPresentation p;
  p.name = "circle";
  p.hyperbolic = false;
  p.generator_names = {"a"};
  Mat2c m{cplx{1, 0}, cplx{1, 0}, cplx{0, 0}, cplx{1, 0}};
  p.generator_matrices = {m};
  p.generator_inverses = {m.inverse()};
  p.abelianization = {{1}};
  p.epimorphism = {1};
  p.validate();

  TorsionResult tr = reidemeister_torsion(p, Character::parse("1/2"));
  REQUIRE(tr.removed_row == 0);
  REQUIRE(std::abs(tr.tau - cplx{-2.0, 0.0}) <= 1e-15);
  REQUIRE(std::abs(tr.magnitude - 2.0) <= 1e-15);
}

TEST_CASE("non-acyclic characters are refused as hypothesis violations") {
  // trivial character: d1 vanishes
  REQUIRE_THROWS_AS(reidemeister_torsion(fig8(), Character::parse("0")),
                    HypothesisError);
  // sixth root of unity is a root of the twisted polynomial: d2 drops rank
  REQUIRE_THROWS_AS(reidemeister_torsion(trefoil(), Character::parse("1/6")),
                    HypothesisError);
  REQUIRE_THROWS_WITH(reidemeister_torsion(trefoil(), Character::parse("1/6")),
                      Catch::Matchers::ContainsSubstring("NotAcyclic"));
}

TEST_CASE("unimodular basis change of the middle chain group fixes |tau|") {
  GroupPresentation p = fig8();
  TwistedChainComplex cc = twisted_chain_complex(p, Character::parse("1/4"));
  const double mag = reidemeister_torsion(cc).magnitude;
  const int g = static_cast<int>(cc.d1.size());

  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd(0.0, 1.0);
  int used = 0;
  for (int trial = 0; trial < 200 && used < 50; ++trial) {
    Eigen::MatrixXcd Q(g, g);
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j) Q(i, j) = cplx{nd(rng), nd(rng)};
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Q);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) < 0.2 * sv(0)) continue;  // keep the draws well conditioned
    const cplx det = Q.determinant();
    Q *= std::pow(1.0 / det, 1.0 / static_cast<double>(g));  // |det| -> 1

    TwistedChainComplex moved;
    moved.d2 = Q.inverse() * cc.d2;
    moved.d1 = Q.transpose() * cc.d1;
    moved.chain_residual = 0.0;
    const double m = reidemeister_torsion(moved).magnitude;
    INFO("trial " << trial);
    REQUIRE(std::abs(m - mag) <= 1e-10 * std::max(1.0, mag));
    ++used;
  }
  REQUIRE(used == 50);
}

TEST_CASE("elementary expansion of the presentation fixes |tau|") {
  GroupPresentation p = fig8();
  for (const char* text : {"1/4", "1/3"}) {
    Character rho = Character::parse(text);
    const double before = reidemeister_torsion(p, rho).magnitude;

    // add a redundant generator c = ab and the relator c (ab)^{-1}
    GroupPresentation q = p;
    const Word w = p.word("a b");
    q.generator_names.push_back("c");
    q.generator_matrices.push_back(p.evaluate(w));
    q.generator_inverses.push_back(p.evaluate(w).inverse());
    q.abelianization.push_back(p.ab(w));
    q.epimorphism.push_back(p.epim(w));
    q.relators.push_back(q.word("c B A"));
    q.validate();

    const double after = reidemeister_torsion(q, rho).magnitude;
    INFO("rho = " << text);
    REQUIRE(std::abs(after - before) <= 1e-9 * std::max(1.0, before));
  }
}
