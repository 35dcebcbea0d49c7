#include <catch2/catch.hpp>

#include <g2lab/liegeom.hpp>
#include <g2lab/rng.hpp>

#include <sstream>

#include "helpers.hpp"

using namespace g2lab;

namespace {

// 3-dimensional Heisenberg block inside R^7: [e1, e2] = e3.
LieAlgebraData heis7() {
  LieAlgebraData alg(7);
  alg.set_c(2, 0, 1, Rational(1));
  return alg;
}

// Two-step nilpotent algebra with de6 = e12, de7 = e13; carries the closed
// model 3-form (certified below).
LieAlgebraData closed_example() {
  LieAlgebraData alg(7);
  alg.set_c(5, 0, 1, Rational(-1));
  alg.set_c(6, 0, 2, Rational(-1));
  return alg;
}

// Random two-step nilpotent algebra: derived directions D, generators
// bracket into span(D) only, so Jacobi holds automatically.
LieAlgebraData random_two_step(Rng& rng) {
  LieAlgebraData alg(7);
  int dsize = static_cast<int>(rng.uniform_int(1, 3));
  std::vector<int> all = {0, 1, 2, 3, 4, 5, 6};
  std::vector<int> derived;
  while (static_cast<int>(derived.size()) < dsize) {
    int pick = static_cast<int>(rng.uniform_int(0, 6));
    if (std::find(derived.begin(), derived.end(), pick) == derived.end()) derived.push_back(pick);
  }
  std::vector<int> gens;
  for (int v : all)
    if (std::find(derived.begin(), derived.end(), v) == derived.end()) gens.push_back(v);
  for (int k : derived)
    for (size_t a = 0; a < gens.size(); ++a)
      for (size_t b = a + 1; b < gens.size(); ++b)
        if (rng.uniform_int(0, 2) == 0) alg.set_c(k, gens[a], gens[b], rng.small_rational(3, 2));
  return alg;
}

}  // namespace

TEST_CASE("Chevalley-Eilenberg differential") {
  LieAlgebraData abelian = LieAlgebraData::abelian();
  Rng rng(89);
  for (int deg = 0; deg <= 6; ++deg)
    REQUIRE(ce_differential(abelian, testgen::random_form<Rational>(rng, 7, deg)).is_zero());

  // de3 = -e12 for [e1,e2] = e3
  auto h = heis7();
  REQUIRE(ce_differential(h, KForm<Rational>::monomial(7, {2})) ==
          -KForm<Rational>::monomial(7, {0, 1}));

  // d^2 = 0 on random two-step algebras (Jacobi makes this an identity)
  const auto& g = G2Structure<Rational>::model();
  for (int trial = 0; trial < 60; ++trial) {
    auto alg = random_two_step(rng);
    alg.require_valid();
    REQUIRE(ce_differential(alg, ce_differential(alg, g.phi())).is_zero());
    int deg = static_cast<int>(rng.uniform_int(1, 5));
    auto f = testgen::random_form<Rational>(rng, 7, deg);
    REQUIRE(ce_differential(alg, ce_differential(alg, f)).is_zero());
  }

  REQUIRE_THROWS_AS(ce_differential(abelian, KForm<Rational>(7, 7)), contract_error);
}

TEST_CASE("Levi-Civita connection from the Koszul formula") {
  auto abelian = LieAlgebraData::abelian();
  auto lc0 = levi_civita(abelian);
  Rng rng0(97);
  for (int i = 0; i < 7; ++i)
    REQUIRE(lc0.nabla(i, testgen::random_vector<Rational>(rng0, 7)).is_zero());

  // Heisenberg block: nab_X Y = Z/2
  auto lc = levi_civita(heis7());
  REQUIRE(lc.nabla(0, Vector<Rational>::basis(7, 1)) == Rational(1, 2) * Vector<Rational>::basis(7, 2));

  // metric compatibility and torsion-freeness hold exactly
  Rng rng(101);
  for (int trial = 0; trial < 60; ++trial) {
    auto alg = random_two_step(rng);
    auto l = levi_civita(alg);
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j)
        for (int k = 0; k < 7; ++k) {
          REQUIRE(l.gamma(k, i, j) + l.gamma(j, i, k) == 0);
          REQUIRE(l.gamma(k, i, j) - l.gamma(k, j, i) == alg.c(k, i, j));
        }
  }
}

TEST_CASE("curvature, Ricci, and their classical symmetries") {
  auto cd0 = curvature_ricci(LieAlgebraData::abelian());
  REQUIRE(cd0.scal == 0);
  REQUIRE(cd0.ric == Matrix<Rational>(7, 7));

  auto cd = curvature_ricci(heis7());
  // K(e1, e2) = -3/4 and Ric(e3, e3) = 1/2
  REQUIRE(cd.r4(0, 1, 1, 0) == Rational(-3, 4));
  REQUIRE(cd.sectional_numerator(Vector<Rational>::basis(7, 0), Vector<Rational>::basis(7, 1)) ==
          Rational(-3, 4));
  REQUIRE(cd.ric(2, 2) == Rational(1, 2));

  Rng rng(103);
  for (int trial = 0; trial < 100; ++trial) {
    auto alg = random_two_step(rng);
    auto c = curvature_ricci(alg);
    bool sym_ok = true, pair_ok = true, bianchi_ok = true;
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j) {
        sym_ok = sym_ok && c.ric(i, j) == c.ric(j, i);
        for (int k = 0; k < 7; ++k)
          for (int l = 0; l < 7; ++l) {
            pair_ok = pair_ok && c.r4(i, j, k, l) == -c.r4(j, i, k, l) &&
                      c.r4(i, j, k, l) == -c.r4(i, j, l, k) &&
                      c.r4(i, j, k, l) == c.r4(k, l, i, j);
            bianchi_ok =
                bianchi_ok && c.r4(i, j, k, l) + c.r4(j, k, i, l) + c.r4(k, i, j, l) == 0;
          }
      }
    REQUIRE(sym_ok);
    REQUIRE(pair_ok);
    REQUIRE(bianchi_ok);
  }
}

TEST_CASE("closed-form certification of Lie algebras") {
  // abelian: flat torus, zero torsion
  auto v0 = validate_closed_g2(LieAlgebraData::abelian());
  REQUIRE(v0.ok());
  REQUIRE(v0.algebra->tau2.is_zero());
  REQUIRE(v0.algebra->torsion_endo == Matrix<Rational>(7, 7));

  // c^7_12 = 1 alone: d(phi) survives, rejected with the offending 4-form
  LieAlgebraData bad(7);
  bad.set_c(6, 0, 1, Rational(1));
  auto vb = validate_closed_g2(bad);
  REQUIRE(!vb.ok());
  REQUIRE(!vb.rejection->dphi.is_zero());

  // nonabelian example: certified with nonzero torsion
  auto v = validate_closed_g2(closed_example());
  REQUIRE(v.ok());
  const auto& a = *v.algebra;
  REQUIRE(!a.tau2.is_zero());
  const auto& g = G2Structure<Rational>::model();
  REQUIRE(ce_differential(a.alg, g.psi()) == wedge(a.tau2, g.phi()));
  auto [p7, p14] = project_lambda2(a.tau2);
  REQUIRE(p7.is_zero());
  (void)p14;
  // T(Z) = tau2(Z, .)^sharp: columns equal the contraction of tau2
  for (int m = 0; m < 7; ++m) {
    auto row = interior(Vector<Rational>::basis(7, m), a.tau2);
    for (int j = 0; j < 7; ++j) REQUIRE(a.torsion_endo(j, m) == row[j]);
  }
  // covariant derivative relation: nab_Z phi = -(1/2) T(Z) _| psi
  for (int m = 0; m < 7; ++m) {
    Vector<Rational> tm(7);
    for (int j = 0; j < 7; ++j) tm[j] = a.torsion_endo(j, m);
    REQUIRE(nabla_form(a.conn, m, g.phi()) ==
            interior(Vector<Rational>(Rational(-1, 2) * tm), g.psi()));
  }
}

TEST_CASE("torsion identity residuals vanish on certified algebras") {
  auto v0 = validate_closed_g2(LieAlgebraData::abelian());
  auto r0 = torsion_identities_check(*v0.algebra);
  REQUIRE(r0.ok());

  auto v = validate_closed_g2(closed_example());
  auto r = torsion_identities_check(*v.algebra);
  REQUIRE(r.scalar_residual == 0);
  REQUIRE(r.dtau2_residual.is_zero());

  // negative control: corrupting tau2 with a lambda2_7 part breaks both
  auto corrupted = *v.algebra;
  corrupted.tau2 = corrupted.tau2 + interior(Vector<Rational>::basis(7, 0),
                                             G2Structure<Rational>::model().phi());
  auto rc = torsion_identities_check(corrupted);
  REQUIRE(!rc.ok());
}

TEST_CASE("search for closed two-step algebras") {
  SearchConfig zero_only;
  zero_only.coefficients = {Rational(0)};
  auto only_abelian = search_closed_g2(zero_only);
  REQUIRE(only_abelian.size() == 1);
  REQUIRE(only_abelian[0].is_abelian());

  SearchConfig cfg;  // {0, 1, -1}
  auto found = search_closed_g2(cfg);
  REQUIRE(found.size() >= 2);
  bool has_nonabelian = false;
  for (const auto& alg : found) {
    auto v = validate_closed_g2(alg);
    REQUIRE(v.ok());
    REQUIRE(torsion_identities_check(*v.algebra).ok());
    if (!alg.is_abelian()) has_nonabelian = true;
    // centrality: derived algebra brackets trivially with everything
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j)
        for (int k = 0; k < 7; ++k) {
          auto inner2 = alg.bracket(Vector<Rational>::basis(7, i), Vector<Rational>::basis(7, j));
          REQUIRE(alg.bracket(inner2, Vector<Rational>::basis(7, k)).is_zero());
        }
  }
  REQUIRE(has_nonabelian);

  // the search reaches examples where the quadratic torsion term is itself
  // nonzero, so every term of the torsion differential identity gets
  // exercised with nonzero data
  bool quadratic_term_nonzero = false;
  for (const auto& alg : found) {
    auto v = validate_closed_g2(alg);
    if (!hodge(wedge(v.algebra->tau2, v.algebra->tau2)).is_zero()) quadratic_term_nonzero = true;
  }
  REQUIRE(quadratic_term_nonzero);

  // mean-curvature identification on genuine curved data: every coassociative
  // coordinate subgroup orbit satisfies -(H _| phi)|_plane = tau2|_plane^+
  // with H computed independently from the connection.  (For the two-step
  // bracket pattern these orbits are all totally geodesic, so the content is
  // that the torsion restricts anti-self-dually exactly when H = 0.)
  {
    const auto& g = G2Structure<Rational>::model();
    const std::vector<std::array<int, 4>> coord_planes = {
        {3, 4, 5, 6}, {1, 2, 3, 4}, {1, 2, 5, 6}, {0, 2, 3, 5},
        {0, 2, 4, 6}, {0, 1, 3, 6}, {0, 1, 4, 5}};
    int orbits = 0;
    for (const auto& alg : found) {
      auto v = validate_closed_g2(alg);
      LeviCivita lc = levi_civita(alg);
      for (const auto& idxs : coord_planes) {
        bool subalg = true;
        for (int a = 0; a < 4 && subalg; ++a)
          for (int b = a + 1; b < 4 && subalg; ++b) {
            auto br = alg.bracket(Vector<Rational>::basis(7, idxs[a]),
                                  Vector<Rational>::basis(7, idxs[b]));
            for (int k = 0; k < 7; ++k) {
              bool inplane = (k == idxs[0] || k == idxs[1] || k == idxs[2] || k == idxs[3]);
              if (!inplane && br[k] != 0) subalg = false;
            }
          }
        if (!subalg) continue;
        std::vector<Vector<Rational>> basis;
        for (int a = 0; a < 4; ++a) basis.push_back(Vector<Rational>::basis(7, idxs[a]));
        {
          std::array<Vector<Rational>, 4> vs = {basis[0], basis[1], basis[2], basis[3]};
          Rational val = eval(g.psi(), std::span<const Vector<Rational>>(vs));
          if (val == -1) std::swap(basis[0], basis[1]);
          REQUIRE((val == 1 || val == -1));
        }
        CoassocFrame<Rational> frame{OrientedPlane<Rational>(7, basis)};
        Vector<Rational> h(7);
        for (const auto& u : frame.plane().onb()) {
          auto nab = lc.nabla(u, u);
          h = h + (nab - frame.plane().project(nab));
        }
        REQUIRE(-normal_to_selfdual(h, frame) ==
                selfdual_part(restrict(v.algebra->tau2, frame.plane())));
        ++orbits;
      }
    }
    REQUIRE(orbits >= 8);  // at least one orbit per algebra
  }

  // deterministic output
  auto again = search_closed_g2(cfg);
  REQUIRE(again.size() == found.size());
  for (size_t i = 0; i < found.size(); ++i) REQUIRE(again[i] == found[i]);
}

TEST_CASE("O'Neill tensors and the submersion curvature identity") {
  // abelian R^7 -> R^3 with flat coassociative fibres
  SubmersionSplit flat{LieAlgebraData::abelian(),
                       {Vector<Rational>::basis(7, 3), Vector<Rational>::basis(7, 4),
                        Vector<Rational>::basis(7, 5), Vector<Rational>::basis(7, 6)}};
  auto od = oneill_analysis(flat);
  REQUIRE(od.a_zero);
  REQUIRE(od.t_zero);
  REQUIRE(od.a_half_bracket_ok);
  REQUIRE(od.curvature_identity_ok);
  REQUIRE(od.mixed_term_identity_ok);
  REQUIRE(od.base.is_abelian());

  // Heisenberg block over R^2: |A_XY| = 1/2, K = -3/4 = 0 - 3*(1/4)
  SubmersionSplit heis{heis7(),
                       {Vector<Rational>::basis(7, 2), Vector<Rational>::basis(7, 3),
                        Vector<Rational>::basis(7, 4), Vector<Rational>::basis(7, 5),
                        Vector<Rational>::basis(7, 6)}};
  auto oh = oneill_analysis(heis);
  REQUIRE(!oh.a_zero);
  REQUIRE(oh.t_zero);
  REQUIRE(oh.a_half_bracket_ok);
  REQUIRE(oh.curvature_identity_ok);
  REQUIRE(oh.mixed_term_identity_ok);
  REQUIRE(oh.a[0][1].norm2() == Rational(1, 4));
  REQUIRE(curvature_ricci(heis.alg).sectional_numerator(oh.h_onb[0], oh.h_onb[1]) == Rational(-3, 4));
  REQUIRE(curvature_ricci(oh.base).r4(0, 1, 1, 0) == 0);

  // vertical subspace that is not an ideal is rejected
  SubmersionSplit bad{heis7(), {Vector<Rational>::basis(7, 0)}};
  REQUIRE_THROWS_AS(oneill_analysis(bad), contract_error);
}

TEST_CASE("corollary bookkeeping for coassociative submersions") {
  std::vector<Vector<Rational>> coassoc_vertical = {
      Vector<Rational>::basis(7, 3), Vector<Rational>::basis(7, 4), Vector<Rational>::basis(7, 5),
      Vector<Rational>::basis(7, 6)};

  auto v0 = validate_closed_g2(LieAlgebraData::abelian());
  auto rep = cor_g2sub_check(*v0.algebra, SubmersionSplit{LieAlgebraData::abelian(), coassoc_vertical});
  REQUIRE(rep.premises_hold);
  REQUIRE(rep.ric_base_zero);
  REQUIRE(rep.ric_zero);
  REQUIRE(rep.tau2_zero);
  REQUIRE(rep.dpsi_zero);
  REQUIRE(rep.consistent);

  // nonabelian closed example: the coassociative split must violate a premise
  auto v = validate_closed_g2(closed_example());
  auto rep2 = cor_g2sub_check(*v.algebra, SubmersionSplit{closed_example(), coassoc_vertical});
  REQUIRE(!rep2.premises_hold);
  REQUIRE(!rep2.a_zero);  // the report names the nonzero tensor
  REQUIRE(rep2.consistent);

  // fabricated premises with nonzero torsion are flagged inconsistent
  REQUIRE(!corollary_consistent(true, true, true, false, true));
  REQUIRE(corollary_consistent(false, false, false, false, false));

  // non-coassociative vertical subspace is an error
  std::vector<Vector<Rational>> wrong = {Vector<Rational>::basis(7, 0), Vector<Rational>::basis(7, 1),
                                         Vector<Rational>::basis(7, 3), Vector<Rational>::basis(7, 4)};
  REQUIRE_THROWS_AS(cor_g2sub_check(*v0.algebra, SubmersionSplit{LieAlgebraData::abelian(), wrong}),
                    contract_error);
}

TEST_CASE("structure-constants file format") {
  auto alg = closed_example();
  std::string text = format_structure_constants(alg, "two-step example");
  std::istringstream in(text);
  auto parsed = parse_structure_constants(in);
  REQUIRE(parsed == alg);

  {
    std::istringstream bad("c 3 1 2 = 1\nc 3 2 1 = 1\n");
    REQUIRE_THROWS_AS(parse_structure_constants(bad), ParseError);
  }
  {
    std::istringstream bad("c 3 1 = 1\n");
    REQUIRE_THROWS_AS(parse_structure_constants(bad), ParseError);
  }
  {
    std::istringstream bad("c 9 1 2 = 1\n");
    REQUIRE_THROWS_AS(parse_structure_constants(bad), ParseError);
  }
  {
    std::istringstream bad("c 3 1 2 = x\n");
    REQUIRE_THROWS_AS(parse_structure_constants(bad), ParseError);
  }
  {
    // Jacobi failure reported with the offending triple
    std::istringstream bad("c 4 1 2 = 1\nc 5 3 4 = 1\n");
    try {
      parse_structure_constants(bad);
      FAIL("expected Jacobi rejection");
    } catch (const contract_error& e) {
      REQUIRE(std::string(e.what()).find("(1,2,3)") != std::string::npos);
    }
  }
  {
    // comments and duplicate-but-consistent entries are fine
    std::istringstream ok("# comment\nc 3 1 2 = 1/2\nc 3 2 1 = -1/2\n");
    auto a = parse_structure_constants(ok);
    REQUIRE(a.c(2, 0, 1) == Rational(1, 2));
  }
}
