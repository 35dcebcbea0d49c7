// Acceptance suite: one line per criterion, with the stated tolerances and
// time budgets pinned in code.
//
// Criterion 6 is special: the pointwise contraction identity it asks for is
// provably false (an exact rational counterexample is printed below), so the
// criterion is executed exactly as stated, reported as an expected failure,
// and accompanied by the corrected identity, which must pass exactly.  The
// process exit code reflects unexpected failures only; see README for the
// mathematical details.

#include <chrono>
#include <iostream>
#include <iomanip>
#include <sstream>

#include <g2lab/generators.hpp>
#include <g2lab/identities.hpp>
#include <g2lab/liegeom.hpp>
#include <g2lab/variations.hpp>

using namespace g2lab;

namespace {

int unexpected_failures = 0;
int expected_failures = 0;
int passes = 0;

class Timer {
 public:
  Timer() : t0_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

void report(const std::string& label, bool pass, double secs, bool expected_defect = false) {
  if (pass) {
    ++passes;
    std::cout << "[PASS] " << label;
  } else if (expected_defect) {
    ++expected_failures;
    std::cout << "[FAIL — expected, documented defect in the stated identity] " << label;
  } else {
    ++unexpected_failures;
    std::cout << "[FAIL] " << label;
  }
  std::cout << "  (" << secs << " s)\n";
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(2) << x;
  return os.str();
}

KForm<Rational> vol4(Rational c) {
  KForm<Rational> v(4, 4);
  v[0] = c;
  return v;
}

void criterion_1_model_fidelity() {
  Timer timer;
  const auto& g = G2Structure<Rational>::model();
  KForm<Rational> phi_model = KForm<Rational>::monomial(7, {0, 1, 2}) +
                              KForm<Rational>::monomial(7, {0, 3, 4}) +
                              KForm<Rational>::monomial(7, {0, 5, 6}) +
                              KForm<Rational>::monomial(7, {1, 3, 5}) -
                              KForm<Rational>::monomial(7, {1, 4, 6}) -
                              KForm<Rational>::monomial(7, {2, 3, 6}) -
                              KForm<Rational>::monomial(7, {2, 4, 5});
  KForm<Rational> psi_model = KForm<Rational>::monomial(7, {3, 4, 5, 6}) +
                              KForm<Rational>::monomial(7, {1, 2, 3, 4}) +
                              KForm<Rational>::monomial(7, {1, 2, 5, 6}) -
                              KForm<Rational>::monomial(7, {0, 2, 3, 5}) +
                              KForm<Rational>::monomial(7, {0, 2, 4, 6}) -
                              KForm<Rational>::monomial(7, {0, 1, 3, 6}) -
                              KForm<Rational>::monomial(7, {0, 1, 4, 5});
  bool ok = (g.phi() == phi_model) && (hodge(g.phi()) == psi_model) && (g.psi() == psi_model);
  double secs = timer.seconds();
  report("1. model fidelity: *phi = psi coefficient-exact against both displays", ok && secs < 1.0,
         secs);
}

void criterion_2_coassociator() {
  Timer timer;
  const auto& ge = G2Structure<Rational>::model();
  bool exact_ok = true;
  Rng rng(2001);
  for (int t = 0; t < 100; ++t) {
    std::array<Vector<Rational>, 4> vs;
    for (auto& v : vs) v = gen::random_vector<Rational>(rng, 7);
    Rational p = eval(ge.psi(), std::span<const Vector<Rational>>(vs));
    Rational cn = coassociator(vs[0], vs[1], vs[2], vs[3]).norm2();
    Rational gd = determinant(gram(std::span<const Vector<Rational>>(vs)));
    if (p * p + cn != gd) exact_ok = false;
  }
  const auto& gf = G2Structure<double>::model();
  double worst = 0;
  Rng rngf(2002);
  for (int t = 0; t < 10000; ++t) {
    std::array<Vector<double>, 4> vs;
    for (auto& v : vs) v = gen::random_vector<double>(rngf, 7);
    double p = eval(gf.psi(), std::span<const Vector<double>>(vs));
    double cn = coassociator(vs[0], vs[1], vs[2], vs[3]).norm2();
    double gd = determinant(gram(std::span<const Vector<double>>(vs)));
    worst = std::max(worst, std::fabs(p * p + cn - gd));
  }
  double secs = timer.seconds();
  report("2. coassociator identity: exact on 100 rational 4-tuples, float residual " +
             fmt(worst) + " < 1e-9 on 10^4 tuples",
         exact_ok && worst < 1e-9 && secs < 10.0, secs);
}

void criterion_3_i_map() {
  Timer timer;
  const auto& g = G2Structure<Rational>::model();
  bool ok = (i_map(Matrix<Rational>::identity(7)) == Rational(6) * g.phi());
  Rng rng(2003);
  for (int t = 0; t < 100 && ok; ++t) {
    auto h = gen::random_symmetric<Rational>(rng, 7);
    auto c = interior(Vector<Rational>::basis(7, 0), i_map(h));
    auto H = [&](int i, int j) { return h(i - 1, j - 1); };
    ok = ok && c.coeff({3, 4}) == (H(1, 1) + 2 * H(4, 4)) + (H(1, 1) + 2 * H(5, 5));
    ok = ok && c.coeff({5, 6}) == (H(1, 1) + 2 * H(6, 6)) + (H(1, 1) + 2 * H(7, 7));
    ok = ok && c.coeff({3, 5}) == (H(1, 2) - 2 * H(4, 7)) + (H(1, 2) + 2 * H(5, 6));
    ok = ok && c.coeff({4, 6}) == (-H(1, 2) + 2 * H(5, 6)) - (H(1, 2) + 2 * H(4, 7));
    ok = ok && c.coeff({3, 6}) == (-H(1, 3) + 2 * H(4, 6)) - (H(1, 3) - 2 * H(5, 7));
    ok = ok && c.coeff({4, 5}) == (-H(1, 3) - 2 * H(5, 7)) - (H(1, 3) + 2 * H(4, 6));
  }
  report("3. i-map: i(g) = 6 phi exact; e1-contraction matches the 12-term display", ok,
         timer.seconds());
}

void criterion_4_alpha_f() {
  Timer timer;
  bool ok = true;
  Rng rng(2004);
  for (int t = 0; t < 1000; ++t) {
    auto alpha = gen::random_selfdual4<Rational>(rng);
    auto f = gen::random_symmetric_tracefree<Rational>(rng, 4);
    if (!selfdual_part(two_slot_insertion(alpha, f)).is_zero()) ok = false;
  }
  report("4. alpha_f anti-self-dual for 10^3 random (self-dual alpha, trace-free symmetric f)", ok,
         timer.seconds());
}

void criterion_5_b_forms() {
  Timer timer;
  const auto& frame = CoassocFrame<Rational>::model();
  auto e = [](int i) { return Vector<Rational>::basis(7, i); };
  bool ok = (check_b_w(e(0), e(1), e(2), frame) == vol4(2));
  Rng rng(2005);
  for (int t = 0; t < 1000 && ok; ++t) {
    auto w = gen::random_vector<Rational>(rng, 7);
    auto z = gen::random_normal_vector<Rational>(rng);
    if (!check_b_w(w, z, z, frame).is_zero()) ok = false;
    auto h = gen::random_symmetric<Rational>(rng, 7);
    auto z1 = gen::random_normal_vector<Rational>(rng);
    auto z2 = gen::random_normal_vector<Rational>(rng);
    Rational coeff = 4 * bilinear(h, z1, z2) + 2 * restricted_trace(h, frame.plane()) * z1.dot(z2);
    if (!(check_b_h(h, z1, z2, frame) == vol4(coeff))) ok = false;
  }
  report("5. B-forms: B(e1,e2,e3) = 2 vol4; B_W(Z,Z) = 0 and the B_h closed form on 10^3 inputs",
         ok, timer.seconds());
}

void criterion_6_contraction_lemma() {
  Timer timer;
  const auto& frame = CoassocFrame<Rational>::model();
  Rng rng(2006);
  auto random_data = [&]() {
    auto tau = gen::random_lambda2_14<Rational>(rng);
    auto ric = gen::random_symmetric<Rational>(rng, 7);
    auto z = gen::random_normal_vector<Rational>(rng);
    Matrix<Rational> dz(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) dz(i, j) = rng.small_rational();
    return VariationPointData<Rational>(tau, ric, z, ShapeData<Rational>(frame, dz));
  };

  long stated_violations = 0, corrected_violations = 0, assembly_stated_violations = 0,
       assembly_corrected_violations = 0;
  for (int t = 0; t < 1000; ++t) {
    auto d = random_data();
    Rational residual = lemma_dtau2_residual(d);
    if (residual != 0) ++stated_violations;
    if (residual != lemma_correction_coefficient(d)) ++corrected_violations;
    auto assembled = wedge(restrict(d.tau2, d.shape.frame.plane()), gamma_z(d)) + lemma_dtau2_lhs(d);
    if (!(assembled == secvar_integrand(d))) ++assembly_stated_violations;
    if (!(assembled - secvar_integrand(d) == vol4(lemma_correction_coefficient(d))))
      ++assembly_corrected_violations;
  }
  double secs = timer.seconds();
  report("6. contraction lemma as stated: residual = 0 on 10^3 random inputs (violated on " +
             std::to_string(stated_violations) + ") and integrand = assembly (violated on " +
             std::to_string(assembly_stated_violations) + ")",
         stated_violations == 0 && assembly_stated_violations == 0, secs,
         /*expected_defect=*/true);
  {
    // exact rational counterexample, printed for the record
    auto tau = KForm<Rational>::monomial(7, {3, 4}) + KForm<Rational>::monomial(7, {5, 6}) -
               Rational(2) * KForm<Rational>::monomial(7, {1, 2});
    VariationPointData<Rational> d(tau, Matrix<Rational>(7, 7), Vector<Rational>::basis(7, 0),
                                   ShapeData<Rational>(frame));
    std::cout << "       counterexample: tau2 = " << tau.str()
              << ", Ric = 0, Z = e1  ->  residual = " << lemma_dtau2_residual(d).str() << "\n";
  }
  report(
      "6*. corrected contraction identity: residual = |Z _| tau2|^2 - |Z|^2 tr(tau2_gram|perp)/2 "
      "exactly, and assembly - integrand = correction * vol4, on the same 10^3 inputs",
      corrected_violations == 0 && assembly_corrected_violations == 0, timer.seconds() - secs);
}

void criterion_7_certification() {
  Timer search_timer;
  SearchConfig cfg;  // coefficients {0, 1, -1}
  auto found = search_closed_g2(cfg);
  double search_secs = search_timer.seconds();

  Timer timer;
  const auto& g = G2Structure<Rational>::model();
  bool ok = !found.empty();
  bool nonabelian = false;
  for (const auto& alg : found) {
    auto v = validate_closed_g2(alg);
    if (!v.ok()) {
      ok = false;
      continue;
    }
    const auto& a = *v.algebra;
    if (!a.tau2.is_zero()) nonabelian = true;
    auto [p7, p14] = project_lambda2(a.tau2);
    (void)p14;
    ok = ok && p7.is_zero();
    ok = ok && (ce_differential(a.alg, g.psi()) == wedge(a.tau2, g.phi()));
    ok = ok && (a.curv.scal == Rational(-1, 2) * form_norm2(a.tau2));
    auto idrep = torsion_identities_check(a);
    ok = ok && idrep.ok();
  }
  report("7. certification: d(psi) = tau2 ^ phi, P7(tau2) = 0, tr Ric = -|tau2|^2/2, and the "
         "torsion differential identity, exactly, on " +
             std::to_string(found.size()) + " searched algebras; search took " +
             fmt(search_secs) + " s < 60 s",
         ok && nonabelian && search_secs < 60.0, search_secs + timer.seconds());
}

void criterion_8_oneill() {
  Timer timer;
  LieAlgebraData heis(7);
  heis.set_c(2, 0, 1, Rational(1));
  SubmersionSplit split{heis,
                        {Vector<Rational>::basis(7, 2), Vector<Rational>::basis(7, 3),
                         Vector<Rational>::basis(7, 4), Vector<Rational>::basis(7, 5),
                         Vector<Rational>::basis(7, 6)}};
  auto od = oneill_analysis(split);
  bool ok = od.curvature_identity_ok && od.a_half_bracket_ok && od.mixed_term_identity_ok;
  ok = ok && (od.a[0][1].norm2() == Rational(1, 4));
  // independent route: Koszul curvature of the total space
  auto cd = curvature_ricci(heis);
  ok = ok && (cd.sectional_numerator(od.h_onb[0], od.h_onb[1]) == Rational(-3, 4));
  ok = ok && (curvature_ricci(od.base).r4(0, 1, 1, 0) == 0);

  auto v0 = validate_closed_g2(LieAlgebraData::abelian());
  auto rep = cor_g2sub_check(*v0.algebra,
                             SubmersionSplit{LieAlgebraData::abelian(),
                                             {Vector<Rational>::basis(7, 3), Vector<Rational>::basis(7, 4),
                                              Vector<Rational>::basis(7, 5), Vector<Rational>::basis(7, 6)}});
  ok = ok && rep.premises_hold && rep.ric_base_zero && rep.ric_zero && rep.tau2_zero &&
       rep.dpsi_zero && rep.consistent;
  report("8. submersion tensors: curvature identity exact with |A_XY| = 1/2 and sectional -3/4 "
         "(independent Koszul route); flat coassociative corollary consistent",
         ok, timer.seconds());
}

void criterion_9_numeric_harness() {
  Timer timer;
  QuadratureSpec q;
  q.grid_n = 32;
  q.h_t = 1e-3;
  SphereFamily sphere(1.0);
  auto fv = first_variation_check(sphere, q);
  bool sphere_ok = fv.mismatch_rel < 1e-5;
  double sphere_secs = timer.seconds();

  QuadratureSpec qa;
  qa.grid_n = 12;
  AffineFiberFamily fam;
  double drift = 0;
  for (int step = 0; step <= 10; ++step)
    drift = std::max(drift, std::fabs(volume(fam, step / 10.0, qa) - 1.0));
  auto fva = first_variation_check(fam, qa);
  auto sva = second_variation_check(fam, qa);
  bool flat_ok = drift < 1e-12 && sva.moduli_rhs.has_value() && *sva.moduli_rhs == 0.0 &&
                 std::fabs(sva.d2vol_fd) < 1e-10 &&
                 fva.calibration_max_dev.value_or(1.0) < 1e-10;
  report("9. numeric harness: S4 first-variation relative mismatch " +
             fmt(fv.mismatch_rel) + " < 1e-5 at N=32 in " +
             fmt(sphere_secs) + " s < 30 s; flat fibration volume constant to 1e-12 "
             "with zero tensorial integrand and calibration to 1e-10",
         sphere_ok && sphere_secs < 30.0 && flat_ok, timer.seconds());
}

void criterion_10_density() {
  Timer timer;
  QuadratureSpec q;
  q.grid_n = 8;
  GraphFamily graph;
  bool ok = true;
  for (const Vec4& u : {Vec4{0.12, 0.34, 0.56, 0.78}, Vec4{0.81, 0.05, 0.47, 0.66},
                        Vec4{0.33, 0.9, 0.02, 0.58}}) {
    auto rep = density_second_derivative_check(graph, q, u);
    ok = ok && rep.dev_direct_classical < 1e-4;
    ok = ok && rep.dev_direct_coassoc < 1e-4;
    ok = ok && rep.dev_classical_coassoc < 1e-4;
    ok = ok && std::fabs(rep.coassociator_term - rep.normal_gradient_term) < 1e-4;
  }
  report("10. density-level f''(0): direct, frame-formula, and coassociator routes agree to 1e-4 "
         "on the graph family, including the finite-difference coassociator-rate term",
         ok, timer.seconds());
}

}  // namespace

int main() {
  criterion_1_model_fidelity();
  criterion_2_coassociator();
  criterion_3_i_map();
  criterion_4_alpha_f();
  criterion_5_b_forms();
  criterion_6_contraction_lemma();
  criterion_7_certification();
  criterion_8_oneill();
  criterion_9_numeric_harness();
  criterion_10_density();

  std::cout << "\nacceptance summary: " << passes << " passes, " << expected_failures
            << " expected documented failure(s), " << unexpected_failures
            << " unexpected failure(s)\n";
  return unexpected_failures == 0 ? 0 : 1;
}
