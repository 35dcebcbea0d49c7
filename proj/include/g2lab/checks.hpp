// Named pointwise check suites behind the `verify` command: every check is a
// seeded property run returning its worst residual.  Exact-mode checks pass
// only on residual exactly zero; float-mode checks compare against a
// per-check tolerance (overridable from the command line).
//
// Reports with the same seed and configuration are byte-identical; wall-clock
// times are therefore kept out of the serialized report and only shown on the
// console.

#ifndef G2LAB_CHECKS_HPP
#define G2LAB_CHECKS_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "generators.hpp"
#include "identities.hpp"

namespace g2lab {

enum class ScalarMode { exact, floating };

inline std::string mode_name(ScalarMode m) { return m == ScalarMode::exact ? "exact" : "float"; }

struct RunConfig {
  std::uint64_t seed = 7;
  std::optional<long> trials_override;
  ScalarMode mode = ScalarMode::exact;
  std::map<std::string, double> tolerance_overrides;
  std::vector<std::string> suites;  // empty: all; entries match suite names or check ids
  int threads = 0;                  // 0: use G2LAB_THREADS or hardware_concurrency
};

struct CheckReport {
  std::string check_id;
  std::string statement;
  std::string status;  // pass | fail | skip
  double max_residual = 0;
  double tolerance = 0;
  long trials = 0;
  long elapsed_ms = 0;  // console only, never serialized
  std::string mode;
};

struct CheckDef {
  std::string id;
  std::string suite;
  std::string statement;
  double float_tolerance;
  long default_trials;
  bool float_capable;
  // returns the worst residual over the run
  std::function<double(ScalarMode, std::uint64_t seed, long trials)> run;
};

namespace checks_detail {

template <class S>
double residual_of(const KForm<S>& f) {
  return f.max_abs();
}
template <class S>
double residual_of(const Vector<S>& v) {
  double m = 0;
  for (int i = 0; i < v.dim(); ++i) m = std::max(m, std::fabs(to_double(v[i])));
  return m;
}
template <class S>
double residual_of(const S& x) {
  return std::fabs(to_double(x));
}

template <class S>
double check_wedge_comm(std::uint64_t seed, long trials) {
  double worst = 0;
  for (long t = 0; t < trials; ++t) {
    Rng rng(trial_seed(seed, "wedge-graded-commutativity", t));
    int p = static_cast<int>(rng.uniform_int(0, 3));
    int q = static_cast<int>(rng.uniform_int(0, 3));
    auto a = gen::random_form<S>(rng, 7, p);
    auto b = gen::random_form<S>(rng, 7, q);
    auto c = gen::random_form<S>(rng, 7, q);
    S s = rng.small_scalar<S>();
    worst = std::max(worst, residual_of(KForm<S>(wedge(a, b + s * c) - wedge(a, b) - s * wedge(a, c))));
    S sign = (p * q) % 2 == 0 ? S(1) : S(-1);
    worst = std::max(worst, residual_of(KForm<S>(wedge(a, b) - sign * wedge(b, a))));
  }
  return worst;
}

template <class S>
double check_interior_antiderivation(std::uint64_t seed, long trials) {
  double worst = 0;
  for (long t = 0; t < trials; ++t) {
    Rng rng(trial_seed(seed, "interior-antiderivation", t));
    int p = static_cast<int>(rng.uniform_int(1, 3));
    int q = static_cast<int>(rng.uniform_int(1, 3));
    auto a = gen::random_form<S>(rng, 7, p);
    auto b = gen::random_form<S>(rng, 7, q);
    auto v = gen::random_vector<S>(rng, 7);
    S sign = p % 2 == 0 ? S(1) : S(-1);
    auto lhs = interior(v, wedge(a, b));
    auto rhs = wedge(interior(v, a), b) + sign * wedge(a, interior(v, b));
    worst = std::max(worst, residual_of(KForm<S>(lhs - rhs)));
    if (p >= 2) worst = std::max(worst, residual_of(interior(v, interior(v, a))));
  }
  return worst;
}

template <class S>
double check_hodge_isometry(std::uint64_t seed, long trials) {
  double worst = 0;
  for (long t = 0; t < trials; ++t) {
    Rng rng(trial_seed(seed, "hodge-isometry", t));
    int k = static_cast<int>(rng.uniform_int(0, 7));
    auto a = gen::random_form<S>(rng, 7, k);
    auto b = gen::random_form<S>(rng, 7, k);
    worst = std::max(worst, residual_of(KForm<S>(hodge(hodge(a)) - a)));
    worst = std::max(worst, residual_of(S(form_inner(hodge(a), hodge(b)) - form_inner(a, b))));
  }
  return worst;
}

template <class S>
double check_kvector_gram(std::uint64_t seed, long trials) {
  double worst = 0;
  for (long t = 0; t < trials; ++t) {
    Rng rng(trial_seed(seed, "kvector-gram", t));
    int k = static_cast<int>(rng.uniform_int(1, 4));
    std::vector<Vector<S>> vs;
    for (int i = 0; i < k; ++i) vs.push_back(gen::random_vector<S>(rng, 7));
    S lhs = form_norm2(simple_kvector(std::span<const Vector<S>>(vs)));
    S rhs = determinant(gram(std::span<const Vector<S>>(vs)));
    worst = std::max(worst, residual_of(S(lhs - rhs)));
  }
  return worst;
}

template <class S>
double check_model_fidelity(std::uint64_t, long) {
  const auto& g = G2Structure<S>::model();
  // coefficient-exact model displays
  KForm<S> phi_model = KForm<S>::monomial(7, {0, 1, 2}) + KForm<S>::monomial(7, {0, 3, 4}) +
                       KForm<S>::monomial(7, {0, 5, 6}) + KForm<S>::monomial(7, {1, 3, 5}) -
                       KForm<S>::monomial(7, {1, 4, 6}) - KForm<S>::monomial(7, {2, 3, 6}) -
                       KForm<S>::monomial(7, {2, 4, 5});
  KForm<S> psi_model = KForm<S>::monomial(7, {3, 4, 5, 6}) + KForm<S>::monomial(7, {1, 2, 3, 4}) +
                       KForm<S>::monomial(7, {1, 2, 5, 6}) - KForm<S>::monomial(7, {0, 2, 3, 5}) +
                       KForm<S>::monomial(7, {0, 2, 4, 6}) - KForm<S>::monomial(7, {0, 1, 3, 6}) -
                       KForm<S>::monomial(7, {0, 1, 4, 5});
  double worst = residual_of(KForm<S>(g.phi() - phi_model));
  worst = std::max(worst, residual_of(KForm<S>(hodge(g.phi()) - psi_model)));
  worst = std::max(worst, residual_of(S(form_inner(g.phi(), g.phi()) - S(7))));
  return worst;
}

template <class S>
double check_coassociator(std::uint64_t seed, long trials) {
  const auto& g = G2Structure<S>::model();
  double worst = 0;
  for (long t = 0; t < trials; ++t) {
    Rng rng(trial_seed(seed, "coassociator-identity", t));
    std::array<Vector<S>, 4> vs;
    for (auto& v : vs) v = gen::random_vector<S>(rng, 7);
    S p = eval(g.psi(), std::span<const Vector<S>>(vs));
    S cn = coassociator(vs[0], vs[1], vs[2], vs[3]).norm2();
    S gd = determinant(gram(std::span<const Vector<S>>(vs)));
    worst = std::max(worst, residual_of(S(p * p + cn - gd)));
  }
  return worst;
}

inline double check_calibration(std::uint64_t seed, long trials) {
  const auto& gd = G2Structure<double>::model();
  double worst = 0;
  for (long t = 0; t < trials; ++t) {
    Rng rng(trial_seed(seed, "calibration-defect", t));
    std::vector<Vector<double>> vs;
    for (int i = 0; i < 4; ++i) vs.push_back(gen::random_vector<double>(rng, 7));
    OrientedPlane<double> p(7, vs);
    auto res = calibration_defect(p);
    worst = std::max(worst, std::max(0.0, std::fabs(res.psi_value) - 1.0));
    auto cvec = coassociator(p.onb()[0], p.onb()[1], p.onb()[2], p.onb()[3]);
    worst = std::max(worst, std::fabs(res.defect - cvec.norm2()));
    // defect ~ 0 must coincide with phi restricting to ~ 0
    bool dz = std::fabs(res.defect) < 1e-10;
    bool pz = restrict(gd.phi(), p).is_zero(1e-5);
    if (dz != pz) worst = std::max(worst, 1.0);
  }
  return worst;
}

template <class S>
double check_lambda2(std::uint64_t seed, long trials) {
  double worst = 0;
  for (long t = 0; t < trials; ++t) {
    Rng rng(trial_seed(seed, "lambda2-projectors", t));
    auto a = gen::random_form<S>(rng, 7, 2);
    auto [p7, p14] = project_lambda2(a);
    worst = std::max(worst, residual_of(KForm<S>(p7 + p14 - a)));
    auto [p77, p714] = project_lambda2(p7);
    worst = std::max(worst, residual_of(KForm<S>(p77 - p7)));
    worst = std::max(worst, residual_of(p714));
    auto [p147, p1414] = project_lambda2(p14);
    worst = std::max(worst, residual_of(p147));
    worst = std::max(worst, residual_of(KForm<S>(p1414 - p14)));
  }
  return worst;
}

template <class S>
double check_lambda3(std::uint64_t seed, long trials) {
  double worst = 0;
  for (long t = 0; t < trials; ++t) {
    Rng rng(trial_seed(seed, "lambda3-projectors", t));
    auto a = gen::random_form<S>(rng, 7, 3);
    auto [a1, a7, a27] = project_lambda3(a);
    worst = std::max(worst, residual_of(KForm<S>(a1 + a7 + a27 - a)));
    worst = std::max(worst, residual_of(S(form_inner(a1, a7))));
    worst = std::max(worst, residual_of(S(form_inner(a1, a27))));
    worst = std::max(worst, residual_of(S(form_inner(a7, a27))));
  }
  return worst;
}

template <class S>
double check_i_map(std::uint64_t seed, long trials) {
  const auto& g = G2Structure<S>::model();
  double worst = residual_of(KForm<S>(i_map(Matrix<S>::identity(7)) - S(6) * g.phi()));
  for (long t = 0; t < trials; ++t) {
    Rng rng(trial_seed(seed, "i-map", t));
    auto h = gen::random_symmetric<S>(rng, 7);
    auto c = interior(Vector<S>::basis(7, 0), i_map(h));
    auto H = [&](int i, int j) { return h(i - 1, j - 1); };
    S two(2);
    worst = std::max(worst, residual_of(S(c.coeff({3, 4}) - (H(1, 1) + two * H(4, 4)) - (H(1, 1) + two * H(5, 5)))));
    worst = std::max(worst, residual_of(S(c.coeff({5, 6}) - (H(1, 1) + two * H(6, 6)) - (H(1, 1) + two * H(7, 7)))));
    worst = std::max(worst, residual_of(S(c.coeff({3, 5}) - (H(1, 2) - two * H(4, 7)) - (H(1, 2) + two * H(5, 6)))));
    worst = std::max(worst, residual_of(S(c.coeff({4, 6}) - (-H(1, 2) + two * H(5, 6)) + (H(1, 2) + two * H(4, 7)))));
    worst = std::max(worst, residual_of(S(c.coeff({3, 6}) - (-H(1, 3) + two * H(4, 6)) + (H(1, 3) - two * H(5, 7)))));
    worst = std::max(worst, residual_of(S(c.coeff({4, 5}) - (-H(1, 3) - two * H(5, 7)) + (H(1, 3) + two * H(4, 6)))));
  }
  return worst;
}

template <class S>
double check_equivariance(std::uint64_t seed, long trials) {
  static const std::vector<Matrix<S>> basis = g2_lie_algebra<S>();
  double worst = 0;
  for (long t = 0; t < trials; ++t) {
    Rng rng(trial_seed(seed, "g2-equivariance", t));
    const auto& a = basis[rng.uniform_int(0, 13)];
    auto h = gen::random_symmetric<S>(rng, 7);
    Matrix<S> ah = a * h - h * a;
    worst = std::max(worst, residual_of(KForm<S>(i_map(ah) - so7_action(a, i_map(h)))));
  }
  return worst;
}

template <class S>
double check_normal_selfdual(std::uint64_t seed, long trials) {
  const auto& f = CoassocFrame<S>::model();
  double worst = 0;
  for (long t = 0; t < trials; ++t) {
    Rng rng(trial_seed(seed, "normal-selfdual", t));
    auto z = gen::random_normal_vector<S>(rng);
    auto img = normal_to_selfdual(z, f);
    worst = std::max(worst, residual_of(antiselfdual_part(img)));
    worst = std::max(worst, residual_of(S(form_norm2(img) - S(2) * z.norm2())));
  }
  return worst;
}

template <class S>
double check_alpha_f(std::uint64_t seed, long trials) {
  double worst = 0;
  for (long t = 0; t < trials; ++t) {
    Rng rng(trial_seed(seed, "alpha-f-antiselfdual", t));
    auto alpha = gen::random_selfdual4<S>(rng);
    auto f = gen::random_symmetric_tracefree<S>(rng, 4);
    worst = std::max(worst, residual_of(selfdual_part(two_slot_insertion(alpha, f))));
  }
  return worst;
}

template <class S>
double check_b_w_form(std::uint64_t seed, long trials) {
  const auto& frame = CoassocFrame<S>::model();
  auto e = [](int i) { return Vector<S>::basis(7, i); };
  KForm<S> vol4(4, 4);
  vol4[0] = S(2);
  double worst = residual_of(KForm<S>(check_b_w(e(0), e(1), e(2), frame) - vol4));
  for (long t = 0; t < trials; ++t) {
    Rng rng(trial_seed(seed, "b-w-form", t));
    auto w = gen::random_vector<S>(rng, 7);
    auto z = gen::random_normal_vector<S>(rng);
    worst = std::max(worst, residual_of(check_b_w(w, z, z, frame)));
  }
  return worst;
}

template <class S>
double check_b_h_form(std::uint64_t seed, long trials) {
  const auto& frame = CoassocFrame<S>::model();
  double worst = 0;
  for (long t = 0; t < trials; ++t) {
    Rng rng(trial_seed(seed, "b-h-form", t));
    auto h = gen::random_symmetric<S>(rng, 7);
    auto z1 = gen::random_normal_vector<S>(rng);
    auto z2 = gen::random_normal_vector<S>(rng);
    S coeff = S(4) * bilinear(h, z1, z2) + S(2) * restricted_trace(h, frame.plane()) * z1.dot(z2);
    KForm<S> expect(4, 4);
    expect[0] = coeff;
    worst = std::max(worst, residual_of(KForm<S>(check_b_h(h, z1, z2, frame) - expect)));
  }
  return worst;
}

template <class S>
VariationPointData<S> random_point_data(Rng& rng) {
  auto tau = gen::random_lambda2_14<S>(rng);
  auto ric = gen::random_symmetric<S>(rng, 7);
  auto z = gen::random_normal_vector<S>(rng);
  Matrix<S> dz(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) dz(i, j) = rng.small_scalar<S>();
  return VariationPointData<S>(tau, ric, z, ShapeData<S>(CoassocFrame<S>::model(), dz),
                               scalar_traits<S>::exact ? kFloatTolerance : 1e-8);
}

template <class S>
double check_dtau2_contraction(std::uint64_t seed, long trials) {
  double worst = 0;
  for (long t = 0; t < trials; ++t) {
    Rng rng(trial_seed(seed, "dtau2-contraction", t));
    auto d = random_point_data<S>(rng);
    worst = std::max(worst,
                     residual_of(S(lemma_dtau2_residual(d) - lemma_correction_coefficient(d))));
  }
  return worst;
}

template <class S>
double check_secvar_assembly(std::uint64_t seed, long trials) {
  double worst = 0;
  for (long t = 0; t < trials; ++t) {
    Rng rng(trial_seed(seed, "secvar-assembly", t));
    auto d = random_point_data<S>(rng);
    auto assembled =
        wedge(restrict(d.tau2, d.shape.frame.plane()), gamma_z(d)) + lemma_dtau2_lhs(d);
    KForm<S> corr(4, 4);
    corr[0] = lemma_correction_coefficient(d);
    worst = std::max(worst, residual_of(KForm<S>(assembled - secvar_integrand(d) - corr)));
  }
  return worst;
}

template <class S>
double check_fv_density(std::uint64_t seed, long trials) {
  const auto& frame = CoassocFrame<S>::model();
  double worst = 0;
  // regression: tau2 restricting to e45 + e67 identifies H = -e1
  {
    auto tau = KForm<S>::monomial(7, {3, 4}) + KForm<S>::monomial(7, {5, 6}) -
               S(2) * KForm<S>::monomial(7, {1, 2});
    auto r = first_variation_density(tau, Vector<S>::basis(7, 0), frame);
    worst = std::max(worst, residual_of(Vector<S>(r.mean_curvature + Vector<S>::basis(7, 0))));
  }
  for (long t = 0; t < trials; ++t) {
    Rng rng(trial_seed(seed, "first-variation-density", t));
    auto tau = gen::random_lambda2_14<S>(rng);
    auto z = gen::random_normal_vector<S>(rng);
    auto r = first_variation_density(tau, z, frame);
    // the identification inverts exactly: -(H _| phi)|_plane = tau2|_plane^+
    KForm<S> back = -normal_to_selfdual(r.mean_curvature, frame);
    worst = std::max(worst,
                     residual_of(KForm<S>(back - selfdual_part(restrict(tau, frame.plane())))));
  }
  return worst;
}

}  // namespace checks_detail

inline const std::vector<CheckDef>& all_checks() {
  using namespace checks_detail;
  auto wrap_both = [](auto fn_exact, auto fn_float) {
    return [fn_exact, fn_float](ScalarMode m, std::uint64_t seed, long trials) {
      return m == ScalarMode::exact ? fn_exact(seed, trials) : fn_float(seed, trials);
    };
  };
#define G2LAB_BOTH(fn) wrap_both(&fn<Rational>, &fn<double>)
  static const std::vector<CheckDef> defs = {
      {"wedge-graded-commutativity", "exterior", "a^b = (-1)^{pq} b^a and bilinearity", 1e-10, 1000,
       true, G2LAB_BOTH(check_wedge_comm)},
      {"interior-antiderivation", "exterior",
       "i_v(a^b) = (i_v a)^b + (-1)^p a^(i_v b); i_v i_v = 0", 1e-10, 1000, true,
       G2LAB_BOTH(check_interior_antiderivation)},
      {"hodge-isometry", "exterior", "<*a,*b> = <a,b> and ** = id in dim 7", 1e-10, 400, true,
       G2LAB_BOTH(check_hodge_isometry)},
      {"kvector-gram", "exterior", "|v1^...^vk|^2 = det Gram(v)", 1e-9, 300, true,
       G2LAB_BOTH(check_kvector_gram)},
      {"model-fidelity", "g2", "*phi = psi coefficient-exact; |phi|^2 = 7", 1e-14, 1, true,
       G2LAB_BOTH(check_model_fidelity)},
      {"coassociator-identity", "g2", "psi(v)^2 + |C(v)|^2 = |v1^v2^v3^v4|^2", 1e-9, 1000, true,
       G2LAB_BOTH(check_coassociator)},
      {"calibration-defect", "g2", "psi|_pi in [-1,1]; defect = |C|^2; defect = 0 iff phi|_pi = 0",
       1e-10, 10000, true,
       [](ScalarMode m, std::uint64_t seed, long trials) {
         if (m == ScalarMode::exact) return -1.0;  // needs float orthonormalization
         return check_calibration(seed, trials);
       }},
      {"lambda2-projectors", "g2", "P7 + P14 = id, P^2 = P, P7 P14 = 0", 1e-10, 300, true,
       G2LAB_BOTH(check_lambda2)},
      {"lambda3-projectors", "g2", "a = a1 + a7 + a27, mutually orthogonal", 1e-10, 120, true,
       G2LAB_BOTH(check_lambda3)},
      {"i-map", "g2", "i(g) = 6 phi; e1-contraction coefficient display", 1e-10, 100, true,
       G2LAB_BOTH(check_i_map)},
      {"g2-equivariance", "g2", "i([A,h]) = A.i(h) for stabilizer elements A", 1e-9, 60, true,
       G2LAB_BOTH(check_equivariance)},
      {"normal-selfdual", "g2", "P_-((Z _| phi)|_plane) = 0; |image|^2 = 2|Z|^2", 1e-10, 300, true,
       G2LAB_BOTH(check_normal_selfdual)},
      {"alpha-f-antiselfdual", "g2", "alpha_f anti-self-dual for self-dual alpha, trace-free sym f",
       1e-10, 1000, true, G2LAB_BOTH(check_alpha_f)},
      {"b-w-form", "identities", "B(e1,e2,e3) = 2 vol4; B_W(Z,Z) = 0", 1e-10, 1000, true,
       G2LAB_BOTH(check_b_w_form)},
      {"b-h-form", "identities", "B_h(Z1,Z2) = (4h(Z1,Z2) + 2 tr(h|plane) g(Z1,Z2)) vol4", 1e-9,
       1000, true, G2LAB_BOTH(check_b_h_form)},
      {"dtau2-contraction", "identities",
       "(Z _| dtau2)^(Z _| phi)|plane + (2Ric(Z,Z) + |Z|^2 tr(Ric|plane)) vol4 = "
       "(|Z _| tau2|^2 - (1/2)|Z|^2 tr(tau2_gram|normal)) vol4",
       1e-9, 1000, true, G2LAB_BOTH(check_dtau2_contraction)},
      {"secvar-assembly", "identities",
       "tau2^gamma_Z + contraction-LHS - integrand = correction vol4", 1e-9, 500, true,
       G2LAB_BOTH(check_secvar_assembly)},
      {"first-variation-density", "identities",
       "-(H _| phi)|_plane = tau2|_plane^+ (mean-curvature identification)", 1e-10, 200, true,
       G2LAB_BOTH(check_fv_density)},
  };
#undef G2LAB_BOTH
  return defs;
}

inline int thread_budget(const RunConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  if (const char* env = std::getenv("G2LAB_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

inline bool check_selected(const CheckDef& def, const RunConfig& cfg) {
  if (cfg.suites.empty()) return true;
  for (const auto& s : cfg.suites)
    if (s == def.suite || s == def.id) return true;
  return false;
}

/// Run the selected checks on a worker pool; results ordered by check id.
inline std::vector<CheckReport> run_checks(const RunConfig& cfg) {
  std::vector<const CheckDef*> selected;
  for (const auto& def : all_checks())
    if (check_selected(def, cfg)) selected.push_back(&def);

  std::vector<CheckReport> reports(selected.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= selected.size()) return;
      const CheckDef& def = *selected[i];
      CheckReport rep;
      rep.check_id = def.id;
      rep.statement = def.statement;
      rep.mode = mode_name(cfg.mode);
      rep.trials = cfg.trials_override.value_or(def.default_trials);
      double tol = 0;
      if (cfg.mode == ScalarMode::floating) {
        auto it = cfg.tolerance_overrides.find(def.id);
        tol = it != cfg.tolerance_overrides.end() ? it->second : def.float_tolerance;
      }
      rep.tolerance = tol;
      auto t0 = std::chrono::steady_clock::now();
      double residual = def.run(cfg.mode, cfg.seed, rep.trials);
      auto t1 = std::chrono::steady_clock::now();
      rep.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
      if (residual < 0) {
        rep.status = "skip";
        rep.max_residual = 0;
      } else {
        rep.max_residual = residual;
        rep.status = residual <= tol ? "pass" : "fail";
      }
      reports[i] = rep;
    }
  };
  int nthreads = std::min<int>(thread_budget(cfg), static_cast<int>(selected.size()));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  std::sort(reports.begin(), reports.end(),
            [](const CheckReport& a, const CheckReport& b) { return a.check_id < b.check_id; });
  return reports;
}

}  // namespace g2lab

#endif
