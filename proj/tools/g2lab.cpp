// g2lab command-line front end.
//
//   g2lab verify      run the pointwise identity suites
//   g2lab liealg      certify a Lie algebra from a structure-constants file
//   g2lab search      enumerate two-step algebras carrying the closed 3-form
//   g2lab variations  finite-difference volume-variation experiments
//
// Exit codes: 0 all checks pass, 1 some check failed, 2 usage/config error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include <g2lab/liegeom.hpp>
#include <g2lab/report.hpp>
#include <g2lab/variations.hpp>

namespace {

using namespace g2lab;

int cmd_verify(const RunConfig& cfg, const std::string& out_path, bool list_only) {
  if (list_only) {
    for (const auto& def : all_checks())
      std::cout << std::left << std::setw(28) << def.id << std::setw(12) << def.suite
                << def.statement << "\n";
    return 0;
  }
  auto reports = run_checks(cfg);
  if (reports.empty()) {
    std::cerr << "error: no checks match the requested suites\n";
    return 2;
  }
  print_check_table(std::cout, reports);
  if (!out_path.empty()) {
    std::ofstream os(out_path);
    if (!os) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return 2;
    }
    os << report_json("verify", cfg, reports).dump(2) << "\n";
  }
  for (const auto& r : reports)
    if (r.status == "fail") return 1;
  return 0;
}

std::string rational_str(const Rational& x) { return x.str(); }

int cmd_liealg(const std::string& path, const std::string& vertical_arg,
               const std::string& out_path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open " << path << "\n";
    return 2;
  }
  LieAlgebraData alg(7);
  try {
    alg = parse_structure_constants(in);
  } catch (const std::exception& e) {
    std::cerr << "parse error in " << path << ": " << e.what() << "\n";
    return 2;
  }
  if (alg.dim() != 7) {
    std::cerr << "error: certification needs a 7-dimensional algebra\n";
    return 2;
  }

  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["command"] = "liealg";
  j["input"] = path;

  auto v = validate_closed_g2(alg);
  if (!v.ok()) {
    std::cout << "REJECTED: " << v.rejection->reason << "\n";
    std::cout << "  d(phi) = " << v.rejection->dphi.str() << "\n";
    j["certified"] = false;
    j["reason"] = v.rejection->reason;
    j["dphi"] = v.rejection->dphi.str();
    if (!out_path.empty()) std::ofstream(out_path) << j.dump(2) << "\n";
    return 1;
  }
  const auto& a = *v.algebra;
  auto idrep = torsion_identities_check(a);
  std::cout << "certified: d(phi) = 0 with torsion 2-form in lambda2_14\n";
  std::cout << "  tau2        = " << a.tau2.str() << "\n";
  std::cout << "  |tau2|^2    = " << rational_str(form_norm2(a.tau2)) << "\n";
  std::cout << "  tr Ric      = " << rational_str(a.curv.scal) << "\n";
  std::cout << "  tr Ric + |tau2|^2/2            = " << rational_str(idrep.scalar_residual) << "\n";
  std::cout << "  d(tau2) - (1/2)*(tau2^tau2) + (1/2) i(Ric) = " << idrep.dtau2_residual.str()
            << "\n";
  j["certified"] = true;
  j["tau2"] = a.tau2.str();
  j["tau2_norm2"] = rational_str(form_norm2(a.tau2));
  j["tr_ric"] = rational_str(a.curv.scal);
  j["scalar_residual"] = rational_str(idrep.scalar_residual);
  j["dtau2_residual"] = idrep.dtau2_residual.str();

  bool all_ok = idrep.ok();

  if (!vertical_arg.empty()) {
    std::vector<int> idx;
    std::stringstream ss(vertical_arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        int i = std::stoi(tok);
        if (i < 1 || i > 7) throw std::out_of_range("index");
        idx.push_back(i - 1);
      } catch (const std::exception&) {
        std::cerr << "error: bad --vertical index '" << tok << "' (expected 1..7)\n";
        return 2;
      }
    }
    SubmersionSplit split{alg, {}};
    for (int i : idx) split.vertical.push_back(Vector<Rational>::basis(7, i));
    try {
      auto od = oneill_analysis(split);
      std::cout << "submersion split (vertical = " << vertical_arg << "):\n";
      std::cout << "  A == 0: " << od.a_zero << "   T == 0: " << od.t_zero << "\n";
      std::cout << "  A = [X,Y]^v/2: " << od.a_half_bracket_ok
                << "   curvature identity: " << od.curvature_identity_ok
                << "   mixed-term identity: " << od.mixed_term_identity_ok << "\n";
      j["submersion"] = {{"a_zero", od.a_zero},
                         {"t_zero", od.t_zero},
                         {"a_half_bracket_ok", od.a_half_bracket_ok},
                         {"curvature_identity_ok", od.curvature_identity_ok},
                         {"mixed_term_identity_ok", od.mixed_term_identity_ok}};
      all_ok = all_ok && od.a_half_bracket_ok && od.curvature_identity_ok &&
               od.mixed_term_identity_ok;
      if (idx.size() == 4) {
        auto rep = cor_g2sub_check(a, split);
        std::cout << "  coassociative corollary: premises " << (rep.premises_hold ? "hold" : "fail")
                  << " (A==0: " << rep.a_zero << ", T==0: " << rep.t_zero << ")";
        if (rep.premises_hold)
          std::cout << "; conclusions Ric_base=0: " << rep.ric_base_zero
                    << " Ric=0: " << rep.ric_zero << " tau2=0: " << rep.tau2_zero
                    << " dpsi=0: " << rep.dpsi_zero;
        std::cout << "; consistent: " << rep.consistent << "\n";
        j["corollary"] = {{"premises_hold", rep.premises_hold},
                          {"a_zero", rep.a_zero},
                          {"t_zero", rep.t_zero},
                          {"ric_base_zero", rep.ric_base_zero},
                          {"ric_zero", rep.ric_zero},
                          {"tau2_zero", rep.tau2_zero},
                          {"dpsi_zero", rep.dpsi_zero},
                          {"consistent", rep.consistent}};
        all_ok = all_ok && rep.consistent;
      }
    } catch (const contract_error& e) {
      std::cerr << "submersion error: " << e.what() << "\n";
      return 2;
    }
  }

  if (!out_path.empty()) std::ofstream(out_path) << j.dump(2) << "\n";
  return all_ok ? 0 : 1;
}

int cmd_search(const std::string& coeff_arg, int max_derived, const std::string& out_dir) {
  SearchConfig cfg;
  cfg.max_derived_dim = max_derived;
  cfg.coefficients.clear();
  std::stringstream ss(coeff_arg);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      cfg.coefficients.push_back(parse_rational(tok));
    } catch (const std::exception&) {
      std::cerr << "error: bad coefficient '" << tok << "'\n";
      return 2;
    }
  }
  if (cfg.coefficients.empty()) {
    std::cerr << "error: empty coefficient set\n";
    return 2;
  }
  auto found = search_closed_g2(cfg);
  std::cout << "found " << found.size() << " algebras (deduplicated)\n";
  std::cout << std::left << std::setw(8) << "index" << std::setw(14) << "derived_dim"
            << "  |tau2|^2\n";
  std::ostringstream summary;
  summary << "index derived_dim tau2_norm2\n";
  for (size_t i = 0; i < found.size(); ++i) {
    auto v = validate_closed_g2(found[i]);
    Rational n2 = form_norm2(v.algebra->tau2);
    std::cout << std::left << std::setw(8) << i << std::setw(14)
              << found[i].derived_dimension() << "  " << n2.str() << "\n";
    summary << i << " " << found[i].derived_dimension() << " " << n2.str() << "\n";
    if (!out_dir.empty()) {
      std::filesystem::create_directories(out_dir);
      std::ostringstream name;
      name << out_dir << "/g2_closed_" << std::setw(2) << std::setfill('0') << i << ".txt";
      std::ofstream os(name.str());
      os << format_structure_constants(found[i], "certified closed two-step algebra, |tau2|^2 = " +
                                                     n2.str());
    }
  }
  if (!out_dir.empty()) {
    std::ofstream os(out_dir + "/summary.txt");
    os << summary.str();
  }
  return 0;
}

int cmd_variations(const std::string& family, int grid, double h_t, bool richardson,
                   double t_min, double t_max, int steps, const std::string& csv_path,
                   const std::string& report_path) {
  std::unique_ptr<ImmersionFamily> fam;
  try {
    fam = make_family(family);
  } catch (const contract_error&) {
    std::cerr << "error: unknown family '" << family << "'; registry:";
    for (const auto& n : family_registry()) std::cerr << " " << n;
    std::cerr << "\n";
    return 2;
  }
  QuadratureSpec q;
  q.grid_n = grid;
  q.h_t = h_t;
  q.richardson = richardson;

  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["command"] = "variations";
  j["family"] = family;
  j["grid_n"] = grid;
  j["h_t"] = h_t;

  std::ostringstream csv;
  csv << "t,vol,dvol,d2vol\n";
  csv << std::setprecision(17);
  for (int s = 0; s < steps; ++s) {
    double t = steps == 1 ? t_min : t_min + (t_max - t_min) * s / (steps - 1);
    double v = volume(*fam, t, q);
    double vp = volume(*fam, t + q.h_t, q), vm = volume(*fam, t - q.h_t, q);
    double dv = (vp - vm) / (2 * q.h_t);
    double d2v = (vp - 2 * v + vm) / (q.h_t * q.h_t);
    csv << t << "," << v << "," << dv << "," << d2v << "\n";
  }
  if (!csv_path.empty()) {
    std::ofstream os(csv_path);
    if (!os) {
      std::cerr << "error: cannot write " << csv_path << "\n";
      return 2;
    }
    os << csv.str();
  } else {
    std::cout << csv.str();
  }

  bool ok = true;
  auto fv = first_variation_check(*fam, q);
  std::cout << "first variation: dVol_fd = " << fv.dvol_fd << "  -int H.Z = " << fv.integral
            << "  rel mismatch = " << fv.mismatch_rel << "\n";
  j["first_variation"] = {{"dvol_fd", fv.dvol_fd},
                          {"integral", fv.integral},
                          {"mismatch_abs", fv.mismatch_abs},
                          {"mismatch_rel", fv.mismatch_rel}};
  if (fv.calibration_max_dev) {
    std::cout << "  calibration max |psi/vol - 1| = " << *fv.calibration_max_dev << "\n";
    j["first_variation"]["calibration_max_dev"] = *fv.calibration_max_dev;
    ok = ok && *fv.calibration_max_dev < 1e-10;
  }

  try {
    auto sv = second_variation_check(*fam, q);
    std::cout << "second variation: d2Vol_fd = " << sv.d2vol_fd
              << "  integrand = " << sv.integrand_quadrature
              << "  rel mismatch = " << sv.mismatch_rel << "\n";
    j["second_variation"] = {{"d2vol_fd", sv.d2vol_fd},
                             {"integrand", sv.integrand_quadrature},
                             {"mismatch_abs", sv.mismatch_abs},
                             {"mismatch_rel", sv.mismatch_rel},
                             {"max_h", sv.max_h}};
  } catch (const contract_error& e) {
    std::cout << "second variation: refused (" << e.what() << ")\n";
    j["second_variation"] = {{"refused", e.what()}};
  }

  if (fam->coassociative()) {
    try {
      auto dr = density_second_derivative_check(*fam, q, {0.12, 0.34, 0.56, 0.78});
      std::cout << "density f''(0) three ways: " << dr.direct_fd << " / " << dr.classical_formula
                << " / " << dr.coassoc_formula << "\n";
      j["density_check"] = {{"direct_fd", dr.direct_fd},
                            {"classical", dr.classical_formula},
                            {"coassociative", dr.coassoc_formula},
                            {"dev_direct_classical", dr.dev_direct_classical},
                            {"dev_direct_coassoc", dr.dev_direct_coassoc}};
    } catch (const contract_error& e) {
      std::cout << "density check: refused (" << e.what() << ")\n";
      j["density_check"] = {{"refused", e.what()}};
    }
  }
  if (!report_path.empty()) std::ofstream(report_path) << j.dump(2) << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exterior-calculus verification toolkit for the model 3-form on R^7"};
  app.require_subcommand(1);

  // verify
  auto* verify = app.add_subcommand("verify", "run the pointwise identity suites");
  RunConfig cfg;
  std::vector<std::string> tol_args;
  std::string mode_arg = "exact", out_path;
  long trials = 0;
  bool list_only = false;
  verify->add_option("--seed", cfg.seed, "run seed (determines all randomized inputs)");
  verify->add_option("--trials", trials, "override the per-check trial counts");
  verify->add_option("--mode", mode_arg, "scalar mode: exact | float")
      ->check(CLI::IsMember({"exact", "float"}));
  verify->add_option("--tolerance", tol_args, "per-check tolerance override, check=value");
  verify->add_option("--suite", cfg.suites, "restrict to a suite or check id");
  verify->add_option("--out", out_path, "write the JSON report here");
  verify->add_option("--threads", cfg.threads, "worker pool size (or env G2LAB_THREADS)");
  verify->add_flag("--list", list_only, "list available checks and exit");

  // liealg
  auto* liealg = app.add_subcommand("liealg", "certify a structure-constants file");
  std::string alg_path, vertical_arg, liealg_out;
  liealg->add_option("file", alg_path, "input file: lines 'c k i j = p/q', '#' comments")
      ->required();
  liealg->add_option("--vertical", vertical_arg, "comma-separated 1-based vertical indices");
  liealg->add_option("--out", liealg_out, "write the JSON report here");

  // search
  auto* search = app.add_subcommand("search", "enumerate two-step algebras with closed 3-form");
  std::string coeff_arg = "0,1,-1", out_dir;
  int max_derived = 3;
  search->add_option("--coeffs", coeff_arg, "comma-separated coefficient set (rationals)");
  search->add_option("--max-derived", max_derived, "bound on the derived-algebra dimension");
  search->add_option("--out-dir", out_dir, "write algebra files and summary.txt here");

  // variations
  auto* variations = app.add_subcommand("variations", "volume-variation experiments");
  std::string family;
  int grid = 16, steps = 11;
  double h_t = 1e-3, t_min = 0.0, t_max = 0.5;
  bool richardson = false;
  variations->add_option("--family", family, "immersion family name")->required();
  variations->add_option("--grid", grid, "grid resolution per axis");
  variations->add_option("--h-t", h_t, "time step for finite differences");
  variations->add_option("--t-min", t_min, "CSV range start");
  variations->add_option("--t-max", t_max, "CSV range end");
  variations->add_option("--steps", steps, "CSV sample count");
  variations->add_flag("--richardson", richardson, "Richardson-extrapolated second differences");
  std::string csv_path, var_report;
  variations->add_option("--out", csv_path, "write the (t, Vol, dVol, d2Vol) CSV here");
  variations->add_option("--report", var_report, "write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed()) {
      if (trials > 0) cfg.trials_override = trials;
      cfg.mode = mode_arg == "float" ? ScalarMode::floating : ScalarMode::exact;
      for (const auto& t : tol_args) {
        auto eq = t.find('=');
        if (eq == std::string::npos) {
          std::cerr << "error: --tolerance expects check=value\n";
          return 2;
        }
        try {
          cfg.tolerance_overrides[t.substr(0, eq)] = std::stod(t.substr(eq + 1));
        } catch (const std::exception&) {
          std::cerr << "error: bad tolerance value in '" << t << "'\n";
          return 2;
        }
      }
      return cmd_verify(cfg, out_path, list_only);
    }
    if (liealg->parsed()) return cmd_liealg(alg_path, vertical_arg, liealg_out);
    if (search->parsed()) return cmd_search(coeff_arg, max_derived, out_dir);
    if (variations->parsed())
      return cmd_variations(family, grid, h_t, richardson, t_min, t_max, steps, csv_path,
                            var_report);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
