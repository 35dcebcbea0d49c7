// Numeric immersion harness on flat model spaces: quadrature volumes,
// discrete mean curvature, and finite-difference checks of the first and
// second variation of volume for a closed registry of immersion families.
//
// Everything here is double-precision; grid reductions use a fixed summation
// order so reports are reproducible run to run.

#ifndef G2LAB_VARIATIONS_HPP
#define G2LAB_VARIATIONS_HPP

#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "g2.hpp"

namespace g2lab {

using Vec4 = std::array<double, 4>;
using Vec7 = std::array<double, 7>;

namespace vec {
inline Vec7 zero7() { return {0, 0, 0, 0, 0, 0, 0}; }
inline double dot(const Vec7& a, const Vec7& b) {
  double s = 0;
  for (int i = 0; i < 7; ++i) s += a[i] * b[i];
  return s;
}
inline Vec7 add(const Vec7& a, const Vec7& b) {
  Vec7 r;
  for (int i = 0; i < 7; ++i) r[i] = a[i] + b[i];
  return r;
}
inline Vec7 sub(const Vec7& a, const Vec7& b) {
  Vec7 r;
  for (int i = 0; i < 7; ++i) r[i] = a[i] - b[i];
  return r;
}
inline Vec7 scale(double c, const Vec7& a) {
  Vec7 r;
  for (int i = 0; i < 7; ++i) r[i] = c * a[i];
  return r;
}
inline double norm(const Vec7& a) { return std::sqrt(dot(a, a)); }
inline Vector<double> to_vector(const Vec7& a) {
  Vector<double> v(7);
  for (int i = 0; i < 7; ++i) v[i] = a[i];
  return v;
}
}  // namespace vec

/// Grid resolution and finite-difference steps.
struct QuadratureSpec {
  int grid_n = 16;      // nodes per axis (>= 8 for production runs)
  double h_t = 1e-3;    // step for d/dt
  double h_u = 5e-4;    // step for chart derivatives
  bool richardson = false;
  double minimality_tol = 1e-6;
  double tol = 1e-10;
};

/// A parametrized family of immersions of a 4-manifold into the flat model
/// space (torus or R^7).  Built-in families expose analytic first chart
/// derivatives; second derivatives default to central differences of those.
class ImmersionFamily {
 public:
  virtual ~ImmersionFamily() = default;
  virtual std::string name() const = 0;
  /// Chart: periodic unit 4-torus, or sphere angles (theta_i = pi u_i,
  /// phi = 2 pi u_4).
  virtual bool torus_domain() const { return true; }
  virtual bool coassociative() const { return false; }
  /// True when the motion stays inside the space of coassociative fibres.
  virtual bool moduli_motion() const { return false; }
  virtual Vec7 position(double t, const Vec4& u) const = 0;
  virtual Vec7 du(double t, const Vec4& u, int i) const = 0;
  virtual Vec7 variation(double t, const Vec4& u) const = 0;
  /// d^2 position / du_i du_j; default: central differences of du.
  virtual Vec7 d2u(double t, const Vec4& u, int i, int j, double h) const {
    Vec4 up = u, um = u;
    up[i] += h;
    um[i] -= h;
    return vec::scale(1.0 / (2 * h), vec::sub(du(t, up, j), du(t, um, j)));
  }
  virtual std::optional<double> volume_oracle(double /*t*/) const { return std::nullopt; }
};

// ---------------------------------------------------------------------------
// Built-in registry
// ---------------------------------------------------------------------------

/// Affine coassociative fibre of the model torus, moved through parallel
/// fibres in a fixed normal direction.
class AffineFiberFamily : public ImmersionFamily {
 public:
  explicit AffineFiberFamily(std::array<double, 3> dir = {1.0, 0.5, -0.25}) : dir_(dir) {}
  std::string name() const override { return "affine-fiber"; }
  bool coassociative() const override { return true; }
  bool moduli_motion() const override { return true; }
  Vec7 position(double t, const Vec4& u) const override {
    return {t * dir_[0], t * dir_[1], t * dir_[2], u[0], u[1], u[2], u[3]};
  }
  Vec7 du(double, const Vec4&, int i) const override {
    Vec7 r = vec::zero7();
    r[3 + i] = 1;
    return r;
  }
  Vec7 variation(double, const Vec4&) const override {
    return {dir_[0], dir_[1], dir_[2], 0, 0, 0, 0};
  }
  std::optional<double> volume_oracle(double) const override { return 1.0; }

 private:
  std::array<double, 3> dir_;
};

/// Round 4-sphere of radius r0 + t inside the span of e3..e7.
class SphereFamily : public ImmersionFamily {
 public:
  explicit SphereFamily(double r0 = 1.0) : r0_(r0) {}
  std::string name() const override { return "sphere"; }
  bool torus_domain() const override { return false; }
  Vec7 position(double t, const Vec4& u) const override { return embed((r0_ + t), u); }
  Vec7 du(double t, const Vec4& u, int i) const override {
    return embed_d(r0_ + t, u, i, -1);
  }
  Vec7 d2u(double t, const Vec4& u, int i, int j, double) const override {
    return embed_d(r0_ + t, u, i, j);
  }
  Vec7 variation(double t, const Vec4& u) const override {
    return vec::scale(1.0 / (r0_ + t), embed(r0_ + t, u));
  }
  std::optional<double> volume_oracle(double t) const override {
    double r = r0_ + t;
    return 8.0 * M_PI * M_PI / 3.0 * r * r * r * r;
  }

 private:
  // component factors: x_{2+c} = r * prod_axis f_{c,axis}(angle)
  // f tables: 0 -> 1, 1 -> cos, 2 -> sin
  static constexpr int kFactor[5][4] = {
      {1, 0, 0, 0}, {2, 1, 0, 0}, {2, 2, 1, 0}, {2, 2, 2, 1}, {2, 2, 2, 3}};
  static double f(int code, double a, int deriv) {
    // code: 0 const 1, 1 cos, 2 sin, 3 sin (azimuthal); deriv in {0,1,2}
    switch (code) {
      case 0:
        return deriv == 0 ? 1.0 : 0.0;
      case 1:
        return deriv == 0 ? std::cos(a) : (deriv == 1 ? -std::sin(a) : -std::cos(a));
      default:
        return deriv == 0 ? std::sin(a) : (deriv == 1 ? std::cos(a) : -std::sin(a));
    }
  }
  Vec7 embed(double r, const Vec4& u) const { return embed_d(r, u, -1, -1); }
  // derivative orders: di, dj in {-1 none} or axis index 0..3
  Vec7 embed_d(double r, const Vec4& u, int di, int dj) const {
    const double ang[4] = {M_PI * u[0], M_PI * u[1], M_PI * u[2], 2 * M_PI * u[3]};
    const double jac[4] = {M_PI, M_PI, M_PI, 2 * M_PI};
    Vec7 out = vec::zero7();
    for (int c = 0; c < 5; ++c) {
      double val = r, chain = 1.0;
      for (int axis = 0; axis < 4; ++axis) {
        int deriv = (axis == di ? 1 : 0) + (axis == dj ? 1 : 0);
        val *= f(kFactor[c][axis], ang[axis], deriv);
        for (int d = 0; d < deriv; ++d) chain *= jac[axis];
      }
      out[2 + c] = val * chain;
    }
    return out;
  }
  double r0_;
};

/// Normal graph over a flat coassociative fibre: position (t A f(u), 0, 0, u).
class GraphFamily : public ImmersionFamily {
 public:
  explicit GraphFamily(double amplitude = 1.0) : a_(amplitude) {}
  std::string name() const override { return "graph"; }
  bool coassociative() const override { return true; }
  Vec7 position(double t, const Vec4& u) const override {
    Vec7 r = {t * a_ * profile(u), 0, 0, u[0], u[1], u[2], u[3]};
    return r;
  }
  Vec7 du(double t, const Vec4& u, int i) const override {
    Vec7 r = vec::zero7();
    r[0] = t * a_ * dprofile(u, i);
    r[3 + i] = 1;
    return r;
  }
  Vec7 variation(double, const Vec4& u) const override {
    Vec7 r = vec::zero7();
    r[0] = a_ * profile(u);
    return r;
  }
  double amplitude() const { return a_; }
  static double profile(const Vec4& u) {
    const double w = 2 * M_PI;
    return (std::sin(w * u[0]) * std::cos(w * u[1]) + std::sin(w * u[2]) + std::cos(w * u[3])) /
           w;
  }
  static double dprofile(const Vec4& u, int i) {
    const double w = 2 * M_PI;
    switch (i) {
      case 0:
        return std::cos(w * u[0]) * std::cos(w * u[1]);
      case 1:
        return -std::sin(w * u[0]) * std::sin(w * u[1]);
      case 2:
        return std::cos(w * u[2]);
      default:
        return -std::sin(w * u[3]);
    }
  }

 private:
  double a_;
};

/// Purely tangential reparametrization of a fixed fibre.
class TangentialFamily : public ImmersionFamily {
 public:
  std::string name() const override { return "tangential"; }
  bool coassociative() const override { return true; }
  Vec7 position(double t, const Vec4& u) const override {
    Vec7 r = vec::zero7();
    for (int i = 0; i < 4; ++i) r[3 + i] = u[i] + t * wiggle(u, i);
    return r;
  }
  Vec7 du(double t, const Vec4& u, int i) const override {
    Vec7 r = vec::zero7();
    for (int k = 0; k < 4; ++k) r[3 + k] = (k == i ? 1.0 : 0.0) + t * dwiggle(u, k, i);
    return r;
  }
  Vec7 variation(double, const Vec4& u) const override {
    Vec7 r = vec::zero7();
    for (int i = 0; i < 4; ++i) r[3 + i] = wiggle(u, i);
    return r;
  }
  static double wiggle(const Vec4& u, int i) {
    const double w = 2 * M_PI;
    return 0.05 * std::sin(w * u[(i + 1) % 4]);
  }
  static double dwiggle(const Vec4& u, int i, int k) {
    const double w = 2 * M_PI;
    return (k == (i + 1) % 4) ? 0.05 * w * std::cos(w * u[(i + 1) % 4]) : 0.0;
  }
};

inline std::vector<std::string> family_registry() {
  return {"affine-fiber", "sphere", "graph", "tangential"};
}

inline std::unique_ptr<ImmersionFamily> make_family(const std::string& name) {
  if (name == "affine-fiber") return std::make_unique<AffineFiberFamily>();
  if (name == "sphere") return std::make_unique<SphereFamily>();
  if (name == "graph") return std::make_unique<GraphFamily>();
  if (name == "tangential") return std::make_unique<TangentialFamily>();
  throw contract_error("unknown immersion family '" + name + "'");
}

// ---------------------------------------------------------------------------
// Quadrature grids
// ---------------------------------------------------------------------------

/// Gauss-Legendre nodes and weights on [0, 1].
inline void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    // Newton iteration from the Chebyshev estimate, on [-1, 1].
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = 0;
      for (int k = 0; k < n; ++k) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2 * k + 1) * x * p1 - k * p2) / (k + 1);
      }
      pp = n * (x * p0 - p1) / (x * x - 1);
      double dx = p0 / pp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    nodes[i] = 0.5 * (1 - x);  // descending roots -> ascending nodes
    weights[i] = 1.0 / ((1 - x * x) * pp * pp);
  }
}

struct GridRule {
  std::array<std::vector<double>, 4> nodes;
  std::array<std::vector<double>, 4> weights;
};

/// Midpoint rule per axis for periodic charts; Gauss-Legendre in the polar
/// angles x midpoint in the periodic azimuth for sphere charts (all nodes
/// interior, so the poles are never sampled).
inline GridRule grid_rule(const ImmersionFamily& fam, const QuadratureSpec& q) {
  GridRule g;
  for (int axis = 0; axis < 4; ++axis) {
    bool periodic = fam.torus_domain() || axis == 3;
    if (periodic) {
      g.nodes[axis].resize(q.grid_n);
      g.weights[axis].assign(q.grid_n, 1.0 / q.grid_n);
      for (int i = 0; i < q.grid_n; ++i) g.nodes[axis][i] = (i + 0.5) / q.grid_n;
    } else {
      gauss_legendre(q.grid_n, g.nodes[axis], g.weights[axis]);
    }
  }
  return g;
}

template <class F>
void for_each_node(const GridRule& g, F&& body) {
  const int n0 = static_cast<int>(g.nodes[0].size());
  const int n1 = static_cast<int>(g.nodes[1].size());
  const int n2 = static_cast<int>(g.nodes[2].size());
  const int n3 = static_cast<int>(g.nodes[3].size());
  for (int a = 0; a < n0; ++a)
    for (int b = 0; b < n1; ++b)
      for (int c = 0; c < n2; ++c)
        for (int d = 0; d < n3; ++d) {
          Vec4 u = {g.nodes[0][a], g.nodes[1][b], g.nodes[2][c], g.nodes[3][d]};
          double w = g.weights[0][a] * g.weights[1][b] * g.weights[2][c] * g.weights[3][d];
          body(u, w);
        }
}

// ---------------------------------------------------------------------------
// Pointwise geometry
// ---------------------------------------------------------------------------

struct GeometrySample {
  Vec4 u;
  std::array<Vec7, 4> jac;            // chart derivatives
  std::array<std::array<double, 4>, 4> g;     // first fundamental form
  std::array<std::array<double, 4>, 4> ginv;
  double density = 0;                 // sqrt(det g)
};

inline GeometrySample geometry_sample(const ImmersionFamily& fam, double t, const Vec4& u) {
  GeometrySample s;
  s.u = u;
  for (int i = 0; i < 4; ++i) s.jac[i] = fam.du(t, u, i);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) s.g[i][j] = vec::dot(s.jac[i], s.jac[j]);
  // Cholesky factorization: positive pivots certify a nondegenerate metric,
  // the product of pivots is the density, and the inverse follows by two
  // triangular solves (no pivoting heuristics near coordinate degeneracies).
  double l[4][4] = {};
  double density = 1.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j <= i; ++j) {
      double sum = s.g[i][j];
      for (int k = 0; k < j; ++k) sum -= l[i][k] * l[j][k];
      if (i == j) {
        if (!(sum > 0) || !std::isfinite(sum)) {
          std::ostringstream os;
          os << fam.name() << ": degenerate induced metric at u = (" << u[0] << ", " << u[1]
             << ", " << u[2] << ", " << u[3] << ")";
          throw contract_error(os.str());
        }
        l[i][i] = std::sqrt(sum);
        density *= l[i][i];
      } else {
        l[i][j] = sum / l[j][j];
      }
    }
  }
  s.density = density;
  for (int col = 0; col < 4; ++col) {
    double y[4];
    for (int i = 0; i < 4; ++i) {
      double sum = (i == col) ? 1.0 : 0.0;
      for (int k = 0; k < i; ++k) sum -= l[i][k] * y[k];
      y[i] = sum / l[i][i];
    }
    double x[4];
    for (int i = 3; i >= 0; --i) {
      double sum = y[i];
      for (int k = i + 1; k < 4; ++k) sum -= l[k][i] * x[k];
      x[i] = sum / l[i][i];
    }
    for (int r = 0; r < 4; ++r) s.ginv[r][col] = x[r];
  }
  return s;
}

/// Projection of an ambient vector off the tangent space of the sample.
inline Vec7 normal_part(const GeometrySample& s, const Vec7& v) {
  Vec7 out = v;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double c = s.ginv[i][j] * vec::dot(s.jac[j], v);
      out = vec::sub(out, vec::scale(c, s.jac[i]));
    }
  return out;
}
inline Vec7 tangent_part(const GeometrySample& s, const Vec7& v) {
  return vec::sub(v, normal_part(s, v));
}

/// Volume of the image surface by the family's grid rule.
inline double volume(const ImmersionFamily& fam, double t, const QuadratureSpec& q) {
  GridRule g = grid_rule(fam, q);
  double acc = 0;
  for_each_node(g, [&](const Vec4& u, double w) { acc += w * geometry_sample(fam, t, u).density; });
  return acc;
}

/// Mean curvature vector H = g^{ij} (d^2 iota / du_i du_j)^perp.
inline Vec7 mean_curvature(const ImmersionFamily& fam, double t, const Vec4& u,
                           const QuadratureSpec& q) {
  GeometrySample s = geometry_sample(fam, t, u);
  Vec7 acc = vec::zero7();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Vec7 d2 = fam.d2u(t, u, i, j, q.h_u);
      // symmetrize the finite-difference stencil
      if (i != j) d2 = vec::scale(0.5, vec::add(d2, fam.d2u(t, u, j, i, q.h_u)));
      acc = vec::add(acc, vec::scale(s.ginv[i][j], d2));
    }
  return normal_part(s, acc);
}

// ---------------------------------------------------------------------------
// Variation checks
// ---------------------------------------------------------------------------

struct FirstVariationReport {
  std::string family;
  double dvol_fd = 0;        // central difference of Vol(t) at t = 0
  double integral = 0;       // -Int H . Z^perp vol
  double mismatch_abs = 0;
  double mismatch_rel = 0;
  // coassociative extras (flat model ambient: predicted slope is zero)
  std::optional<double> calibration_max_dev;
  std::optional<double> predicted_slope;
};

inline FirstVariationReport first_variation_check(const ImmersionFamily& fam,
                                                  const QuadratureSpec& q) {
  FirstVariationReport rep;
  rep.family = fam.name();
  rep.dvol_fd = (volume(fam, q.h_t, q) - volume(fam, -q.h_t, q)) / (2 * q.h_t);
  GridRule g = grid_rule(fam, q);
  double acc = 0;
  double calib = 0;
  const auto& psi = G2Structure<double>::model().psi();
  for_each_node(g, [&](const Vec4& u, double w) {
    GeometrySample s = geometry_sample(fam, 0.0, u);
    Vec7 h = mean_curvature(fam, 0.0, u, q);
    Vec7 zperp = normal_part(s, fam.variation(0.0, u));
    acc -= w * vec::dot(h, zperp) * s.density;
    if (fam.coassociative()) {
      std::vector<Vector<double>> vs;
      for (int i = 0; i < 4; ++i) vs.push_back(vec::to_vector(s.jac[i]));
      double val = eval(psi, std::span<const Vector<double>>(vs)) / s.density;
      calib = std::max(calib, std::fabs(val - 1.0));
    }
  });
  rep.integral = acc;
  rep.mismatch_abs = std::fabs(rep.dvol_fd - rep.integral);
  rep.mismatch_rel = rep.mismatch_abs / std::max(std::fabs(rep.dvol_fd), 1e-300);
  if (fam.coassociative()) {
    rep.calibration_max_dev = calib;
    rep.predicted_slope = 0.0;  // vanishing torsion in the flat model
  }
  return rep;
}

/// Tangent/normal orthonormal frames with the tangent combination matrix
/// (e_i = sum_k b[i][k] jac_k).
struct FrameSample {
  GeometrySample geo;
  std::array<Vec7, 4> tangent;
  std::array<std::array<double, 4>, 4> b;
  std::array<Vec7, 3> normal;
};

inline FrameSample frame_sample(const ImmersionFamily& fam, double t, const Vec4& u) {
  FrameSample f;
  f.geo = geometry_sample(fam, t, u);
  // Gram-Schmidt on the chart frame, tracking coefficients.
  for (int i = 0; i < 4; ++i) {
    Vec7 v = f.geo.jac[i];
    std::array<double, 4> coeff{};
    coeff[i] = 1.0;
    for (int p = 0; p < i; ++p) {
      double proj = vec::dot(f.tangent[p], f.geo.jac[i]);
      v = vec::sub(v, vec::scale(proj, f.tangent[p]));
      for (int k = 0; k < 4; ++k) coeff[k] -= proj * f.b[p][k];
    }
    double nrm = vec::norm(v);
    if (nrm < 1e-12) throw contract_error(fam.name() + ": degenerate frame");
    f.tangent[i] = vec::scale(1.0 / nrm, v);
    for (int k = 0; k < 4; ++k) f.b[i][k] = coeff[k] / nrm;
  }
  // normal frame: project the standard basis and keep 3 independent vectors
  int got = 0;
  for (int e = 0; e < 7 && got < 3; ++e) {
    Vec7 cand = vec::zero7();
    cand[e] = 1;
    cand = normal_part(f.geo, cand);
    for (int p = 0; p < got; ++p)
      cand = vec::sub(cand, vec::scale(vec::dot(f.normal[p], cand), f.normal[p]));
    double nrm = vec::norm(cand);
    if (nrm > 1e-6) f.normal[got++] = vec::scale(1.0 / nrm, cand);
  }
  if (got != 3) throw contract_error(fam.name() + ": could not build a normal frame");
  return f;
}

/// grad_{e_i} Z at the sample (flat ambient), by chart differentiation of the
/// variation field.
inline std::array<Vec7, 4> covariant_dz(const ImmersionFamily& fam, const FrameSample& f,
                                        const QuadratureSpec& q) {
  std::array<Vec7, 4> dz_chart;
  for (int k = 0; k < 4; ++k) {
    Vec4 up = f.geo.u, um = f.geo.u;
    up[k] += q.h_u;
    um[k] -= q.h_u;
    dz_chart[k] = vec::scale(1.0 / (2 * q.h_u), vec::sub(fam.variation(0.0, up), fam.variation(0.0, um)));
  }
  std::array<Vec7, 4> out;
  for (int i = 0; i < 4; ++i) {
    out[i] = vec::zero7();
    for (int k = 0; k < 4; ++k) out[i] = vec::add(out[i], vec::scale(f.b[i][k], dz_chart[k]));
  }
  return out;
}

struct SecondVariationReport {
  std::string family;
  double max_h = 0;              // measured minimality of the base surface
  double d2vol_fd = 0;
  double integrand_quadrature = 0;  // classical second-variation integrand (flat ambient)
  double mismatch_abs = 0;
  double mismatch_rel = 0;
  std::optional<double> moduli_rhs;  // tensorial integrand for moduli motions (zero here)
};

inline SecondVariationReport second_variation_check(const ImmersionFamily& fam,
                                                    const QuadratureSpec& q) {
  SecondVariationReport rep;
  rep.family = fam.name();
  GridRule g = grid_rule(fam, q);

  double maxh = 0;
  for_each_node(g, [&](const Vec4& u, double) {
    maxh = std::max(maxh, vec::norm(mean_curvature(fam, 0.0, u, q)));
  });
  rep.max_h = maxh;
  if (maxh > q.minimality_tol) {
    std::ostringstream os;
    os << fam.name() << ": base surface is not minimal (max |H| = " << maxh << ")";
    throw contract_error(os.str());
  }
  {
    Vec7 zt = tangent_part(geometry_sample(fam, 0.0, {0.23, 0.41, 0.57, 0.71}),
                           fam.variation(0.0, {0.23, 0.41, 0.57, 0.71}));
    if (vec::norm(zt) > 1e-8)
      throw contract_error(fam.name() + ": variation field is not normal");
  }

  auto second_diff = [&](double h) {
    return (volume(fam, h, q) - 2 * volume(fam, 0.0, q) + volume(fam, -h, q)) / (h * h);
  };
  rep.d2vol_fd = q.richardson
                     ? (4 * second_diff(q.h_t / 2) - second_diff(q.h_t)) / 3.0
                     : second_diff(q.h_t);

  double acc = 0;
  for_each_node(g, [&](const Vec4& u, double w) {
    FrameSample f = frame_sample(fam, 0.0, u);
    auto dz = covariant_dz(fam, f, q);
    double tangential2 = 0, normal2 = 0;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        double c = vec::dot(dz[i], f.tangent[j]);
        tangential2 += c * c;
      }
      for (int j = 0; j < 3; ++j) {
        double c = vec::dot(dz[i], f.normal[j]);
        normal2 += c * c;
      }
    }
    acc += w * (-tangential2 + normal2) * f.geo.density;
  });
  rep.integrand_quadrature = acc;
  rep.mismatch_abs = std::fabs(rep.d2vol_fd - rep.integrand_quadrature);
  rep.mismatch_rel = rep.mismatch_abs / std::max(std::fabs(rep.d2vol_fd), 1e-12);
  if (fam.moduli_motion()) rep.moduli_rhs = 0.0;  // flat model: no torsion, no Ricci
  return rep;
}

struct DensityReport {
  std::string family;
  Vec4 u{};
  double direct_fd = 0;         // f''(0) from the volume density
  double classical_formula = 0; // curvature/frame expression
  double coassoc_formula = 0;   // psi-double-dot + |C_dot|^2
  double normal_gradient_term = 0;  // (nab_{e_i} Z . f_j)^2 in the classical route
  double coassociator_term = 0;     // |C_dot|^2 in the coassociative route
  double dev_direct_classical = 0;
  double dev_direct_coassoc = 0;
  double dev_classical_coassoc = 0;
};

inline DensityReport density_second_derivative_check(const ImmersionFamily& fam,
                                                     const QuadratureSpec& q, const Vec4& u) {
  if (!fam.coassociative())
    throw contract_error(fam.name() + ": density check needs a coassociative base");
  DensityReport rep;
  rep.family = fam.name();
  rep.u = u;

  FrameSample f0 = frame_sample(fam, 0.0, u);
  Vec7 z = fam.variation(0.0, u);
  if (vec::norm(tangent_part(f0.geo, z)) > 1e-8)
    throw contract_error(fam.name() + ": variation field is not normal at the sample");
  Vec7 h0 = mean_curvature(fam, 0.0, u, q);
  if (vec::norm(h0) > q.minimality_tol)
    throw contract_error(fam.name() + ": base surface is not minimal at the sample");

  // (a) direct finite difference of the density ratio
  double rho0 = f0.geo.density;
  double rhop = geometry_sample(fam, q.h_t, u).density;
  double rhom = geometry_sample(fam, -q.h_t, u).density;
  rep.direct_fd = (rhop - 2 * rho0 + rhom) / (q.h_t * q.h_t * rho0);

  // (b) classical frame expression:
  //   -g(nab_{e_i} e_j, Z)^2 - R + div((nab_Z Z)^T) - g(H, (nab_Z Z)^perp)
  //   + (nab_{e_i} Z . f_j)^2 + g(H, Z)^2         (flat ambient: R = 0)
  auto tangent_field = [&](const Vec4& uu, int j) { return frame_sample(fam, 0.0, uu).tangent[j]; };
  double ii2 = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      // nab_{e_i} e_j via chart differentiation of the frame field
      Vec7 acc = vec::zero7();
      for (int k = 0; k < 4; ++k) {
        Vec4 up = u, um = u;
        up[k] += q.h_u;
        um[k] -= q.h_u;
        Vec7 d = vec::scale(1.0 / (2 * q.h_u), vec::sub(tangent_field(up, j), tangent_field(um, j)));
        acc = vec::add(acc, vec::scale(f0.b[i][k], d));
      }
      double c = vec::dot(acc, z);
      ii2 += c * c;
    }
  // nab_Z Z = d/dt variation(t, u) along the flow
  Vec7 nzz = vec::scale(1.0 / (2 * q.h_t), vec::sub(fam.variation(q.h_t, u), fam.variation(-q.h_t, u)));
  Vec7 nzz_t = tangent_part(f0.geo, nzz);
  Vec7 nzz_n = vec::sub(nzz, nzz_t);
  // div of the tangential part, via the frame
  double divt = 0;
  {
    auto w_field = [&](const Vec4& uu) {
      GeometrySample s = geometry_sample(fam, 0.0, uu);
      Vec7 w = vec::scale(1.0 / (2 * q.h_t),
                          vec::sub(fam.variation(q.h_t, uu), fam.variation(-q.h_t, uu)));
      return tangent_part(s, w);
    };
    for (int i = 0; i < 4; ++i) {
      Vec7 acc = vec::zero7();
      for (int k = 0; k < 4; ++k) {
        Vec4 up = u, um = u;
        up[k] += q.h_u;
        um[k] -= q.h_u;
        Vec7 d = vec::scale(1.0 / (2 * q.h_u), vec::sub(w_field(up), w_field(um)));
        acc = vec::add(acc, vec::scale(f0.b[i][k], d));
      }
      divt += vec::dot(acc, f0.tangent[i]);
    }
  }
  auto dz = covariant_dz(fam, f0, q);
  double normal2 = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 3; ++j) {
      double c = vec::dot(dz[i], f0.normal[j]);
      normal2 += c * c;
    }
  double hz = vec::dot(h0, z);
  rep.normal_gradient_term = normal2;
  rep.classical_formula = -ii2 + divt - vec::dot(h0, nzz_n) + normal2 + hz * hz;

  // (c) coassociative route: f''(0) = psi-double-dot + |C_dot|^2 on the
  // pushed orthonormal frame
  auto pushed = [&](double t, int i) {
    Vec7 acc = vec::zero7();
    for (int k = 0; k < 4; ++k) acc = vec::add(acc, vec::scale(f0.b[i][k], fam.du(t, u, k)));
    return acc;
  };
  auto psi_of = [&](double t) {
    std::vector<Vector<double>> vs;
    for (int i = 0; i < 4; ++i) vs.push_back(vec::to_vector(pushed(t, i)));
    return eval(G2Structure<double>::model().psi(), std::span<const Vector<double>>(vs));
  };
  auto c_of = [&](double t) {
    std::array<Vector<double>, 4> vs = {vec::to_vector(pushed(t, 0)), vec::to_vector(pushed(t, 1)),
                                        vec::to_vector(pushed(t, 2)), vec::to_vector(pushed(t, 3))};
    return coassociator(vs[0], vs[1], vs[2], vs[3]);
  };
  double psidd = (psi_of(q.h_t) - 2 * psi_of(0.0) + psi_of(-q.h_t)) / (q.h_t * q.h_t);
  auto cp = c_of(q.h_t);
  auto cm = c_of(-q.h_t);
  double cdot2 = 0;
  for (int i = 0; i < 7; ++i) {
    double d = (cp[i] - cm[i]) / (2 * q.h_t);
    cdot2 += d * d;
  }
  rep.coassociator_term = cdot2;
  rep.coassoc_formula = psidd + cdot2;

  rep.dev_direct_classical = std::fabs(rep.direct_fd - rep.classical_formula);
  rep.dev_direct_coassoc = std::fabs(rep.direct_fd - rep.coassoc_formula);
  rep.dev_classical_coassoc = std::fabs(rep.classical_formula - rep.coassoc_formula);
  return rep;
}

struct ModuliFibrationReport {
  bool forms_constant = false;     // the three normal contractions are u-independent
  bool forms_selfdual = false;
  double gram_dev = 0;             // max |<b_a, b_b> - 2 delta_ab|
  int span_rank = 0;               // rank of the three forms inside Lambda^2_+
  double vol_drift = 0;            // max |Vol - 1| along a path through fibres
  double calibration_max_dev = 0;
};

/// Flat fibration demo: the fibre motions give pointwise-constant self-dual
/// forms spanning Lambda^2_+, and the fibre volume is constant.
inline ModuliFibrationReport moduli_fibration_demo(const QuadratureSpec& q) {
  ModuliFibrationReport rep;
  const auto& frame = CoassocFrame<double>::model();
  std::array<KForm<double>, 3> b = {KForm<double>(4, 2), KForm<double>(4, 2), KForm<double>(4, 2)};
  for (int a = 0; a < 3; ++a)
    b[a] = normal_to_selfdual(Vector<double>::basis(7, a), frame);

  // constancy across fibres and base points: recompute the restriction of
  // Z _| phi at sampled points of translated fibres
  AffineFiberFamily fam;
  rep.forms_constant = true;
  for (double t : {0.0, 0.1, 0.35}) {
    for (const Vec4& u : {Vec4{0.1, 0.2, 0.3, 0.4}, Vec4{0.7, 0.5, 0.9, 0.05}}) {
      GeometrySample s = geometry_sample(fam, t, u);
      std::vector<Vector<double>> tvs;
      for (int i = 0; i < 4; ++i) tvs.push_back(vec::to_vector(s.jac[i]));
      OrientedPlane<double> plane(7, tvs);
      for (int a = 0; a < 3; ++a) {
        KForm<double> here =
            restrict(interior(Vector<double>::basis(7, a), G2Structure<double>::model().phi()), plane);
        if (!(here - b[a]).is_zero(1e-12)) rep.forms_constant = false;
      }
    }
  }

  rep.forms_selfdual = true;
  double gd = 0;
  Matrix<double> span(6, 3);
  for (int a = 0; a < 3; ++a) {
    if (!antiselfdual_part(b[a]).is_zero(1e-12)) rep.forms_selfdual = false;
    for (int r = 0; r < 6; ++r) span(r, a) = b[a][r];
    for (int bb = 0; bb < 3; ++bb)
      gd = std::max(gd, std::fabs(form_inner(b[a], b[bb]) - (a == bb ? 2.0 : 0.0)));
  }
  rep.gram_dev = gd;
  rep.span_rank = rank(span);

  double drift = 0, calib = 0;
  GridRule g = grid_rule(fam, q);
  const auto& psi = G2Structure<double>::model().psi();
  for (int step = 0; step <= 10; ++step) {
    double t = step / 10.0;
    drift = std::max(drift, std::fabs(volume(fam, t, q) - 1.0));
    for_each_node(g, [&](const Vec4& u, double) {
      GeometrySample s = geometry_sample(fam, t, u);
      std::vector<Vector<double>> vs;
      for (int i = 0; i < 4; ++i) vs.push_back(vec::to_vector(s.jac[i]));
      double val = eval(psi, std::span<const Vector<double>>(vs)) / s.density;
      calib = std::max(calib, std::fabs(val - 1.0));
    });
  }
  rep.vol_drift = drift;
  rep.calibration_max_dev = calib;
  return rep;
}

}  // namespace g2lab

#endif
