// Pointwise verifiers for the second-variation machinery on coassociative
// 4-planes: the gamma_Z 2-form, the two auxiliary bilinear B-forms, the
// algebraic expression for d(tau2), the contraction lemma feeding the main
// integrand, the integrand itself, and the first-variation density.
//
// All verifiers return forms or residuals; thresholds are applied by
// callers (the CLI / test layer).

#ifndef G2LAB_IDENTITIES_HPP
#define G2LAB_IDENTITIES_HPP

#include <utility>

#include "g2.hpp"

namespace g2lab {

template <class S>
S trace(const Matrix<S>& m) {
  S t(0);
  for (int i = 0; i < m.rows(); ++i) t += m(i, i);
  return t;
}

template <class S>
Matrix<S> symmetric_part(const Matrix<S>& m) {
  Matrix<S> s(m.rows(), m.cols());
  S half = scalar_traits<S>::from_ratio(1, 2);
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) s(i, j) = half * (m(i, j) + m(j, i));
  return s;
}

/// Bilinear pairing h(z1, z2) for a symmetric tensor.
template <class S>
S bilinear(const Matrix<S>& h, const Vector<S>& z1, const Vector<S>& z2) {
  S acc(0);
  for (int i = 0; i < h.rows(); ++i) {
    if (z1[i] == S(0)) continue;
    for (int j = 0; j < h.cols(); ++j) acc += h(i, j) * z1[i] * z2[j];
  }
  return acc;
}

template <class S>
S quad(const Matrix<S>& h, const Vector<S>& z) {
  return bilinear(h, z, z);
}

/// Trace of the restriction of a symmetric tensor to a plane (sum over its
/// orthonormal basis).
template <class S>
S restricted_trace(const Matrix<S>& h, const OrientedPlane<S>& p) {
  S acc(0);
  for (const auto& u : p.onb()) acc += quad(h, u);
  return acc;
}

/// Coassociative frame plus the tangential endomorphism X -> (grad_X Z)^T in
/// the frame's orthonormal basis.  A zero matrix encodes a minimal, totally
/// geodesic configuration.
template <class S>
struct ShapeData {
  CoassocFrame<S> frame;
  Matrix<S> dz_tangent;  // 4x4

  explicit ShapeData(CoassocFrame<S> f) : frame(std::move(f)), dz_tangent(4, 4) {}
  ShapeData(CoassocFrame<S> f, Matrix<S> dz) : frame(std::move(f)), dz_tangent(std::move(dz)) {
    if (dz_tangent.rows() != 4 || dz_tangent.cols() != 4)
      throw contract_error("shape: tangential endomorphism must be 4x4");
  }
};

/// Pointwise inputs to the second-variation integrand.
template <class S>
struct VariationPointData {
  KForm<S> tau2;     // torsion 2-form, constrained to lambda2_14
  Matrix<S> ric;     // symmetric 7x7
  Vector<S> z;       // normal to the frame's plane
  ShapeData<S> shape;

  VariationPointData(KForm<S> t, Matrix<S> r, Vector<S> zz, ShapeData<S> s,
                     double tol = kFloatTolerance)
      : tau2(std::move(t)), ric(std::move(r)), z(std::move(zz)), shape(std::move(s)) {
    auto [p7, p14] = project_lambda2(tau2);
    (void)p14;
    if (!p7.is_zero(tol)) throw contract_error("variation data: tau2 is not in lambda2_14");
    for (int i = 0; i < 7; ++i)
      for (int j = i + 1; j < 7; ++j)
        if (!near_zero(S(ric(i, j) - ric(j, i)), tol))
          throw contract_error("variation data: Ricci tensor is not symmetric");
    if (!shape.frame.plane().contains_normal(z, tol))
      throw contract_error("variation data: variation vector is not normal");
  }
};

/// alpha_f(X1, X2) = alpha(f X1, X2) + alpha(X1, f X2) for a 2-form alpha and
/// endomorphism f on R^4 (matrix form f^T A + A f).
template <class S>
KForm<S> two_slot_insertion(const KForm<S>& alpha, const Matrix<S>& f) {
  if (alpha.dim() != 4 || alpha.degree() != 2)
    throw contract_error("two_slot_insertion: need a 2-form on R^4");
  Matrix<S> a(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      S v = alpha.coeff({i, j});
      a(i, j) = v;
      a(j, i) = -v;
    }
  Matrix<S> r = f.transposed() * a + a * f;
  KForm<S> out(4, 2);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) out = out + KForm<S>::monomial(4, {i, j}, r(i, j));
  return out;
}

/// gamma_Z built from alpha = (Z _| phi)|_plane and the symmetrized
/// tangential derivative.  For symmetric trace-free shape the result is
/// anti-self-dual; a trace part t*id in the shape contributes the self-dual
/// piece (tr/2) * alpha.
template <class S>
KForm<S> gamma_z(const VariationPointData<S>& d) {
  KForm<S> alpha = normal_to_selfdual(d.z, d.shape.frame);
  return two_slot_insertion(alpha, symmetric_part(d.shape.dz_tangent));
}

/// B_W(Z1, Z2) = -W _| ((Z1 _| psi) ^ (Z2 _| phi)) restricted to the plane.
/// Antisymmetric in (Z1, Z2); vanishes for tangential W; the totally
/// antisymmetric values give B(e1,e2,e3) = 2 vol4.
template <class S>
KForm<S> check_b_w(const Vector<S>& w, const Vector<S>& z1, const Vector<S>& z2,
                   const CoassocFrame<S>& f, double tol = kFloatTolerance) {
  if (!f.plane().contains_normal(z1, tol) || !f.plane().contains_normal(z2, tol))
    throw contract_error("check_b_w: Z1, Z2 must be normal to the plane");
  const auto& g = G2Structure<S>::model();
  KForm<S> five = wedge(interior(z1, g.psi()), interior(z2, g.phi()));
  return restrict(-interior(w, five), f.plane());
}

/// B_h(Z1, Z2) = (Z1 _| i(h)) ^ (Z2 _| phi) restricted to the plane; equals
/// (4 h(Z1,Z2) + 2 tr(h|_plane) g(Z1,Z2)) vol4.
template <class S>
KForm<S> check_b_h(const Matrix<S>& h, const Vector<S>& z1, const Vector<S>& z2,
                   const CoassocFrame<S>& f, double tol = kFloatTolerance) {
  if (!f.plane().contains_normal(z1, tol) || !f.plane().contains_normal(z2, tol))
    throw contract_error("check_b_h: Z1, Z2 must be normal to the plane");
  const auto& g = G2Structure<S>::model();
  return restrict(wedge(interior(z1, i_map(h)), interior(z2, g.phi())), f.plane());
}

/// Right side of the torsion differential identity,
///   d(tau2) = (1/2) * (tau2 ^ tau2) - (1/2) i(Ric),
/// assembled as a 3-form from pointwise data.  (Whether it really equals a
/// differential is checked where a genuine d exists, in the Lie-algebra
/// module.)
template <class S>
KForm<S> dtau2_from_identity(const KForm<S>& tau2, const Matrix<S>& ric,
                             double tol = kFloatTolerance) {
  auto [p7, p14] = project_lambda2(tau2);
  (void)p14;
  if (!p7.is_zero(tol)) throw contract_error("dtau2_from_identity: tau2 is not in lambda2_14");
  S half = scalar_traits<S>::from_ratio(1, 2);
  return half * hodge(wedge(tau2, tau2)) - half * i_map(ric);
}

/// Residual (coefficient of vol4) of
///   (Z _| dtau2) ^ (Z _| phi)|_plane  +  (2 Ric(Z,Z) + |Z|^2 tr(Ric|_plane)) vol4.
/// The Ricci part of the torsion differential reproduces the right side
/// exactly; the quadratic part * (tau2 ^ tau2) does NOT drop out, so the
/// residual equals the closed-form correction below rather than zero.
template <class S>
S lemma_dtau2_residual(const VariationPointData<S>& d) {
  KForm<S> dt = dtau2_from_identity(d.tau2, d.ric);
  const auto& g = G2Structure<S>::model();
  KForm<S> lhs = restrict(wedge(interior(d.z, dt), interior(d.z, g.phi())), d.shape.frame.plane());
  S rhs = -(S(2) * quad(d.ric, d.z) + d.z.norm2() * restricted_trace(d.ric, d.shape.frame.plane()));
  return lhs[0] - rhs;
}

/// Gram square of a 2-form, m_ij = sum_k tau_ik tau_jk (positive
/// semidefinite; trace = 2 |tau|^2).
template <class S>
Matrix<S> gram_square(const KForm<S>& tau) {
  if (tau.degree() != 2) throw contract_error("gram_square: need a 2-form");
  const int n = tau.dim();
  Matrix<S> t(n, n);
  for (int i = 0; i < n; ++i) {
    KForm<S> row = interior(Vector<S>::basis(n, i), tau);
    for (int j = 0; j < n; ++j) t(i, j) = row[j];
  }
  return t * t.transposed();
}

/// Exact value of lemma_dtau2_residual:
///   |Z _| tau2|^2 - (1/2) |Z|^2 tr(tau2_gram |_normal).
/// Equivalently (1/2) B_h(Z,Z) for h = (1/2) tau2_gram - (1/6)|tau2|^2 g,
/// the symmetric-tensor part of * (tau2 ^ tau2).  Both routes are asserted
/// against each other in the test suite.
template <class S>
S lemma_correction_coefficient(const VariationPointData<S>& d) {
  S izt = form_norm2(interior(d.z, d.tau2));
  S trn(0);
  for (const auto& nvec : d.shape.frame.normal().onb()) trn += form_norm2(interior(nvec, d.tau2));
  S half = scalar_traits<S>::from_ratio(1, 2);
  return izt - half * d.z.norm2() * trn;
}

/// Left side of the same lemma (useful for the integrand assembly identity).
template <class S>
KForm<S> lemma_dtau2_lhs(const VariationPointData<S>& d) {
  KForm<S> dt = dtau2_from_identity(d.tau2, d.ric);
  const auto& g = G2Structure<S>::model();
  return restrict(wedge(interior(d.z, dt), interior(d.z, g.phi())), d.shape.frame.plane());
}

/// The second-variation integrand on the plane:
///   tau2|_plane ^ gamma_Z - (2 Ric(Z,Z) + |Z|^2 tr(Ric|_plane)) vol4.
template <class S>
KForm<S> secvar_integrand(const VariationPointData<S>& d) {
  KForm<S> t = restrict(d.tau2, d.shape.frame.plane());
  KForm<S> first = wedge(t, gamma_z(d));
  S c = S(2) * quad(d.ric, d.z) + d.z.norm2() * restricted_trace(d.ric, d.shape.frame.plane());
  KForm<S> vol4(4, 4);
  vol4[0] = c;
  return first - vol4;
}

template <class S>
struct FirstVariationDensity {
  KForm<S> density;          // tau2|_plane^+ ^ (Z _| phi)|_plane, a 4-form on R^4
  Vector<S> mean_curvature;  // H with -(H _| phi)|_plane = tau2|_plane^+
};

/// First-variation density and the mean-curvature identification.  H = 0
/// exactly when the restricted torsion is anti-self-dual.
template <class S>
FirstVariationDensity<S> first_variation_density(const KForm<S>& tau2, const Vector<S>& z,
                                                 const CoassocFrame<S>& f,
                                                 double tol = kFloatTolerance) {
  auto [p7, p14] = project_lambda2(tau2);
  (void)p14;
  if (!p7.is_zero(tol)) throw contract_error("first_variation_density: tau2 is not in lambda2_14");
  if (!f.plane().contains_normal(z, tol))
    throw contract_error("first_variation_density: variation vector is not normal");
  KForm<S> plus = selfdual_part(restrict(tau2, f.plane()));
  KForm<S> density = wedge(plus, normal_to_selfdual(z, f, tol));
  // Expand tau2|^+ in the conformal basis (n_a _| phi)|_plane (Gram = 2 Id)
  // and invert the identification -(H _| phi)|_plane = tau2|^+.
  Vector<S> h(7);
  S half = scalar_traits<S>::from_ratio(1, 2);
  for (const auto& na : f.normal().onb()) {
    KForm<S> ba = normal_to_selfdual(na, f, tol);
    h = h - (half * form_inner(plus, ba)) * na;
  }
  return {density, h};
}

}  // namespace g2lab

#endif
