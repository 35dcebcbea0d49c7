// The pointwise G2 package: model 3-/4-forms, cross products, the
// coassociator, irreducible projections of 2- and 3-forms, the equivariant
// injection of symmetric 2-tensors into 3-forms, the metric induced by a
// definite 3-form, and the stabilizer Lie algebra inside so(7).
//
// Conventions (indices 0-based in code, 1-based in displays):
//   phi = 123 + 1(45+67) + 2(46-57) - 3(47+56)
//   psi = *phi = 4567 + 23(45+67) - 13(46-57) - 12(47+56)
// The adapted coframe is orthonormal, orientation e1^...^e7.

#ifndef G2LAB_G2_HPP
#define G2LAB_G2_HPP

#include <array>
#include <optional>
#include <span>
#include <tuple>
#include <vector>

#include "forms.hpp"

namespace g2lab {

namespace detail {
// phi monomials, 0-based, all coefficients +-1.
inline constexpr std::array<std::array<int, 3>, 7> kPhiTriples = {{
    {0, 1, 2},  // +123
    {0, 3, 4},  // +145
    {0, 5, 6},  // +167
    {1, 3, 5},  // +246
    {1, 4, 6},  // -257
    {2, 3, 6},  // -347
    {2, 4, 5},  // -356
}};
inline constexpr std::array<int, 7> kPhiSigns = {1, 1, 1, 1, -1, -1, -1};
}  // namespace detail

template <class S>
class G2Structure {
 public:
  static const G2Structure& model() {
    static const G2Structure g;
    return g;
  }

  const KForm<S>& phi() const { return phi_; }
  const KForm<S>& psi() const { return psi_; }
  const KForm<S>& volume() const { return vol_; }
  Matrix<S> metric() const { return Matrix<S>::identity(7); }

  /// Totally antisymmetric coefficient table with phi = sum_{i<j<k} eps_ijk e^ijk.
  int eps(int i, int j, int k) const { return eps_[i][j][k]; }

 private:
  G2Structure() : phi_(7, 3), vol_(7, 7) {
    for (size_t t = 0; t < detail::kPhiTriples.size(); ++t) {
      const auto& m = detail::kPhiTriples[t];
      phi_ = phi_ + KForm<S>::monomial(7, {m[0], m[1], m[2]}, S(detail::kPhiSigns[t]));
    }
    psi_ = hodge(phi_);
    vol_[0] = S(1);
    for (auto& plane : eps_)
      for (auto& row : plane) row.fill(0);
    for (size_t t = 0; t < detail::kPhiTriples.size(); ++t) {
      const auto& m = detail::kPhiTriples[t];
      const std::array<std::array<int, 3>, 6> perms = {{{m[0], m[1], m[2]},
                                                        {m[1], m[2], m[0]},
                                                        {m[2], m[0], m[1]},
                                                        {m[1], m[0], m[2]},
                                                        {m[0], m[2], m[1]},
                                                        {m[2], m[1], m[0]}}};
      for (int p = 0; p < 6; ++p)
        eps_[perms[p][0]][perms[p][1]][perms[p][2]] = (p < 3 ? 1 : -1) * detail::kPhiSigns[t];
    }
  }

  KForm<S> phi_, psi_, vol_;
  std::array<std::array<std::array<int, 7>, 7>, 7> eps_;
};

/// Cross product: <cross(u,v), w> = phi(u,v,w).
template <class S>
Vector<S> cross(const Vector<S>& u, const Vector<S>& v) {
  if (u.dim() != 7 || v.dim() != 7) throw contract_error("cross: dimension must be 7");
  const auto& g = G2Structure<S>::model();
  Vector<S> out(7);
  for (int i = 0; i < 7; ++i) {
    if (u[i] == S(0)) continue;
    for (int j = 0; j < 7; ++j) {
      if (v[j] == S(0)) continue;
      for (int k = 0; k < 7; ++k) {
        int e = g.eps(i, j, k);
        if (e != 0) out[k] += S(e) * u[i] * v[j];
      }
    }
  }
  return out;
}

/// Vector defined through psi by <chi(a,b,c), w> = psi(a,b,c,w), with the
/// probe vector in the last slot.
template <class S>
Vector<S> triple_chi(const Vector<S>& a, const Vector<S>& b, const Vector<S>& c) {
  const auto& g = G2Structure<S>::model();
  KForm<S> f = interior(c, interior(b, interior(a, g.psi())));
  Vector<S> out(7);
  for (int k = 0; k < 7; ++k) out[k] = f[k];
  return out;
}

/// Linear extension of chi to 3-vectors: <chi(xi), w> = sum_I xi_I psi(e_I, w).
template <class S>
Vector<S> chi_of_3form(const KForm<S>& xi) {
  if (xi.dim() != 7 || xi.degree() != 3) throw contract_error("chi_of_3form: need a 3-form on R^7");
  const auto& psi = G2Structure<S>::model().psi();
  Vector<S> out(7);
  std::array<int, 3> idx{};
  std::array<int, 4> merged{};
  for (int r = 0; r < xi.terms(); ++r) {
    if (xi[r] == S(0)) continue;
    subset_unrank(r, 7, 3, idx.data());
    for (int k = 0; k < 7; ++k) {
      const std::array<int, 1> last = {k};
      int sgn = merge_with_sign(std::span<const int>(idx.data(), 3),
                                std::span<const int>(last.data(), 1),
                                std::span<int>(merged.data(), 4));
      if (sgn == 0) continue;
      S p = psi[subset_rank(std::span<const int>(merged.data(), 4), 7)];
      out[k] += (sgn > 0) ? xi[r] * p : S(-(xi[r] * p));
    }
  }
  return out;
}

/// Coassociator: C(v1,...,v4) = chi(*(v1^v2^v3^v4)).  Vanishes exactly on
/// coassociative 4-tuples and satisfies
/// psi(v)^2 + |C(v)|^2 = |v1^...^v4|^2.
template <class S>
Vector<S> coassociator(const Vector<S>& v1, const Vector<S>& v2, const Vector<S>& v3,
                       const Vector<S>& v4) {
  const std::array<Vector<S>, 4> vs = {v1, v2, v3, v4};
  return chi_of_3form(hodge(simple_kvector(std::span<const Vector<S>>(vs))));
}

template <class S>
struct CalibrationResult {
  S psi_value;  // psi on the oriented orthonormal basis, in [-1, 1]
  S defect;     // 1 - psi_value^2 = |C|^2 on the same basis
};

template <class S>
CalibrationResult<S> calibration_defect(const OrientedPlane<S>& p) {
  if (p.ambient_dim() != 7 || p.k() != 4) throw contract_error("calibration_defect: need a 4-plane in R^7");
  const auto& g = G2Structure<S>::model();
  S v = eval(g.psi(), std::span<const Vector<S>>(p.onb()));
  return {v, S(1) - v * v};
}

/// lambda2 splitting: a = a7 + a14 where a7 lies in the +2 eigenspace of
/// a |-> *(phi ^ a) and a14 in the -1 eigenspace.
template <class S>
std::pair<KForm<S>, KForm<S>> project_lambda2(const KForm<S>& a) {
  if (a.dim() != 7 || a.degree() != 2) throw contract_error("project_lambda2: need a 2-form on R^7");
  const auto& g = G2Structure<S>::model();
  KForm<S> l = hodge(wedge(g.phi(), a));
  S third = scalar_traits<S>::from_ratio(1, 3);
  KForm<S> a7 = third * (l + a);
  KForm<S> a14 = third * (S(2) * a - l);
  return {a7, a14};
}

/// Equivariant injection of symmetric 2-tensors into 3-forms:
/// i(h) = sum eps_ikl h_ij e^j ^ e^k ^ e^l;  i(g) = 6 phi.
template <class S>
KForm<S> i_map(const Matrix<S>& h) {
  if (h.rows() != 7 || h.cols() != 7) throw contract_error("i_map: need a 7x7 tensor");
  for (int i = 0; i < 7; ++i)
    for (int j = i + 1; j < 7; ++j)
      if (!(h(i, j) == h(j, i))) throw contract_error("i_map: tensor is not symmetric");
  const auto& g = G2Structure<S>::model();
  KForm<S> out(7, 3);
  std::array<int, 3> idx{};
  for (int i = 0; i < 7; ++i)
    for (int k = 0; k < 7; ++k)
      for (int l = 0; l < 7; ++l) {
        int e = g.eps(i, k, l);
        if (e == 0) continue;
        for (int j = 0; j < 7; ++j) {
          if (h(i, j) == S(0)) continue;
          idx = {j, k, l};
          int sgn = sort_with_sign(std::span<int>(idx.data(), 3));
          if (sgn == 0) continue;
          S term = S(e * sgn) * h(i, j);
          out[subset_rank(std::span<const int>(idx.data(), 3), 7)] += term;
        }
      }
  return out;
}

/// lambda3 splitting against explicit spanning sets: a1 in span(phi),
/// a7 in {W _| psi}, a27 the remainder (image of trace-free symmetric
/// tensors).  The three pieces are mutually orthogonal.
template <class S>
std::tuple<KForm<S>, KForm<S>, KForm<S>> project_lambda3(const KForm<S>& a) {
  if (a.dim() != 7 || a.degree() != 3) throw contract_error("project_lambda3: need a 3-form on R^7");
  const auto& g = G2Structure<S>::model();
  S seventh = scalar_traits<S>::from_ratio(1, 7);
  KForm<S> a1 = (seventh * form_inner(a, g.phi())) * g.phi();
  KForm<S> a7(7, 3);
  S quarter = scalar_traits<S>::from_ratio(1, 4);
  for (int i = 0; i < 7; ++i) {
    KForm<S> b = interior(Vector<S>::basis(7, i), g.psi());  // |b|^2 = 4
    a7 = a7 + (quarter * form_inner(a, b)) * b;
  }
  KForm<S> a27 = a - a1 - a7;
  return {a1, a7, a27};
}

/// Recover h with i(h) = a for a in lambda3_1 + lambda3_27; nullopt if a has
/// a lambda3_7 component (i.e. is not in the image).
template <class S>
std::optional<Matrix<S>> i_map_preimage(const KForm<S>& a) {
  // 28 unknowns: h_ij for i <= j.
  Matrix<S> m(35, 28);
  std::vector<std::pair<int, int>> slots;
  for (int i = 0; i < 7; ++i)
    for (int j = i; j < 7; ++j) slots.push_back({i, j});
  for (int col = 0; col < 28; ++col) {
    Matrix<S> h(7, 7);
    auto [i, j] = slots[col];
    h(i, j) = S(1);
    h(j, i) = S(1);
    KForm<S> im = i_map(h);
    for (int r = 0; r < 35; ++r) m(r, col) = im[r];
  }
  std::vector<S> b(35);
  for (int r = 0; r < 35; ++r) b[r] = a[r];
  auto x = solve(m, b);
  if (!x) return std::nullopt;
  Matrix<S> h(7, 7);
  for (int col = 0; col < 28; ++col) {
    auto [i, j] = slots[col];
    h(i, j) = (*x)[col];
    h(j, i) = (*x)[col];
  }
  return h;
}

/// Metric induced by a candidate G2 3-form: beta_ij vol = (e_i _| a) ^
/// (e_j _| a) ^ a, B = beta/6, g = (det B)^{-1/9} B when beta is definite
/// (after an orientation flip if negative definite); nullopt otherwise.
template <class S>
std::optional<Matrix<S>> metric_from_phi(const KForm<S>& a) {
  if (a.dim() != 7 || a.degree() != 3) throw contract_error("metric_from_phi: need a 3-form on R^7");
  Matrix<S> beta(7, 7);
  std::vector<KForm<S>> contractions;
  for (int i = 0; i < 7; ++i) contractions.push_back(interior(Vector<S>::basis(7, i), a));
  for (int i = 0; i < 7; ++i)
    for (int j = i; j < 7; ++j) {
      KForm<S> top = wedge(wedge(contractions[i], contractions[j]), a);
      beta(i, j) = top[0];
      beta(j, i) = top[0];
    }
  S sixth = scalar_traits<S>::from_ratio(1, 6);
  Matrix<S> b = sixth * beta;
  Definiteness d = definiteness(b);
  if (d == Definiteness::indefinite_or_degenerate) return std::nullopt;
  if (d == Definiteness::negative) b = S(-1) * b;  // flip orientation
  S det = determinant(b);
  S scale;
  if constexpr (scalar_traits<S>::exact) {
    auto root = nth_root_exact(det, 9);
    if (!root) throw exactness_error("metric normalization (det B)^{1/9} is irrational in exact mode");
    scale = S(1) / *root;
  } else {
    scale = std::pow(to_double(det), -1.0 / 9.0);
  }
  return scale * b;
}

/// Derivation action of A in so(7) on a form (vectors transform by v -> Av).
template <class S>
KForm<S> so7_action(const Matrix<S>& a, const KForm<S>& f) {
  const int n = f.dim(), k = f.degree();
  KForm<S> out(n, k);
  std::array<int, kMaxDim> idx{}, repl{};
  for (int r = 0; r < f.terms(); ++r) {
    if (f[r] == S(0)) continue;
    subset_unrank(r, n, k, idx.data());
    for (int pos = 0; pos < k; ++pos) {
      for (int j = 0; j < n; ++j) {
        // e^m -> -A_{m j} e^j on the coframe; for antisymmetric A this is
        // the same matrix action as on vectors.
        S c = -a(idx[pos], j);
        if (c == S(0)) continue;
        for (int t = 0; t < k; ++t) repl[t] = idx[t];
        repl[pos] = j;
        int sgn = sort_with_sign(std::span<int>(repl.data(), k));
        if (sgn == 0) continue;
        out[subset_rank(std::span<const int>(repl.data(), k), n)] += S(sgn) * c * f[r];
      }
    }
  }
  return out;
}

/// Basis of {A in so(7) : A.phi = 0}; dimension 14.  Every element also
/// annihilates psi.
template <class S>
std::vector<Matrix<S>> g2_lie_algebra() {
  const auto& g = G2Structure<S>::model();
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < 7; ++i)
    for (int j = i + 1; j < 7; ++j) pairs.push_back({i, j});
  Matrix<S> action(35, 21);
  for (int col = 0; col < 21; ++col) {
    Matrix<S> a(7, 7);
    a(pairs[col].first, pairs[col].second) = S(1);
    a(pairs[col].second, pairs[col].first) = S(-1);
    KForm<S> img = so7_action(a, g.phi());
    for (int r = 0; r < 35; ++r) action(r, col) = img[r];
  }
  Matrix<S> null = kernel_basis(action);
  std::vector<Matrix<S>> basis;
  for (int c = 0; c < null.cols(); ++c) {
    Matrix<S> a(7, 7);
    for (int col = 0; col < 21; ++col) {
      a(pairs[col].first, pairs[col].second) = null(col, c);
      a(pairs[col].second, pairs[col].first) = -null(col, c);
    }
    basis.push_back(a);
  }
  return basis;
}

/// A coassociative 4-plane together with its oriented associative normal.
template <class S>
class CoassocFrame {
 public:
  CoassocFrame(OrientedPlane<S> plane, double tol = kFloatTolerance)
      : plane_(std::move(plane)), normal_(make_normal(plane_, tol)) {
    const auto& g = G2Structure<S>::model();
    if (!restrict(g.phi(), plane_).is_zero(tol))
      throw contract_error("coassociative frame: phi does not vanish on the plane");
    KForm<S> r = restrict(g.psi(), plane_);
    KForm<S> vol4(4, 4);
    vol4[0] = S(1);
    if (!(r - vol4).is_zero(tol))
      throw contract_error("coassociative frame: psi does not restrict to the volume form");
  }

  /// The model frame: plane spanned by e4,...,e7, normal by e1,e2,e3.
  static const CoassocFrame& model() {
    static const CoassocFrame f(OrientedPlane<S>::coordinate(7, {3, 4, 5, 6}));
    return f;
  }

  const OrientedPlane<S>& plane() const { return plane_; }
  const OrientedPlane<S>& normal() const { return normal_; }

 private:
  static OrientedPlane<S> make_normal(const OrientedPlane<S>& plane, double tol) {
    if (plane.ambient_dim() != 7 || plane.k() != 4)
      throw contract_error("coassociative frame: need a 4-plane in R^7");
    // Kernel of the 4x7 matrix of onb rows = orthogonal complement.
    Matrix<S> rows(4, 7);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 7; ++j) rows(i, j) = plane.onb()[i][j];
    Matrix<S> null = kernel_basis(rows);
    if (null.cols() != 3) throw contract_error("coassociative frame: complement is not 3-dimensional");
    std::vector<Vector<S>> b;
    for (int c = 0; c < 3; ++c) {
      Vector<S> v(7);
      for (int r = 0; r < 7; ++r) v[r] = null(r, c);
      b.push_back(v);
    }
    OrientedPlane<S> normal(7, b);
    // Orient the normal so that phi restricts to +vol3 (associative).
    S val = eval(G2Structure<S>::model().phi(), std::span<const Vector<S>>(normal.onb()));
    if (near_zero(S(val - S(1)), tol)) return normal;
    if (near_zero(S(val + S(1)), tol)) {
      std::swap(b[0], b[1]);
      return OrientedPlane<S>(7, b);
    }
    throw contract_error("coassociative frame: normal is not associative");
  }

  OrientedPlane<S> plane_;
  OrientedPlane<S> normal_;
};

/// Z -> (Z _| phi)|_plane for Z normal to a coassociative plane.  The image
/// is self-dual and |image|^2 = 2 |Z|^2 in the unit-monomial norm.
template <class S>
KForm<S> normal_to_selfdual(const Vector<S>& z, const CoassocFrame<S>& f,
                            double tol = kFloatTolerance) {
  if (!f.plane().contains_normal(z, tol))
    throw contract_error("normal_to_selfdual: vector has a tangential component");
  return restrict(interior(z, G2Structure<S>::model().phi()), f.plane());
}

/// Self-dual / anti-self-dual parts of a 2-form on R^4.
template <class S>
KForm<S> selfdual_part(const KForm<S>& b) {
  if (b.dim() != 4 || b.degree() != 2) throw contract_error("selfdual_part: need a 2-form on R^4");
  S half = scalar_traits<S>::from_ratio(1, 2);
  return half * (b + hodge(b));
}
template <class S>
KForm<S> antiselfdual_part(const KForm<S>& b) {
  if (b.dim() != 4 || b.degree() != 2) throw contract_error("antiselfdual_part: need a 2-form on R^4");
  S half = scalar_traits<S>::from_ratio(1, 2);
  return half * (b - hodge(b));
}

}  // namespace g2lab

#endif
