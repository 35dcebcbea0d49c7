// Exterior algebra over R^n (n <= 8).
//
// A KForm stores the coefficients of a degree-k alternating form on the
// basis of strictly increasing multi-indices in lexicographic order.  The
// inner product makes those basis monomials orthonormal, the Hodge star is
// taken with respect to the Euclidean metric and the orientation
// e^0 ^ ... ^ e^{n-1}.

#ifndef G2LAB_FORMS_HPP
#define G2LAB_FORMS_HPP

#include <array>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "linalg.hpp"
#include "multiindex.hpp"
#include "scalar.hpp"

namespace g2lab {

inline constexpr int kMaxDim = 8;

template <class S>
class Vector {
 public:
  Vector() = default;
  explicit Vector(int dim) : c_(dim, S(0)) {}
  Vector(std::initializer_list<S> vals) : c_(vals) {}

  static Vector basis(int dim, int i) {
    Vector v(dim);
    v[i] = S(1);
    return v;
  }

  int dim() const { return static_cast<int>(c_.size()); }
  S& operator[](int i) { return c_[i]; }
  const S& operator[](int i) const { return c_[i]; }

  friend Vector operator+(const Vector& a, const Vector& b) {
    Vector r = a;
    for (int i = 0; i < r.dim(); ++i) r[i] += b[i];
    return r;
  }
  friend Vector operator-(const Vector& a, const Vector& b) {
    Vector r = a;
    for (int i = 0; i < r.dim(); ++i) r[i] -= b[i];
    return r;
  }
  friend Vector operator*(const S& s, const Vector& a) {
    Vector r = a;
    for (auto& x : r.c_) x = s * x;
    return r;
  }
  Vector operator-() const { return S(-1) * *this; }
  bool operator==(const Vector& o) const { return c_ == o.c_; }

  S dot(const Vector& o) const {
    S acc(0);
    for (int i = 0; i < dim(); ++i) acc += c_[i] * o.c_[i];
    return acc;
  }
  S norm2() const { return dot(*this); }

  bool is_zero(double tol = kFloatTolerance) const {
    for (const auto& x : c_)
      if (!near_zero(x, tol)) return false;
    return true;
  }

 private:
  std::vector<S> c_;
};

template <class S>
class KForm {
 public:
  KForm() : dim_(0), degree_(0) {}
  KForm(int dim, int degree)
      : dim_(dim), degree_(degree), c_(static_cast<size_t>(binomial(dim, degree)), S(0)) {
    if (dim < 1 || dim > kMaxDim || degree < 0 || degree > dim)
      throw contract_error("bad form dimension/degree");
  }

  /// Monomial c * e^{idx}; idx need not be sorted (parity handled).
  static KForm monomial(int dim, std::initializer_list<int> idx, S coeff = S(1)) {
    std::vector<int> v(idx);
    return monomial_v(dim, v, coeff);
  }
  static KForm monomial_v(int dim, std::vector<int> v, S coeff = S(1)) {
    KForm f(dim, static_cast<int>(v.size()));
    int sgn = sort_with_sign(v);
    if (sgn != 0) f.c_[subset_rank(v, dim)] = (sgn > 0) ? coeff : S(-coeff);
    return f;
  }

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  int terms() const { return static_cast<int>(c_.size()); }

  S& operator[](int rank) { return c_[rank]; }
  const S& operator[](int rank) const { return c_[rank]; }

  /// Coefficient of e^{idx} (idx arbitrary order; sign folded in).
  S coeff(std::initializer_list<int> idx) const {
    std::vector<int> v(idx);
    int sgn = sort_with_sign(v);
    if (sgn == 0) return S(0);
    S x = c_[subset_rank(v, dim_)];
    return sgn > 0 ? x : S(-x);
  }

  friend KForm operator+(const KForm& a, const KForm& b) {
    a.require_same_shape(b);
    KForm r = a;
    for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] += b.c_[i];
    return r;
  }
  friend KForm operator-(const KForm& a, const KForm& b) {
    a.require_same_shape(b);
    KForm r = a;
    for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] -= b.c_[i];
    return r;
  }
  friend KForm operator*(const S& s, const KForm& a) {
    KForm r = a;
    for (auto& x : r.c_) x = s * x;
    return r;
  }
  KForm operator-() const { return S(-1) * *this; }
  bool operator==(const KForm& o) const {
    return dim_ == o.dim_ && degree_ == o.degree_ && c_ == o.c_;
  }

  bool is_zero(double tol = kFloatTolerance) const {
    for (const auto& x : c_)
      if (!near_zero(x, tol)) return false;
    return true;
  }

  double max_abs() const {
    double m = 0;
    for (const auto& x : c_) m = std::max(m, std::fabs(to_double(x)));
    return m;
  }

  void require_same_shape(const KForm& o) const {
    if (dim_ != o.dim_ || degree_ != o.degree_)
      throw contract_error("form dimension/degree mismatch");
  }

  /// Human-readable, 1-based: "e123 + 2 e145 - ...".
  std::string str() const {
    std::string out;
    std::array<int, kMaxDim> idx{};
    for (int r = 0; r < terms(); ++r) {
      if (c_[r] == S(0)) continue;
      subset_unrank(r, dim_, degree_, idx.data());
      if (!out.empty()) out += " + ";
      out += scalar_traits<S>::str(c_[r]);
      out += "*e";
      for (int p = 0; p < degree_; ++p) out += std::to_string(idx[p] + 1);
    }
    return out.empty() ? "0" : out;
  }

 private:
  int dim_, degree_;
  std::vector<S> c_;
};

template <class S>
KForm<S> wedge(const KForm<S>& a, const KForm<S>& b) {
  if (a.dim() != b.dim()) throw contract_error("wedge: ambient dimension mismatch");
  const int n = a.dim(), p = a.degree(), q = b.degree();
  if (p + q > n) throw contract_error("wedge: degree sum exceeds dimension");
  KForm<S> out(n, p + q);
  std::array<int, kMaxDim> ia{}, ib{}, merged{};
  for (int ra = 0; ra < a.terms(); ++ra) {
    if (a[ra] == S(0)) continue;
    subset_unrank(ra, n, p, ia.data());
    for (int rb = 0; rb < b.terms(); ++rb) {
      if (b[rb] == S(0)) continue;
      subset_unrank(rb, n, q, ib.data());
      int sgn = merge_with_sign(std::span<const int>(ia.data(), p),
                                std::span<const int>(ib.data(), q),
                                std::span<int>(merged.data(), p + q));
      if (sgn == 0) continue;
      S term = a[ra] * b[rb];
      out[subset_rank(std::span<const int>(merged.data(), p + q), n)] += (sgn > 0) ? term : S(-term);
    }
  }
  return out;
}

template <class S>
KForm<S> interior(const Vector<S>& v, const KForm<S>& a) {
  if (v.dim() != a.dim()) throw contract_error("interior: ambient dimension mismatch");
  if (a.degree() < 1) throw contract_error("interior: degree-0 form");
  const int n = a.dim(), k = a.degree();
  KForm<S> out(n, k - 1);
  std::array<int, kMaxDim> idx{}, rest{};
  for (int r = 0; r < a.terms(); ++r) {
    if (a[r] == S(0)) continue;
    subset_unrank(r, n, k, idx.data());
    for (int pos = 0; pos < k; ++pos) {
      if (v[idx[pos]] == S(0)) continue;
      int w = 0;
      for (int t = 0; t < k; ++t)
        if (t != pos) rest[w++] = idx[t];
      S term = v[idx[pos]] * a[r];
      out[subset_rank(std::span<const int>(rest.data(), k - 1), n)] += (pos % 2 == 0) ? term : S(-term);
    }
  }
  return out;
}

template <class S>
KForm<S> hodge(const KForm<S>& a) {
  const int n = a.dim(), k = a.degree();
  KForm<S> out(n, n - k);
  std::array<int, kMaxDim> idx{}, comp{}, all{};
  for (int r = 0; r < a.terms(); ++r) {
    if (a[r] == S(0)) continue;
    subset_unrank(r, n, k, idx.data());
    subset_complement(std::span<const int>(idx.data(), k), n, std::span<int>(comp.data(), n - k));
    int sgn = merge_with_sign(std::span<const int>(idx.data(), k),
                              std::span<const int>(comp.data(), n - k),
                              std::span<int>(all.data(), n));
    out[subset_rank(std::span<const int>(comp.data(), n - k), n)] = (sgn > 0) ? a[r] : S(-a[r]);
  }
  return out;
}

/// Inner product making the monomials e^{i1...ik} orthonormal.
template <class S>
S form_inner(const KForm<S>& a, const KForm<S>& b) {
  a.require_same_shape(b);
  S acc(0);
  for (int r = 0; r < a.terms(); ++r) acc += a[r] * b[r];
  return acc;
}

template <class S>
S form_norm2(const KForm<S>& a) {
  return form_inner(a, a);
}

/// Evaluate a k-form on k vectors.
template <class S>
S eval(const KForm<S>& a, std::span<const Vector<S>> vs) {
  const int n = a.dim(), k = a.degree();
  if (static_cast<int>(vs.size()) != k) throw contract_error("eval: wrong number of vectors");
  S acc(0);
  std::array<int, kMaxDim> idx{};
  for (int r = 0; r < a.terms(); ++r) {
    if (a[r] == S(0)) continue;
    subset_unrank(r, n, k, idx.data());
    Matrix<S> m(k, k);
    for (int row = 0; row < k; ++row)
      for (int col = 0; col < k; ++col) m(row, col) = vs[col][idx[row]];
    acc += a[r] * determinant(m);
  }
  return acc;
}

/// e^{v1} ^ ... ^ e^{vk} with the Euclidean identification of vectors and
/// covectors; norm^2 equals the Gram determinant.
template <class S>
KForm<S> simple_kvector(std::span<const Vector<S>> vs) {
  if (vs.empty()) throw contract_error("simple_kvector: no vectors");
  const int n = vs[0].dim();
  KForm<S> acc(n, 0);
  acc[0] = S(1);
  for (const auto& v : vs) {
    KForm<S> one(n, 1);
    for (int i = 0; i < n; ++i) one[i] = v[i];
    acc = wedge(acc, one);
  }
  return acc;
}

template <class S>
Matrix<S> gram(std::span<const Vector<S>> vs) {
  const int k = static_cast<int>(vs.size());
  Matrix<S> g(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) g(i, j) = vs[i].dot(vs[j]);
  return g;
}

/// Oriented subspace with a cached orthonormal basis.  In exact mode the
/// Gram-Schmidt norms must be rational squares; random planes should be
/// orthonormalized in float mode.
template <class S>
class OrientedPlane {
 public:
  OrientedPlane(int ambient_dim, std::vector<Vector<S>> basis)
      : ambient_(ambient_dim), basis_(std::move(basis)) {
    if (basis_.empty()) throw contract_error("plane: empty basis");
    for (const auto& v : basis_)
      if (v.dim() != ambient_) throw contract_error("plane: vector dimension mismatch");
    if (near_zero(determinant(gram(std::span<const Vector<S>>(basis_))),
                  1e-12))
      throw contract_error("plane: degenerate (Gram determinant vanishes)");
    orthonormalize();
  }

  static OrientedPlane coordinate(int ambient_dim, std::initializer_list<int> axes) {
    std::vector<Vector<S>> b;
    for (int i : axes) b.push_back(Vector<S>::basis(ambient_dim, i));
    return OrientedPlane(ambient_dim, std::move(b));
  }

  int ambient_dim() const { return ambient_; }
  int k() const { return static_cast<int>(basis_.size()); }
  const std::vector<Vector<S>>& basis() const { return basis_; }
  const std::vector<Vector<S>>& onb() const { return onb_; }

  /// Orthogonal projection onto the plane.
  Vector<S> project(const Vector<S>& v) const {
    Vector<S> out(ambient_);
    for (const auto& u : onb_) out = out + u.dot(v) * u;
    return out;
  }
  bool contains_normal(const Vector<S>& v, double tol = kFloatTolerance) const {
    return project(v).is_zero(tol);
  }

 private:
  void orthonormalize() {
    for (const auto& v : basis_) {
      Vector<S> w = v;
      for (const auto& u : onb_) w = w - u.dot(v) * u;
      S n2 = w.norm2();
      if (near_zero(n2, 1e-24)) throw contract_error("plane: degenerate basis");
      onb_.push_back(S(1) / scalar_traits<S>::sqrt(n2) * w);
    }
  }

  int ambient_;
  std::vector<Vector<S>> basis_;
  std::vector<Vector<S>> onb_;
};

/// Pullback along the inclusion of the plane, expressed in its oriented
/// orthonormal basis; the result lives on R^k.
template <class S>
KForm<S> restrict(const KForm<S>& a, const OrientedPlane<S>& p) {
  if (a.dim() != p.ambient_dim()) throw contract_error("restrict: ambient dimension mismatch");
  const int k = p.k(), deg = a.degree();
  if (deg > k) throw contract_error("restrict: form degree exceeds plane dimension");
  KForm<S> out(k, deg);
  std::array<int, kMaxDim> sel{};
  std::vector<Vector<S>> vs(static_cast<size_t>(deg), Vector<S>(a.dim()));
  for (int r = 0; r < out.terms(); ++r) {
    subset_unrank(r, k, deg, sel.data());
    for (int t = 0; t < deg; ++t) vs[t] = p.onb()[sel[t]];
    out[r] = eval(a, std::span<const Vector<S>>(vs));
  }
  return out;
}

}  // namespace g2lab

#endif
