// Seeded random inputs shared by the property suites and the CLI checks.

#ifndef G2LAB_GENERATORS_HPP
#define G2LAB_GENERATORS_HPP

#include "g2.hpp"
#include "rng.hpp"

namespace g2lab::gen {

template <class S>
Vector<S> random_vector(Rng& rng, int dim, long long num_max = 5, long long den_max = 3) {
  Vector<S> v(dim);
  for (int i = 0; i < dim; ++i) v[i] = rng.small_scalar<S>(num_max, den_max);
  return v;
}

template <class S>
KForm<S> random_form(Rng& rng, int dim, int degree, long long num_max = 5, long long den_max = 3) {
  KForm<S> f(dim, degree);
  for (int r = 0; r < f.terms(); ++r) f[r] = rng.small_scalar<S>(num_max, den_max);
  return f;
}

template <class S>
Matrix<S> random_symmetric(Rng& rng, int n, long long num_max = 5, long long den_max = 3) {
  Matrix<S> h(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      h(i, j) = rng.small_scalar<S>(num_max, den_max);
      h(j, i) = h(i, j);
    }
  return h;
}

template <class S>
Matrix<S> random_symmetric_tracefree(Rng& rng, int n) {
  auto h = random_symmetric<S>(rng, n);
  S t(0);
  for (int i = 0; i + 1 < n; ++i) t += h(i, i);
  h(n - 1, n - 1) = -t;
  return h;
}

/// Random element of lambda2_14.
template <class S>
KForm<S> random_lambda2_14(Rng& rng) {
  auto [a7, a14] = project_lambda2(random_form<S>(rng, 7, 2));
  (void)a7;
  return a14;
}

/// Random vector normal to the model coassociative plane.
template <class S>
Vector<S> random_normal_vector(Rng& rng) {
  Vector<S> z(7);
  for (int i = 0; i < 3; ++i) z[i] = rng.small_scalar<S>();
  return z;
}

/// Random self-dual 2-form on R^4.
template <class S>
KForm<S> random_selfdual4(Rng& rng) {
  KForm<S> alpha(4, 2);
  const std::array<KForm<S>, 3> sd = {
      KForm<S>::monomial(4, {0, 1}) + KForm<S>::monomial(4, {2, 3}),
      KForm<S>::monomial(4, {0, 2}) - KForm<S>::monomial(4, {1, 3}),
      KForm<S>::monomial(4, {0, 3}) + KForm<S>::monomial(4, {1, 2})};
  for (const auto& b : sd) alpha = alpha + rng.small_scalar<S>() * b;
  return alpha;
}

}  // namespace g2lab::gen

#endif
