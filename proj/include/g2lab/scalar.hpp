// Scalar modes for the whole library.
//
// Every algebraic operation is generic over one scalar type S with two
// supported instantiations:
//
//   * g2lab::Rational  -- exact rational arithmetic (default for identity
//                         suites; no rounding ever occurs)
//   * double           -- binary floats for analytic / finite-difference work
//
// Float comparisons must go through an explicit tolerance; exact-mode
// comparisons are plain equality.

#ifndef G2LAB_SCALAR_HPP
#define G2LAB_SCALAR_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

namespace g2lab {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Thrown when an operation's preconditions are violated.
struct contract_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when a value required to stay in Q (e.g. an exact square root)
/// does not exist in exact mode.
struct exactness_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Default tolerance for algebraic residues in float mode.
inline constexpr double kFloatTolerance = 1e-10;

/// Exact integer n-th root, if it exists.
inline std::optional<BigInt> nth_root_exact(const BigInt& x, unsigned n) {
  if (x < 0) return std::nullopt;
  if (x == 0 || x == 1) return x;
  // Binary search: values in this library are small, so this is plenty.
  BigInt lo = 1, hi = x;
  while (lo <= hi) {
    BigInt mid = (lo + hi) / 2;
    BigInt p = 1;
    bool over = false;
    for (unsigned i = 0; i < n && !over; ++i) {
      p *= mid;
      if (p > x) over = true;
    }
    if (!over && p == x) return mid;
    if (over || p > x)
      hi = mid - 1;
    else
      lo = mid + 1;
  }
  return std::nullopt;
}

inline std::optional<Rational> nth_root_exact(const Rational& x, unsigned n) {
  if (x < 0) return std::nullopt;
  auto np = nth_root_exact(numerator(x), n);
  auto dp = nth_root_exact(denominator(x), n);
  if (!np || !dp) return std::nullopt;
  return Rational(*np, *dp);
}

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<double> {
  static constexpr bool exact = false;
  static double from_ratio(long long p, long long q) {
    return static_cast<double>(p) / static_cast<double>(q);
  }
  static double to_double(double x) { return x; }
  static double abs(double x) { return std::fabs(x); }
  static double sqrt(double x) {
    if (x < 0) throw contract_error("sqrt of negative scalar");
    return std::sqrt(x);
  }
  static std::string str(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
  }
};

template <>
struct scalar_traits<Rational> {
  static constexpr bool exact = true;
  static Rational from_ratio(long long p, long long q) { return Rational(p, q); }
  static double to_double(const Rational& x) {
    return numerator(x).convert_to<double>() / denominator(x).convert_to<double>();
  }
  static Rational abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }
  static Rational sqrt(const Rational& x) {
    if (x < 0) throw contract_error("sqrt of negative scalar");
    auto r = nth_root_exact(x, 2);
    if (!r) throw exactness_error("square root is irrational in exact mode");
    return *r;
  }
  static std::string str(const Rational& x) { return x.str(); }
};

template <class S>
double to_double(const S& x) {
  return scalar_traits<S>::to_double(x);
}

/// |x| <= tol, with tol ignored in exact mode (plain equality with 0).
template <class S>
bool near_zero(const S& x, double tol = kFloatTolerance) {
  if constexpr (scalar_traits<S>::exact)
    return x == 0;
  else
    return scalar_traits<S>::abs(x) <= tol;
}

/// Parse "p/q" or "p" (used by the structure-constants file format).
inline Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(text));
    BigInt p(text.substr(0, slash));
    BigInt q(text.substr(slash + 1));
    if (q == 0) throw contract_error("zero denominator");
    return Rational(p, q);
  } catch (const std::exception&) {
    throw contract_error("cannot parse rational value '" + text + "'");
  }
}

}  // namespace g2lab

#endif
