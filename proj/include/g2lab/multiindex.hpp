// Multi-index bookkeeping for alternating forms.
//
// Basis monomials e^{i1...ik} are indexed by strictly increasing subsets of
// {0,...,n-1} in lexicographic order.  Every sign in the library derives from
// permutation parity computed here, so there is a single source of sign
// conventions.

#ifndef G2LAB_MULTIINDEX_HPP
#define G2LAB_MULTIINDEX_HPP

#include <algorithm>
#include <array>
#include <span>
#include <vector>

namespace g2lab {

inline long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  long long v = 1;
  for (int i = 0; i < k; ++i) v = v * (n - i) / (i + 1);
  return v;
}

/// Lexicographic rank of a sorted k-subset of {0..n-1}.
inline int subset_rank(std::span<const int> idx, int n) {
  int k = static_cast<int>(idx.size());
  long long r = 0;
  int prev = -1;
  for (int pos = 0; pos < k; ++pos) {
    for (int v = prev + 1; v < idx[pos]; ++v) r += binomial(n - 1 - v, k - 1 - pos);
    prev = idx[pos];
  }
  return static_cast<int>(r);
}

/// Inverse of subset_rank.
inline void subset_unrank(long long rank, int n, int k, int* out) {
  int v = 0;
  for (int pos = 0; pos < k; ++pos) {
    while (true) {
      long long c = binomial(n - 1 - v, k - 1 - pos);
      if (rank < c) {
        out[pos] = v++;
        break;
      }
      rank -= c;
      ++v;
    }
  }
}

/// Sorts idx in place; returns the permutation parity (+1/-1), or 0 if a
/// duplicate index occurs.
inline int sort_with_sign(std::span<int> idx) {
  int sign = 1;
  const int k = static_cast<int>(idx.size());
  for (int i = 1; i < k; ++i) {
    int x = idx[i];
    int j = i;
    while (j > 0 && idx[j - 1] > x) {
      idx[j] = idx[j - 1];
      sign = -sign;
      --j;
    }
    idx[j] = x;
  }
  for (int i = 1; i < k; ++i)
    if (idx[i] == idx[i - 1]) return 0;
  return sign;
}

/// Merge two sorted disjoint index sets; returns the parity of the shuffle
/// (a, b) -> sorted(a ++ b), or 0 if the sets intersect.  `out` receives the
/// merged set.
inline int merge_with_sign(std::span<const int> a, std::span<const int> b, std::span<int> out) {
  const int ka = static_cast<int>(a.size()), kb = static_cast<int>(b.size());
  int ia = 0, ib = 0, sign = 1, pos = 0;
  while (ia < ka && ib < kb) {
    if (a[ia] == b[ib]) return 0;
    if (a[ia] < b[ib]) {
      out[pos++] = a[ia++];
    } else {
      // b[ib] jumps over the remaining ka - ia entries of a.
      if ((ka - ia) % 2 != 0) sign = -sign;
      out[pos++] = b[ib++];
    }
  }
  while (ia < ka) out[pos++] = a[ia++];
  while (ib < kb) out[pos++] = b[ib++];
  return sign;
}

/// Complement of a sorted subset of {0..n-1}, in increasing order.
inline void subset_complement(std::span<const int> idx, int n, std::span<int> out) {
  int pos = 0, j = 0;
  for (int v = 0; v < n; ++v) {
    if (j < static_cast<int>(idx.size()) && idx[j] == v) {
      ++j;
    } else {
      out[pos++] = v;
    }
  }
}

}  // namespace g2lab

#endif
