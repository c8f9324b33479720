#pragma once

#include <vector>

#include "errors.hpp"

namespace germfold {

// Dense row-major matrices over an arbitrary commutative field scalar;
// sized for the c x c Gram blocks (c is the germ codimension).
template <class T>
using SmallMat = std::vector<std::vector<T>>;

template <class T>
T smallmat_det(const SmallMat<T>& a) {
  size_t n = a.size();
  if (n == 0) return T(1);
  if (n == 1) return a[0][0];
  if (n == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
  T acc(0);
  // Cofactor expansion along the first row.
  for (size_t j = 0; j < n; ++j) {
    if (a[0][j] == T(0)) continue;
    SmallMat<T> minor(n - 1, std::vector<T>(n - 1, T(0)));
    for (size_t r = 1; r < n; ++r) {
      size_t cc = 0;
      for (size_t c = 0; c < n; ++c) {
        if (c == j) continue;
        minor[r - 1][cc++] = a[r][c];
      }
    }
    T term = a[0][j] * smallmat_det(minor);
    if (j % 2 == 0)
      acc += term;
    else
      acc -= term;
  }
  return acc;
}

// Adjugate: adj(A) * A = det(A) * I. The 1x1 adjugate is [1].
template <class T>
SmallMat<T> smallmat_adjugate(const SmallMat<T>& a) {
  size_t n = a.size();
  SmallMat<T> adj(n, std::vector<T>(n, T(0)));
  if (n == 1) {
    adj[0][0] = T(1);
    return adj;
  }
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      SmallMat<T> minor(n - 1, std::vector<T>(n - 1, T(0)));
      size_t rr = 0;
      for (size_t r = 0; r < n; ++r) {
        if (r == i) continue;
        size_t cc = 0;
        for (size_t c = 0; c < n; ++c) {
          if (c == j) continue;
          minor[rr][cc++] = a[r][c];
        }
        ++rr;
      }
      T cof = smallmat_det(minor);
      if ((i + j) % 2 == 1) cof = -cof;
      adj[j][i] = cof;  // transpose of the cofactor matrix
    }
  }
  return adj;
}

// Enumerates all c-element column subsets of a c x n matrix and sums the
// squared block determinants (the Cauchy-Binet side of det(M M^T)).
template <class T>
T cauchy_binet_sum(const SmallMat<T>& m) {
  size_t c = m.size();
  if (c == 0) return T(1);
  size_t n = m[0].size();
  if (c > n) fail(errc::bad_argument, "WideMatrixRequired");
  std::vector<size_t> idx(c);
  for (size_t i = 0; i < c; ++i) idx[i] = i;
  T acc(0);
  for (;;) {
    SmallMat<T> block(c, std::vector<T>(c, T(0)));
    for (size_t i = 0; i < c; ++i)
      for (size_t j = 0; j < c; ++j) block[i][j] = m[i][idx[j]];
    T d = smallmat_det(block);
    acc += d * d;
    // next combination
    size_t k = c;
    while (k > 0) {
      --k;
      if (idx[k] + (c - k) < n) {
        ++idx[k];
        for (size_t j = k + 1; j < c; ++j) idx[j] = idx[j - 1] + 1;
        break;
      }
      if (k == 0) return acc;
    }
  }
}

}  // namespace germfold
