#pragma once

// Small dense Gaussian elimination over an exact or high-precision scalar.

#include "slab/arith.hpp"

#include <optional>
#include <vector>

namespace slab::linalg {

template <class T>
using Matrix = std::vector<std::vector<T>>;

template <class T>
inline T magnitude(const T& x) {
  return x < 0 ? T(-x) : x;
}

/// Row echelon form in place; returns pivot columns. Entries with magnitude
/// <= tol count as zero (tol = 0 for exact types).
template <class T>
std::vector<std::size_t> row_reduce(Matrix<T>& m, const T& tol = T(0)) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t rows = m.size(), cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t best = r;
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (magnitude(m[i][c]) > magnitude(m[best][c])) best = i;
    }
    if (magnitude(m[best][c]) <= tol) continue;
    std::swap(m[best], m[r]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      T f = m[i][c] / m[r][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <class T>
std::size_t rank(Matrix<T> m, const T& tol = T(0)) {
  return row_reduce(m, tol).size();
}

/// Solves a square system; nullopt when singular.
template <class T>
std::optional<std::vector<T>> solve(Matrix<T> a, std::vector<T> b, const T& tol = T(0)) {
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) a[i].push_back(b[i]);
  auto piv = row_reduce(a, tol);
  if (piv.size() < n || piv.back() >= n) return std::nullopt;
  std::vector<T> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = a[i][n] / a[i][i];
  return x;
}

template <class T>
T determinant(Matrix<T> m) {
  const std::size_t n = m.size();
  T det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t best = c;
    for (std::size_t i = c + 1; i < n; ++i) {
      if (magnitude(m[i][c]) > magnitude(m[best][c])) best = i;
    }
    if (m[best][c] == 0) return T(0);
    if (best != c) {
      std::swap(m[best], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      T f = m[i][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  return det;
}

}  // namespace slab::linalg
