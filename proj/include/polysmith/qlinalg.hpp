#pragma once

#include <optional>
#include <vector>

#include "errors.hpp"
#include "polynomial.hpp"

namespace polysmith {

// Dense matrices over Q for the small linear systems behind automorphisms
// and completion ansatzes.
using QMatrix = std::vector<std::vector<Coefficient>>;

namespace qla {

inline QMatrix identity(std::size_t n) {
  QMatrix m(n, std::vector<Coefficient>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline QMatrix multiply(const QMatrix& a, const QMatrix& b) {
  std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  QMatrix c(n, std::vector<Coefficient>(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t = 0; t < k; ++t) {
      if (a[i][t] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][t] * b[t][j];
    }
  return c;
}

// Reduced row echelon form in place; returns pivot columns.
inline std::vector<std::size_t> rref(QMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t rows = m.size(), cols = rows ? m[0].size() : 0, r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    Coefficient inv = 1 / m[r][c];
    for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Coefficient f = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::size_t rank(QMatrix m) { return rref(m).size(); }

inline std::optional<QMatrix> inverse(const QMatrix& a) {
  std::size_t n = a.size();
  QMatrix aug(n, std::vector<Coefficient>(2 * n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].size() != n) throw UsageError("inverse of a non-square matrix");
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = a[i][j];
    aug[i][n + i] = 1;
  }
  auto piv = rref(aug);
  if (piv.size() < n || piv[n - 1] != n - 1) return std::nullopt;
  QMatrix inv(n, std::vector<Coefficient>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  return inv;
}

// One solution of A·x = b with free unknowns set to zero, or nullopt.
inline std::optional<std::vector<Coefficient>> solve(const QMatrix& a, const std::vector<Coefficient>& b) {
  std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  QMatrix aug(rows, std::vector<Coefficient>(cols + 1));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) aug[i][j] = a[i][j];
    aug[i][cols] = b[i];
  }
  auto piv = rref(aug);
  if (!piv.empty() && piv.back() == cols) return std::nullopt;
  std::vector<Coefficient> x(cols, 0);
  for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug[r][cols];
  return x;
}

}  // namespace qla
}  // namespace polysmith
