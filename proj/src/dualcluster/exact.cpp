#include "dualcluster/exact.hpp"

#include <limits>
#include <stdexcept>

namespace dualcluster::exact {

namespace {

using i128 = __int128;

std::int64_t narrow(i128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min()) {
    throw std::overflow_error("exact::determinant: 64-bit overflow");
  }
  return static_cast<std::int64_t>(v);
}

}  // namespace

std::int64_t determinant(const IntMatrix& m) {
  if (m.rows != m.cols) throw std::invalid_argument("determinant: matrix not square");
  const int n = m.rows;
  if (n == 0) return 1;

  std::vector<i128> w(m.a.begin(), m.a.end());
  auto at = [&](int r, int c) -> i128& { return w[static_cast<size_t>(r) * n + c]; };

  int sign = 1;
  i128 prev = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (at(k, k) == 0) {
      int p = k + 1;
      while (p < n && at(p, k) == 0) ++p;
      if (p == n) return 0;
      for (int c = k; c < n; ++c) std::swap(at(k, c), at(p, c));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        // Bareiss: every division is exact.
        at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
      }
      at(i, k) = 0;
    }
    prev = at(k, k);
  }
  return narrow(sign * at(n - 1, n - 1));
}

int rank(IntMatrix m) {
  const int rows = m.rows, cols = m.cols;
  std::vector<i128> w(m.a.begin(), m.a.end());
  auto at = [&](int r, int c) -> i128& { return w[static_cast<size_t>(r) * cols + c]; };

  int r = 0;
  i128 prev = 1;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = r;
    while (p < rows && at(p, c) == 0) ++p;
    if (p == rows) continue;
    if (p != r)
      for (int j = 0; j < cols; ++j) std::swap(at(r, j), at(p, j));
    for (int i = r + 1; i < rows; ++i) {
      for (int j = c + 1; j < cols; ++j) {
        at(i, j) = (at(i, j) * at(r, c) - at(i, c) * at(r, j)) / prev;
      }
      at(i, c) = 0;
    }
    prev = at(r, c);
    ++r;
  }
  return r;
}

IntMatrix gram(const IntMatrix& m) {
  IntMatrix g(m.cols, m.cols);
  for (int i = 0; i < m.cols; ++i) {
    for (int j = i; j < m.cols; ++j) {
      std::int64_t s = 0;
      for (int r = 0; r < m.rows; ++r) s += m.at(r, i) * m.at(r, j);
      g.at(i, j) = s;
      g.at(j, i) = s;
    }
  }
  return g;
}

}  // namespace dualcluster::exact
