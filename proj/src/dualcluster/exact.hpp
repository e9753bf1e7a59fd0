#pragma once

#include <cstdint>
#include <vector>

namespace dualcluster::exact {

// Dense integer matrix, row-major. Small sizes only (graph-scale).
struct IntMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::int64_t> a;

  IntMatrix() = default;
  IntMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}
  std::int64_t& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  std::int64_t at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
};

// Exact determinant of a square integer matrix (Bareiss fraction-free
// elimination, 128-bit intermediates). Throws on overflow.
std::int64_t determinant(const IntMatrix& m);

// Rank over the rationals, via fraction-free elimination.
int rank(IntMatrix m);

// A^T * A for an integer matrix.
IntMatrix gram(const IntMatrix& m);

}  // namespace dualcluster::exact
