#include "beamforge/core_math.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace beamforge {

ComplexMat ComplexMat::identity(std::size_t n) {
  ComplexMat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

ComplexVec hermitian_apply(const ComplexMat& a, const ComplexVec& x) {
  if (a.rows != x.size()) {
    throw std::invalid_argument(
        "hermitian_apply: matrix has " + std::to_string(a.rows) +
        " rows but vector has length " + std::to_string(x.size()));
  }
  ComplexVec result(a.cols, Complex{0.0, 0.0});
  // Row-major sweep; each result[m] accumulates over n in ascending order.
  for (std::size_t n = 0; n < a.rows; ++n) {
    const Complex xn = x[n];
    const Complex* row = a.data.data() + n * a.cols;
    for (std::size_t m = 0; m < a.cols; ++m) {
      result[m] += std::conj(row[m]) * xn;
    }
  }
  return result;
}

ComplexMat small_inverse(const ComplexMat& a) {
  if (a.rows != a.cols) {
    throw std::invalid_argument("small_inverse: matrix is not square");
  }
  const std::size_t n = a.rows;
  if (n == 0 || n > kSmallInverseMaxDim) {
    throw std::invalid_argument("small_inverse: dimension " +
                                std::to_string(n) + " outside [1, " +
                                std::to_string(kSmallInverseMaxDim) + "]");
  }

  ComplexMat work = a;
  ComplexMat inv = ComplexMat::identity(n);

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    double best = std::abs(work.at(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      const double v = std::abs(work.at(r, col));
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best <= kSmallInversePivotTol) {
      throw std::runtime_error(
          "small_inverse: singular matrix (pivot " + std::to_string(best) +
          " at column " + std::to_string(col) + "), degenerate beam selection");
    }
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(work.at(pivot, c), work.at(col, c));
        std::swap(inv.at(pivot, c), inv.at(col, c));
      }
    }
    const Complex diag = work.at(col, col);
    for (std::size_t c = 0; c < n; ++c) {
      work.at(col, c) /= diag;
      inv.at(col, c) /= diag;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const Complex factor = work.at(r, col);
      if (factor == Complex{0.0, 0.0}) continue;
      for (std::size_t c = 0; c < n; ++c) {
        work.at(r, c) -= factor * work.at(col, c);
        inv.at(r, c) -= factor * inv.at(col, c);
      }
    }
  }
  return inv;
}

double max_abs_entry(const ComplexMat& a) {
  double best = 0.0;
  for (const Complex& v : a.data) best = std::max(best, std::abs(v));
  return best;
}

double l2_norm(const ComplexVec& v) {
  double sum = 0.0;
  for (const Complex& z : v) sum += std::norm(z);
  return std::sqrt(sum);
}

}  // namespace beamforge
