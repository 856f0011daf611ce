#ifndef BEAMFORGE_CORE_MATH_HPP
#define BEAMFORGE_CORE_MATH_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace beamforge {

using Complex = std::complex<double>;
using ComplexVec = std::vector<Complex>;

// Dense complex matrix, row-major.
struct ComplexMat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Complex> data;

  ComplexMat() = default;
  ComplexMat(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

  static ComplexMat identity(std::size_t n);

  Complex& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  const Complex& at(std::size_t r, std::size_t c) const {
    return data[r * cols + c];
  }
};

// result[m] = sum_n conj(A[n,m]) * x[n]  (i.e. A^H x)
ComplexVec hermitian_apply(const ComplexMat& a, const ComplexVec& x);

// Gauss-Jordan inverse with partial pivoting for small well-conditioned
// systems (dimension <= 16). Throws on singular input.
inline constexpr std::size_t kSmallInverseMaxDim = 16;
inline constexpr double kSmallInversePivotTol = 1e-12;
ComplexMat small_inverse(const ComplexMat& a);

double max_abs_entry(const ComplexMat& a);
double l2_norm(const ComplexVec& v);

}  // namespace beamforge

#endif
