#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "beamforge/core_math.hpp"
#include "beamforge/rng.hpp"
#include "doctest.h"

using namespace beamforge;

namespace {

// Independent element-wise oracle for A^H x.
ComplexVec hermitian_apply_oracle(const ComplexMat& a, const ComplexVec& x) {
  ComplexVec out(a.cols);
  for (std::size_t m = 0; m < a.cols; ++m) {
    Complex acc{0.0, 0.0};
    for (std::size_t n = 0; n < a.rows; ++n) {
      acc += std::conj(a.at(n, m)) * x[n];
    }
    out[m] = acc;
  }
  return out;
}

ComplexMat random_matrix(std::size_t rows, std::size_t cols, RngStream& rng) {
  ComplexMat a(rows, cols);
  for (Complex& v : a.data) v = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
  return a;
}

}  // namespace

TEST_CASE("hermitian_apply identity and conjugation") {
  ComplexMat eye = ComplexMat::identity(2);
  const ComplexVec x = {{1.0, 1.0}, {2.0, 0.0}};
  const ComplexVec y = hermitian_apply(eye, x);
  CHECK(y[0] == Complex{1.0, 1.0});
  CHECK(y[1] == Complex{2.0, 0.0});

  ComplexMat col(2, 1);
  col.at(0, 0) = {0.0, 1.0};
  col.at(1, 0) = {0.0, 0.0};
  const ComplexVec z = hermitian_apply(col, {{1.0, 0.0}, {5.0, 0.0}});
  REQUIRE(z.size() == 1);
  CHECK(z[0].real() == doctest::Approx(0.0));
  CHECK(z[0].imag() == doctest::Approx(-1.0));
}

TEST_CASE("hermitian_apply matches the double-loop oracle") {
  RngStream rng = derive_stream(42, 0);
  // Exhaustive small shapes, then a handful of larger ones.
  for (std::size_t rows = 1; rows <= 8; ++rows) {
    for (std::size_t cols = 1; cols <= 8; ++cols) {
      const ComplexMat a = random_matrix(rows, cols, rng);
      ComplexVec x(rows);
      for (Complex& v : x) v = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
      const ComplexVec got = hermitian_apply(a, x);
      const ComplexVec want = hermitian_apply_oracle(a, x);
      for (std::size_t m = 0; m < cols; ++m) {
        CHECK(std::abs(got[m] - want[m]) < 1e-13);
      }
    }
  }
  const ComplexMat a = random_matrix(8, 3, rng);
  ComplexVec x(8);
  for (Complex& v : x) v = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
  const ComplexVec got = hermitian_apply(a, x);
  const ComplexVec want = hermitian_apply_oracle(a, x);
  for (std::size_t m = 0; m < 3; ++m) {
    CHECK(std::abs(got[m] - want[m]) < 1e-14);
  }
}

TEST_CASE("hermitian_apply rejects dimension mismatch") {
  ComplexMat a(3, 2);
  CHECK_THROWS_AS(hermitian_apply(a, ComplexVec(2)), std::invalid_argument);
}

TEST_CASE("small_inverse identity and diagonal") {
  const ComplexMat eye = ComplexMat::identity(3);
  const ComplexMat inv = small_inverse(eye);
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      CHECK(std::abs(inv.at(r, c) - (r == c ? 1.0 : 0.0)) < 1e-15);
    }
  }

  ComplexMat diag(2, 2);
  diag.at(0, 0) = 2.0;
  diag.at(1, 1) = 4.0;
  const ComplexMat dinv = small_inverse(diag);
  CHECK(std::abs(dinv.at(0, 0) - 0.5) < 1e-15);
  CHECK(std::abs(dinv.at(1, 1) - 0.25) < 1e-15);
  CHECK(std::abs(dinv.at(0, 1)) < 1e-15);
}

TEST_CASE("small_inverse residual on random well-conditioned systems") {
  RngStream rng = derive_stream(7, 3);
  for (std::size_t n = 1; n <= 8; ++n) {
    ComplexMat a = random_matrix(n, n, rng);
    // Diagonal dominance keeps the condition number small.
    for (std::size_t i = 0; i < n; ++i) a.at(i, i) += Complex{4.0, 0.0};
    const ComplexMat inv = small_inverse(a);
    ComplexMat prod(n, n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        Complex acc{0.0, 0.0};
        for (std::size_t k = 0; k < n; ++k) acc += a.at(r, k) * inv.at(k, c);
        prod.at(r, c) = acc - (r == c ? Complex{1.0, 0.0} : Complex{0.0, 0.0});
      }
    }
    CHECK(max_abs_entry(prod) < 1e-10);
  }
}

TEST_CASE("small_inverse error paths") {
  ComplexMat singular(2, 2);
  singular.at(0, 0) = 1.0;
  singular.at(0, 1) = 1.0;
  singular.at(1, 0) = 1.0;
  singular.at(1, 1) = 1.0;
  CHECK_THROWS_AS(small_inverse(singular), std::runtime_error);

  CHECK_THROWS_AS(small_inverse(ComplexMat(3, 2)), std::invalid_argument);
  CHECK_THROWS_AS(small_inverse(ComplexMat(17, 17)), std::invalid_argument);
}

TEST_CASE("derive_stream determinism and distinctness") {
  RngStream a = derive_stream(7, 0);
  RngStream b = derive_stream(7, 0);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  RngStream c = derive_stream(7, 0);
  RngStream d = derive_stream(7, 1);
  int differing = 0;
  for (int i = 0; i < 100; ++i) {
    if (c.next_u64() != d.next_u64()) ++differing;
  }
  CHECK(differing == 100);
}

TEST_CASE("normal draws match N(0,1) moments") {
  RngStream rng = derive_stream(123, 5);
  const int n = 1000000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = rng.normal();
    sum += g;
    sum_sq += g * g;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(std::abs(mean) < 5e-3);
  CHECK(std::abs(var - 1.0) < 1e-2);
}

TEST_CASE("complex normal splits variance between components") {
  RngStream rng = derive_stream(9, 2);
  const double variance = 0.25;
  const int n = 1000000;
  double re_sq = 0.0;
  double im_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const Complex z = rng.complex_normal(variance);
    re_sq += z.real() * z.real();
    im_sq += z.imag() * z.imag();
  }
  CHECK(std::abs(re_sq / n - variance / 2.0) < 0.01 * variance);
  CHECK(std::abs(im_sq / n - variance / 2.0) < 0.01 * variance);
}

TEST_CASE("bounded draws stay in range and cover it") {
  RngStream rng = derive_stream(3, 1);
  std::vector<int> seen(10, 0);
  for (int i = 0; i < 10000; ++i) {
    const std::uint64_t v = rng.bounded(10);
    REQUIRE(v < 10);
    seen[v] += 1;
  }
  for (int count : seen) CHECK(count > 800);
}
