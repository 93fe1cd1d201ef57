#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

namespace lyz {

using cplx = std::complex<double>;

class CounterRng;

// Dense square complex matrix of dimension <= kMaxDim, row-major.
// Used for pointwise algebra; Hermitian-ness is a property of the values,
// not of the type.
class SmallMatrix {
 public:
  static constexpr int kMaxDim = 8;

  SmallMatrix() = default;
  explicit SmallMatrix(int dim);

  static SmallMatrix identity(int dim);
  static SmallMatrix diagonal(std::span<const double> entries);

  int dim() const { return dim_; }

  cplx& operator()(int i, int j) { return a_[i * kMaxDim + j]; }
  const cplx& operator()(int i, int j) const { return a_[i * kMaxDim + j]; }

  // Sets (i, j) and its mirror (j, i) = conj(v).
  void set_hermitian(int i, int j, cplx v);

  SmallMatrix adjoint() const;
  cplx trace() const;

  SmallMatrix& operator+=(const SmallMatrix& o);
  SmallMatrix& operator-=(const SmallMatrix& o);
  SmallMatrix& operator*=(double s);

  friend SmallMatrix operator+(SmallMatrix a, const SmallMatrix& b) { return a += b; }
  friend SmallMatrix operator-(SmallMatrix a, const SmallMatrix& b) { return a -= b; }
  friend SmallMatrix operator*(SmallMatrix a, double s) { return a *= s; }
  friend SmallMatrix operator*(double s, SmallMatrix a) { return a *= s; }
  friend SmallMatrix operator*(const SmallMatrix& a, const SmallMatrix& b);

  // max_{i,j} |a_ij - conj(a_ji)|
  double hermitian_defect() const;
  double max_abs() const;
  double frobenius() const;

 private:
  int dim_ = 0;
  std::array<cplx, kMaxDim * kMaxDim> a_{};
};

// Eigenvalues of a Hermitian matrix, sorted descending. Closed form for
// dim <= 2, cyclic Jacobi (off-diagonal threshold 1e-13 relative) otherwise.
std::vector<double> hermitian_eigenvalues(const SmallMatrix& h);

struct HermitianEigen {
  std::vector<double> values;  // descending
  SmallMatrix vectors;         // column j is the eigenvector of values[j]
};
HermitianEigen hermitian_eigen(const SmallMatrix& h);

// Inverse of a Hermitian positive definite matrix (Cholesky).
SmallMatrix hpd_inverse(const SmallMatrix& h);

// Determinant of a general complex matrix (LU with partial pivoting).
cplx determinant(const SmallMatrix& a);

// Haar-distributed unitary from QR of a complex Gaussian matrix.
SmallMatrix random_unitary(CounterRng& rng, int dim);

// U diag(d) U^*
SmallMatrix conjugate_diagonal(const SmallMatrix& unitary, std::span<const double> d);

}  // namespace lyz
