#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <initializer_list>

namespace qwm {

using Complex = std::complex<double>;

/// Dense square complex matrix with value semantics.
///
/// Sized for atomic operators (dim 2-3) and their vectorized superoperators
/// (dim 4-9); no attempt is made to scale beyond that.
class ComplexMatrix {
public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t dim);
  /// Row-major initializer; the entry count must be a perfect square.
  ComplexMatrix(std::initializer_list<Complex> row_major);
  explicit ComplexMatrix(Eigen::MatrixXcd m);

  static ComplexMatrix zero(std::size_t dim) { return ComplexMatrix(dim); }
  static ComplexMatrix identity(std::size_t dim);
  /// |row><col|
  static ComplexMatrix unit(std::size_t dim, std::size_t row, std::size_t col);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }

  Complex& operator()(std::size_t r, std::size_t c) { return m_(r, c); }
  const Complex& operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

  const Eigen::MatrixXcd& eigen() const noexcept { return m_; }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  /// Largest entry magnitude.
  double max_abs() const;
  bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(Complex s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) { return mat_mul(a, b); }

  friend bool operator==(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a.dim() == b.dim() && a.m_ == b.m_;
  }

  /// Throws InvalidArgument on dimension mismatch.
  friend ComplexMatrix mat_mul(const ComplexMatrix& a, const ComplexMatrix& b);

private:
  Eigen::MatrixXcd m_;
};

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// Matrix exponential (scaling and squaring). Throws InvalidArgument on
/// non-finite input.
ComplexMatrix expm(const ComplexMatrix& a);

/// max |a - a^dagger| over entries.
double hermiticity_residual(const ComplexMatrix& a);
bool hermitize_check(const ComplexMatrix& a, double tol);

/// Eigenvalues of the Hermitian part of `a`, ascending.
Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& a);

/// Kronecker product, used to build superoperators on row-major vec(rho).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// max |a - b| over entries; dimensions must agree.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

namespace pauli {
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
/// |e><g| in the {g, e} basis.
ComplexMatrix raising();
ComplexMatrix lowering();
}  // namespace pauli

}  // namespace qwm
