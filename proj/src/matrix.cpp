#include "qwm/matrix.hpp"

#include "qwm/error.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <string>

namespace qwm {

ComplexMatrix::ComplexMatrix(std::size_t dim) {
  if (dim == 0) throw InvalidArgument("ComplexMatrix: dimension must be at least 1");
  const auto n = static_cast<Eigen::Index>(dim);
  m_ = Eigen::MatrixXcd::Zero(n, n);
}

ComplexMatrix::ComplexMatrix(std::initializer_list<Complex> row_major) {
  const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(row_major.size()))));
  if (n == 0 || n * n != row_major.size())
    throw InvalidArgument("ComplexMatrix: entry count " + std::to_string(row_major.size()) +
                          " is not a positive perfect square");
  const auto ni = static_cast<Eigen::Index>(n);
  m_.resize(ni, ni);
  auto it = row_major.begin();
  for (Eigen::Index r = 0; r < ni; ++r)
    for (Eigen::Index c = 0; c < ni; ++c) m_(r, c) = *it++;
}

ComplexMatrix::ComplexMatrix(Eigen::MatrixXcd m) : m_(std::move(m)) {
  if (m_.rows() == 0 || m_.rows() != m_.cols())
    throw InvalidArgument("ComplexMatrix: matrix must be square and non-empty");
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix out(dim);
  out.m_.setIdentity();
  return out;
}

ComplexMatrix ComplexMatrix::unit(std::size_t dim, std::size_t row, std::size_t col) {
  if (row >= dim || col >= dim) throw InvalidArgument("ComplexMatrix::unit: index out of range");
  ComplexMatrix out(dim);
  out(row, col) = 1.0;
  return out;
}

ComplexMatrix ComplexMatrix::adjoint() const { return ComplexMatrix(Eigen::MatrixXcd(m_.adjoint())); }

Complex ComplexMatrix::trace() const { return m_.trace(); }

double ComplexMatrix::max_abs() const { return m_.cwiseAbs().maxCoeff(); }

bool ComplexMatrix::all_finite() const { return m_.allFinite(); }

static void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (a.dim() != b.dim())
    throw InvalidArgument(std::string(op) + ": dimension mismatch (" + std::to_string(a.dim()) + " vs " +
                          std::to_string(b.dim()) + ")");
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  require_same_dim(*this, o, "operator+");
  m_ += o.m_;
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  require_same_dim(*this, o, "operator-");
  m_ -= o.m_;
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  m_ *= s;
  return *this;
}

ComplexMatrix mat_mul(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "mat_mul");
  return ComplexMatrix(Eigen::MatrixXcd(a.m_ * b.m_));
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b + b * a; }

ComplexMatrix expm(const ComplexMatrix& a) {
  if (!a.all_finite()) throw InvalidArgument("expm: matrix has non-finite entries");
  return ComplexMatrix(Eigen::MatrixXcd(a.eigen().exp()));
}

double hermiticity_residual(const ComplexMatrix& a) {
  return (a.eigen() - a.eigen().adjoint()).cwiseAbs().maxCoeff();
}

bool hermitize_check(const ComplexMatrix& a, double tol) { return hermiticity_residual(a) <= tol; }

Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& a) {
  const Eigen::MatrixXcd h = 0.5 * (a.eigen() + a.eigen().adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const auto na = static_cast<Eigen::Index>(a.dim());
  const auto nb = static_cast<Eigen::Index>(b.dim());
  Eigen::MatrixXcd out(na * nb, na * nb);
  for (Eigen::Index i = 0; i < na; ++i)
    for (Eigen::Index j = 0; j < na; ++j) out.block(i * nb, j * nb, nb, nb) = a.eigen()(i, j) * b.eigen();
  return ComplexMatrix(std::move(out));
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "max_abs_diff");
  return (a.eigen() - b.eigen()).cwiseAbs().maxCoeff();
}

namespace pauli {
using namespace std::complex_literals;
ComplexMatrix x() { return {0.0, 1.0, 1.0, 0.0}; }
ComplexMatrix y() { return {0.0, -1i, 1i, 0.0}; }
ComplexMatrix z() { return {1.0, 0.0, 0.0, -1.0}; }
ComplexMatrix raising() { return {0.0, 0.0, 1.0, 0.0}; }
ComplexMatrix lowering() { return {0.0, 1.0, 0.0, 0.0}; }
}  // namespace pauli

}  // namespace qwm
