#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qmoney {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Raised when operator, vector or factor dimensions do not line up.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an input violates a mathematical precondition (not
/// Hermitian, not PSD, not trace preserving, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace linalg {

/// Ordered subsystem dimensions of a tensor-product space.
class FactoredDims {
 public:
  FactoredDims(std::vector<std::size_t> dims);
  FactoredDims(std::initializer_list<std::size_t> dims)
      : FactoredDims(std::vector<std::size_t>(dims)) {}

  std::size_t total() const { return total_; }
  std::size_t count() const { return dims_.size(); }
  std::size_t operator[](std::size_t i) const { return dims_.at(i); }
  std::span<const std::size_t> dims() const { return dims_; }

  /// `times` consecutive copies of this factorization.
  FactoredDims repeated(std::size_t times) const;

  bool operator==(const FactoredDims&) const = default;

 private:
  std::vector<std::size_t> dims_;
  std::size_t total_ = 1;
};

/// Dense Hermitian matrix. Construction symmetrizes (M + M^*)/2 when the
/// defect is within tolerance and throws ValidationError otherwise.
class HermitianOperator {
 public:
  static constexpr double kHermiticityTolerance = 1e-12;

  HermitianOperator() = default;
  explicit HermitianOperator(ComplexMatrix m);

  static HermitianOperator identity(std::size_t dim);
  static HermitianOperator zero(std::size_t dim);
  /// |v><v| (not normalized).
  static HermitianOperator projector(const ComplexVector& v);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }

  double trace() const { return m_.trace().real(); }
  /// <A, B> = Tr(A^* B), real for Hermitian arguments.
  double inner(const HermitianOperator& other) const;
  /// Largest absolute eigenvalue.
  double norm() const;
  double min_eigenvalue() const;
  double max_eigenvalue() const;
  /// <v|M|v>.
  double expectation(const ComplexVector& v) const;

  HermitianOperator operator+(const HermitianOperator& o) const;
  HermitianOperator operator-(const HermitianOperator& o) const;
  HermitianOperator operator*(double s) const;
  friend HermitianOperator operator*(double s, const HermitianOperator& h) { return h * s; }

 private:
  ComplexMatrix m_;
};

struct EigenDecomposition {
  RealVector values;     // ascending
  ComplexMatrix vectors; // columns orthonormal
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron_all(std::span<const ComplexMatrix> factors);
HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b);
ComplexVector kron(const ComplexVector& a, const ComplexVector& b);

/// Trace out every factor not listed in `keep`; kept factors retain their
/// relative order.
HermitianOperator partial_trace(const HermitianOperator& m, const FactoredDims& dims,
                                std::span<const std::size_t> keep);
HermitianOperator partial_trace(const HermitianOperator& m, const FactoredDims& dims,
                                std::initializer_list<std::size_t> keep);

/// Transpose factor `which` in the standard basis.
ComplexMatrix partial_transpose(const ComplexMatrix& m, const FactoredDims& dims,
                                std::size_t which);
HermitianOperator partial_transpose(const HermitianOperator& m, const FactoredDims& dims,
                                    std::size_t which);

EigenDecomposition hermitian_eig(const HermitianOperator& m);
RealVector hermitian_eigenvalues(const HermitianOperator& m);

/// Unitary W with W|x_0 ... x_{k-1}> = |z>, z_{perm[i]} = x_i: factor i is
/// moved to slot perm[i]. Composition: W_s W_t = W_{s o t}.
ComplexMatrix permutation_operator(const FactoredDims& dims, std::span<const std::size_t> perm);
ComplexMatrix permutation_operator(const FactoredDims& dims,
                                   std::initializer_list<std::size_t> perm);

/// Output factorization of permutation_operator(dims, perm).
FactoredDims permuted_dims(const FactoredDims& dims, std::span<const std::size_t> perm);

/// Projector onto the symmetric subspace of (C^d)^{(x)k}, built as the
/// average of the k! permutation operators.
HermitianOperator symmetric_projector(std::size_t d, std::size_t k);

/// Rank of a PSD matrix: eigenvalues above `tol`.
std::size_t numeric_rank(const HermitianOperator& m, double tol = 1e-9);

double max_abs(const ComplexMatrix& m);

}  // namespace linalg
}  // namespace qmoney
