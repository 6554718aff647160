#include "qmoney/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace qmoney::linalg {

namespace {

// Row-major strides: the last factor varies fastest.
std::vector<std::size_t> strides_of(std::span<const std::size_t> dims) {
  std::vector<std::size_t> strides(dims.size(), 1);
  for (std::size_t i = dims.size(); i-- > 1;) {
    strides[i - 1] = strides[i] * dims[i];
  }
  return strides;
}

// Offsets (within the full index) of every multi-index over `factors`.
std::vector<std::size_t> offsets_over(std::span<const std::size_t> dims,
                                      std::span<const std::size_t> strides,
                                      std::span<const std::size_t> factors) {
  std::vector<std::size_t> out{0};
  for (std::size_t f : factors) {
    std::vector<std::size_t> next;
    next.reserve(out.size() * dims[f]);
    for (std::size_t base : out) {
      for (std::size_t v = 0; v < dims[f]; ++v) next.push_back(base + v * strides[f]);
    }
    out = std::move(next);
  }
  return out;
}

void require_square(const ComplexMatrix& m, const FactoredDims& dims) {
  if (m.rows() != m.cols()) throw DimensionError("matrix is not square");
  if (static_cast<std::size_t>(m.rows()) != dims.total()) {
    throw DimensionError("factor dimensions multiply to " + std::to_string(dims.total()) +
                         " but operator has dimension " + std::to_string(m.rows()));
  }
}

void require_permutation(std::span<const std::size_t> perm, std::size_t n) {
  if (perm.size() != n) throw ValidationError("permutation length does not match factor count");
  std::vector<bool> seen(n, false);
  for (std::size_t p : perm) {
    if (p >= n || seen[p]) throw ValidationError("invalid permutation");
    seen[p] = true;
  }
}

}  // namespace

FactoredDims::FactoredDims(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw DimensionError("empty factorization");
  for (std::size_t d : dims_) {
    if (d == 0) throw DimensionError("zero subsystem dimension");
    total_ *= d;
  }
}

FactoredDims FactoredDims::repeated(std::size_t times) const {
  std::vector<std::size_t> out;
  out.reserve(dims_.size() * times);
  for (std::size_t i = 0; i < times; ++i) out.insert(out.end(), dims_.begin(), dims_.end());
  return FactoredDims(std::move(out));
}

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

HermitianOperator::HermitianOperator(ComplexMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw DimensionError("Hermitian operator must be square");
  if (m_.rows() == 0) throw DimensionError("Hermitian operator must have dimension >= 1");
  if (!m_.allFinite()) throw ValidationError("operator has non-finite entries");
  const double defect = max_abs(m_ - m_.adjoint());
  const double scale = std::max(1.0, max_abs(m_));
  if (defect > kHermiticityTolerance * scale) {
    throw ValidationError("operator is not Hermitian (defect " + std::to_string(defect) + ")");
  }
  ComplexMatrix sym = 0.5 * (m_ + m_.adjoint());
  m_ = std::move(sym);
}

HermitianOperator HermitianOperator::identity(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return HermitianOperator(ComplexMatrix::Identity(n, n));
}

HermitianOperator HermitianOperator::zero(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return HermitianOperator(ComplexMatrix::Zero(n, n));
}

HermitianOperator HermitianOperator::projector(const ComplexVector& v) {
  return HermitianOperator(v * v.adjoint());
}

double HermitianOperator::inner(const HermitianOperator& other) const {
  if (dim() != other.dim()) throw DimensionError("inner product dimension mismatch");
  // Tr(A^* B) = sum conj(A_ij) B_ij
  return (m_.conjugate().cwiseProduct(other.m_)).sum().real();
}

double HermitianOperator::norm() const {
  const RealVector ev = hermitian_eigenvalues(*this);
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

double HermitianOperator::min_eigenvalue() const { return hermitian_eigenvalues(*this)(0); }

double HermitianOperator::max_eigenvalue() const {
  const RealVector ev = hermitian_eigenvalues(*this);
  return ev(ev.size() - 1);
}

double HermitianOperator::expectation(const ComplexVector& v) const {
  if (static_cast<std::size_t>(v.size()) != dim()) throw DimensionError("vector dimension mismatch");
  return v.dot(m_ * v).real();
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& o) const {
  if (dim() != o.dim()) throw DimensionError("sum dimension mismatch");
  return HermitianOperator(m_ + o.m_);
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& o) const {
  if (dim() != o.dim()) throw DimensionError("difference dimension mismatch");
  return HermitianOperator(m_ - o.m_);
}

HermitianOperator HermitianOperator::operator*(double s) const { return HermitianOperator(m_ * s); }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix kron_all(std::span<const ComplexMatrix> factors) {
  if (factors.empty()) return ComplexMatrix::Identity(1, 1);
  ComplexMatrix out = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) out = kron(out, factors[i]);
  return out;
}

HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator(kron(a.matrix(), b.matrix()));
}

ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

HermitianOperator partial_trace(const HermitianOperator& m, const FactoredDims& dims,
                                std::span<const std::size_t> keep) {
  require_square(m.matrix(), dims);
  std::vector<bool> kept(dims.count(), false);
  std::vector<std::size_t> keep_sorted;
  for (std::size_t k : keep) {
    if (k >= dims.count()) throw DimensionError("subsystem index out of range");
    if (kept[k]) throw DimensionError("duplicate subsystem index");
    kept[k] = true;
    keep_sorted.push_back(k);
  }
  std::sort(keep_sorted.begin(), keep_sorted.end());
  std::vector<std::size_t> traced;
  for (std::size_t i = 0; i < dims.count(); ++i) {
    if (!kept[i]) traced.push_back(i);
  }
  const auto strides = strides_of(dims.dims());
  const auto keep_off = offsets_over(dims.dims(), strides, keep_sorted);
  const auto trace_off = offsets_over(dims.dims(), strides, traced);

  const auto n = static_cast<Eigen::Index>(keep_off.size());
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  const ComplexMatrix& a = m.matrix();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      Complex acc{0.0, 0.0};
      for (std::size_t t : trace_off) {
        acc += a(static_cast<Eigen::Index>(keep_off[i] + t), static_cast<Eigen::Index>(keep_off[j] + t));
      }
      out(i, j) = acc;
    }
  }
  return HermitianOperator(std::move(out));
}

HermitianOperator partial_trace(const HermitianOperator& m, const FactoredDims& dims,
                                std::initializer_list<std::size_t> keep) {
  return partial_trace(m, dims, std::span<const std::size_t>(keep.begin(), keep.size()));
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, const FactoredDims& dims,
                                std::size_t which) {
  require_square(m, dims);
  if (which >= dims.count()) throw DimensionError("subsystem index out of range");
  const auto strides = strides_of(dims.dims());
  const std::size_t stride = strides[which];
  const std::size_t d = dims[which];
  const auto n = m.rows();
  ComplexMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto di = static_cast<Eigen::Index>((static_cast<std::size_t>(i) / stride) % d);
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto dj = static_cast<Eigen::Index>((static_cast<std::size_t>(j) / stride) % d);
      // swap the `which` digits of the row and column indices
      const Eigen::Index ii = i + (dj - di) * static_cast<Eigen::Index>(stride);
      const Eigen::Index jj = j + (di - dj) * static_cast<Eigen::Index>(stride);
      out(ii, jj) = m(i, j);
    }
  }
  return out;
}

HermitianOperator partial_transpose(const HermitianOperator& m, const FactoredDims& dims,
                                    std::size_t which) {
  return HermitianOperator(partial_transpose(m.matrix(), dims, which));
}

EigenDecomposition hermitian_eig(const HermitianOperator& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw NumericError("Hermitian eigensolver did not converge (dimension " +
                       std::to_string(m.dim()) + ")");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

RealVector hermitian_eigenvalues(const HermitianOperator& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericError("Hermitian eigensolver did not converge (dimension " +
                       std::to_string(m.dim()) + ")");
  }
  return solver.eigenvalues();
}

FactoredDims permuted_dims(const FactoredDims& dims, std::span<const std::size_t> perm) {
  require_permutation(perm, dims.count());
  std::vector<std::size_t> out(dims.count());
  for (std::size_t i = 0; i < perm.size(); ++i) out[perm[i]] = dims[i];
  return FactoredDims(std::move(out));
}

ComplexMatrix permutation_operator(const FactoredDims& dims, std::span<const std::size_t> perm) {
  const FactoredDims out_dims = permuted_dims(dims, perm);
  const auto in_strides = strides_of(dims.dims());
  const auto out_strides = strides_of(out_dims.dims());
  const auto n = static_cast<Eigen::Index>(dims.total());
  ComplexMatrix w = ComplexMatrix::Zero(n, n);
  for (std::size_t col = 0; col < dims.total(); ++col) {
    std::size_t row = 0;
    for (std::size_t f = 0; f < dims.count(); ++f) {
      const std::size_t digit = (col / in_strides[f]) % dims[f];
      row += digit * out_strides[perm[f]];
    }
    w(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = 1.0;
  }
  return w;
}

ComplexMatrix permutation_operator(const FactoredDims& dims,
                                   std::initializer_list<std::size_t> perm) {
  return permutation_operator(dims, std::span<const std::size_t>(perm.begin(), perm.size()));
}

HermitianOperator symmetric_projector(std::size_t d, std::size_t k) {
  if (d == 0 || k == 0) throw DimensionError("symmetric projector needs d >= 1 and k >= 1");
  const FactoredDims dims(std::vector<std::size_t>(k, d));
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  const auto n = static_cast<Eigen::Index>(dims.total());
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  std::size_t count = 0;
  do {
    sum += permutation_operator(dims, perm);
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return HermitianOperator(sum / static_cast<double>(count));
}

std::size_t numeric_rank(const HermitianOperator& m, double tol) {
  const RealVector ev = hermitian_eigenvalues(m);
  return static_cast<std::size_t>((ev.array() > tol).count());
}

}  // namespace qmoney::linalg
