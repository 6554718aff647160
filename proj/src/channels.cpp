#include "qmoney/channels.hpp"

#include <cmath>
#include <sstream>

namespace qmoney::channels {

namespace {

double operator_norm(const ComplexMatrix& m) {
  return HermitianOperator(m).norm();
}

void require_clone_dims(const ChoiOperator& j, std::size_t d) {
  if (j.in_dim() != d || j.out_dim() != d * d) {
    throw DimensionError("cloner must map dimension " + std::to_string(d) + " to " +
                         std::to_string(d * d));
  }
}

}  // namespace

KrausSet::KrausSet(std::vector<ComplexMatrix> ops) : ops_(std::move(ops)) {
  if (ops_.empty()) throw ValidationError("Kraus set is empty");
  for (const auto& a : ops_) {
    if (a.rows() != ops_.front().rows() || a.cols() != ops_.front().cols()) {
      throw DimensionError("Kraus operators have inconsistent shapes");
    }
  }
  const double residual = completeness_residual();
  if (residual > kCompletenessTolerance) {
    std::ostringstream msg;
    msg << "Kraus set is not trace preserving: ||sum A^*A - 1|| = " << residual;
    throw ValidationError(msg.str());
  }
}

double KrausSet::completeness_residual() const {
  const auto n = static_cast<Eigen::Index>(in_dim());
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  for (const auto& a : ops_) sum += a.adjoint() * a;
  return operator_norm(sum - ComplexMatrix::Identity(n, n));
}

ChoiValidation validate_choi(const HermitianOperator& j, std::size_t in_dim, std::size_t out_dim,
                             double tol) {
  if (j.dim() != in_dim * out_dim) throw DimensionError("Choi matrix size != in_dim * out_dim");
  ChoiValidation v;
  v.min_eigenvalue = j.min_eigenvalue();
  const HermitianOperator reduced = linalg::partial_trace(j, {out_dim, in_dim}, {1});
  v.tp_residual = (reduced - HermitianOperator::identity(in_dim)).norm();
  v.completely_positive = v.min_eigenvalue >= -tol;
  v.trace_preserving = v.tp_residual <= tol;
  return v;
}

ChoiOperator::ChoiOperator(HermitianOperator matrix, std::size_t in_dim, std::size_t out_dim)
    : matrix_(std::move(matrix)), in_dim_(in_dim), out_dim_(out_dim) {
  validation_ = validate_choi(matrix_, in_dim_, out_dim_, kTolerance);
  if (!validation_.completely_positive) {
    std::ostringstream msg;
    msg << "Choi operator is not completely positive: min eigenvalue " << validation_.min_eigenvalue;
    throw ValidationError(msg.str());
  }
  if (!validation_.trace_preserving) {
    std::ostringstream msg;
    msg << "Choi operator is not trace preserving: residual " << validation_.tp_residual;
    throw ValidationError(msg.str());
  }
}

ChoiOperator choi_from_kraus(const KrausSet& k) {
  const std::size_t in = k.in_dim();
  const std::size_t out = k.out_dim();
  const auto n = static_cast<Eigen::Index>(in * out);
  ComplexMatrix j = ComplexMatrix::Zero(n, n);
  for (const auto& a : k.operators()) {
    // |A>> = sum_i A|i> (x) |i>, i.e. the row-major flattening of A
    ComplexVector v(n);
    for (Eigen::Index o = 0; o < a.rows(); ++o) {
      for (Eigen::Index i = 0; i < a.cols(); ++i) v(o * a.cols() + i) = a(o, i);
    }
    j += v * v.adjoint();
  }
  return ChoiOperator(HermitianOperator(std::move(j)), in, out);
}

ChoiOperator choi_from_map(const LinearMap& phi, std::size_t in_dim, std::size_t out_dim) {
  const auto in = static_cast<Eigen::Index>(in_dim);
  const auto out = static_cast<Eigen::Index>(out_dim);
  ComplexMatrix j = ComplexMatrix::Zero(in * out, in * out);
  for (Eigen::Index a = 0; a < in; ++a) {
    for (Eigen::Index b = 0; b < in; ++b) {
      ComplexMatrix unit = ComplexMatrix::Zero(in, in);
      unit(a, b) = 1.0;
      const ComplexMatrix image = phi(unit);
      if (image.rows() != out || image.cols() != out) throw DimensionError("map output has wrong size");
      for (Eigen::Index o = 0; o < out; ++o) {
        for (Eigen::Index p = 0; p < out; ++p) j(o * in + a, p * in + b) = image(o, p);
      }
    }
  }
  return ChoiOperator(HermitianOperator(std::move(j)), in_dim, out_dim);
}

HermitianOperator apply_channel(const ChoiOperator& j, const HermitianOperator& rho) {
  if (rho.dim() != j.in_dim()) throw DimensionError("state dimension does not match channel input");
  const auto in = static_cast<Eigen::Index>(j.in_dim());
  const auto out = static_cast<Eigen::Index>(j.out_dim());
  const ComplexMatrix& jm = j.matrix().matrix();
  const ComplexMatrix& r = rho.matrix();
  ComplexMatrix result = ComplexMatrix::Zero(out, out);
  // Phi(rho)_{o p} = sum_{a b} J[(o, a), (p, b)] rho_{a b}
  for (Eigen::Index o = 0; o < out; ++o) {
    for (Eigen::Index p = 0; p < out; ++p) {
      result(o, p) = jm.block(o * in, p * in, in, in).cwiseProduct(r).sum();
    }
  }
  return HermitianOperator(std::move(result));
}

double choi_quadratic_form(const ChoiOperator& j, const ComplexVector& phi, const ComplexVector& psi) {
  if (static_cast<std::size_t>(psi.size()) != j.in_dim() ||
      static_cast<std::size_t>(phi.size()) != j.out_dim()) {
    throw DimensionError("vector dimensions do not match the channel");
  }
  return j.matrix().expectation(linalg::kron(phi, ComplexVector(psi.conjugate())));
}

double clone_fidelity(const ChoiOperator& j, const ComplexVector& psi) {
  require_clone_dims(j, static_cast<std::size_t>(psi.size()));
  const HermitianOperator out = apply_channel(j, HermitianOperator::projector(psi));
  return out.expectation(linalg::kron(psi, psi));
}

double success_probability_direct(const ChoiOperator& j, const schemes::Ensemble& e) {
  require_clone_dims(j, e.dim());
  double total = 0.0;
  for (const auto& item : e.items()) total += item.weight * clone_fidelity(j, item.state);
  return total;
}

double success_probability_choi_form(const ChoiOperator& j, const schemes::Ensemble& e) {
  require_clone_dims(j, e.dim());
  double total = 0.0;
  for (const auto& item : e.items()) {
    total += item.weight * choi_quadratic_form(j, linalg::kron(item.state, item.state), item.state);
  }
  return total;
}

double success_probability(const ChoiOperator& j, const schemes::Ensemble& e) {
  const double direct = success_probability_direct(j, e);
  const double quadratic = success_probability_choi_form(j, e);
  if (std::abs(direct - quadratic) > 1e-12) {
    std::ostringstream msg;
    msg << "success probability routes disagree: " << direct << " vs " << quadratic;
    throw NumericError(msg.str());
  }
  return direct;
}

}  // namespace qmoney::channels
