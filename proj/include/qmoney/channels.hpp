#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "qmoney/linalg.hpp"
#include "qmoney/schemes.hpp"

namespace qmoney::channels {

using linalg::HermitianOperator;

/// Kraus operators {A_i}, each out_dim x in_dim, with sum A_i^* A_i = 1.
class KrausSet {
 public:
  static constexpr double kCompletenessTolerance = 1e-10;

  explicit KrausSet(std::vector<ComplexMatrix> ops);

  std::size_t in_dim() const { return static_cast<std::size_t>(ops_.front().cols()); }
  std::size_t out_dim() const { return static_cast<std::size_t>(ops_.front().rows()); }
  const std::vector<ComplexMatrix>& operators() const { return ops_; }
  /// || sum A_i^* A_i - 1 || (operator norm)
  double completeness_residual() const;

 private:
  std::vector<ComplexMatrix> ops_;
};

struct ChoiValidation {
  double min_eigenvalue = 0.0;  // CP: >= -tolerance
  double tp_residual = 0.0;     // || Tr_out J - 1 || (operator norm)
  bool completely_positive = false;
  bool trace_preserving = false;
  bool valid() const { return completely_positive && trace_preserving; }
};

ChoiValidation validate_choi(const HermitianOperator& j, std::size_t in_dim, std::size_t out_dim,
                             double tol = 1e-9);

/// Choi operator J(Phi) = sum_ij Phi(|i><j|) (x) |i><j| on output (x) input.
class ChoiOperator {
 public:
  static constexpr double kTolerance = 1e-9;

  /// Throws ValidationError unless the matrix is CP and TP within kTolerance.
  ChoiOperator(HermitianOperator matrix, std::size_t in_dim, std::size_t out_dim);

  std::size_t in_dim() const { return in_dim_; }
  std::size_t out_dim() const { return out_dim_; }
  const HermitianOperator& matrix() const { return matrix_; }
  const ChoiValidation& validation() const { return validation_; }

 private:
  HermitianOperator matrix_;
  std::size_t in_dim_;
  std::size_t out_dim_;
  ChoiValidation validation_;
};

ChoiOperator choi_from_kraus(const KrausSet& k);

using LinearMap = std::function<ComplexMatrix(const ComplexMatrix&)>;
/// Choi operator of an arbitrary linear map, by applying it to matrix units.
ChoiOperator choi_from_map(const LinearMap& phi, std::size_t in_dim, std::size_t out_dim);

/// Phi(rho), read off the Choi operator.
HermitianOperator apply_channel(const ChoiOperator& j, const HermitianOperator& rho);

/// <phi| Phi(|psi><psi|) |phi> through the quadratic form <phi (x) conj psi| J |phi (x) conj psi>.
double choi_quadratic_form(const ChoiOperator& j, const ComplexVector& phi, const ComplexVector& psi);

/// <psi psi| Phi(|psi><psi|) |psi psi>.
double clone_fidelity(const ChoiOperator& j, const ComplexVector& psi);

/// Ensemble-averaged two-copy success, by direct channel application.
double success_probability_direct(const ChoiOperator& j, const schemes::Ensemble& e);
/// The same average through the Choi quadratic form; equals <Q, J>.
double success_probability_choi_form(const ChoiOperator& j, const schemes::Ensemble& e);

/// Counterfeiting success of a cloner against an ensemble. Both routes are
/// evaluated and must agree to 1e-12 (NumericError otherwise).
double success_probability(const ChoiOperator& j, const schemes::Ensemble& e);

}  // namespace qmoney::channels
