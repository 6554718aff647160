#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qmoney/linalg.hpp"
#include "qmoney/schemes.hpp"
#include "qmoney/sdp.hpp"

namespace qmoney::composition {

using linalg::HermitianOperator;
using sdp::CloningSdp;
using Rational = boost::multiprecision::cpp_rational;

/// alpha^n.
double repeated_value(double alpha, std::size_t n);

/// Permutation taking n interleaved repetitions (r_1 ... r_k)^{(x)n} to the
/// role-grouped order (r_1^{(x)n}) ... (r_k^{(x)n}); factor r*k + j goes to
/// slot j*n + r.
std::vector<std::size_t> repetition_permutation(std::size_t n, std::size_t roles);

/// W (A_1 (x) ... (x) A_n) W^* for operators on the base factorization.
ComplexMatrix group_repetitions(std::span<const ComplexMatrix> parts, const linalg::FactoredDims& base);

/// The n-fold repetition SDP with objective W Q^{(x)n} W^*.
CloningSdp repeated_problem(const CloningSdp& base, std::size_t n);

struct TensoredCertificate {
  CloningSdp problem;
  HermitianOperator x;  // W (X_1 (x) ... (x) X_n) W^*
  HermitianOperator y;  // Y_1 (x) ... (x) Y_n
};

/// Tensor per-repetition certificates into one for the repeated problem.
/// Every (X_i, Y_i) must be feasible for problems[i] at `tol`; all problems
/// must share one factorization.
TensoredCertificate tensor_certificates(std::span<const CloningSdp> problems,
                                        std::span<const HermitianOperator> xs,
                                        std::span<const HermitianOperator> ys, double tol = 1e-7);

/// sum_{t <= j <= n} C(n, j) alpha^j (1 - alpha)^{n - j}.
double threshold_value(double alpha, std::size_t n, std::size_t t);
Rational threshold_value(const Rational& alpha, std::size_t n, std::size_t t);

/// Success (q1 = Q) and failure (q0) objectives of one repetition.
struct ThresholdOperators {
  std::size_t dim = 0;
  HermitianOperator q1;
  HermitianOperator q0;
};

ThresholdOperators build_threshold_operators(const schemes::Ensemble& e);

/// Average state is 1/d (within 1e-10) and ||Q|| = alpha/d (within 1e-9).
bool threshold_conditions_hold(const schemes::Ensemble& e, double alpha);
/// Same conditions read off Q alone: Tr_{YZ} Q = 1/d and ||Q|| = alpha/d.
bool threshold_conditions_hold(const HermitianOperator& q, std::size_t d, double alpha);

/// R = sum over a in {0,1}^n with |a| >= t of Q_{a_1} (x) ... (x) Q_{a_n},
/// in the interleaved repetition order.
HermitianOperator threshold_objective(const ThresholdOperators& ops, std::size_t n, std::size_t t);

/// The n-fold threshold SDP with objective W R W^*.
CloningSdp threshold_problem(const ThresholdOperators& ops, std::size_t n, std::size_t t);

inline constexpr std::size_t kDenseThresholdLimit = 1024;

struct RNormReport {
  std::optional<double> lhs;  // ||R|| by eigendecomposition; empty when formula-only
  double rhs = 0.0;           // d^{-n} sum_j C(n,j) alpha^j (1-alpha)^{n-j}
  double alpha = 0.0;         // d ||Q||
  bool formula_only = false;
};

/// Assembles R densely when d^{3n} <= kDenseThresholdLimit; otherwise only
/// the closed form is reported.
RNormReport verify_r_norm(const schemes::Ensemble& e, std::size_t n, std::size_t t);

}  // namespace qmoney::composition
