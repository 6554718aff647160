#include "qmoney/composition.hpp"

#include <bit>
#include <cmath>

#include "qmoney/certificates.hpp"

namespace qmoney::composition {

namespace {

void require_threshold(std::size_t n, std::size_t t) {
  if (t == 0) throw ValidationError("threshold must be at least 1");
  if (t > n) throw ValidationError("threshold t exceeds the repetition count n");
}

void require_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("alpha must lie in [0, 1]");
}

double binomial(std::size_t n, std::size_t k) {
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return c;
}

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

double repeated_value(double alpha, std::size_t n) {
  require_alpha(alpha);
  double v = 1.0;
  for (std::size_t i = 0; i < n; ++i) v *= alpha;
  return v;
}

std::vector<std::size_t> repetition_permutation(std::size_t n, std::size_t roles) {
  std::vector<std::size_t> perm(n * roles);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t j = 0; j < roles; ++j) perm[r * roles + j] = j * n + r;
  }
  return perm;
}

ComplexMatrix group_repetitions(std::span<const ComplexMatrix> parts, const linalg::FactoredDims& base) {
  const std::size_t n = parts.size();
  if (n == 0) throw DimensionError("at least one repetition required");
  for (const auto& p : parts) {
    if (static_cast<std::size_t>(p.rows()) != base.total()) throw DimensionError("repetition operator has wrong size");
  }
  const ComplexMatrix product = linalg::kron_all(parts);
  if (n == 1) return product;
  const auto perm = repetition_permutation(n, base.count());
  const ComplexMatrix w = linalg::permutation_operator(base.repeated(n), perm);
  return w * product * w.adjoint();
}

CloningSdp repeated_problem(const CloningSdp& base, std::size_t n) {
  if (n == 0) throw ValidationError("repetition count must be >= 1");
  const std::vector<ComplexMatrix> parts(n, base.q().matrix());
  const auto perm = repetition_permutation(n, base.dims().count());
  return CloningSdp(HermitianOperator(group_repetitions(parts, base.dims())),
                    linalg::permuted_dims(base.dims().repeated(n), perm), n * base.input_factors());
}

TensoredCertificate tensor_certificates(std::span<const CloningSdp> problems,
                                        std::span<const HermitianOperator> xs,
                                        std::span<const HermitianOperator> ys, double tol) {
  const std::size_t n = problems.size();
  if (n == 0 || xs.size() != n || ys.size() != n) {
    throw DimensionError("need one primal and one dual solution per repetition");
  }
  const auto& base = problems.front().dims();
  std::vector<ComplexMatrix> qs;
  std::vector<ComplexMatrix> xm;
  std::vector<ComplexMatrix> ym;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(problems[i].dims() == base) || problems[i].input_factors() != problems.front().input_factors()) {
      throw DimensionError("repetitions must share one factorization");
    }
    if (!certificates::check_primal(xs[i], problems[i], tol).feasible) {
      throw ValidationError("primal solution of repetition " + std::to_string(i) + " is infeasible");
    }
    if (!certificates::check_dual(ys[i], problems[i], tol).feasible) {
      throw ValidationError("dual solution of repetition " + std::to_string(i) + " is infeasible");
    }
    qs.push_back(problems[i].q().matrix());
    xm.push_back(xs[i].matrix());
    ym.push_back(ys[i].matrix());
  }
  const auto perm = repetition_permutation(n, base.count());
  CloningSdp problem(HermitianOperator(group_repetitions(qs, base)),
                     linalg::permuted_dims(base.repeated(n), perm),
                     n * problems.front().input_factors());
  return {std::move(problem), HermitianOperator(group_repetitions(xm, base)),
          HermitianOperator(linalg::kron_all(ym))};
}

double threshold_value(double alpha, std::size_t n, std::size_t t) {
  require_alpha(alpha);
  require_threshold(n, t);
  double total = 0.0;
  for (std::size_t j = t; j <= n; ++j) {
    total += binomial(n, j) * std::pow(alpha, static_cast<double>(j)) *
             std::pow(1.0 - alpha, static_cast<double>(n - j));
  }
  return total;
}

Rational threshold_value(const Rational& alpha, std::size_t n, std::size_t t) {
  if (alpha < 0 || alpha > 1) throw ValidationError("alpha must lie in [0, 1]");
  require_threshold(n, t);
  Rational total = 0;
  for (std::size_t j = t; j <= n; ++j) {
    Rational term = 1;
    for (std::size_t i = 1; i <= j; ++i) term = term * Rational(n - j + i) / Rational(i);
    for (std::size_t i = 0; i < j; ++i) term *= alpha;
    for (std::size_t i = j; i < n; ++i) term *= (1 - alpha);
    total += term;
  }
  return total;
}

ThresholdOperators build_threshold_operators(const schemes::Ensemble& e) {
  const std::size_t d = e.dim();
  const auto n = static_cast<Eigen::Index>(d);
  ComplexMatrix q0 = ComplexMatrix::Zero(n * n * n, n * n * n);
  const ComplexMatrix eye2 = ComplexMatrix::Identity(n * n, n * n);
  for (const auto& item : e.items()) {
    const ComplexVector two = linalg::kron(item.state, item.state);
    const ComplexVector conj = item.state.conjugate();
    q0 += item.weight * linalg::kron(ComplexMatrix(eye2 - two * two.adjoint()), ComplexMatrix(conj * conj.adjoint()));
  }
  return {d, schemes::build_q_quantum(e), HermitianOperator(std::move(q0))};
}

bool threshold_conditions_hold(const schemes::Ensemble& e, double alpha) {
  const double d = static_cast<double>(e.dim());
  const HermitianOperator avg = e.average_state();
  const double avg_defect = linalg::max_abs(avg.matrix() - ComplexMatrix::Identity(avg.matrix().rows(), avg.matrix().cols()) / d);
  if (avg_defect > 1e-10) return false;
  return std::abs(schemes::build_q_quantum(e).norm() - alpha / d) <= 1e-9;
}

bool threshold_conditions_hold(const HermitianOperator& q, std::size_t d, double alpha) {
  if (q.dim() != d * d * d) throw DimensionError("objective does not act on (C^d)^{(x)3}");
  const HermitianOperator reduced = linalg::partial_trace(q, {d, d, d}, {2});
  const auto n = static_cast<Eigen::Index>(d);
  const double defect = linalg::max_abs(reduced.matrix() - ComplexMatrix::Identity(n, n) / static_cast<double>(d));
  if (defect > 1e-10) return false;
  return std::abs(q.norm() - alpha / static_cast<double>(d)) <= 1e-9;
}

HermitianOperator threshold_objective(const ThresholdOperators& ops, std::size_t n, std::size_t t) {
  require_threshold(n, t);
  const auto size = static_cast<Eigen::Index>(ipow(ops.q1.dim(), n));
  ComplexMatrix r = ComplexMatrix::Zero(size, size);
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) < t) continue;
    std::vector<ComplexMatrix> parts;
    for (std::size_t i = 0; i < n; ++i) {
      parts.push_back(((mask >> (n - 1 - i)) & 1U) ? ops.q1.matrix() : ops.q0.matrix());
    }
    r += linalg::kron_all(parts);
  }
  return HermitianOperator(std::move(r));
}

CloningSdp threshold_problem(const ThresholdOperators& ops, std::size_t n, std::size_t t) {
  const std::size_t d = ops.dim;
  const linalg::FactoredDims base{d, d, d};
  const ComplexMatrix r = threshold_objective(ops, n, t).matrix();
  const auto perm = repetition_permutation(n, base.count());
  const ComplexMatrix w = linalg::permutation_operator(base.repeated(n), perm);
  return CloningSdp(HermitianOperator(w * r * w.adjoint()), linalg::permuted_dims(base.repeated(n), perm), n);
}

RNormReport verify_r_norm(const schemes::Ensemble& e, std::size_t n, std::size_t t) {
  require_threshold(n, t);
  const ThresholdOperators ops = build_threshold_operators(e);
  const std::size_t d = e.dim();
  RNormReport report;
  report.alpha = static_cast<double>(d) * ops.q1.norm();
  report.rhs = threshold_value(std::min(report.alpha, 1.0), n, t) / std::pow(static_cast<double>(d), static_cast<double>(n));
  const double dense_dim = std::pow(static_cast<double>(d), 3.0 * static_cast<double>(n));
  if (dense_dim > static_cast<double>(kDenseThresholdLimit)) {
    report.formula_only = true;
    return report;
  }
  report.lhs = threshold_objective(ops, n, t).norm();
  return report;
}

}  // namespace qmoney::composition
