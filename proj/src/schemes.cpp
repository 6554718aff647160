#include "qmoney/schemes.hpp"

#include <cmath>
#include <numbers>

namespace qmoney::schemes {

namespace {

ComplexVector qubit(Complex a, Complex b) {
  ComplexVector v(2);
  v << a, b;
  return v;
}

void require_orthonormal(const ComplexMatrix& m, const char* name) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionError(std::string(name) + " must be a square matrix of basis columns");
  }
  const double defect = linalg::max_abs(m.adjoint() * m - ComplexMatrix::Identity(m.rows(), m.cols()));
  if (defect > BasisPair::kTolerance) {
    throw ValidationError(std::string(name) + " is not orthonormal (defect " +
                          std::to_string(defect) + ")");
  }
}

}  // namespace

Ensemble::Ensemble(std::size_t dim, std::vector<EnsembleItem> items)
    : dim_(dim), items_(std::move(items)) {
  if (dim_ == 0) throw DimensionError("ensemble dimension must be >= 1");
  if (items_.empty()) throw ValidationError("ensemble must contain at least one state");
  double total = 0.0;
  for (const auto& item : items_) {
    if (static_cast<std::size_t>(item.state.size()) != dim_) {
      throw DimensionError("ensemble state has dimension " + std::to_string(item.state.size()) +
                           ", expected " + std::to_string(dim_));
    }
    if (!(item.weight >= 0.0)) throw ValidationError("ensemble weights must be nonnegative");
    if (std::abs(item.state.norm() - 1.0) > kTolerance) {
      throw ValidationError("ensemble state is not unit norm");
    }
    total += item.weight;
  }
  if (std::abs(total - 1.0) > kTolerance) {
    throw ValidationError("ensemble weights sum to " + std::to_string(total));
  }
}

HermitianOperator Ensemble::average_state() const {
  const auto n = static_cast<Eigen::Index>(dim_);
  ComplexMatrix rho = ComplexMatrix::Zero(n, n);
  for (const auto& item : items_) rho += item.weight * item.state * item.state.adjoint();
  return HermitianOperator(std::move(rho));
}

Ensemble wiesner_ensemble() {
  const double r = std::numbers::sqrt2 / 2.0;
  return Ensemble(2, {{0.25, qubit(1, 0)},
                      {0.25, qubit(0, 1)},
                      {0.25, qubit(r, r)},
                      {0.25, qubit(r, -r)}});
}

ComplexVector random_pure_state(std::size_t d, std::mt19937_64& rng) {
  if (d == 0) throw DimensionError("dimension must be >= 1");
  std::normal_distribution<double> normal;
  ComplexVector v(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double re = normal(rng);
    v(i) = Complex(re, normal(rng));
  }
  return v / v.norm();
}

Ensemble random_pure_ensemble(std::size_t d, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw ValidationError("ensemble needs at least one state");
  std::mt19937_64 rng(seed);
  std::vector<EnsembleItem> items;
  for (std::size_t k = 0; k < count; ++k) {
    items.push_back({1.0 / static_cast<double>(count), random_pure_state(d, rng)});
  }
  return Ensemble(d, std::move(items));
}

Ensemble six_state_ensemble() {
  const double r = std::numbers::sqrt2 / 2.0;
  const double w = 1.0 / 6.0;
  const Complex i{0.0, 1.0};
  return Ensemble(2, {{w, qubit(1, 0)},
                      {w, qubit(0, 1)},
                      {w, qubit(r, r)},
                      {w, qubit(r, -r)},
                      {w, qubit(r, i * r)},
                      {w, qubit(r, -i * r)}});
}

Ensemble sic_qubit_ensemble() {
  const double a = std::sqrt(1.0 / 3.0);
  const double b = std::sqrt(2.0 / 3.0);
  std::vector<EnsembleItem> items{{0.25, qubit(1, 0)}};
  for (int j = 0; j < 3; ++j) {
    const Complex phase = std::polar(1.0, 2.0 * std::numbers::pi * j / 3.0);
    items.push_back({0.25, qubit(a, b * phase)});
  }
  return Ensemble(2, std::move(items));
}

HermitianOperator build_q_quantum(const Ensemble& e) {
  const auto n = static_cast<Eigen::Index>(e.dim() * e.dim() * e.dim());
  ComplexMatrix q = ComplexMatrix::Zero(n, n);
  for (const auto& item : e.items()) {
    const ComplexVector v = linalg::kron(linalg::kron(item.state, item.state),
                                         ComplexVector(item.state.conjugate()));
    q += item.weight * v * v.adjoint();
  }
  return HermitianOperator(std::move(q));
}

HermitianOperator build_q_symmetric(std::size_t d) {
  if (d < 2) throw DimensionError("symmetric scheme needs d >= 2");
  const HermitianOperator pi = linalg::symmetric_projector(d, 3);
  const double rank = static_cast<double>(d * (d + 1) * (d + 2) / 6);
  return linalg::partial_transpose(pi, {d, d, d}, 2) * (1.0 / rank);
}

BasisPair::BasisPair(ComplexMatrix basis0, ComplexMatrix basis1)
    : basis0_(std::move(basis0)), basis1_(std::move(basis1)) {
  require_orthonormal(basis0_, "basis0");
  require_orthonormal(basis1_, "basis1");
  if (basis0_.rows() != basis1_.rows()) throw DimensionError("bases have different dimensions");
}

ComplexVector BasisPair::vector(std::size_t b, std::size_t t) const {
  if (b > 1 || t >= dim()) throw DimensionError("basis vector index out of range");
  return basis(b).col(static_cast<Eigen::Index>(t));
}

double effective_overlap(const BasisPair& b) {
  const ComplexMatrix overlaps = b.basis(0).adjoint() * b.basis(1);
  return overlaps.cwiseAbs2().maxCoeff();
}

bool standard_validity(std::size_t answer, std::size_t challenge, const TicketKey& key) {
  return key.b != challenge || answer == key.t;
}

TicketScheme::TicketScheme(BasisPair bases, ValidityPredicate valid)
    : bases_(std::move(bases)), valid_(std::move(valid)) {
  if (!valid_) throw ValidationError("ticket scheme needs a validity predicate");
}

std::vector<TicketKey> TicketScheme::keys() const {
  std::vector<TicketKey> out;
  for (std::size_t b = 0; b < 2; ++b) {
    for (std::size_t t = 0; t < dim(); ++t) out.push_back({t, b});
  }
  return out;
}

ComplexMatrix fourier_matrix(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  ComplexMatrix f(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      // reduce i*j mod d before forming the angle
      const auto k = static_cast<double>((static_cast<std::size_t>(i * j)) % d);
      f(j, i) = scale * std::polar(1.0, 2.0 * std::numbers::pi * k / static_cast<double>(d));
    }
  }
  return f;
}

TicketScheme fourier_ticket_scheme(std::size_t d) {
  if (d < 2) throw DimensionError("ticket scheme needs d >= 2");
  const auto n = static_cast<Eigen::Index>(d);
  return TicketScheme(BasisPair(ComplexMatrix::Identity(n, n), fourier_matrix(d)));
}

HermitianOperator ClassicalObjective::answer_block(std::size_t c1, std::size_t c2,
                                                   std::size_t a1, std::size_t a2) const {
  if (c1 > 1 || c2 > 1 || a1 >= dim || a2 >= dim) throw DimensionError("block index out of range");
  const auto n = static_cast<Eigen::Index>(dim);
  const auto row = static_cast<Eigen::Index>(a1 * dim + a2) * n;
  return HermitianOperator(blocks[2 * c1 + c2].matrix().block(row, row, n, n));
}

ClassicalObjective build_q_classical(const TicketScheme& t) {
  const std::size_t d = t.dim();
  const auto n = static_cast<Eigen::Index>(d);
  ClassicalObjective out;
  out.dim = d;
  const double pk = t.key_probability();
  const double pc = 1.0 / static_cast<double>(TicketScheme::kChallenges * TicketScheme::kChallenges);
  for (std::size_t c1 = 0; c1 < 2; ++c1) {
    for (std::size_t c2 = 0; c2 < 2; ++c2) {
      ComplexMatrix q = ComplexMatrix::Zero(n * n * n, n * n * n);
      for (const TicketKey& key : t.keys()) {
        const ComplexVector psi = t.state(key);
        const ComplexMatrix proj = pk * psi * psi.adjoint();
        for (std::size_t a1 = 0; a1 < d; ++a1) {
          if (!t.accepts(a1, c1, key)) continue;
          for (std::size_t a2 = 0; a2 < d; ++a2) {
            if (!t.accepts(a2, c2, key)) continue;
            const auto row = static_cast<Eigen::Index>(a1 * d + a2) * n;
            q.block(row, row, n, n) += proj;
          }
        }
      }
      out.blocks[2 * c1 + c2] = HermitianOperator(std::move(q));
      out.weights[2 * c1 + c2] = pc;
    }
  }
  return out;
}

}  // namespace qmoney::schemes
