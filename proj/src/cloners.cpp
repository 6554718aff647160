#include "qmoney/cloners.hpp"

#include <cmath>
#include <numbers>

namespace qmoney::cloners {

namespace {

ComplexMatrix matrix_4x2(std::initializer_list<double> entries, double scale) {
  ComplexMatrix m(4, 2);
  auto it = entries.begin();
  for (Eigen::Index r = 0; r < 4; ++r) {
    for (Eigen::Index c = 0; c < 2; ++c) m(r, c) = scale * *it++;
  }
  return m;
}

ComplexMatrix basis_projector(const schemes::TicketScheme& scheme, std::size_t b, std::size_t t) {
  const ComplexVector v = scheme.bases().vector(b, t);
  return v * v.adjoint();
}

}  // namespace

KrausSet wiesner_optimal_kraus() {
  const double s = 1.0 / std::sqrt(12.0);
  return KrausSet({matrix_4x2({3, 0, 0, 1, 0, 1, 1, 0}, s), matrix_4x2({0, 1, 1, 0, 1, 0, 0, 3}, s)});
}

ChoiOperator wiesner_optimal_cloner() { return channels::choi_from_kraus(wiesner_optimal_kraus()); }

KrausSet buzek_hillery_kraus() {
  const double s = 1.0 / std::sqrt(6.0);
  return KrausSet({matrix_4x2({2, 0, 0, 1, 0, 1, 0, 0}, s), matrix_4x2({0, 0, 1, 0, 1, 0, 0, 2}, s)});
}

ChoiOperator buzek_hillery_cloner() { return channels::choi_from_kraus(buzek_hillery_kraus()); }

ChoiOperator werner_cloner(std::size_t d) {
  if (d < 2) throw DimensionError("Werner cloner needs d >= 2");
  const ComplexMatrix sym = linalg::symmetric_projector(d, 2).matrix();
  const auto n = static_cast<Eigen::Index>(d);
  const double scale = 2.0 / static_cast<double>(d + 1);
  const ComplexMatrix eye = ComplexMatrix::Identity(n, n);
  auto action = [&](const ComplexMatrix& rho) -> ComplexMatrix {
    return scale * sym * linalg::kron(rho, eye) * sym;
  };
  return channels::choi_from_map(action, d, d * d);
}

ChoiOperator keep_and_blank_cloner(std::size_t d) {
  if (d < 1) throw DimensionError("dimension must be >= 1");
  const auto n = static_cast<Eigen::Index>(d);
  ComplexMatrix blank = ComplexMatrix::Zero(n, n);
  blank(0, 0) = 1.0;
  return channels::choi_from_map([&](const ComplexMatrix& rho) -> ComplexMatrix { return linalg::kron(rho, blank); },
                                 d, d * d);
}

PauliOperators generalized_paulis(std::size_t d) {
  if (d < 2) throw DimensionError("generalized Paulis need d >= 2");
  const auto n = static_cast<Eigen::Index>(d);
  PauliOperators p;
  p.dim = d;
  p.x = ComplexMatrix::Zero(n, n);
  p.z = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    p.x((i + 1) % n, i) = 1.0;
    p.z(i, i) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(d));
  }
  p.f = schemes::fourier_matrix(d);
  return p;
}

TicketStrategy::TicketStrategy(std::size_t dim, std::array<std::vector<PovmOutcome>, 4> povms)
    : dim_(dim), povms_(std::move(povms)) {
  for (const auto& povm : povms_) {
    if (povm.empty()) throw ValidationError("every challenge pair needs a POVM");
    for (const auto& o : povm) {
      if (static_cast<std::size_t>(o.element.rows()) != dim_ ||
          static_cast<std::size_t>(o.element.cols()) != dim_) {
        throw DimensionError("POVM element has the wrong dimension");
      }
      if (o.answer1 >= dim_ || o.answer2 >= dim_) throw DimensionError("answer out of range");
      if (linalg::HermitianOperator(o.element).min_eigenvalue() < -kCompletenessTolerance) {
        throw ValidationError("POVM element is not positive semidefinite");
      }
    }
  }
  const double residual = completeness_residual();
  if (residual > kCompletenessTolerance) {
    throw ValidationError("POVM does not sum to the identity (residual " + std::to_string(residual) + ")");
  }
}

double TicketStrategy::completeness_residual() const {
  const auto n = static_cast<Eigen::Index>(dim_);
  double worst = 0.0;
  for (const auto& povm : povms_) {
    ComplexMatrix sum = -ComplexMatrix::Identity(n, n);
    for (const auto& o : povm) sum += o.element;
    worst = std::max(worst, linalg::HermitianOperator(sum).norm());
  }
  return worst;
}

ComplexVector ticket_cloner_vector(std::size_t d, std::size_t s, std::size_t t) {
  const PauliOperators p = generalized_paulis(d);
  const auto n = static_cast<Eigen::Index>(d);
  ComplexVector zero = ComplexVector::Zero(n);
  zero(0) = 1.0;
  ComplexVector psi = (zero + p.f * zero) / std::sqrt(2.0 + 2.0 / std::sqrt(static_cast<double>(d)));
  for (std::size_t k = 0; k < t; ++k) psi = p.z * psi;
  for (std::size_t k = 0; k < s; ++k) psi = p.x * psi;
  return psi;
}

TicketStrategy ticket_cloner(std::size_t d) {
  const schemes::TicketScheme scheme = schemes::fourier_ticket_scheme(d);
  std::array<std::vector<PovmOutcome>, 4> povms;
  for (std::size_t b = 0; b < 2; ++b) {
    for (std::size_t t = 0; t < d; ++t) povms[3 * b].push_back({basis_projector(scheme, b, t), t, t});
  }
  const double inv_d = 1.0 / static_cast<double>(d);
  for (std::size_t s = 0; s < d; ++s) {
    for (std::size_t t = 0; t < d; ++t) {
      const ComplexVector v = ticket_cloner_vector(d, s, t);
      const ComplexMatrix e = inv_d * v * v.adjoint();
      povms[1].push_back({e, s, t});  // challenges (0, 1)
      povms[2].push_back({e, t, s});  // challenges (1, 0)
    }
  }
  return TicketStrategy(d, std::move(povms));
}

TicketStrategy fixed_basis_strategy(const schemes::TicketScheme& scheme, std::size_t basis) {
  if (basis > 1) throw DimensionError("basis index must be 0 or 1");
  std::array<std::vector<PovmOutcome>, 4> povms;
  for (auto& povm : povms) {
    for (std::size_t t = 0; t < scheme.dim(); ++t) povm.push_back({basis_projector(scheme, basis, t), t, t});
  }
  return TicketStrategy(scheme.dim(), std::move(povms));
}

double evaluate_ticket_strategy(const TicketStrategy& s, const schemes::TicketScheme& t) {
  if (s.dim() != t.dim()) throw DimensionError("strategy and scheme dimensions differ");
  const double weight = t.key_probability() / 4.0;
  double total = 0.0;
  for (const auto& key : t.keys()) {
    const ComplexVector psi = t.state(key);
    for (std::size_t c1 = 0; c1 < 2; ++c1) {
      for (std::size_t c2 = 0; c2 < 2; ++c2) {
        for (const auto& o : s.povm(c1, c2)) {
          if (t.accepts(o.answer1, c1, key) && t.accepts(o.answer2, c2, key)) {
            total += weight * psi.dot(o.element * psi).real();
          }
        }
      }
    }
  }
  return total;
}

}  // namespace qmoney::cloners
