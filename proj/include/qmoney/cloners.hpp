#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "qmoney/channels.hpp"
#include "qmoney/schemes.hpp"

namespace qmoney::cloners {

using channels::ChoiOperator;
using channels::KrausSet;

/// Two-Kraus channel reaching 3/4 on the Wiesner ensemble.
KrausSet wiesner_optimal_kraus();
ChoiOperator wiesner_optimal_cloner();

/// Universal symmetric qubit cloner with fidelity 2/3 on every pure state.
KrausSet buzek_hillery_kraus();
ChoiOperator buzek_hillery_cloner();

/// rho -> 2/(d+1) S (rho (x) 1) S, S the symmetric projector on C^d (x) C^d.
ChoiOperator werner_cloner(std::size_t d);

/// rho -> rho (x) |0><0|: keep the original, emit a fixed blank as the copy.
ChoiOperator keep_and_blank_cloner(std::size_t d);

/// Generalized Pauli shift / phase and the Fourier transform over Z_d.
struct PauliOperators {
  std::size_t dim = 0;
  ComplexMatrix x;  // |i> -> |i+1 mod d>
  ComplexMatrix z;  // |i> -> w^i |i>
  ComplexMatrix f;
};

PauliOperators generalized_paulis(std::size_t d);

/// One POVM element together with the answers it sends to the two challenges.
struct PovmOutcome {
  ComplexMatrix element;
  std::size_t answer1 = 0;
  std::size_t answer2 = 0;
};

/// Measurement-first counterfeiter: one POVM per challenge pair (c1, c2).
class TicketStrategy {
 public:
  static constexpr double kCompletenessTolerance = 1e-10;

  TicketStrategy(std::size_t dim, std::array<std::vector<PovmOutcome>, 4> povms);

  std::size_t dim() const { return dim_; }
  const std::vector<PovmOutcome>& povm(std::size_t c1, std::size_t c2) const {
    return povms_.at(2 * c1 + c2);
  }
  /// max over challenge pairs of || sum E - 1 ||
  double completeness_residual() const;

 private:
  std::size_t dim_;
  std::array<std::vector<PovmOutcome>, 4> povms_;
};

/// Equal challenges: measure in that basis and duplicate the answer.
/// Distinct challenges: the covariant POVM {P_{s,t}/d}, P_{s,t} the projector
/// onto X^s Z^t |psi>, |psi> proportional to |0> + F|0>; s answers challenge 0
/// and t answers challenge 1.
TicketStrategy ticket_cloner(std::size_t d);

/// Always measure in basis `basis` of the scheme and send the outcome to both
/// challenges.
TicketStrategy fixed_basis_strategy(const schemes::TicketScheme& scheme, std::size_t basis);

/// Unit vector X^s Z^t |psi> used by ticket_cloner.
ComplexVector ticket_cloner_vector(std::size_t d, std::size_t s, std::size_t t);

/// Exact success probability: sum over keys, challenge pairs and accepted
/// answer pairs of p_k / |C|^2 <psi_k|E|psi_k>.
double evaluate_ticket_strategy(const TicketStrategy& s, const schemes::TicketScheme& t);

}  // namespace qmoney::cloners
