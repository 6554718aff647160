#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "qmoney/linalg.hpp"

namespace qmoney::schemes {

using linalg::HermitianOperator;

struct EnsembleItem {
  double weight = 0.0;
  ComplexVector state;
};

/// Finite ensemble of pure states {(p_k, |psi_k>)} over C^d.
class Ensemble {
 public:
  static constexpr double kTolerance = 1e-12;

  Ensemble(std::size_t dim, std::vector<EnsembleItem> items);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return items_.size(); }
  const std::vector<EnsembleItem>& items() const { return items_; }
  const EnsembleItem& operator[](std::size_t k) const { return items_.at(k); }

  /// sum_k p_k |psi_k><psi_k|
  HermitianOperator average_state() const;

 private:
  std::size_t dim_;
  std::vector<EnsembleItem> items_;
};

Ensemble wiesner_ensemble();
Ensemble six_state_ensemble();
/// Tetrahedral qubit SIC: |0>, and sqrt(1/3)|0> + sqrt(2/3) w^j |1>, w = e^{2 pi i/3}.
Ensemble sic_qubit_ensemble();

/// `count` Haar-random pure states with equal weights, drawn from mt19937_64(seed).
Ensemble random_pure_ensemble(std::size_t d, std::size_t count, std::uint64_t seed);
ComplexVector random_pure_state(std::size_t d, std::mt19937_64& rng);

/// Q = sum_k p_k |psi psi conj(psi)><psi psi conj(psi)| on Y (x) Z (x) X.
HermitianOperator build_q_quantum(const Ensemble& e);

/// Q = (1/rank Pi) (1 (x) 1 (x) T)(Pi), Pi the symmetric projector on (C^d)^{(x)3}.
HermitianOperator build_q_symmetric(std::size_t d);

/// Two orthonormal bases of C^d; the columns of `basis0` / `basis1`.
class BasisPair {
 public:
  static constexpr double kTolerance = 1e-12;

  BasisPair(ComplexMatrix basis0, ComplexMatrix basis1);

  std::size_t dim() const { return static_cast<std::size_t>(basis0_.rows()); }
  const ComplexMatrix& basis(std::size_t b) const { return b == 0 ? basis0_ : basis1_; }
  ComplexVector vector(std::size_t b, std::size_t t) const;

 private:
  ComplexMatrix basis0_;
  ComplexMatrix basis1_;
};

/// c = max_{s,t} |<e_s^0|e_t^1>|^2.
double effective_overlap(const BasisPair& b);

/// Secret key of a ticket: the state is basis `b`, vector `t`.
struct TicketKey {
  std::size_t t = 0;
  std::size_t b = 0;
};

/// (answer, challenge, key) -> accepted?
using ValidityPredicate = std::function<bool(std::size_t, std::size_t, const TicketKey&)>;

/// Accept iff the challenge differs from the encoding basis, or the answer
/// equals the encoded index.
bool standard_validity(std::size_t answer, std::size_t challenge, const TicketKey& key);

/// Classical-verification ticket scheme: keys (t, b) uniform over 2d,
/// challenges uniform over {0, 1}, answers in {0, ..., d-1}.
class TicketScheme {
 public:
  static constexpr std::size_t kChallenges = 2;

  explicit TicketScheme(BasisPair bases, ValidityPredicate valid = standard_validity);

  std::size_t dim() const { return bases_.dim(); }
  std::size_t answers() const { return bases_.dim(); }
  const BasisPair& bases() const { return bases_; }

  std::vector<TicketKey> keys() const;
  double key_probability() const { return 1.0 / static_cast<double>(2 * dim()); }
  ComplexVector state(const TicketKey& k) const { return bases_.vector(k.b, k.t); }
  bool accepts(std::size_t answer, std::size_t challenge, const TicketKey& key) const {
    return valid_(answer, challenge, key);
  }

 private:
  BasisPair bases_;
  ValidityPredicate valid_;
};

/// basis0 computational, basis1 the columns of F|i> = d^{-1/2} sum_j w^{ij}|j>.
TicketScheme fourier_ticket_scheme(std::size_t d);
ComplexMatrix fourier_matrix(std::size_t d);

/// Objective of the ticket cloning SDP split by challenge pair. Block
/// (c1, c2) acts on answers(Y) (x) answers(Z) (x) X and is block diagonal in
/// the answer registers; the blocks are built from the unconjugated states so
/// that the primal blocks are the counterfeiter's POVM elements.
struct ClassicalObjective {
  std::size_t dim = 0;
  std::array<HermitianOperator, 4> blocks;  // index 2*c1 + c2
  std::array<double, 4> weights{};          // 1/|C|^2 each

  /// d x d operator sum_k p_k [a1, a2 valid for (c1, c2, k)] |psi_k><psi_k|
  HermitianOperator answer_block(std::size_t c1, std::size_t c2, std::size_t a1,
                                 std::size_t a2) const;
  linalg::FactoredDims block_dims() const { return {dim, dim, dim}; }
};

ClassicalObjective build_q_classical(const TicketScheme& t);

}  // namespace qmoney::schemes
