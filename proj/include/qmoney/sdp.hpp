#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qmoney/linalg.hpp"

namespace qmoney::sdp {

using linalg::FactoredDims;
using linalg::HermitianOperator;

/// The cloning SDP
///
///   maximize <Q, X>   s.t.  Tr_out(X) = 1_in,  X >= 0
///   minimize Tr(Y)    s.t.  1_out (x) Y >= Q
///
/// The trailing `input_factors` entries of `dims` form the input space X;
/// every leading factor is an output factor that gets traced out.
class CloningSdp {
 public:
  static constexpr double kPsdTolerance = 1e-9;

  CloningSdp(HermitianOperator q, FactoredDims dims, std::size_t input_factors = 1);

  const HermitianOperator& q() const { return q_; }
  const FactoredDims& dims() const { return dims_; }
  std::size_t input_factors() const { return input_factors_; }
  std::size_t in_dim() const { return in_dim_; }
  std::size_t out_dim() const { return out_dim_; }

  /// Tr_out(X) for an operator on the full space.
  HermitianOperator trace_out(const HermitianOperator& x) const;
  /// 1_out (x) Y.
  HermitianOperator lift(const HermitianOperator& y) const;

 private:
  HermitianOperator q_;
  FactoredDims dims_;
  std::size_t input_factors_;
  std::size_t in_dim_ = 1;
  std::size_t out_dim_ = 1;
};

struct SdpResiduals {
  double primal_infeasibility = 0.0;  // ||Tr_out X - 1||_F
  double dual_infeasibility = 0.0;    // ||1 (x) Y - Q - S||_F
};

struct IterateRecord {
  int iteration = 0;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double mu = 0.0;
  double primal_step = 0.0;
  double dual_step = 0.0;
};

struct SdpSolution {
  HermitianOperator primal_x;
  HermitianOperator dual_y;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap = 0.0;  // dual_value - primal_value
  SdpResiduals residuals;
  int iterations = 0;
  std::vector<IterateRecord> history;
};

/// Solver knobs. Only `tol` is part of the contract.
struct SolverOptions {
  double tol = 1e-8;
  int max_iterations = 200;
  double step_fraction = 0.98;
  bool predictor_corrector = true;
};

/// Iteration cap reached; carries the best iterate seen.
class SolverError : public NumericError {
 public:
  SolverError(const std::string& what, SdpSolution best)
      : NumericError(what), best_(std::move(best)) {}
  const SdpSolution& best() const { return best_; }

 private:
  SdpSolution best_;
};

/// Infeasible-start primal-dual path following with Nesterov-Todd scaling
/// on the complex Hermitian cone.
SdpSolution solve(const CloningSdp& p, double tol = 1e-8);
SdpSolution solve(const CloningSdp& p, const SolverOptions& options);

struct DualBound {
  HermitianOperator y;
  double value = 0.0;
};

/// Y = ||Q|| 1_in, always dual feasible.
DualBound dual_norm_bound(const CloningSdp& p);

/// Block-diagonal problem: the input space is the direct sum of the block
/// inputs, and the objective is the weighted direct sum of the block Qs.
/// All blocks must share the same output factors.
CloningSdp assemble_block_problem(std::span<const CloningSdp> blocks, std::span<const double> weights);
HermitianOperator assemble_block_primal(std::span<const CloningSdp> blocks,
                                        std::span<const HermitianOperator> xs);
HermitianOperator assemble_block_dual(std::span<const CloningSdp> blocks,
                                      std::span<const HermitianOperator> ys,
                                      std::span<const double> weights);

struct BlockSolution {
  SdpSolution assembled;          // solution of assemble_block_problem(...)
  std::vector<SdpSolution> blocks;
};

BlockSolution solve_block_diagonal(std::span<const CloningSdp> blocks, std::span<const double> weights,
                                   double tol = 1e-8);

}  // namespace qmoney::sdp
