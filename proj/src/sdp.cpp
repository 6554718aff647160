#include "qmoney/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qmoney::sdp {

namespace {

using Index = Eigen::Index;

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

double real_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.conjugate().cwiseProduct(b)).sum().real();
}

// Dense kernel for the two structural maps of the cloning SDP, with the
// input factor last: index = o * in + i.
struct Structure {
  Index in;
  Index out;

  ComplexMatrix trace_out(const ComplexMatrix& x) const {
    ComplexMatrix r = ComplexMatrix::Zero(in, in);
    for (Index o = 0; o < out; ++o) r += x.block(o * in, o * in, in, in);
    return r;
  }

  ComplexMatrix lift(const ComplexMatrix& y) const {
    ComplexMatrix r = ComplexMatrix::Zero(in * out, in * out);
    for (Index o = 0; o < out; ++o) r.block(o * in, o * in, in, in) = y;
    return r;
  }

  // Matrix of Z -> Tr_out(W (1 (x) Z) W) acting on row-major vec(Z).
  ComplexMatrix schur_matrix(const ComplexMatrix& w) const {
    const Index n2 = in * in;
    ComplexMatrix k = ComplexMatrix::Zero(n2, n2);
    for (Index o = 0; o < out; ++o) {
      for (Index p = 0; p < out; ++p) {
        const ComplexMatrix a = w.block(o * in, p * in, in, in);
        const ComplexMatrix ac = a.conjugate();
        for (Index i = 0; i < in; ++i) {
          for (Index j = 0; j < in; ++j) {
            k.block(i * in, j * in, in, in) += a(i, j) * ac;
          }
        }
      }
    }
    return k;
  }

  ComplexVector vec(const ComplexMatrix& m) const {
    ComplexVector v(in * in);
    for (Index i = 0; i < in; ++i) {
      for (Index j = 0; j < in; ++j) v(i * in + j) = m(i, j);
    }
    return v;
  }

  ComplexMatrix unvec(const ComplexVector& v) const {
    ComplexMatrix m(in, in);
    for (Index i = 0; i < in; ++i) {
      for (Index j = 0; j < in; ++j) m(i, j) = v(i * in + j);
    }
    return m;
  }
};

// Largest alpha with M + alpha * D >= 0, given the Cholesky factor of M.
double max_step(const Eigen::LLT<ComplexMatrix>& chol, const ComplexMatrix& d) {
  const auto l = chol.matrixL();
  const ComplexMatrix t1 = l.solve(d);
  const ComplexMatrix t = l.solve(ComplexMatrix(t1.adjoint()));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(t), Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  if (lmin >= 0.0) return std::numeric_limits<double>::infinity();
  return -1.0 / lmin;
}

struct Direction {
  ComplexMatrix dx;
  ComplexMatrix dy;
  ComplexMatrix ds;
};

SdpSolution make_solution(const ComplexMatrix& x, const ComplexMatrix& y, double pobj, double dobj,
                          const SdpResiduals& res, int iterations, std::vector<IterateRecord> history) {
  SdpSolution s;
  s.primal_x = HermitianOperator(hermitian_part(x));
  s.dual_y = HermitianOperator(hermitian_part(y));
  s.primal_value = pobj;
  s.dual_value = dobj;
  s.gap = dobj - pobj;
  s.residuals = res;
  s.iterations = iterations;
  s.history = std::move(history);
  return s;
}

}  // namespace

CloningSdp::CloningSdp(HermitianOperator q, FactoredDims dims, std::size_t input_factors)
    : q_(std::move(q)), dims_(std::move(dims)), input_factors_(input_factors) {
  if (input_factors_ == 0 || input_factors_ >= dims_.count()) {
    throw DimensionError("cloning SDP needs at least one output and one input factor");
  }
  if (dims_.total() != q_.dim()) {
    throw DimensionError("objective has dimension " + std::to_string(q_.dim()) +
                         " but factors multiply to " + std::to_string(dims_.total()));
  }
  for (std::size_t f = 0; f < dims_.count(); ++f) {
    (f + input_factors_ < dims_.count() ? out_dim_ : in_dim_) *= dims_[f];
  }
  const double lmin = q_.min_eigenvalue();
  if (lmin < -kPsdTolerance) {
    std::ostringstream msg;
    msg << "objective is not positive semidefinite (min eigenvalue " << lmin << ")";
    throw ValidationError(msg.str());
  }
}

HermitianOperator CloningSdp::trace_out(const HermitianOperator& x) const {
  if (x.dim() != q_.dim()) throw DimensionError("operator does not live on the SDP space");
  const Structure st{static_cast<Index>(in_dim_), static_cast<Index>(out_dim_)};
  return HermitianOperator(st.trace_out(x.matrix()));
}

HermitianOperator CloningSdp::lift(const HermitianOperator& y) const {
  if (y.dim() != in_dim_) throw DimensionError("dual variable does not live on the input space");
  const Structure st{static_cast<Index>(in_dim_), static_cast<Index>(out_dim_)};
  return HermitianOperator(st.lift(y.matrix()));
}

SdpSolution solve(const CloningSdp& p, double tol) {
  SolverOptions options;
  options.tol = tol;
  return solve(p, options);
}

SdpSolution solve(const CloningSdp& p, const SolverOptions& options) {
  const double tol = options.tol;
  if (!(tol >= 1e-12 && tol <= 1e-2)) throw ValidationError("solver tolerance must lie in [1e-12, 1e-2]");

  const Structure st{static_cast<Index>(p.in_dim()), static_cast<Index>(p.out_dim())};
  const Index n = st.in;
  const Index big = st.in * st.out;
  const ComplexMatrix& q = p.q().matrix();
  const ComplexMatrix eye_in = ComplexMatrix::Identity(n, n);
  const ComplexMatrix eye = ComplexMatrix::Identity(big, big);

  ComplexMatrix x = eye / static_cast<double>(st.out);
  const double qmax = p.q().max_eigenvalue();
  if (linalg::max_abs(q) == 0.0 || qmax <= 0.0) {
    return make_solution(x, ComplexMatrix::Zero(n, n), 0.0, 0.0, {}, 0, {});
  }

  // Strictly feasible start: X = 1/out, Y = 2||Q|| 1 so that S >= ||Q|| 1.
  ComplexMatrix y = 2.0 * qmax * eye_in;
  ComplexMatrix s = st.lift(y) - q;
  const double q_norm_f = q.norm();

  std::vector<IterateRecord> history;
  double pobj = 0.0;
  double dobj = 0.0;
  SdpResiduals res;
  for (int it = 0;; ++it) {
    pobj = real_inner(q, x);
    dobj = y.trace().real();
    const ComplexMatrix rp = eye_in - st.trace_out(x);
    const ComplexMatrix rd = st.lift(y) - q - s;
    res.primal_infeasibility = rp.norm();
    res.dual_infeasibility = rd.norm();
    const double mu = real_inner(x, s) / static_cast<double>(big);

    IterateRecord rec;
    rec.iteration = it;
    rec.primal_value = pobj;
    rec.dual_value = dobj;
    rec.mu = mu;
    const double rel_gap = std::abs(dobj - pobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    const double pinf = res.primal_infeasibility / (1.0 + std::sqrt(static_cast<double>(n)));
    const double dinf = res.dual_infeasibility / (1.0 + q_norm_f);
    if (rel_gap <= tol && pinf <= tol && dinf <= tol) {
      history.push_back(rec);
      return make_solution(x, y, pobj, dobj, res, it, std::move(history));
    }
    if (it >= options.max_iterations) {
      history.push_back(rec);
      std::ostringstream msg;
      msg << "SDP solver hit the iteration cap (" << options.max_iterations << "): relative gap "
          << rel_gap << ", primal infeasibility " << pinf << ", dual infeasibility " << dinf;
      throw SolverError(msg.str(), make_solution(x, y, pobj, dobj, res, it, std::move(history)));
    }

    // Nesterov-Todd scaling point W with W S W = X.
    const Eigen::LLT<ComplexMatrix> chol_x(x);
    const Eigen::LLT<ComplexMatrix> chol_s(s);
    if (chol_x.info() != Eigen::Success || chol_s.info() != Eigen::Success) {
      std::ostringstream msg;
      msg << "iterate lost positive definiteness at iteration " << it;
      throw SolverError(msg.str(), make_solution(x, y, pobj, dobj, res, it, std::move(history)));
    }
    const ComplexMatrix lx = chol_x.matrixL();
    const ComplexMatrix ls = chol_s.matrixL();
    Eigen::BDCSVD<ComplexMatrix> svd(ls.adjoint() * lx, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RealVector sv = svd.singularValues();
    const ComplexMatrix g = lx * svd.matrixV() * sv.cwiseSqrt().cwiseInverse().asDiagonal();
    const ComplexMatrix w = hermitian_part(g * g.adjoint());
    const ComplexMatrix s_inv = hermitian_part(chol_s.solve(eye));

    const Eigen::LLT<ComplexMatrix> schur(st.schur_matrix(w));
    if (schur.info() != Eigen::Success) {
      throw SolverError("Schur complement is not positive definite",
                        make_solution(x, y, pobj, dobj, res, it, std::move(history)));
    }
    const ComplexMatrix wrdw = w * rd * w;

    auto direction = [&](double sigma) {
      const ComplexMatrix rc = sigma * mu * s_inv - x;
      const ComplexMatrix rhs = st.trace_out(rc - wrdw) - rp;
      Direction dir;
      dir.dy = hermitian_part(st.unvec(schur.solve(st.vec(rhs))));
      dir.ds = st.lift(dir.dy) + rd;
      dir.dx = hermitian_part(rc - w * dir.ds * w);
      return dir;
    };
    auto steps = [&](const Direction& dir) {
      const double ap = std::min(1.0, options.step_fraction * max_step(chol_x, dir.dx));
      const double ad = std::min(1.0, options.step_fraction * max_step(chol_s, dir.ds));
      return std::pair{ap, ad};
    };

    double sigma = 0.1;
    if (options.predictor_corrector) {
      const Direction affine = direction(0.0);
      const auto [ap, ad] = steps(affine);
      const double mu_aff =
          real_inner(x + ap * affine.dx, s + ad * affine.ds) / static_cast<double>(big);
      sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);
    }
    const Direction dir = direction(sigma);
    const auto [ap, ad] = steps(dir);
    rec.primal_step = ap;
    rec.dual_step = ad;
    history.push_back(rec);

    x = hermitian_part(x + ap * dir.dx);
    y = hermitian_part(y + ad * dir.dy);
    s = hermitian_part(s + ad * dir.ds);
  }
}

DualBound dual_norm_bound(const CloningSdp& p) {
  const double norm = p.q().norm();
  return {HermitianOperator::identity(p.in_dim()) * norm, norm * static_cast<double>(p.in_dim())};
}

namespace {

void require_blocks(std::span<const CloningSdp> blocks) {
  if (blocks.empty()) throw ValidationError("no blocks given");
  for (const auto& b : blocks) {
    if (b.out_dim() != blocks.front().out_dim()) {
      throw DimensionError("blocks must share the same output dimension");
    }
  }
}

std::vector<std::size_t> input_offsets(std::span<const CloningSdp> blocks) {
  std::vector<std::size_t> off{0};
  for (const auto& b : blocks) off.push_back(off.back() + b.in_dim());
  return off;
}

// Direct sum over the input factor of per-block operators on out (x) in_i.
ComplexMatrix direct_sum_on_input(std::span<const CloningSdp> blocks,
                                  std::span<const ComplexMatrix> parts) {
  const auto off = input_offsets(blocks);
  const auto out = static_cast<Index>(blocks.front().out_dim());
  const auto in = static_cast<Index>(off.back());
  ComplexMatrix m = ComplexMatrix::Zero(out * in, out * in);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto nb = static_cast<Index>(blocks[b].in_dim());
    const auto base = static_cast<Index>(off[b]);
    for (Index o = 0; o < out; ++o) {
      for (Index p = 0; p < out; ++p) {
        m.block(o * in + base, p * in + base, nb, nb) = parts[b].block(o * nb, p * nb, nb, nb);
      }
    }
  }
  return m;
}

void require_weights(std::span<const double> weights, std::size_t count) {
  if (weights.size() != count) throw DimensionError("one weight per block required");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ValidationError("block weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ValidationError("block weights must sum to 1");
}

}  // namespace

CloningSdp assemble_block_problem(std::span<const CloningSdp> blocks, std::span<const double> weights) {
  require_blocks(blocks);
  require_weights(weights, blocks.size());
  std::vector<ComplexMatrix> parts;
  for (std::size_t b = 0; b < blocks.size(); ++b) parts.push_back(weights[b] * blocks[b].q().matrix());
  const auto off = input_offsets(blocks);
  std::vector<std::size_t> dims;
  const auto& d0 = blocks.front().dims();
  for (std::size_t f = 0; f + blocks.front().input_factors() < d0.count(); ++f) dims.push_back(d0[f]);
  dims.push_back(off.back());
  return CloningSdp(HermitianOperator(direct_sum_on_input(blocks, parts)), FactoredDims(dims), 1);
}

HermitianOperator assemble_block_primal(std::span<const CloningSdp> blocks,
                                        std::span<const HermitianOperator> xs) {
  require_blocks(blocks);
  if (xs.size() != blocks.size()) throw DimensionError("one primal block per problem required");
  std::vector<ComplexMatrix> parts;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (xs[b].dim() != blocks[b].q().dim()) throw DimensionError("primal block has wrong dimension");
    parts.push_back(xs[b].matrix());
  }
  return HermitianOperator(direct_sum_on_input(blocks, parts));
}

HermitianOperator assemble_block_dual(std::span<const CloningSdp> blocks,
                                      std::span<const HermitianOperator> ys,
                                      std::span<const double> weights) {
  require_blocks(blocks);
  require_weights(weights, blocks.size());
  if (ys.size() != blocks.size()) throw DimensionError("one dual block per problem required");
  const auto off = input_offsets(blocks);
  const auto in = static_cast<Index>(off.back());
  ComplexMatrix y = ComplexMatrix::Zero(in, in);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (ys[b].dim() != blocks[b].in_dim()) throw DimensionError("dual block has wrong dimension");
    const auto nb = static_cast<Index>(blocks[b].in_dim());
    y.block(static_cast<Index>(off[b]), static_cast<Index>(off[b]), nb, nb) = weights[b] * ys[b].matrix();
  }
  return HermitianOperator(std::move(y));
}

BlockSolution solve_block_diagonal(std::span<const CloningSdp> blocks, std::span<const double> weights,
                                   double tol) {
  require_blocks(blocks);
  require_weights(weights, blocks.size());
  BlockSolution out;
  std::vector<HermitianOperator> xs;
  std::vector<HermitianOperator> ys;
  SdpSolution& total = out.assembled;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    SdpSolution s = solve(blocks[b], tol);
    total.primal_value += weights[b] * s.primal_value;
    total.dual_value += weights[b] * s.dual_value;
    total.residuals.primal_infeasibility =
        std::hypot(total.residuals.primal_infeasibility, s.residuals.primal_infeasibility);
    total.residuals.dual_infeasibility =
        std::hypot(total.residuals.dual_infeasibility, weights[b] * s.residuals.dual_infeasibility);
    total.iterations += s.iterations;
    xs.push_back(s.primal_x);
    ys.push_back(s.dual_y);
    out.blocks.push_back(std::move(s));
  }
  total.gap = total.dual_value - total.primal_value;
  total.primal_x = assemble_block_primal(blocks, xs);
  total.dual_y = assemble_block_dual(blocks, ys, weights);
  return out;
}

}  // namespace qmoney::sdp
