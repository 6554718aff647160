// Reference computations used by the tests. They are written with plain index
// loops and closed forms and deliberately avoid the library routines they
// are compared against.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using C = std::complex<double>;
using M = Eigen::MatrixXcd;
using V = Eigen::VectorXcd;

inline M kron(const M& a, const M& b) {
  M out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

inline V kron(const V& a, const V& b) {
  V out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index k = 0; k < b.size(); ++k) out(i * b.size() + k) = a(i) * b(k);
  return out;
}

// Mixed-radix digits of `index`, most significant factor first.
inline std::vector<std::size_t> digits(std::size_t index, const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> out(dims.size());
  for (std::size_t f = dims.size(); f-- > 0;) {
    out[f] = index % dims[f];
    index /= dims[f];
  }
  return out;
}

inline std::size_t undigits(const std::vector<std::size_t>& ds, const std::vector<std::size_t>& dims) {
  std::size_t index = 0;
  for (std::size_t f = 0; f < dims.size(); ++f) index = index * dims[f] + ds[f];
  return index;
}

// Tr over every factor not in `keep` (keep sorted ascending).
inline M partial_trace(const M& m, const std::vector<std::size_t>& dims, const std::vector<std::size_t>& keep) {
  std::vector<std::size_t> kept_dims;
  for (std::size_t k : keep) kept_dims.push_back(dims[k]);
  std::size_t kept_total = 1;
  for (std::size_t d : kept_dims) kept_total *= d;
  M out = M::Zero(static_cast<Eigen::Index>(kept_total), static_cast<Eigen::Index>(kept_total));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const auto dr = digits(static_cast<std::size_t>(r), dims);
      const auto dc = digits(static_cast<std::size_t>(c), dims);
      bool diagonal = true;
      for (std::size_t f = 0; f < dims.size(); ++f) {
        bool kept = false;
        for (std::size_t k : keep) kept = kept || k == f;
        if (!kept && dr[f] != dc[f]) diagonal = false;
      }
      if (!diagonal) continue;
      std::vector<std::size_t> kr;
      std::vector<std::size_t> kc;
      for (std::size_t k : keep) {
        kr.push_back(dr[k]);
        kc.push_back(dc[k]);
      }
      out(static_cast<Eigen::Index>(undigits(kr, kept_dims)), static_cast<Eigen::Index>(undigits(kc, kept_dims))) +=
          m(r, c);
    }
  }
  return out;
}

inline M random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  M m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double re = g(rng);
      m(i, j) = C(re, g(rng));
    }
  return m;
}

inline M random_hermitian(Eigen::Index n, std::mt19937_64& rng) {
  const M a = random_matrix(n, n, rng);
  return (a + a.adjoint()) / 2.0;
}

inline M random_density(Eigen::Index n, std::mt19937_64& rng) {
  const M a = random_matrix(n, n, rng);
  const M p = a * a.adjoint();
  return p / p.trace().real();
}

inline V random_state(Eigen::Index n, std::mt19937_64& rng) {
  const M a = random_matrix(n, 1, rng);
  return a.col(0) / a.norm();
}

// Kraus operators of a random channel: slices of a random isometry.
inline std::vector<M> random_kraus(Eigen::Index in, Eigen::Index out, Eigen::Index count, std::mt19937_64& rng) {
  const M g = random_matrix(out * count, in, rng);
  const M q = Eigen::HouseholderQR<M>(g).householderQ() * M::Identity(out * count, in);
  std::vector<M> ops;
  for (Eigen::Index k = 0; k < count; ++k) ops.push_back(q.block(k * out, 0, out, in));
  return ops;
}

// Phi(rho) from Kraus operators.
inline M apply_kraus(const std::vector<M>& ops, const M& rho) {
  M out = M::Zero(ops.front().rows(), ops.front().rows());
  for (const auto& a : ops) out += a * rho * a.adjoint();
  return out;
}

inline double binomial(unsigned n, unsigned k) {
  double c = 1.0;
  for (unsigned i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
  return c;
}

// |Phi+> on C^d (x) C^d, unnormalised: sum_i |ii>.
inline V max_entangled(Eigen::Index d) {
  V v = V::Zero(d * d);
  for (Eigen::Index i = 0; i < d; ++i) v(i * d + i) = 1.0;
  return v;
}

inline double max_abs(const M& m) { return m.cwiseAbs().maxCoeff(); }

inline V basis(Eigen::Index d, Eigen::Index i) {
  V v = V::Zero(d);
  v(i) = 1.0;
  return v;
}

}  // namespace oracle
