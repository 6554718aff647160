#pragma once

#include "qmoney/linalg.hpp"
#include "qmoney/sdp.hpp"

namespace qmoney::certificates {

using linalg::HermitianOperator;
using sdp::CloningSdp;

inline constexpr double kDefaultTolerance = 1e-7;

struct PrimalCheck {
  bool feasible = false;
  double value = 0.0;            // <Q, X>
  double min_eigenvalue = 0.0;   // of X
  double trace_defect = 0.0;     // || Tr_out X - 1 || (operator norm)
};

struct DualCheck {
  bool feasible = false;
  double value = 0.0;            // Tr Y
  double min_eigenvalue = 0.0;   // of 1 (x) Y - Q
};

struct CertificateReport {
  PrimalCheck primal;
  DualCheck dual;
  double gap = 0.0;  // dual value - primal value
  double tolerance = 0.0;
  bool certified = false;
};

// All checks recompute everything from the operators with the eigensolver;
// nothing is taken from solver state.
PrimalCheck check_primal(const HermitianOperator& x, const CloningSdp& p, double tol = kDefaultTolerance);
DualCheck check_dual(const HermitianOperator& y, const CloningSdp& p, double tol = kDefaultTolerance);
CertificateReport certify(const HermitianOperator& x, const HermitianOperator& y, const CloningSdp& p,
                          double tol = kDefaultTolerance);

}  // namespace qmoney::certificates
