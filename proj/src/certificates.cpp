#include "qmoney/certificates.hpp"

#include <cmath>

namespace qmoney::certificates {

PrimalCheck check_primal(const HermitianOperator& x, const CloningSdp& p, double tol) {
  if (x.dim() != p.q().dim()) throw DimensionError("primal operator has the wrong dimension");
  PrimalCheck c;
  c.min_eigenvalue = x.min_eigenvalue();
  c.trace_defect = (p.trace_out(x) - HermitianOperator::identity(p.in_dim())).norm();
  c.value = p.q().inner(x);
  c.feasible = c.min_eigenvalue >= -tol && c.trace_defect <= tol;
  return c;
}

DualCheck check_dual(const HermitianOperator& y, const CloningSdp& p, double tol) {
  if (y.dim() != p.in_dim()) throw DimensionError("dual operator has the wrong dimension");
  DualCheck c;
  c.min_eigenvalue = (p.lift(y) - p.q()).min_eigenvalue();
  c.value = y.trace();
  c.feasible = c.min_eigenvalue >= -tol;
  return c;
}

CertificateReport certify(const HermitianOperator& x, const HermitianOperator& y, const CloningSdp& p,
                          double tol) {
  CertificateReport r;
  r.tolerance = tol;
  r.primal = check_primal(x, p, tol);
  r.dual = check_dual(y, p, tol);
  r.gap = r.dual.value - r.primal.value;
  r.certified = r.primal.feasible && r.dual.feasible && std::abs(r.gap) <= tol;
  return r;
}

}  // namespace qmoney::certificates
