#pragma once

#include <vector>

#include "sparsepot/potential.hpp"
#include "sparsepot/special_functions.hpp"

namespace sparsepot {

/// Propagator of (psi, psi') across an interval.
struct TransferMatrix {
  cplx m11{1.0}, m12{0.0}, m21{0.0}, m22{1.0};

  cplx det() const { return m11 * m22 - m12 * m21; }
  TransferMatrix operator*(const TransferMatrix& o) const {
    return {m11 * o.m11 + m12 * o.m21, m11 * o.m12 + m12 * o.m22,
            m21 * o.m11 + m22 * o.m21, m21 * o.m12 + m22 * o.m22};
  }
};

/// Transfer matrix of psi'' = (V - E) psi from `from` to `to` (from < to).
TransferMatrix transfer_matrix(const PiecewisePotential& pot, cplx E, double from, double to);

/// Coefficient of the growing exterior wave on the right when the solution
/// decays on the left, divided by the free value; identically 1 for V = 0.
/// Analytic in E off [0, inf); zeros counted with multiplicity are the
/// eigenvalues.
cplx global_secular(const PiecewisePotential& pot, cplx E);

struct Eigenfunction {
  std::vector<cplx> values;
  double matching_residual = 0.0;  // relative psi' jump at the matching point
};

/// L2-normalised eigenfunction sampled on `grid`. Shoots from both ends with
/// rescaled states and joins them where both are largest. Throws DomainError
/// if E is not an eigenvalue (relative derivative jump above `tol`).
Eigenfunction reconstruct_eigenfunction(const PiecewisePotential& pot, cplx E,
                                        const std::vector<double>& grid, double tol = 1e-6);

}  // namespace sparsepot
