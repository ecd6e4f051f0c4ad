#pragma once

#include <string>
#include <vector>

#include "sparsepot/spectral_count.hpp"
#include "sparsepot/step_model.hpp"

namespace sparsepot {

/// One Lambert-W ladder of the step V0 = i on [-N, N]. Squaring the matching
/// condition gives kappa R = -i W_n(a sqrt(V0) R / 2) with a in {+i, -i}
/// (odd) or {+1, -1} (even).
struct LambertFamily {
  Parity parity = Parity::odd;
  cplx a{0.0, 1.0};
};

/// The ladder the asymptotic analysis follows (odd, a = +i).
inline LambertFamily leading_family() { return {Parity::odd, cplx(0.0, 1.0)}; }

/// All four ladders; together they cover every zero of the squared secular.
std::vector<LambertFamily> all_families();

struct ImagStepBranch {
  long n = 0;
  LambertFamily family;
  cplx kappa_seed;
  cplx kappa;          // Newton-refined
  cplx E;              // kappa^2 + V0
  bool converged = false;
  bool on_physical_sheet = false;
  double residual = 0.0;
};

/// Seeds and refines branch n in [n_lo, n_hi] of the given family for
/// V0 = i, R = N (N >= 8). Refinement is Newton on V0 sin^2(kR) + k^2 (odd)
/// or V0 cos^2(kR) + k^2 (even), the pole-free form of V0 + k^2 csc^2 / sec^2.
/// A non-converging branch is flagged, not fatal.
std::vector<ImagStepBranch> enumerate_imag_step(int N, long n_lo, long n_hi,
                                                const LambertFamily& family = leading_family(),
                                                int workers = 1);

struct CensusRow {
  int N = 0;
  long count = 0;
  double ratio = 0.0;  // count log N / N^2
  Region box;
};

/// Eigenvalues on the physical sheet inside
///   N^2 / (C log^2 N) <= Re E <= C N^2 / log^2 N,  1/C <= Im E <= C,
/// collected from all four ladders and deduplicated by energy.
CensusRow census_imag_step(int N, double C_box = 10.0, int workers = 1,
                           std::vector<ImagStepBranch>* members = nullptr);

/// Exponents of the Lambert argument that the census sweeps for a given box.
long census_branch_bound(int N, double C_box);

std::string census_csv_header();
std::string census_csv_row(const CensusRow& row);

/// Pole-free squared secular G(k) = V0 sin^2(kR) + k^2 (odd) or
/// V0 cos^2(kR) + k^2 (even); its zeros are the zeros of either sign of the
/// matching condition.
cplx imag_step_g(cplx kappa, double R, cplx v0, Parity parity);

}  // namespace sparsepot
