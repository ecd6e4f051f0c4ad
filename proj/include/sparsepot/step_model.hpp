#pragma once

#include <cmath>
#include <map>
#include <vector>

#include "sparsepot/special_functions.hpp"

namespace sparsepot {

/// Complex constant v0 on [x0 - R, x0 + R], zero elsewhere.
struct StepBump {
  cplx v0;
  double R = 1.0;
  double x0 = 0.0;
};

enum class Parity { even, odd };

/// Which square root of E the exterior wave uses. `physical` is
/// sqrt_upper(E) (decaying, genuine eigenvalues); `unphysical` is its
/// negative (growing, resonances).
enum class Sheet { physical, unphysical };

const char* to_string(Parity p);

/// Matching function of a single bump:
///   odd:  i chi - kappa cot(kappa R)
///   even: i chi + kappa tan(kappa R)
/// with chi = sqrt_upper(E) (negated on the unphysical sheet) and
/// kappa = sqrt(E - v0). Even in kappa, so the interior branch is irrelevant.
/// Throws PoleError when kappa R is within 1e-8 of a pole.
cplx secular(const StepBump& bump, cplx E, Parity parity, Sheet sheet = Sheet::physical);

/// Entire-in-kappa multiple of `secular` without the trigonometric poles:
///   odd:  i chi R sinc(kappa R) - cos(kappa R)  = R sinc(kappa R) * secular
///   even: i chi cos(kappa R) + kappa sin(kappa R) = cos(kappa R) * secular
/// Zeros with chi on the chosen sheet are exactly the zeros of `secular`;
/// this is the form to hand to contour counting.
cplx secular_regular(const StepBump& bump, cplx E, Parity parity,
                     Sheet sheet = Sheet::physical);

/// Exterior momentum implied by the interior logarithmic derivative at the
/// bump edge: -i kappa cot(kappa R) (odd) or i kappa tan(kappa R) (even).
cplx chi_match(const StepBump& bump, cplx E, Parity parity);

/// Im chi_match > 0, i.e. the matched exterior wave decays.
/// False at the threshold and at the interior Dirichlet/Neumann poles.
bool physical_sheet(const StepBump& bump, cplx E, Parity parity);

/// The sheet on which chi_match lies; the sheet where `secular` vanishes
/// for a potential built by solve_for_v0.
Sheet sheet_of(const StepBump& bump, cplx E, Parity parity);

/// V0 = -kappa^2 csc^2(kappa R) (odd) or -kappa^2 sec^2(kappa R) (even).
cplx solve_for_v0(cplx kappa, double R, Parity parity);

inline cplx energy(cplx kappa, cplx v0) { return kappa * kappa + v0; }

/// Im z > 0 and Im z <= eps0 Re z.
bool in_sector(cplx z, double eps0);

struct BumpReport {
  StepBump bump;
  Parity parity = Parity::odd;
  cplx zeta;
  cplx achieved_eigenvalue;
  cplx kappa;              // interior momentum at zeta
  double residual = 0.0;   // |secular(bump, zeta, parity)|
  int newton_iterations = 0;
  bool reseeded = false;
  std::map<double, double> lq_norms;  // q -> ||W||_q (q = inf keyed by HUGE_VAL)
  double davies_nath = 0.0;           // F_{W,1}(Im sqrt(zeta))
};

struct BumpOptions {
  double sigma = 1.0;
  double x0 = 0.0;
  double tol = -1.0;      // negative: 1e-10 (1 + |zeta|)
  double eps0 = 0.2;      // aperture of the admissible sector
  int max_iterations = 100;
  std::vector<double> q_list = {1.0, 2.0, 4.0, HUGE_VAL};
};

/// Step bump with an odd-parity eigenvalue exactly at zeta (to `tol`).
/// zeta must satisfy Im zeta > 0 and Im zeta <= eps0 Re zeta. The problem
/// is solved at |zeta| = 1 and scaled back. Throws DomainError on bad input,
/// ConvergenceError (with the Newton trace) on divergence, SheetError if both
/// seeds land on the unphysical sheet.
BumpReport construct_bump(cplx zeta, const BumpOptions& opts = {});

/// |v0| (2R)^{1/q}; |v0| for q = inf.
double bump_norm_lq(const StepBump& bump, double q);

/// (sup_y int |V|^q e^{-s|x-y|} dx)^{1/q} = |v0| ((2/s)(1 - e^{-sR}))^{1/q}.
double davies_nath(const StepBump& bump, double q, double s);

/// L2-normalised eigenfunction at x. E must be a zero of the secular on the
/// physical sheet (relative tolerance 1e-6); DomainError otherwise.
cplx eigenfunction(const StepBump& bump, cplx E, Parity parity, double x);

/// s-wave Wronskian kappa J'_nu(kappa R) H_nu(chi R) - chi J_nu(kappa R) H'_nu(chi R)
/// with nu = (d - 2)/2, d in {2, 3}.
cplx radial_secular(cplx v0, double R, cplx E, int d);

}  // namespace sparsepot
