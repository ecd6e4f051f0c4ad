#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sparsepot/envelopes.hpp"
#include "sparsepot/potential.hpp"
#include "sparsepot/spectral_count.hpp"
#include "sparsepot/step_model.hpp"

namespace sparsepot {

/// Targets zeta_n in the sector with Im zeta_n > 0 and nonincreasing.
struct TargetSequence {
  std::vector<cplx> zetas;
  double q = 2.0;
  double gamma = 1.0;
  int d = 1;

  /// DomainError naming the first offending index.
  void validate(double eps0) const;

  /// Reads {"zetas":[[re,im],...], "q":..., "gamma":..., "d":...}; missing
  /// scalar fields keep their defaults. SchemaError on malformed input.
  static TargetSequence from_json(const std::string& text);
};

/// (sum_n |zeta_n|^{d/2} |Im zeta_n|^{q-d} |log|Im zeta_n / zeta_n||^d)^{1/q}.
double sequence_condition_value(const TargetSequence& t);

/// Same for an infinite sequence n -> zeta_n (n = 1, 2, ...), summed until a
/// geometric tail bound drops below 1e-15 of the partial sum. DomainError
/// naming the last partial sum when that fails within `max_terms`.
double sequence_condition_value(const std::function<cplx(long)>& zeta, int d, double q,
                                long max_terms = 100000);

enum class BuildMode { desk, faithful };

struct ChooseOptions {
  BuildMode mode = BuildMode::desk;
  double delta = 1e-2;  // desk-mode disk radius
  double sigma = 1.0;   // bump parameter passed to construct_bump
};

struct GapChoice {
  SeparationSequence L;             // usable values (desk mode; may be inf in faithful mode)
  std::vector<double> log_L;        // natural log of every L_n
  std::vector<double> log_eps_inv;  // log(1/eps_n)
  std::vector<double> log_delta;    // log(delta_n)
  std::vector<double> rule_lhs;     // Im sqrt(zeta_n) L_n
  std::vector<double> rule_rhs;     // C log(n log^2<n> sup eps^-1 a^-d/q sup ||V||)
  std::vector<bool> raised;         // power law lifted to meet the rule
  bool resorted = false;            // a later L_n had to be lifted to keep L monotone
  double kappa_tilde = 0.0;         // exponent actually used
  std::vector<BumpReport> bumps;
};

/// Faithful mode: L_n = C_L |Im zeta_n|^{-kappa_tilde}, eps_n from
/// log(1/eps_n) = big_o M_pq(L, zeta_n) log(1/delta_n) with
/// delta_n = max(exp(-|Im zeta_n|^{-gamma}), delta_floor), all in log space.
/// Desk mode: exponent 1, log(1/eps_n) = big_o log(1/delta).
/// In both, L_n is raised where needed so that
///   Im sqrt(zeta_n) L_n >= C log(n log^2 <n> sup_j eps_j^{-1} a_j^{-d} sup_i ||V_i||_inf)
/// and then made nondecreasing.
GapChoice choose_L(const TargetSequence& t, const EnvelopeParams& params,
                   const ChooseOptions& opts = {});

struct SparseAssembly {
  PiecewisePotential potential;
  std::vector<BumpReport> bumps;
  std::vector<double> centers;          // x_n
  std::vector<double> gaps;             // realised gap between supports n and n+1
  std::vector<double> sparsity;         // diam(Omega_n) / L_n
  std::vector<double> decay_ratio;      // |V(x_n)| <x_n>^{1/kappa_tilde}
  double norm_lq = 0.0;                 // ||V||_{L^q}
  double condition_value = 0.0;         // sequence_condition_value(t)
};

/// Bumps for each target, placed left to right with x_1 = 0 and
/// x_{n+1} = x_n + R_n + L_n + R_{n+1}. Needs L.size() >= zetas.size() - 1.
/// Construction failures are rethrown as TargetError naming the index.
SparseAssembly assemble_sparse(const TargetSequence& t, const SeparationSequence& L,
                               double sigma = 1.0, double kappa_tilde_for_decay = 1.0);

/// (sum_j ||V_j||_q^p)^{1/p} over pieces.
double lp_lq_norm(const PiecewisePotential& pot, double p, double q);

struct DiskCheck {
  cplx zeta;
  double delta = 0.0;
  long winding = 0;
  std::vector<Zero> zeros;
  bool found = false;
  std::string error;  // non-empty when the contour could not be evaluated
};

/// Winding count and zero location of global_secular on D(zeta_n, delta).
std::vector<DiskCheck> verify_disks(const PiecewisePotential& pot, const std::vector<cplx>& zetas,
                                    double delta, int workers = 1);

struct MagnitudeEntry {
  cplx z;
  double lhs = 0.0;         // whichever bound form applies by q
  double rhs = 0.0;         // sup_j ||V_j||_q^q
  double ratio = 0.0;       // lhs / rhs
  double ratio_small_q = 0.0;  // |z|^{q - d/2} / rhs, reported for every q
  bool large_q_form = false;
  bool flagged = false;     // ratio above the ceiling
};

/// Per-eigenvalue ratios against the magnitude bounds:
///   q <= q_d:  |z|^{q - d/2}                       vs sup_j ||V_j||_q^q
///   q >  q_d:  |z|^{1/2} d(z, R+)^{q - (d+1)/2}    vs sup_j ||V_j||_q^q
std::vector<MagnitudeEntry> magnitude_check(const std::vector<cplx>& eigs,
                                            const PiecewisePotential& pot, double q, int d,
                                            double ceiling = 1e3);

struct SparseBuild {
  TargetSequence targets;
  EnvelopeParams params;
  ChooseOptions options;
  GapChoice gaps;
  bool assembled = false;
  SparseAssembly assembly;
  std::vector<DiskCheck> disks;
  std::vector<std::pair<double, double>> sep_table;  // (eta, sep(L, eta))
  std::vector<std::string> warnings;
};

/// choose_L, then (desk mode) assembly and disk verification.
SparseBuild build_sparse(const TargetSequence& t, const EnvelopeParams& params,
                         const ChooseOptions& opts, bool verify = true, int workers = 1);

std::string build_report_json(const SparseBuild& build);

}  // namespace sparsepot
