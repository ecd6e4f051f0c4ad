#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sparsepot/special_functions.hpp"

namespace sparsepot {

/// Gap lengths L_1 <= L_2 <= ... between consecutive supports, either a
/// finite list or a rule k -> L_k (k = 1, 2, ...). eta0 is the reference
/// inverse length used by the distribution function.
class SeparationSequence {
 public:
  SeparationSequence() = default;

  /// Throws DomainError if the list is not positive and nondecreasing.
  static SeparationSequence finite(std::vector<double> L, double eta0 = 1.0);
  static SeparationSequence rule(std::function<double(std::uint64_t)> L, double eta0 = 1.0);

  bool is_finite() const noexcept { return !rule_; }
  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<double>& values() const noexcept { return values_; }
  double eta0() const noexcept { return eta0_; }

  /// L_k, 1-based.
  double at(std::uint64_t k) const;

 private:
  std::vector<double> values_;
  std::function<double(std::uint64_t)> rule_;
  double eta0_ = 1.0;
};

/// sum_k exp(-eta L_k). Infinite rules are summed until a geometric bound on
/// the remainder falls below 1e-15 of the partial sum; DomainError if that
/// never happens within the term budget (L grows too slowly).
double sep(const SeparationSequence& L, double eta);

/// #{k : eta0 L_k <= 1/s}. DomainError if the count exceeds 2^62.
std::uint64_t h_L(const SeparationSequence& L, double s);

/// sep(L, Im sqrt(z) / (d + 1)).
double s_of_L_z(const SeparationSequence& L, cplx z, int d);

struct StrongSeparationVerdict {
  bool holds = false;
  double lambda = 0.0;       // best lambda in the grid
  double worst_ratio = 0.0;  // max over the tail of h(lambda s) / (e h(s)) at that lambda
};

/// Finite-sample reading of limsup_{s -> 0} h_L(lambda s) / (e h_L(s)) < 1:
/// true if some lambda keeps every ratio on the smaller half of s_grid below
/// 1 - margin. A heuristic verdict, not a proof.
StrongSeparationVerdict strong_separation_check(const SeparationSequence& L,
                                                std::vector<double> lambda_grid = {},
                                                std::vector<double> s_grid = {},
                                                double margin = 0.05);

struct EnvelopeParams {
  int d = 1;
  double q = 2.0;
  double p = 4.0;
  double alpha = 1.0;
  double gamma = 1.0;
  double big_o = 1.0;          // O(1) in the exponential closeness eps_n
  double C_L = 1.0;            // prefactor of the power-law gaps
  double rule_constant = 2.0;  // C of the quasimode separation rule
  double eps0 = 0.2;           // aperture of the sector |Im z| <= eps0 Re z
  double delta_floor = 1e-3;   // smallest admissible disk radius delta_n

  double q_d() const { return 0.5 * (d + 1); }
};

/// <x> = 2 + |x|.
inline double japanese(double x) { return 2.0 + std::abs(x); }
inline double japanese(cplx z) { return 2.0 + std::abs(z); }

/// Distance from z to [0, inf).
double dist_to_positive_axis(cplx z);

/// |z|^{d/2q - 1} for q <= q_d, |z|^{-1/2q} d(z, R+)^{q_d/q - 1} for q >= q_d.
double omega_q(cplx z, int d, double q);

/// (<z>/|Im z|) (<z>/|z|)^{5p (q_d/q - 1)_- + 8} <vnorm omega_q(z)>^p,
/// with (x)_- = max(-x, 0).
double M_pq(cplx z, const EnvelopeParams& params, double vnorm);

/// M_pq(z) <s(L, (|z|/<z>)^5 z)>^{2p}.
double M_pq_L(cplx z, const SeparationSequence& L, const EnvelopeParams& params, double vnorm);

/// The polynomial-rate exponent kappa_alpha of the gap envelope.
double kappa_alpha(const EnvelopeParams& params);

/// max(kappa_alpha + gamma + 2 + (q - d)/d, alpha (d/2 + q - 1)).
double kappa_tilde(const EnvelopeParams& params);

}  // namespace sparsepot
