#include "sparsepot/envelopes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sparsepot/errors.hpp"

namespace sparsepot {

namespace {

constexpr std::uint64_t kMaxTerms = 20'000'000;
constexpr std::uint64_t kMaxCount = std::uint64_t{1} << 62;

}  // namespace

SeparationSequence SeparationSequence::finite(std::vector<double> L, double eta0) {
  if (!(eta0 > 0.0)) throw DomainError("separation: eta0 must be positive");
  for (std::size_t i = 0; i < L.size(); ++i) {
    if (!(L[i] > 0.0) || std::isnan(L[i])) {
      throw DomainError("separation: L_" + std::to_string(i + 1) + " must be positive");
    }
    if (i > 0 && L[i] < L[i - 1]) {
      throw DomainError("separation: L is not nondecreasing at k = " + std::to_string(i + 1));
    }
  }
  SeparationSequence s;
  s.values_ = std::move(L);
  s.eta0_ = eta0;
  return s;
}

SeparationSequence SeparationSequence::rule(std::function<double(std::uint64_t)> L, double eta0) {
  if (!(eta0 > 0.0)) throw DomainError("separation: eta0 must be positive");
  if (!L) throw DomainError("separation: empty rule");
  SeparationSequence s;
  s.rule_ = std::move(L);
  s.eta0_ = eta0;
  return s;
}

double SeparationSequence::at(std::uint64_t k) const {
  if (k == 0) throw DomainError("separation: indices start at 1");
  if (rule_) return rule_(k);
  if (k > values_.size()) throw DomainError("separation: index past the end of a finite list");
  return values_[k - 1];
}

double sep(const SeparationSequence& L, double eta) {
  if (!(eta > 0.0)) throw DomainError("sep: eta must be positive");
  if (L.is_finite()) {
    double acc = 0.0;
    for (double v : L.values()) acc += std::exp(-eta * v);
    return acc;
  }
  // Terms are nonincreasing; once consecutive ratios sit below r < 1 the
  // remainder is bounded by t r / (1 - r).
  double acc = 0.0;
  double prev_L = -std::numeric_limits<double>::infinity();
  double prev_t = 0.0;
  for (std::uint64_t k = 1; k <= kMaxTerms; ++k) {
    const double Lk = L.at(k);
    if (Lk < prev_L) throw DomainError("sep: rule is not nondecreasing at k = " + std::to_string(k));
    const double t = std::exp(-eta * Lk);
    acc += t;
    if (t == 0.0) return acc;
    if (k > 1) {
      const double r = t / prev_t;
      if (r < 1.0 && t * r / (1.0 - r) <= 1e-15 * acc) return acc;
    }
    prev_L = Lk;
    prev_t = t;
  }
  throw DomainError("sep: sum not certified within the term budget; L grows too slowly to be summable");
}

std::uint64_t h_L(const SeparationSequence& L, double s) {
  if (!(s > 0.0)) throw DomainError("h_L: s must be positive");
  const double eta0 = L.eta0();
  auto within = [&](std::uint64_t k) { return eta0 * L.at(k) <= 1.0 / s; };
  if (L.is_finite()) {
    const auto& v = L.values();
    const auto it = std::upper_bound(v.begin(), v.end(), 1.0 / s,
                                     [&](double lim, double x) { return lim < eta0 * x; });
    return static_cast<std::uint64_t>(it - v.begin());
  }
  if (!within(1)) return 0;
  std::uint64_t lo = 1;  // within(lo) holds
  std::uint64_t hi = 2;
  while (within(hi)) {
    lo = hi;
    if (hi >= kMaxCount) throw DomainError("h_L: count overflows 2^62");
    hi *= 2;
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (within(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

double s_of_L_z(const SeparationSequence& L, cplx z, int d) {
  if (L.is_finite() && L.size() == 0) return 0.0;
  return sep(L, sqrt_upper(z).imag() / (d + 1));
}

StrongSeparationVerdict strong_separation_check(const SeparationSequence& L,
                                                std::vector<double> lambda_grid,
                                                std::vector<double> s_grid, double margin) {
  if (lambda_grid.empty()) lambda_grid = {0.5, 0.6, 0.7, 0.8, 0.9};
  if (s_grid.empty()) {
    const int n = 24;
    for (int i = 0; i < n; ++i) s_grid.push_back(0.5 * std::pow(0.03 / 0.5, i / double(n - 1)));
  }
  const std::size_t tail_start = s_grid.size() / 2;
  StrongSeparationVerdict best;
  best.worst_ratio = std::numeric_limits<double>::infinity();
  for (double lam : lambda_grid) {
    double worst = 0.0;
    bool any = false;
    for (std::size_t i = tail_start; i < s_grid.size(); ++i) {
      const double s = s_grid[i];
      double ratio;
      try {
        const std::uint64_t hs = h_L(L, s);
        if (hs == 0) continue;
        const std::uint64_t hls = h_L(L, lam * s);
        ratio = static_cast<double>(hls) / (std::exp(1.0) * static_cast<double>(hs));
      } catch (const DomainError&) {
        ratio = std::numeric_limits<double>::infinity();
      }
      any = true;
      worst = std::max(worst, ratio);
    }
    if (!any) continue;
    if (worst < best.worst_ratio) {
      best.worst_ratio = worst;
      best.lambda = lam;
    }
  }
  best.holds = best.worst_ratio <= 1.0 - margin;
  return best;
}

double dist_to_positive_axis(cplx z) {
  return z.real() >= 0.0 ? std::abs(z.imag()) : std::abs(z);
}

double omega_q(cplx z, int d, double q) {
  if (d < 1) throw DomainError("omega_q: d >= 1 required");
  const double qd = 0.5 * (d + 1);
  const double r = std::abs(z);
  if (std::isinf(q)) return 1.0 / dist_to_positive_axis(z);
  if (q <= qd) return std::pow(r, d / (2.0 * q) - 1.0);
  return std::pow(r, -1.0 / (2.0 * q)) * std::pow(dist_to_positive_axis(z), qd / q - 1.0);
}

double M_pq(cplx z, const EnvelopeParams& P, double vnorm) {
  const double jz = japanese(z);
  const double neg = std::max(-(P.q_d() / P.q - 1.0), 0.0);
  const double expo = 5.0 * P.p * neg + 8.0;
  return (jz / std::abs(z.imag())) * std::pow(jz / std::abs(z), expo) *
         std::pow(japanese(vnorm * omega_q(z, P.d, P.q)), P.p);
}

double M_pq_L(cplx z, const SeparationSequence& L, const EnvelopeParams& P, double vnorm) {
  const double shrink = std::pow(std::abs(z) / japanese(z), 5.0);
  const double s = s_of_L_z(L, shrink * z, P.d);
  return M_pq(z, P, vnorm) * std::pow(japanese(s), 2.0 * P.p);
}

double kappa_alpha(const EnvelopeParams& P) {
  const double d = P.d, q = P.q, p = P.p, qd = P.q_d();
  return 1.0 + 2.0 * (q - d) / d + 5.0 * p * (qd / d - 1.0) + 8.0 -
         p * ((q - d) / (d * q) + qd / q - 1.0) + (2.0 * p / P.alpha) * (3.5 + (q - d) / d);
}

double kappa_tilde(const EnvelopeParams& P) {
  if (!(P.q > P.d)) throw DomainError("kappa_tilde: q > d required");
  const double d = P.d, q = P.q;
  return std::max(kappa_alpha(P) + P.gamma + 2.0 + (q - d) / d, P.alpha * (d / 2.0 + q - 1.0));
}

}  // namespace sparsepot
