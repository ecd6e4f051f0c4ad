#include "sparsepot/special_functions.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "sparsepot/errors.hpp"

namespace sparsepot {

namespace {

constexpr double kTwoPi = 2.0 * kPi;
constexpr double kInvE = 0.36787944117144233;
// e split into a double and its rounding remainder, for e*z + 1 near -1/e.
constexpr double kEHi = 2.718281828459045;
constexpr double kELo = 1.4456468917292502e-16;
constexpr int kHalleyCap = 50;

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require_finite(cplx z, const char* who) {
  if (!finite(z)) throw DomainError(std::string(who) + ": non-finite argument");
}

// sqrt(2 (e z + 1)) with the e z + 1 cancellation handled in extra precision.
cplx branch_point_p(cplx z) {
  const double re = std::fma(kEHi, z.real(), 1.0) + kELo * z.real();
  const double im = (kEHi + kELo) * z.imag();
  return std::sqrt(2.0 * cplx(re, im));
}

// W = -1 + p - p^2/3 + 11/72 p^3 - ... around the branch point.
cplx branch_point_series(cplx p) {
  static constexpr std::array<double, 7> c = {
      -1.0,          1.0,          -1.0 / 3.0,   11.0 / 72.0,
      -43.0 / 540.0, 769.0 / 17280.0, -221.0 / 8505.0};
  cplx acc = c.back();
  for (int k = static_cast<int>(c.size()) - 2; k >= 0; --k) acc = acc * p + c[k];
  return acc;
}

bool on_negative_real_axis(cplx z) { return z.imag() == 0.0 && z.real() < 0.0; }

bool near_branch_point(cplx z) { return std::abs(z + kInvE) < 0.3; }

// Which branches touch -1/e from this side: W_0 always, W_{-1} from above,
// W_{1} from below.
bool touches_branch_point(long n, cplx z) {
  if (n == 0) return true;
  if (n == -1) return z.imag() >= 0.0;
  if (n == 1) return z.imag() < 0.0;
  return false;
}

std::vector<cplx> seeds_for(long n, cplx z) {
  std::vector<cplx> seeds;
  if (near_branch_point(z) && touches_branch_point(n, z)) {
    const cplx p = branch_point_p(z);
    seeds.push_back(branch_point_series(n == 0 ? p : -p));
  }
  const cplx logz = std::log(z);
  const cplx big_l = logz + cplx(0.0, kTwoPi * static_cast<double>(n));
  if (n == 0) {
    if (std::abs(z) < 0.3) {
      seeds.push_back(z * (1.0 - z * (1.0 - 1.5 * z)));
    }
    const cplx l1 = std::log(1.0 + z);
    seeds.push_back(l1 * (1.0 - std::log(1.0 + l1) / (2.0 + l1)));
  }
  if (std::abs(big_l) > 1e-3) seeds.push_back(big_l - std::log(big_l));
  seeds.push_back(big_l);
  // Across the cut W_{-1} (above) and W_1 (below) continue W_0 from the
  // other side, so principal seeds at conj(z) land close.
  if ((n == -1 && z.imag() >= 0.0) || (n == 1 && z.imag() < 0.0)) {
    for (const cplx s : seeds_for(0, std::conj(z))) seeds.push_back(s);
  }
  return seeds;
}

// Halley iteration written in terms of t = w - z e^{-w}, which avoids
// overflow of e^w for large Re w.
bool halley(cplx z, cplx w, cplx& out, std::vector<cplx>& trace) {
  const cplx logz = std::log(z);
  double prev = HUGE_VAL;
  for (int it = 0; it < kHalleyCap; ++it) {
    trace.push_back(w);
    if (!finite(w)) return false;
    const cplx t = w - std::exp(logz - w);
    const cplx wp1 = w + 1.0;
    cplx denom = wp1 - (w + 2.0) * t / (2.0 * wp1);
    if (std::abs(wp1) < 1e-300) denom = cplx(1.0, 0.0);
    const cplx step = t / denom;
    w -= step;
    const double size = std::abs(step);
    const double scale = std::max(1.0, std::abs(w));
    // Stop at the rounding floor: tiny steps, or near-tiny steps that have
    // stopped shrinking (exp of a large imaginary part is noisy).
    if (size <= 2e-16 * scale || (size <= 1e-13 * scale && size >= 0.5 * prev)) {
      trace.push_back(w);
      out = w;
      return finite(w);
    }
    prev = size;
  }
  out = w;
  return false;
}

}  // namespace

cplx sqrt_upper(cplx z) {
  require_finite(z, "sqrt_upper");
  cplx r = std::sqrt(z);
  if (r.imag() < 0.0) r = -r;
  // Limit from above on the cut: positive real root.
  if (r.imag() == 0.0 && r.real() < 0.0) r = -r;
  return r;
}

long lambert_w_branch_of(cplx w, cplx z) {
  const double lhs = (w + std::log(w)).imag() - std::arg(z);
  return std::lround(lhs / kTwoPi);
}

cplx lambert_w_seed(long n, cplx z) {
  require_finite(z, "lambert_w_seed");
  if (z == cplx(0.0, 0.0)) throw DomainError("lambert_w_seed: z = 0");
  const cplx big_l = std::log(z) + cplx(0.0, kTwoPi * static_cast<double>(n));
  if (std::abs(big_l) < 2.0) {
    throw DomainError("lambert_w_seed: |log z + 2 pi i n| < 2, expansion not valid");
  }
  return big_l - std::log(big_l);
}

cplx lambert_w(long n, cplx z) {
  require_finite(z, "lambert_w");
  if (z == cplx(0.0, 0.0)) {
    if (n == 0) return {0.0, 0.0};
    throw DomainError("lambert_w: branch " + std::to_string(n) + " is singular at z = 0");
  }
  if (touches_branch_point(n, z)) {
    const cplx p = branch_point_p(z);
    // The iteration stalls on the double root; the series is exact enough.
    if (std::abs(p) < 1e-3) return branch_point_series(n == 0 ? p : -p);
  }

  const bool check_branch = !on_negative_real_axis(z);
  std::vector<cplx> trace;
  for (const cplx seed : seeds_for(n, z)) {
    cplx w;
    if (!halley(z, seed, w, trace)) continue;
    if (check_branch && lambert_w_branch_of(w, z) != n) continue;
    return w;
  }
  throw ConvergenceError("lambert_w: no convergence on branch " + std::to_string(n),
                         std::move(trace));
}

}  // namespace sparsepot
