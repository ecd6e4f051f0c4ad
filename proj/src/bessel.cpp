// Bessel J and Hankel H^(1) for the s-wave radial problem.
//
// Integer orders 0 and 1 use ascending series (with the logarithmic Y terms)
// for |z| <= kSeriesRadius and the Hankel asymptotic expansion, truncated at
// its smallest term, beyond. Half order is closed form.
//
// Above the real axis H^(1) = J + iY is exponentially smaller than J and the
// series sum cancels; there H^(1) comes from the Macdonald integral instead.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <string>

#include "sparsepot/errors.hpp"
#include "sparsepot/special_functions.hpp"

namespace sparsepot {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;
constexpr double kSeriesRadius = 12.0;
const cplx kI(0.0, 1.0);

void check_arg(double nu, cplx z) {
  if (!std::isfinite(nu) || !std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw DomainError("bessel: non-finite input");
  }
}

bool is_half(double nu) { return nu == 0.5; }
bool is_integer_01(double nu) { return nu == 0.0 || nu == 1.0; }

bool asymptotic_ok(double nu, cplx z) { return std::abs(z) > 10.0 * (1.0 + nu * nu); }

[[noreturn]] void unsupported(double nu, cplx z) {
  throw DomainError("bessel: order " + std::to_string(nu) + " unsupported at |z| = " +
                    std::to_string(std::abs(z)));
}

// J_n, n in {0, 1}, ascending series.
cplx j_series(int n, cplx z) {
  const cplx q = -0.25 * z * z;
  cplx term = (n == 0) ? cplx(1.0) : 0.5 * z;
  cplx sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * static_cast<double>(k + n));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum) && k > std::abs(z)) break;
  }
  return sum;
}

// Y_n, n in {0, 1}, ascending series with the log term on the principal branch.
cplx y_series(int n, cplx z) {
  const cplx q = -0.25 * z * z;
  const cplx log_half = std::log(0.5 * z);
  // sum_k (psi(k+1) + psi(n+k+1)) q^k / (k! (n+k)!)
  double psi_k = -kEulerGamma;                       // psi(k+1)
  double psi_nk = -kEulerGamma + (n == 1 ? 1.0 : 0.0);  // psi(n+k+1)
  cplx term = 1.0;
  cplx sum = term * (psi_k + psi_nk);
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * static_cast<double>(k + n));
    psi_k += 1.0 / k;
    psi_nk += 1.0 / (k + n);
    const cplx add = term * (psi_k + psi_nk);
    sum += add;
    if (std::abs(add) < 1e-17 * std::abs(sum) && k > std::abs(z)) break;
  }
  const cplx jn = j_series(n, z);
  if (n == 0) return (2.0 / kPi) * log_half * jn - sum / kPi;
  return -2.0 / (kPi * z) + (2.0 / kPi) * log_half * jn - (0.5 * z) * sum / kPi;
}

// Hankel asymptotic sums: P + iQ style, returned for both kinds.
struct HankelPair {
  cplx h1;
  cplx h2;
};

HankelPair hankel_asymptotic(double nu, cplx z) {
  const double mu = 4.0 * nu * nu;
  const cplx inv = 1.0 / z;
  cplx a = 1.0;  // a_k(nu) z^{-k}
  cplx s1 = 1.0, s2 = 1.0;
  cplx ik = 1.0;  // i^k
  double last = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    a *= (mu - odd * odd) / (8.0 * k) * inv;
    const double mag = std::abs(a);
    if (mag > last || mag == 0.0) break;
    ik *= kI;
    s1 += ik * a;
    s2 += std::conj(ik) * a;
    last = mag;
    if (mag < 1e-17) break;
  }
  const cplx pref = std::sqrt(2.0 / kPi) / std::sqrt(z);
  const cplx omega = z - 0.5 * kPi * nu - 0.25 * kPi;
  return {pref * std::exp(kI * omega) * s1, pref * std::exp(-kI * omega) * s2};
}

// J_nu on the right half plane (or anywhere for integer order) by asymptotics.
cplx j_asymptotic(double nu, cplx z) {
  if (z.real() >= 0.0) {
    const HankelPair h = hankel_asymptotic(nu, z);
    return 0.5 * (h.h1 + h.h2);
  }
  // J_nu(z) = exp(+-i pi nu) J_nu(-z), sign by the half plane of z.
  const double s = (z.imag() >= 0.0) ? 1.0 : -1.0;
  const HankelPair h = hankel_asymptotic(nu, -z);
  return std::exp(cplx(0.0, s * kPi * nu)) * 0.5 * (h.h1 + h.h2);
}

cplx j_int(int n, cplx z) {
  if (std::abs(z) <= kSeriesRadius) return j_series(n, z);
  return j_asymptotic(n, z);
}

// H^(1)_n(z) = (2/pi) i^{-(n+1)} K_n(-iz), K_n(w) = int_0^inf exp(-w cosh t) cosh(nt) dt,
// for Im z > 0. The integrand decays doubly exponentially once Im z is O(1).
cplx h_integral(int n, cplx z) {
  const cplx w = -kI * z;
  auto f = [&](double t) -> cplx {
    const double c = std::cosh(t);
    if (c * w.real() > 745.0) return 0.0;  // exp underflow; also avoids inf * 0
    return std::exp(-w * c) * (n == 0 ? 1.0 : c);
  };
  static thread_local boost::math::quadrature::exp_sinh<double> quad;
  const cplx k = quad.integrate(f);
  return n == 0 ? -kI * (2.0 / kPi) * k : -(2.0 / kPi) * k;
}

cplx h_int(int n, cplx z) {
  if (z == cplx(0.0)) throw DomainError("hankel1: singular at z = 0");
  if (std::abs(z) <= kSeriesRadius) {
    // Series loses about eps * exp(2 Im z) relative accuracy.
    if (z.imag() > 1.0) return h_integral(n, z);
    return j_series(n, z) + kI * y_series(n, z);
  }
  // The H^(1) expansion is valid for -pi < arg z < 2 pi, covering the cut plane.
  return hankel_asymptotic(n, z).h1;
}

cplx half_pref(cplx z) { return std::sqrt(2.0 / kPi) / std::sqrt(z); }

}  // namespace

cplx bessel_j(double nu, cplx z) {
  check_arg(nu, z);
  if (is_half(nu)) {
    if (z == cplx(0.0)) return 0.0;
    return half_pref(z) * std::sin(z);
  }
  if (is_integer_01(nu)) return j_int(static_cast<int>(nu), z);
  if (asymptotic_ok(nu, z)) return j_asymptotic(nu, z);
  unsupported(nu, z);
}

cplx bessel_j_prime(double nu, cplx z) {
  check_arg(nu, z);
  if (is_half(nu)) {
    if (z == cplx(0.0)) throw DomainError("bessel_j_prime: singular at z = 0 for order 1/2");
    return half_pref(z) * (std::cos(z) - std::sin(z) / (2.0 * z));
  }
  if (nu == 0.0) return -j_int(1, z);
  if (nu == 1.0) return j_int(0, z) - j_int(1, z) / z;
  if (asymptotic_ok(nu, z)) {
    return 0.5 * (j_asymptotic(nu - 1.0, z) - j_asymptotic(nu + 1.0, z));
  }
  unsupported(nu, z);
}

cplx hankel1(double nu, cplx z) {
  check_arg(nu, z);
  if (is_half(nu)) {
    if (z == cplx(0.0)) throw DomainError("hankel1: singular at z = 0");
    return -kI * half_pref(z) * std::exp(kI * z);
  }
  if (is_integer_01(nu)) return h_int(static_cast<int>(nu), z);
  if (asymptotic_ok(nu, z)) return hankel_asymptotic(nu, z).h1;
  unsupported(nu, z);
}

cplx hankel1_prime(double nu, cplx z) {
  check_arg(nu, z);
  if (is_half(nu)) {
    if (z == cplx(0.0)) throw DomainError("hankel1_prime: singular at z = 0");
    return half_pref(z) * std::exp(kI * z) * (1.0 + kI / (2.0 * z));
  }
  if (nu == 0.0) return -h_int(1, z);
  if (nu == 1.0) return h_int(0, z) - h_int(1, z) / z;
  if (asymptotic_ok(nu, z)) {
    return 0.5 * (hankel_asymptotic(nu - 1.0, z).h1 - hankel_asymptotic(nu + 1.0, z).h1);
  }
  unsupported(nu, z);
}

}  // namespace sparsepot
