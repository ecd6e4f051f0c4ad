#pragma once

#include <complex>

namespace sparsepot {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Square root on the branch with Im >= 0. On the cut [0, inf) the value is
/// the limit from the upper half plane. Throws DomainError on NaN input.
cplx sqrt_upper(cplx z);

/// Branch n of the Lambert W function, w * exp(w) = z.
///
/// Seeds from the two-term asymptotic expansion (or the branch-point series
/// near -1/e for n in {-1, 0, 1}) and polishes with Halley's method, at most
/// 50 iterations. Branch membership is the unwinding condition
///   Im(w + log w) - arg z = 2 pi n,
/// which holds off the negative real axis. Throws DomainError for z == 0 and
/// n != 0, ConvergenceError (with the iterate trace) on stagnation.
cplx lambert_w(long n, cplx z);

/// Two-term asymptotic value log z + 2 pi i n - log(log z + 2 pi i n).
/// Requires |log z + 2 pi i n| >= 2; throws DomainError otherwise.
cplx lambert_w_seed(long n, cplx z);

/// Branch index of a Lambert W value w for argument z, from the unwinding
/// identity. Used by tests and diagnostics.
long lambert_w_branch_of(cplx w, cplx z);

// Bessel J and Hankel H^(1) for the orders needed by the s-wave radial
// problem: nu = 1/2 in closed form, nu = 0 by power series for |z| <= 12 and
// the Hankel asymptotic expansion beyond. Any other nu is accepted only for
// |z| > 10 (1 + nu^2), where the asymptotic expansion is used. Throws
// DomainError outside that domain.
cplx bessel_j(double nu, cplx z);
cplx bessel_j_prime(double nu, cplx z);
cplx hankel1(double nu, cplx z);
cplx hankel1_prime(double nu, cplx z);

}  // namespace sparsepot
