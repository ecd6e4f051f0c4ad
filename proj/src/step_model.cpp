#include "sparsepot/step_model.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "sparsepot/errors.hpp"

namespace sparsepot {

namespace {

const cplx kI(0.0, 1.0);
constexpr double kPoleGuard = 1e-8;

// Distance of x = kappa R from the nearest pole of cot (odd) or tan (even),
// ignoring the removable point x = 0 of kappa cot(kappa R).
double pole_distance(cplx x, Parity parity) {
  if (x.real() < 0.0) x = -x;
  if (parity == Parity::odd) {
    const double m = std::round(x.real() / kPi);
    if (m == 0.0) return HUGE_VAL;
    return std::abs(x - m * kPi);
  }
  const double m = std::round(x.real() / kPi - 0.5);
  return std::abs(x - (m + 0.5) * kPi);
}

void guard_pole(cplx x, Parity parity, const char* who) {
  const double d = pole_distance(x, parity);
  if (d < kPoleGuard) {
    throw PoleError(std::string(who) + ": kappa R within " + std::to_string(d) +
                        " of a pole",
                    d);
  }
}

cplx sinc(cplx x) {
  if (std::abs(x) < 1e-4) {
    const cplx x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

// kappa cot(kappa R), smooth through kappa = 0.
cplx kappa_cot(cplx kappa, double R) {
  const cplx x = kappa * R;
  if (std::abs(x) < 1e-4) {
    const cplx x2 = x * x;
    return (1.0 - x2 / 3.0 - x2 * x2 / 45.0) / R;
  }
  return kappa / std::tan(x);
}

cplx exterior_chi(cplx E, Sheet sheet) {
  const cplx chi = sqrt_upper(E);
  return sheet == Sheet::physical ? chi : -chi;
}

cplx interior_kappa(const StepBump& bump, cplx E) { return std::sqrt(E - bump.v0); }

void require_finite(cplx z, const char* who) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw DomainError(std::string(who) + ": non-finite argument");
  }
}

}  // namespace

const char* to_string(Parity p) { return p == Parity::odd ? "odd" : "even"; }

cplx secular(const StepBump& bump, cplx E, Parity parity, Sheet sheet) {
  require_finite(E, "secular");
  const cplx chi = exterior_chi(E, sheet);
  const cplx kappa = interior_kappa(bump, E);
  guard_pole(kappa * bump.R, parity, "secular");
  if (parity == Parity::odd) return kI * chi - kappa_cot(kappa, bump.R);
  return kI * chi + kappa * std::tan(kappa * bump.R);
}

cplx secular_regular(const StepBump& bump, cplx E, Parity parity, Sheet sheet) {
  require_finite(E, "secular_regular");
  const cplx chi = exterior_chi(E, sheet);
  const cplx kappa = interior_kappa(bump, E);
  const cplx x = kappa * bump.R;
  if (parity == Parity::odd) return kI * chi * bump.R * sinc(x) - std::cos(x);
  return kI * chi * std::cos(x) + kappa * std::sin(x);
}

cplx chi_match(const StepBump& bump, cplx E, Parity parity) {
  const cplx kappa = interior_kappa(bump, E);
  if (parity == Parity::odd) return -kI * kappa_cot(kappa, bump.R);
  return kI * kappa * std::tan(kappa * bump.R);
}

bool physical_sheet(const StepBump& bump, cplx E, Parity parity) {
  const cplx c = chi_match(bump, E, parity);
  if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return c.imag() > 0.0;
}

Sheet sheet_of(const StepBump& bump, cplx E, Parity parity) {
  return physical_sheet(bump, E, parity) ? Sheet::physical : Sheet::unphysical;
}

cplx solve_for_v0(cplx kappa, double R, Parity parity) {
  require_finite(kappa, "solve_for_v0");
  if (!(R > 0.0)) throw DomainError("solve_for_v0: R must be positive");
  const cplx x = kappa * R;
  guard_pole(x, parity, "solve_for_v0");
  if (parity == Parity::odd) {
    const cplx r = 1.0 / (R * sinc(x));  // kappa / sin(kappa R)
    return -r * r;
  }
  const cplx c = std::cos(x);
  return -kappa * kappa / (c * c);
}

bool in_sector(cplx z, double eps0) { return z.imag() > 0.0 && z.imag() <= eps0 * z.real(); }

namespace {

struct NewtonOutcome {
  cplx kappa;
  int iterations = 0;
  bool converged = false;
};

// Zero of (chi - k) e^{2ikR} - (chi + k), the odd matching condition with
// the cot cleared; entire in k, so Newton never meets a pole.
NewtonOutcome newton_odd(cplx chi, double R, cplx k, int cap, std::vector<cplx>& trace) {
  NewtonOutcome out;
  for (int it = 0; it < cap; ++it) {
    trace.push_back(k);
    const cplx w = std::exp(2.0 * kI * k * R);
    const cplx h = (chi - k) * w - (chi + k);
    const cplx dh = -w + 2.0 * kI * R * (chi - k) * w - 1.0;
    const cplx step = h / dh;
    k -= step;
    out.iterations = it + 1;
    if (!std::isfinite(k.real()) || !std::isfinite(k.imag())) break;
    if (std::abs(step) < 1e-15 * (1.0 + std::abs(k))) {
      out.converged = true;
      break;
    }
  }
  trace.push_back(k);
  out.kappa = k;
  return out;
}

}  // namespace

BumpReport construct_bump(cplx zeta, const BumpOptions& opts) {
  require_finite(zeta, "construct_bump");
  if (!(zeta.imag() > 0.0)) throw DomainError("construct_bump: Im zeta > 0 required");
  if (!in_sector(zeta, opts.eps0)) {
    throw DomainError("construct_bump: zeta outside the sector Im z <= eps0 Re z");
  }
  if (!(opts.sigma > 0.0)) throw DomainError("construct_bump: sigma must be positive");

  const double scale = std::abs(zeta);
  const cplx zh = zeta / scale;
  const cplx chi = sqrt_upper(zh);
  const double eps = 0.5 * zh.imag();
  const double u_mod = 0.5 * (1.0 + opts.sigma);
  const double sigma = opts.sigma;
  const double tol = opts.tol > 0.0 ? opts.tol : 1e-10 * (1.0 + scale);

  // Snap R0 so that 2 Re(kappa) R = -pi/2 mod 2 pi for Re kappa = -Re chi.
  const double r0 = std::log(1.0 / (eps * u_mod)) / (2.0 * sigma * eps);
  const double rk = std::abs(chi.real());
  double m = std::round((2.0 * rk * r0 + 0.5 * kPi) / (2.0 * kPi));
  if (m < 1.0) m = 1.0;
  const double R_hat = (2.0 * kPi * m - 0.5 * kPi) / (2.0 * rk);

  std::vector<cplx> trace;
  BumpReport rep;
  bool converged_any = false;
  rep.zeta = zeta;
  rep.parity = Parity::odd;
  for (int attempt = 0; attempt < 2; ++attempt) {
    const double sign = attempt == 0 ? -1.0 : 1.0;
    const cplx seed(sign * rk, eps * sigma);
    const NewtonOutcome nw = newton_odd(chi, R_hat, seed, opts.max_iterations, trace);
    if (!nw.converged) continue;
    converged_any = true;

    const cplx v0_hat = zh - nw.kappa * nw.kappa;
    StepBump bump{v0_hat * scale, R_hat / std::sqrt(scale), opts.x0};
    if (!physical_sheet(bump, zeta, Parity::odd)) continue;

    rep.bump = bump;
    rep.kappa = nw.kappa * std::sqrt(scale);
    rep.newton_iterations = nw.iterations;
    rep.reseeded = attempt > 0;
    rep.achieved_eigenvalue = zeta;
    rep.residual = std::abs(secular(bump, zeta, Parity::odd));
    if (rep.residual >= tol) {
      throw ConvergenceError("construct_bump: residual " + std::to_string(rep.residual) +
                                 " above tolerance",
                             std::move(trace));
    }
    for (double q : opts.q_list) rep.lq_norms[q] = bump_norm_lq(bump, q);
    rep.davies_nath = davies_nath(bump, 1.0, sqrt_upper(zeta).imag());
    return rep;
  }
  if (converged_any) {
    throw SheetError("construct_bump: no seed produced a zero on the physical sheet");
  }
  throw ConvergenceError("construct_bump: Newton diverged", std::move(trace));
}

double bump_norm_lq(const StepBump& bump, double q) {
  if (!(q >= 1.0)) throw DomainError("bump_norm_lq: q >= 1 required");
  const double a = std::abs(bump.v0);
  if (std::isinf(q)) return a;
  return a * std::pow(2.0 * bump.R, 1.0 / q);
}

double davies_nath(const StepBump& bump, double q, double s) {
  if (!(s > 0.0)) throw DomainError("davies_nath: s > 0 required");
  if (!(q >= 1.0)) throw DomainError("davies_nath: q >= 1 required");
  const double a = std::abs(bump.v0);
  if (std::isinf(q)) return a;
  return a * std::pow((2.0 / s) * -std::expm1(-s * bump.R), 1.0 / q);
}

cplx eigenfunction(const StepBump& bump, cplx E, Parity parity, double x) {
  require_finite(E, "eigenfunction");
  const cplx chi = sqrt_upper(E);
  if (!(chi.imag() > 0.0)) throw DomainError("eigenfunction: E on the spectrum cut");
  const cplx kappa = interior_kappa(bump, E);
  const double R = bump.R;
  const cplx xr = kappa * R;

  const cplx d = secular_regular(bump, E, parity);
  const double scale = parity == Parity::odd
                           ? std::abs(chi * R * sinc(xr)) + std::abs(std::cos(xr))
                           : std::abs(chi * std::cos(xr)) + std::abs(kappa * std::sin(xr));
  if (std::abs(d) > 1e-6 * scale) {
    throw DomainError("eigenfunction: E is not an eigenvalue of this bump and parity");
  }

  // Interior norm of sin or cos(kappa t) over [-R, R].
  const double a = kappa.real();
  const double b = kappa.imag();
  const double sh = b == 0.0 ? R : std::sinh(2.0 * b * R) / (2.0 * b);
  const double sn = a == 0.0 ? R : std::sin(2.0 * a * R) / (2.0 * a);
  const double interior = parity == Parity::odd ? sh - sn : sh + sn;
  const cplx edge = parity == Parity::odd ? std::sin(xr) : std::cos(xr);
  const double total = interior + std::norm(edge) / chi.imag();
  const double amp = 1.0 / std::sqrt(total);

  const double t = x - bump.x0;
  if (std::abs(t) <= R) {
    return amp * (parity == Parity::odd ? std::sin(kappa * t) : std::cos(kappa * t));
  }
  const double side = (parity == Parity::odd && t < 0.0) ? -1.0 : 1.0;
  return amp * side * edge * std::exp(kI * chi * (std::abs(t) - R));
}

cplx radial_secular(cplx v0, double R, cplx E, int d) {
  if (d != 2 && d != 3) throw DomainError("radial_secular: only d = 2 and d = 3 supported");
  require_finite(E, "radial_secular");
  const double nu = 0.5 * (d - 2);
  const cplx chi = sqrt_upper(E);
  const cplx kappa = std::sqrt(E - v0);
  return kappa * bessel_j_prime(nu, kappa * R) * hankel1(nu, chi * R) -
         chi * bessel_j(nu, kappa * R) * hankel1_prime(nu, chi * R);
}

}  // namespace sparsepot
