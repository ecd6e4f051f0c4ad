#include "sparsepot/imag_step.hpp"

#include <cmath>
#include <cstdio>

#include "parallel.hpp"
#include "sparsepot/errors.hpp"

namespace sparsepot {

namespace {

const cplx kV0(0.0, 1.0);

struct Refined {
  cplx k;
  bool converged = false;
  double residual = 0.0;
};

Refined refine(cplx k, double R, Parity parity) {
  Refined out;
  for (int it = 0; it < 100; ++it) {
    const cplx s = std::sin(k * R);
    const cplx c = std::cos(k * R);
    cplx g, dg;
    if (parity == Parity::odd) {
      g = kV0 * s * s + k * k;
      dg = 2.0 * kV0 * s * c * R + 2.0 * k;
    } else {
      g = kV0 * c * c + k * k;
      dg = -2.0 * kV0 * s * c * R + 2.0 * k;
    }
    const cplx dk = g / dg;
    k -= dk;
    if (!std::isfinite(k.real()) || !std::isfinite(k.imag())) break;
    if (std::abs(dk) < 1e-14 * (1.0 + std::abs(k))) {
      out.converged = true;
      break;
    }
  }
  out.k = k;
  if (std::isfinite(k.real()) && std::isfinite(k.imag())) {
    const cplx t = parity == Parity::odd ? std::sin(k * R) : std::cos(k * R);
    const double scale = std::abs(k * k) + std::abs(kV0 * t * t);
    out.residual = std::abs(imag_step_g(k, R, kV0, parity)) / scale;
    out.converged = out.converged && out.residual < 1e-9;
  } else {
    out.converged = false;
  }
  return out;
}

}  // namespace

cplx imag_step_g(cplx kappa, double R, cplx v0, Parity parity) {
  const cplx t = parity == Parity::odd ? std::sin(kappa * R) : std::cos(kappa * R);
  return v0 * t * t + kappa * kappa;
}

std::vector<LambertFamily> all_families() {
  return {{Parity::odd, cplx(0.0, 1.0)},
          {Parity::odd, cplx(0.0, -1.0)},
          {Parity::even, cplx(1.0, 0.0)},
          {Parity::even, cplx(-1.0, 0.0)}};
}

std::vector<ImagStepBranch> enumerate_imag_step(int N, long n_lo, long n_hi,
                                                const LambertFamily& family, int workers) {
  if (N < 8) throw DomainError("enumerate_imag_step: N >= 8 required");
  if (n_hi < n_lo) return {};
  const double R = N;
  const cplx arg = family.a * std::sqrt(kV0) * R / 2.0;
  const StepBump bump{kV0, R, 0.0};
  std::vector<ImagStepBranch> out(static_cast<std::size_t>(n_hi - n_lo + 1));
  detail::parallel_for(out.size(), workers, [&](std::size_t i) {
    ImagStepBranch& b = out[i];
    b.n = n_lo + static_cast<long>(i);
    b.family = family;
    try {
      b.kappa_seed = cplx(0.0, -1.0) * lambert_w(b.n, arg) / R;
    } catch (const Error&) {
      return;
    }
    const Refined r = refine(b.kappa_seed, R, family.parity);
    b.kappa = r.k;
    b.converged = r.converged;
    b.residual = r.residual;
    if (!b.converged) return;
    b.E = energy(b.kappa, kV0);
    b.on_physical_sheet = physical_sheet(bump, b.E, family.parity);
  });
  return out;
}

long census_branch_bound(int N, double C_box) {
  const double L = std::log(static_cast<double>(N));
  const double hi = C_box * N * static_cast<double>(N) / (L * L);
  return static_cast<long>(std::sqrt(hi) * N / (2.0 * kPi)) + 10;
}

CensusRow census_imag_step(int N, double C_box, int workers,
                           std::vector<ImagStepBranch>* members) {
  if (N < 8) throw DomainError("census: N >= 8 required");
  if (!(C_box > 1.0)) throw DomainError("census: C_box > 1 required");
  const double L = std::log(static_cast<double>(N));
  const double n2 = static_cast<double>(N) * N;
  CensusRow row;
  row.N = N;
  row.box = Region::rect(n2 / (C_box * L * L), C_box * n2 / (L * L), 1.0 / C_box, C_box);

  const long nmax = census_branch_bound(N, C_box);
  std::vector<ImagStepBranch> kept;
  for (const LambertFamily& fam : all_families()) {
    for (const ImagStepBranch& b : enumerate_imag_step(N, -nmax, nmax, fam, workers)) {
      if (!b.converged || !b.on_physical_sheet) continue;
      const cplx E = b.E;
      if (E.real() < row.box.re_lo || E.real() > row.box.re_hi) continue;
      if (E.imag() < row.box.im_lo || E.imag() > row.box.im_hi) continue;
      bool dup = false;
      for (const ImagStepBranch& k : kept) {
        if (std::abs(k.E - E) <= 1e-6 * (1.0 + std::abs(E))) {
          dup = true;
          break;
        }
      }
      if (!dup) kept.push_back(b);
    }
  }
  row.count = static_cast<long>(kept.size());
  row.ratio = static_cast<double>(row.count) * L / n2;
  if (members) *members = std::move(kept);
  return row;
}

std::string census_csv_header() { return "N,count,ratio,box_re_lo,box_re_hi,box_im_lo,box_im_hi"; }

std::string census_csv_row(const CensusRow& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%d,%ld,%.17g,%.17g,%.17g,%.17g,%.17g", r.N, r.count, r.ratio,
                r.box.re_lo, r.box.re_hi, r.box.im_lo, r.box.im_hi);
  return buf;
}

}  // namespace sparsepot
