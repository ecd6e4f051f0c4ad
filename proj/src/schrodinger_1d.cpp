#include "sparsepot/schrodinger_1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss.hpp>

#include "sparsepot/errors.hpp"

namespace sparsepot {

namespace {

const cplx kI(0.0, 1.0);

cplx sinc(cplx x) {
  if (std::abs(x) < 1e-4) {
    const cplx x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

// Closed-form propagator of psi'' = -k^2 psi over width w.
TransferMatrix segment_matrix(cplx k2, double w) {
  const cplx k = std::sqrt(k2);
  const cplx c = std::cos(k * w);
  const cplx s = w * sinc(k * w);
  return {c, s, -k2 * s, c};
}

struct Segment {
  double a;
  double b;
  cplx v;
};

// Constant-value segments covering [from, to], gaps included.
std::vector<Segment> segments(const PiecewisePotential& pot, double from, double to) {
  std::vector<Segment> out;
  double x = from;
  for (const Piece& p : pot.pieces()) {
    if (p.b <= x) continue;
    if (p.a >= to) break;
    if (p.a > x) {
      out.push_back({x, p.a, 0.0});
      x = p.a;
    }
    const double e = std::min(p.b, to);
    out.push_back({x, e, p.value});
    x = e;
  }
  if (x < to) out.push_back({x, to, 0.0});
  return out;
}

struct State {
  cplx psi;
  cplx dpsi;
  double log_scale = 0.0;
};

void renormalise(State& s, double ref) {
  const double n = std::abs(s.psi) + std::abs(s.dpsi) / ref;
  if (n > 0.0 && std::isfinite(n)) {
    s.psi /= n;
    s.dpsi /= n;
    s.log_scale += std::log(n);
  }
}

State step(const State& s, cplx k2, double w) {
  const TransferMatrix m = segment_matrix(k2, w);
  return {m.m11 * s.psi + m.m12 * s.dpsi, m.m21 * s.psi + m.m22 * s.dpsi, s.log_scale};
}

}  // namespace

TransferMatrix transfer_matrix(const PiecewisePotential& pot, cplx E, double from, double to) {
  if (!(from < to)) throw DomainError("transfer_matrix: from < to required");
  TransferMatrix total;
  for (const Segment& s : segments(pot, from, to)) {
    total = segment_matrix(E - s.v, s.b - s.a) * total;
  }
  return total;
}

cplx global_secular(const PiecewisePotential& pot, cplx E) {
  if (pot.empty()) return 1.0;
  const cplx chi = sqrt_upper(E);
  // psi = N(x) (alpha e^{i chi (x-x*)} + beta e^{-i chi (x-x*)}) with
  // N(x) the free left solution; start decaying to the left.
  cplx alpha = 0.0;
  cplx beta = 1.0;
  double x = pot.left();
  for (const Piece& p : pot.pieces()) {
    if (p.a > x) alpha *= std::exp(2.0 * kI * chi * (p.a - x));
    const double w = p.b - p.a;
    const cplx psi = alpha + beta;
    const cplx dpsi = kI * chi * (alpha - beta);
    const TransferMatrix m = segment_matrix(E - p.value, w);
    const cplx psi2 = m.m11 * psi + m.m12 * dpsi;
    const cplx dpsi2 = m.m21 * psi + m.m22 * dpsi;
    const cplx phase = std::exp(kI * chi * w);
    const cplx ratio = dpsi2 / (kI * chi);
    alpha = 0.5 * (psi2 + ratio) * phase;
    beta = 0.5 * (psi2 - ratio) * phase;
    x = p.b;
  }
  return beta;
}

Eigenfunction reconstruct_eigenfunction(const PiecewisePotential& pot, cplx E,
                                        const std::vector<double>& grid, double tol) {
  if (pot.empty()) throw DomainError("reconstruct_eigenfunction: free potential has no eigenvalues");
  const cplx chi = sqrt_upper(E);
  if (!(chi.imag() > 0.0)) throw DomainError("reconstruct_eigenfunction: E on the spectrum cut");

  const std::vector<Segment> segs = segments(pot, pot.left(), pot.right());
  const std::size_t K = segs.size();
  const double ref = 1.0 + std::abs(chi);

  // Shoot from the left: decaying tail psi = e^{-i chi (x - left)}.
  std::vector<State> lstate(K + 1), rstate(K + 1);
  lstate[0] = {1.0, -kI * chi, 0.0};
  for (std::size_t i = 0; i < K; ++i) {
    lstate[i + 1] = step(lstate[i], E - segs[i].v, segs[i].b - segs[i].a);
    renormalise(lstate[i + 1], ref);
  }
  // From the right, backwards (negative width inverts the propagator).
  rstate[K] = {1.0, kI * chi, 0.0};
  for (std::size_t i = K; i-- > 0;) {
    rstate[i] = step(rstate[i + 1], E - segs[i].v, -(segs[i].b - segs[i].a));
    renormalise(rstate[i], ref);
  }

  auto log_mag = [](const State& s) {
    const double a = std::abs(s.psi);
    return a > 0.0 ? std::log(a) + s.log_scale : -std::numeric_limits<double>::infinity();
  };
  std::size_t m = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i <= K; ++i) {
    const double v = log_mag(lstate[i]) + log_mag(rstate[i]);
    if (v > best) {
      best = v;
      m = i;
    }
  }
  const State& L = lstate[m];
  const State& R = rstate[m];
  const double jump = std::abs(L.dpsi * R.psi - R.dpsi * L.psi) /
                      (std::abs(L.dpsi * R.psi) + std::abs(R.dpsi * L.psi) + ref * 1e-300);
  if (!(jump <= tol)) {
    throw DomainError("reconstruct_eigenfunction: E is not an eigenvalue (derivative jump " +
                      std::to_string(jump) + ")");
  }

  // Unnormalised value at x, scaled so psi(x_m) = 1.
  const cplx lnorm = 1.0 / L.psi;
  const cplx rnorm = 1.0 / R.psi;
  auto value = [&](double x) -> cplx {
    if (x <= segs.front().a) {
      return lnorm * std::exp(lstate[0].log_scale - L.log_scale) *
             std::exp(-kI * chi * (x - segs.front().a));
    }
    if (x >= segs.back().b) {
      return rnorm * std::exp(rstate[K].log_scale - R.log_scale) * rstate[K].psi *
             std::exp(kI * chi * (x - segs.back().b));
    }
    auto it = std::upper_bound(segs.begin(), segs.end(), x,
                               [](double v, const Segment& s) { return v < s.b; });
    if (it == segs.end()) --it;
    const std::size_t i = static_cast<std::size_t>(it - segs.begin());
    const Segment& s = segs[i];
    if (i < m) {
      const State st = step(lstate[i], E - s.v, x - s.a);
      return lnorm * std::exp(st.log_scale - L.log_scale) * st.psi;
    }
    const State st = step(rstate[i + 1], E - s.v, x - s.b);
    return rnorm * std::exp(st.log_scale - R.log_scale) * st.psi;
  };

  using Gauss = boost::math::quadrature::gauss<double, 20>;
  double mass = 0.0;
  for (const Segment& s : segs) {
    const cplx k = std::sqrt(E - s.v);
    const double w = s.b - s.a;
    const double osc = (std::abs(k) + chi.imag()) * w;
    const int panels = std::clamp(static_cast<int>(std::ceil(osc / 2.0)) + 1, 1, 4000);
    const double h = w / panels;
    for (int p = 0; p < panels; ++p) {
      const double a = s.a + p * h;
      mass += Gauss::integrate([&](double x) { return std::norm(value(x)); }, a, a + h);
    }
  }
  const double two_im = 2.0 * chi.imag();
  mass += std::norm(value(segs.front().a)) / two_im + std::norm(value(segs.back().b)) / two_im;

  Eigenfunction out;
  out.matching_residual = jump;
  const double inv = 1.0 / std::sqrt(mass);
  out.values.reserve(grid.size());
  for (double x : grid) out.values.push_back(inv * value(x));
  return out;
}

}  // namespace sparsepot
