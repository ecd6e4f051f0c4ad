#include "sparsepot/spectral_count.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

#include <boost/math/quadrature/gauss.hpp>

#include "parallel.hpp"
#include "sparsepot/errors.hpp"

namespace sparsepot {

namespace {

constexpr double kTwoPi = 2.0 * kPi;
using Gauss = boost::math::quadrature::gauss<double, 16>;

// A piece of the positively oriented boundary, t in [0, 1].
struct Edge {
  bool arc = false;
  cplx a, b;            // segment endpoints
  cplx c;               // arc centre
  double r = 0.0;       // arc radius
  double th0 = 0.0, th1 = 0.0;

  cplx at(double t) const {
    if (!arc) return a + t * (b - a);
    return c + r * std::exp(cplx(0.0, th0 + t * (th1 - th0)));
  }
  cplx dz(double t) const {
    if (!arc) return b - a;
    const double th = th0 + t * (th1 - th0);
    return cplx(0.0, th1 - th0) * r * std::exp(cplx(0.0, th));
  }
  double length() const { return arc ? r * std::abs(th1 - th0) : std::abs(b - a); }
};

std::vector<Edge> boundary(const Region& g, int panels) {
  std::vector<Edge> edges;
  if (g.kind == Region::Kind::disk) {
    const int n = 4 * panels;
    for (int j = 0; j < n; ++j) {
      Edge e;
      e.arc = true;
      e.c = g.center;
      e.r = g.radius;
      e.th0 = kTwoPi * j / n;
      e.th1 = kTwoPi * (j + 1) / n;
      edges.push_back(e);
    }
    return edges;
  }
  const std::array<cplx, 5> v = {cplx(g.re_lo, g.im_lo), cplx(g.re_hi, g.im_lo),
                                 cplx(g.re_hi, g.im_hi), cplx(g.re_lo, g.im_hi),
                                 cplx(g.re_lo, g.im_lo)};
  for (int s = 0; s < 4; ++s) {
    for (int j = 0; j < panels; ++j) {
      Edge e;
      e.a = v[s] + (v[s + 1] - v[s]) * (static_cast<double>(j) / panels);
      e.b = v[s] + (v[s + 1] - v[s]) * (static_cast<double>(j + 1) / panels);
      edges.push_back(e);
    }
  }
  return edges;
}

struct Tracker {
  const AnalyticFn& f;
  double min_mod = HUGE_VAL;
  double max_mod = 0.0;
  long evals = 0;

  cplx eval(cplx z) {
    const cplx v = f(z);
    ++evals;
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw ContourError("winding: non-finite function value on the contour");
    }
    const double m = std::abs(v);
    min_mod = std::min(min_mod, m);
    max_mod = std::max(max_mod, m);
    return v;
  }
};

// GL-16 estimate of the integral of f'/f dz over e restricted to [t0, t1].
cplx panel_integral(Tracker& tr, const Edge& e, double t0, double t1) {
  const double len = e.length() * (t1 - t0);
  return Gauss::integrate(
      [&](double t) {
        const cplx z = e.at(t);
        const double h = std::max(1e-6 * len, 1e-9 * (1.0 + std::abs(z)));
        const cplx fz = tr.eval(z);
        const cplx d = (tr.eval(z + h) - tr.eval(z - h)) / (2.0 * h);
        return d / fz * e.dz(t);
      },
      t0, t1);
}

struct PanelSum {
  double snapped = 0.0;  // sum of principal arg increments
  double raw = 0.0;      // sum of Im of quadrature
};

void adapt(Tracker& tr, const Edge& e, double t0, double t1, cplx f0, cplx f1, cplx whole,
           int depth, const QuadratureParams& q, PanelSum& acc) {
  const double tm = 0.5 * (t0 + t1);
  const cplx left = panel_integral(tr, e, t0, tm);
  const cplx right = panel_integral(tr, e, tm, t1);
  const cplx both = left + right;
  const double snap = std::arg(f1 / f0);
  const bool small = std::abs(both.imag()) <= 0.5 * kPi;
  const bool stable = std::abs(both - whole) <= q.stability;
  const bool agrees = std::abs(snap - both.imag()) <= 0.25 * kPi;
  if (small && stable && agrees) {
    acc.snapped += snap;
    acc.raw += both.imag();
    return;
  }
  if (depth >= q.max_depth) {
    throw ContourError("winding: panel did not settle; a zero may sit on the contour, nudge the region");
  }
  const cplx fm = tr.eval(e.at(tm));
  adapt(tr, e, t0, tm, f0, fm, left, depth + 1, q, acc);
  adapt(tr, e, tm, t1, fm, f1, right, depth + 1, q, acc);
}

void validate(const Region& g) {
  if (g.kind == Region::Kind::disk) {
    if (!(g.radius > 0.0) || !std::isfinite(g.radius)) throw DomainError("region: radius must be positive");
  } else if (!(g.re_lo < g.re_hi) || !(g.im_lo < g.im_hi)) {
    throw DomainError("region: rectangle needs re_lo < re_hi and im_lo < im_hi");
  }
}

}  // namespace

Region Region::rect(double re_lo, double re_hi, double im_lo, double im_hi) {
  Region g;
  g.kind = Kind::rectangle;
  g.re_lo = re_lo;
  g.re_hi = re_hi;
  g.im_lo = im_lo;
  g.im_hi = im_hi;
  validate(g);
  return g;
}

Region Region::disk(cplx center, double radius) {
  Region g;
  g.kind = Kind::disk;
  g.center = center;
  g.radius = radius;
  validate(g);
  return g;
}

bool Region::contains(cplx z) const {
  if (kind == Kind::disk) return std::abs(z - center) < radius;
  return z.real() > re_lo && z.real() < re_hi && z.imag() > im_lo && z.imag() < im_hi;
}

Region Region::bounding_rect() const {
  if (kind == Kind::rectangle) return *this;
  return rect(center.real() - radius, center.real() + radius, center.imag() - radius,
              center.imag() + radius);
}

double Region::diameter() const {
  if (kind == Kind::disk) return 2.0 * radius;
  return std::hypot(re_hi - re_lo, im_hi - im_lo);
}

WindingResult winding_integral(const AnalyticFn& f, const Region& region,
                               const QuadratureParams& quad) {
  validate(region);
  Tracker tr{f};
  PanelSum acc;
  for (const Edge& e : boundary(region, std::max(1, quad.panels_per_edge))) {
    const cplx f0 = tr.eval(e.at(0.0));
    const cplx f1 = tr.eval(e.at(1.0));
    const cplx whole = panel_integral(tr, e, 0.0, 1.0);
    adapt(tr, e, 0.0, 1.0, f0, f1, whole, 0, quad, acc);
  }
  WindingResult res;
  res.min_modulus = tr.min_mod;
  res.max_modulus = tr.max_mod;
  res.evaluations = tr.evals;
  if (tr.min_mod < quad.guard * tr.max_mod || tr.min_mod == 0.0) {
    throw ContourError("winding: |f| on the contour fell to " + std::to_string(tr.min_mod) +
                       "; a zero may sit on the contour, nudge the region");
  }
  res.raw = acc.raw / kTwoPi;
  const double snapped = acc.snapped / kTwoPi;
  res.winding = std::lround(snapped);
  if (std::abs(res.raw - static_cast<double>(res.winding)) > quad.integer_tol) {
    throw ContourError("winding: integral " + std::to_string(res.raw) + " is not near an integer");
  }
  return res;
}

int default_workers() {
  if (const char* env = std::getenv("SPARSEPOT_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

namespace {

struct Cell {
  Region rect;
  long winding = 0;
  double scale = 1.0;  // contour max |f|
};

struct CellOutcome {
  std::vector<Cell> children;
  std::vector<Zero> zeros;
  bool incomplete = false;
};

cplx center_of(const Region& r) {
  return {0.5 * (r.re_lo + r.re_hi), 0.5 * (r.im_lo + r.im_hi)};
}

bool inside_expanded(const Region& r, cplx z, double frac) {
  const double dx = frac * (r.re_hi - r.re_lo);
  const double dy = frac * (r.im_hi - r.im_lo);
  return z.real() >= r.re_lo - dx && z.real() <= r.re_hi + dx && z.imag() >= r.im_lo - dy &&
         z.imag() <= r.im_hi + dy;
}

// (Modified) Newton with a central-difference derivative.
bool newton(const AnalyticFn& f, cplx z, int mult, double h0, cplx& out) {
  for (int it = 0; it < 80; ++it) {
    const double h = std::max(h0, 1e-11 * (1.0 + std::abs(z)));
    const cplx fz = f(z);
    if (fz == cplx(0.0)) {
      out = z;
      return true;
    }
    const cplx d = (f(z + h) - f(z - h)) / (2.0 * h);
    if (d == cplx(0.0) || !std::isfinite(d.real()) || !std::isfinite(d.imag())) return false;
    const cplx step = static_cast<double>(mult) * fz / d;
    z -= step;
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(z))) break;
  }
  out = z;
  return true;
}

constexpr std::array<double, 4> kSplitOffsets = {0.0123, -0.0217, 0.0311, -0.0407};

bool try_split(const AnalyticFn& f, const Cell& cell, const LocateParams& p,
               std::vector<Cell>& kids) {
  const Region& r = cell.rect;
  for (double off : kSplitOffsets) {
    const double xm = r.re_lo + (0.5 + off) * (r.re_hi - r.re_lo);
    const double ym = r.im_lo + (0.5 - 0.7 * off) * (r.im_hi - r.im_lo);
    const std::array<Region, 4> q = {Region::rect(r.re_lo, xm, r.im_lo, ym),
                                     Region::rect(xm, r.re_hi, r.im_lo, ym),
                                     Region::rect(r.re_lo, xm, ym, r.im_hi),
                                     Region::rect(xm, r.re_hi, ym, r.im_hi)};
    std::vector<Cell> out;
    long total = 0;
    bool ok = true;
    for (const Region& g : q) {
      try {
        const WindingResult w = winding_integral(f, g, p.quad);
        total += w.winding;
        if (w.winding != 0) out.push_back({g, w.winding, w.max_modulus});
      } catch (const ContourError&) {
        ok = false;
        break;
      }
    }
    if (ok && total == cell.winding) {
      kids = std::move(out);
      return true;
    }
  }
  return false;
}

CellOutcome process(const AnalyticFn& f, const Cell& cell, const LocateParams& p) {
  CellOutcome out;
  const Region& r = cell.rect;
  const double diam = r.diameter();
  const cplx c = center_of(r);
  if (cell.winding < 0) {
    out.incomplete = true;  // poles inside; not an analytic region
    return out;
  }
  if (cell.winding == 1) {
    cplx z;
    if (newton(f, c, 1, 1e-6 * diam, z) && inside_expanded(r, z, 0.01)) {
      const double res = std::abs(f(z));
      if (res <= p.newton_tol * cell.scale || diam <= p.min_diameter) {
        out.zeros.push_back({z, 1, res});
        return out;
      }
    }
  }
  if (diam <= p.min_diameter) {
    cplx z = c;
    if (!newton(f, c, static_cast<int>(cell.winding), 1e-3 * diam, z) || !inside_expanded(r, z, 0.5)) {
      z = c;
    }
    out.zeros.push_back({z, static_cast<int>(cell.winding), std::abs(f(z))});
    return out;
  }
  if (!try_split(f, cell, p, out.children)) {
    // Could not split cleanly: keep the cell as an unresolved cluster.
    cplx z = c;
    if (!newton(f, c, static_cast<int>(cell.winding), 1e-6 * diam, z) || !inside_expanded(r, z, 0.01)) z = c;
    out.zeros.push_back({z, static_cast<int>(cell.winding), std::abs(f(z))});
    out.incomplete = true;
  }
  return out;
}

}  // namespace

ZeroReport locate_zeros(const AnalyticFn& f, const Region& region, const LocateParams& params) {
  validate(region);
  ZeroReport rep;
  const WindingResult top = winding_integral(f, region, params.quad);
  rep.winding_total = top.winding;
  rep.contour_min_modulus = top.min_modulus;
  const int workers = params.workers > 0 ? params.workers : default_workers();

  std::vector<Cell> level;
  if (region.kind == Region::Kind::rectangle) {
    if (top.winding != 0) level.push_back({region, top.winding, top.max_modulus});
  } else {
    // Search a slightly enlarged square; retry with another margin if its
    // boundary meets a zero.
    bool placed = false;
    for (double margin : {1.0 + 1.37e-3, 1.0 + 2.91e-3, 1.0 + 5.3e-3}) {
      const double h = region.radius * margin;
      const Region sq = Region::rect(region.center.real() - h, region.center.real() + h,
                                     region.center.imag() - h, region.center.imag() + h);
      try {
        const WindingResult w = winding_integral(f, sq, params.quad);
        if (w.winding != 0) level.push_back({sq, w.winding, w.max_modulus});
        placed = true;
        break;
      } catch (const ContourError&) {
      }
    }
    if (!placed) throw ContourError("locate_zeros: could not place a search square around the disk");
  }

  long cells = static_cast<long>(level.size());
  while (!level.empty()) {
    std::vector<CellOutcome> outcomes(level.size());
    detail::parallel_for(level.size(), workers, [&](std::size_t i) { outcomes[i] = process(f, level[i], params); });
    std::vector<Cell> next;
    for (CellOutcome& o : outcomes) {
      rep.complete = rep.complete && !o.incomplete;
      for (Zero& z : o.zeros) rep.zeros.push_back(z);
      for (Cell& c : o.children) next.push_back(std::move(c));
    }
    cells += static_cast<long>(next.size());
    if (cells > params.max_cells) {
      rep.complete = false;
      break;
    }
    level = std::move(next);
  }

  if (region.kind == Region::Kind::disk) {
    std::vector<Zero> kept;
    for (const Zero& z : rep.zeros) {
      if (region.contains(z.location)) kept.push_back(z);
    }
    rep.zeros = std::move(kept);
  }
  std::sort(rep.zeros.begin(), rep.zeros.end(), [](const Zero& a, const Zero& b) {
    if (a.location.real() != b.location.real()) return a.location.real() < b.location.real();
    return a.location.imag() < b.location.imag();
  });
  long mult = 0;
  for (const Zero& z : rep.zeros) mult += z.multiplicity;
  if (mult != rep.winding_total) rep.complete = false;
  return rep;
}

namespace {

cplx boundary_point(const Region& g, double t) {
  t -= std::floor(t);
  if (g.kind == Region::Kind::disk) return g.center + g.radius * std::exp(cplx(0.0, kTwoPi * t));
  const double w = g.re_hi - g.re_lo;
  const double h = g.im_hi - g.im_lo;
  double s = t * 2.0 * (w + h);
  if (s < w) return {g.re_lo + s, g.im_lo};
  s -= w;
  if (s < h) return {g.re_hi, g.im_lo + s};
  s -= h;
  if (s < w) return {g.re_hi - s, g.im_hi};
  s -= w;
  return {g.re_lo, g.im_hi - s};
}

}  // namespace

RoucheResult rouche_compare(const AnalyticFn& f, const AnalyticFn& g, const Region& region,
                            int samples) {
  validate(region);
  samples = std::max(samples, 8);
  auto ratio_at = [&](double t) {
    const cplx z = boundary_point(region, t);
    const cplx gz = g(z);
    if (std::abs(gz) == 0.0 || !std::isfinite(std::abs(gz))) {
      throw ContourError("rouche_compare: comparison function vanishes on the contour");
    }
    return std::abs(f(z) - gz) / std::abs(gz);
  };
  std::vector<double> r(samples);
  for (int i = 0; i < samples; ++i) r[i] = ratio_at(static_cast<double>(i) / samples);

  std::vector<int> order(samples);
  for (int i = 0; i < samples; ++i) order[i] = i;
  const int top = std::min(8, samples);
  std::partial_sort(order.begin(), order.begin() + top, order.end(),
                    [&](int a, int b) { return r[a] > r[b]; });

  RoucheResult res;
  res.ratio = r[order[0]];
  res.argmax = boundary_point(region, static_cast<double>(order[0]) / samples);
  const double dt = 1.0 / samples;
  for (int k = 0; k < top; ++k) {
    // Golden-section search on the bracket around a sampled maximum.
    double a = (order[k] - 1) * dt, b = (order[k] + 1) * dt;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = ratio_at(x1), f2 = ratio_at(x2);
    for (int it = 0; it < 40; ++it) {
      if (f1 > f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - gr * (b - a);
        f1 = ratio_at(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + gr * (b - a);
        f2 = ratio_at(x2);
      }
    }
    const double t = f1 > f2 ? x1 : x2;
    const double v = std::max(f1, f2);
    if (v > res.ratio) {
      res.ratio = v;
      res.argmax = boundary_point(region, t);
    }
  }
  res.dominated = res.ratio < 1.0;
  return res;
}

}  // namespace sparsepot
