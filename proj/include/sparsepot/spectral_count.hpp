#pragma once

#include <functional>
#include <vector>

#include "sparsepot/special_functions.hpp"

namespace sparsepot {

/// Analytic function handle. Must be pure: it may be called concurrently.
using AnalyticFn = std::function<cplx(cplx)>;

struct Region {
  enum class Kind { rectangle, disk };
  Kind kind = Kind::rectangle;
  double re_lo = 0.0, re_hi = 0.0, im_lo = 0.0, im_hi = 0.0;
  cplx center;
  double radius = 0.0;

  static Region rect(double re_lo, double re_hi, double im_lo, double im_hi);
  static Region disk(cplx center, double radius);

  bool contains(cplx z) const;
  /// Smallest axis-aligned rectangle containing the region.
  Region bounding_rect() const;
  double diameter() const;
};

struct QuadratureParams {
  int panels_per_edge = 4;    // initial panels per rectangle edge (x4 for a circle)
  int max_depth = 24;         // bisection depth per panel
  double guard = 1e-12;       // |f| below guard * contour max is a zero on the contour
  double integer_tol = 0.25;  // raw winding must be this close to an integer
  double stability = 1e-3;    // |I(panel) - I(halves)| accepted per panel
};

struct WindingResult {
  long winding = 0;
  double raw = 0.0;             // (1/2 pi) Im of the quadrature, before snapping
  double min_modulus = 0.0;     // smallest |f| seen on the contour
  double max_modulus = 0.0;
  long evaluations = 0;
};

/// Argument-principle integral (1/2 pi i) \oint f'/f, with f' by central
/// differences and adaptive Gauss-Legendre panels. Each accepted panel has
/// |arg increment| <= pi/2, so the increments are snapped to the principal
/// arg of f(b)/f(a) and the sum is an exact integer. Throws ContourError if
/// |f| dips below the guard or a panel fails to settle.
WindingResult winding_integral(const AnalyticFn& f, const Region& region,
                               const QuadratureParams& quad = {});

inline long winding_count(const AnalyticFn& f, const Region& region,
                          const QuadratureParams& quad = {}) {
  return winding_integral(f, region, quad).winding;
}

struct Zero {
  cplx location;
  int multiplicity = 1;
  double residual = 0.0;  // |f(location)|
};

struct ZeroReport {
  std::vector<Zero> zeros;  // sorted by real part, then imaginary part
  long winding_total = 0;
  double contour_min_modulus = 0.0;
  bool complete = true;     // multiplicities account for winding_total
};

struct LocateParams {
  double min_diameter = 1e-8;  // cells below this report their winding as a multiplicity
  long max_cells = 200000;     // subdivision budget
  double newton_tol = 1e-10;   // relative to the cell's contour scale
  int workers = 0;             // 0: SPARSEPOT_WORKERS or hardware concurrency
  QuadratureParams quad;
};

/// Quadtree subdivision under winding_count plus Newton polishing.
/// For a disk the bounding square is searched and hits are filtered.
ZeroReport locate_zeros(const AnalyticFn& f, const Region& region, const LocateParams& params = {});

struct RoucheResult {
  double ratio = 0.0;
  bool dominated = false;
  cplx argmax;
};

/// sup over the boundary of |f - g| / |g|, from `samples` points plus local
/// refinement around the largest values. Throws ContourError if g vanishes
/// at a sample.
RoucheResult rouche_compare(const AnalyticFn& f, const AnalyticFn& g, const Region& region,
                            int samples = 256);

/// Worker count: SPARSEPOT_WORKERS when set and positive, else hardware
/// concurrency (at least 1).
int default_workers();

}  // namespace sparsepot
