#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "sparsepot/errors.hpp"
#include "sparsepot/potential.hpp"
#include "sparsepot/schrodinger_1d.hpp"
#include "sparsepot/spectral_count.hpp"
#include "sparsepot/step_model.hpp"

using namespace sparsepot;

namespace {

std::vector<double> grid(double a, double b, int n) {
  std::vector<double> g(n + 1);
  for (int i = 0; i <= n; ++i) g[i] = a + (b - a) * i / n;
  return g;
}

double mass(const std::vector<double>& x, const std::vector<cplx>& v, double lo, double hi) {
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double mid = 0.5 * (x[i] + x[i + 1]);
    if (mid < lo || mid > hi) continue;
    m += 0.5 * (std::norm(v[i]) + std::norm(v[i + 1])) * (x[i + 1] - x[i]);
  }
  return m;
}

}  // namespace

TEST_SUITE("schrodinger_1d") {
  TEST_CASE("transfer matrix: unit determinant and composition") {
    const PiecewisePotential pot({{-1.0, 0.5, cplx(-2.0, 0.3)}, {1.5, 3.0, cplx(0.7, -0.1)}});
    const cplx E(1.3, 0.4);
    const TransferMatrix a = transfer_matrix(pot, E, -2.0, 1.0);
    const TransferMatrix b = transfer_matrix(pot, E, 1.0, 4.0);
    const TransferMatrix ab = transfer_matrix(pot, E, -2.0, 4.0);
    CHECK(std::abs(a.det() - 1.0) < 1e-13);
    CHECK(std::abs(ab.det() - 1.0) < 1e-13);
    const TransferMatrix c = b * a;
    CHECK(std::abs(c.m11 - ab.m11) < 1e-12 * std::abs(ab.m11));
    CHECK(std::abs(c.m12 - ab.m12) < 1e-12 * (1.0 + std::abs(ab.m12)));
    CHECK(std::abs(c.m21 - ab.m21) < 1e-12 * (1.0 + std::abs(ab.m21)));
    CHECK(std::abs(c.m22 - ab.m22) < 1e-12 * std::abs(ab.m22));
  }

  TEST_CASE("free transfer matrix is the rotation by sqrt(E) x") {
    const PiecewisePotential empty;
    const cplx E(4.0, 0.0);
    const TransferMatrix m = transfer_matrix(empty, E, 0.0, 1.0);
    CHECK(std::abs(m.m11 - std::cos(2.0)) < 1e-15);
    CHECK(std::abs(m.m12 - std::sin(2.0) / 2.0) < 1e-15);
    CHECK(std::abs(m.m21 + 2.0 * std::sin(2.0)) < 1e-15);
  }

  TEST_CASE("global secular of the free operator is identically one") {
    const PiecewisePotential empty;
    for (cplx E : {cplx(-3.0, 0.0), cplx(1.0, 0.2), cplx(-0.1, -2.0)}) {
      CHECK(std::abs(global_secular(empty, E) - 1.0) < 1e-15);
    }
    const PiecewisePotential zero({{0.0, 3.0, 0.0}});
    CHECK(std::abs(global_secular(zero, cplx(2.0, 0.5)) - 1.0) < 1e-14);
  }

  TEST_CASE("global secular vanishes at the square-well levels") {
    const auto levels = oracle::square_well_levels(-10.0, 1.0);
    REQUIRE(levels.size() == 3);
    const PiecewisePotential pot({{-1.0, 1.0, -10.0}});
    for (double E : levels) {
      const cplx g = global_secular(pot, E);
      const cplx dg = (global_secular(pot, E + 1e-6) - global_secular(pot, E - 1e-6)) / 2e-6;
      CHECK(std::abs(g / dg) < 1e-10 * (1.0 + std::abs(E)));
    }
  }

  TEST_CASE("global secular vanishes at a constructed bump eigenvalue") {
    const BumpReport r = construct_bump(cplx(1.0, 0.05));
    CHECK(std::abs(global_secular(PiecewisePotential::from_bump(r.bump), r.zeta)) < 1e-8);
  }

  TEST_CASE("global secular agrees with the RK4 shooting oracle") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<Piece> pieces;
      std::vector<oracle::Step> steps;
      double x = 0.0;
      for (int j = 0; j < 3; ++j) {
        const double w = 0.5 + 0.5 * (u(rng) + 1.0);
        const cplx v(2.0 * u(rng), 0.5 * u(rng));
        pieces.push_back({x, x + w, v});
        steps.push_back({x, x + w, v});
        x += w + 0.3 * (u(rng) + 1.0);
      }
      const PiecewisePotential pot(pieces);
      for (cplx E : {cplx(-0.7, 0.1), cplx(0.5, 0.3), cplx(2.0, 0.05)}) {
        const cplx chi = sqrt_upper(E);
        const double a = pot.left(), b = pot.right();
        const cplx ref = oracle::shooting_secular(steps, E, 2000) * std::exp(cplx(0, 1) * chi * (b - a));
        CAPTURE(E);
        CHECK(std::abs(global_secular(pot, E) - ref) < 1e-8 * (1.0 + std::abs(ref)));
      }
    }
  }

  TEST_CASE("reconstructed eigenfunction of a symmetric well is symmetric and normalised") {
    const PiecewisePotential pot({{-1.0, 1.0, -10.0}});
    const double E = oracle::square_well_levels(-10.0, 1.0)[0];
    const auto x = grid(-12.0, 12.0, 24000);
    const Eigenfunction ef = reconstruct_eigenfunction(pot, E, x);
    CHECK(ef.matching_residual < 1e-6);
    CHECK(mass(x, ef.values, -12.0, 12.0) == doctest::Approx(1.0).epsilon(1e-5));
    const cplx ref = ef.values[12000];
    for (int i : {1000, 6000, 11000, 11900}) {
      CHECK(std::abs(ef.values[i] - ef.values[24000 - i]) < 1e-8 * std::abs(ref));
    }
    CHECK_THROWS_AS(reconstruct_eigenfunction(pot, E + 0.05, x), DomainError);
  }

  TEST_CASE("two different wells: the eigenfunction lives on one of them") {
    for (double L : {10.0, 20.0}) {
      const double c2 = 2.0 + L;
      const PiecewisePotential pot({{-1.0, 1.0, -1.0}, {c2 - 1.0, c2 + 1.0, -1.2}});
      const double single = oracle::square_well_levels(-1.2, 1.0)[0];
      const ZeroReport zr = locate_zeros([&](cplx E) { return global_secular(pot, E); },
                                         Region::disk(single, 0.02));
      REQUIRE(zr.zeros.size() == 1);
      const cplx E = zr.zeros[0].location;
      CHECK(std::abs(E - single) < 1e-3);
      const auto x = grid(-15.0, c2 + 15.0, 20000);
      const Eigenfunction ef = reconstruct_eigenfunction(pot, E, x);
      CAPTURE(L);
      CHECK(mass(x, ef.values, c2 - 6.0, c2 + 6.0) >= 0.99);
    }
  }

  TEST_CASE("single-bump quasimode defect inside a sparse pair is exponentially small") {
    // psi_1 from the first bump alone, tested against V = V_1 + V_2: the
    // defect is V_2 psi_1, bounded by |V_2| |psi_1| on the far support.
    const BumpReport r = construct_bump(cplx(1.0, 0.1));
    const double rate = sqrt_upper(r.zeta).imag();
    for (double L : {40.0, 80.0}) {
      const double c2 = 2.0 * r.bump.R + L;
      double defect2 = 0.0;
      const int n = 2000;
      for (int i = 0; i < n; ++i) {
        const double x = c2 - r.bump.R + (i + 0.5) * 2.0 * r.bump.R / n;
        defect2 += std::norm(r.bump.v0 * eigenfunction(r.bump, r.zeta, r.parity, x)) * 2.0 * r.bump.R / n;
      }
      const double bound = std::abs(r.bump.v0) * std::sqrt(2.0 * r.bump.R) *
                           std::exp(-rate * L) * 1.01;
      CAPTURE(L);
      CHECK(std::sqrt(defect2) <= bound);
    }
  }
}
