#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/tools/roots.hpp>

#include "oracles.hpp"
#include "sparsepot/errors.hpp"
#include "sparsepot/potential.hpp"
#include "sparsepot/schrodinger_1d.hpp"
#include "sparsepot/spectral_count.hpp"
#include "sparsepot/step_model.hpp"

using namespace sparsepot;

TEST_SUITE("step_model") {
  TEST_CASE("even secular of the unit well vanishes at the bisection ground state") {
    const auto levels = oracle::square_well_levels(-1.0, 1.0);
    REQUIRE(levels.size() == 1);
    CHECK(levels[0] == doctest::Approx(-0.4538).epsilon(1e-4));
    const StepBump well{-1.0, 1.0, 0.0};
    CHECK(std::abs(secular(well, levels[0], Parity::even)) < 1e-12);
    CHECK(std::abs(secular(well, levels[0], Parity::odd)) > 0.1);
    CHECK(physical_sheet(well, levels[0], Parity::even));
  }

  TEST_CASE("odd secular at kappa R = pi/2 equals i chi") {
    const double R = 1.0;
    const cplx v0(-2.0, 0.3);
    const cplx kappa = oracle::kPi / 2.0;
    const cplx E = energy(kappa, v0);
    CHECK(std::abs(secular({v0, R, 0.0}, E, Parity::odd) - cplx(0, 1) * sqrt_upper(E)) < 1e-12);
    CHECK_FALSE(physical_sheet({v0, R, 0.0}, E, Parity::odd));
  }

  TEST_CASE("free operator: regular secular has no zeros with Im chi > 0") {
    const StepBump free{0.0, 1.5, 0.0};
    const Region box = Region::rect(-4.0, 4.0, 0.05, 3.0);
    for (Parity p : {Parity::even, Parity::odd}) {
      CHECK(winding_count([&](cplx E) { return secular_regular(free, E, p); }, box) == 0);
    }
    CHECK(winding_count([&](cplx E) { return secular_regular(free, E, Parity::even); },
                        Region::rect(-4.0, -0.05, -1.0, 1.0)) == 0);
  }

  TEST_CASE("pole guard") {
    const StepBump b{cplx(-1.0, 0.0), 1.0, 0.0};
    const cplx E = energy(oracle::kPi, b.v0);  // kappa R = pi: cot pole
    CHECK_THROWS_AS(secular(b, E, Parity::odd), PoleError);
    CHECK_NOTHROW(secular_regular(b, E, Parity::odd));
  }

  TEST_CASE("solve_for_v0 examples") {
    CHECK(std::abs(solve_for_v0(1.0, oracle::kPi, Parity::even) - cplx(-1.0)) < 1e-14);
    const double sech2 = 1.0 / (std::cosh(1.0) * std::cosh(1.0));
    CHECK(std::abs(solve_for_v0(cplx(0, 1), 1.0, Parity::even) - sech2) < 1e-14);
    CHECK(sech2 == doctest::Approx(0.419974).epsilon(1e-6));
  }

  TEST_CASE("physical_sheet examples") {
    const StepBump b{-1.0, 1.0, 0.0};
    // kappa = 0.5: chi_match = -0.5 i cot(0.5) = -0.915 i.
    const cplx E = energy(0.5, b.v0);
    CHECK(std::abs(chi_match(b, E, Parity::odd) - cplx(0.0, -0.5 / std::tan(0.5))) < 1e-14);
    CHECK_FALSE(physical_sheet(b, E, Parity::odd));
    CHECK(sheet_of(b, E, Parity::odd) == Sheet::unphysical);
  }

  TEST_CASE("energy examples") {
    CHECK(energy(cplx(0, 2), -1.0) == cplx(-5.0, 0.0));
    CHECK(energy(1.0, cplx(0, 1)) == cplx(1.0, 1.0));
    CHECK(std::abs(energy(cplx(-1, 0.1), 0.0) - cplx(0.99, -0.2)) < 1e-15);
  }

  TEST_CASE("construct_bump hits the target and keeps the lemma's scales") {
    const BumpReport a = construct_bump(cplx(1.0, 0.1));
    CHECK(a.residual < 1e-10);
    CHECK(std::abs(a.bump.v0) <= 1.0);
    CHECK(physical_sheet(a.bump, a.zeta, a.parity));
    CHECK(std::abs(global_secular(PiecewisePotential::from_bump(a.bump), a.zeta)) < 1e-10);

    const BumpReport b = construct_bump(cplx(1.0, 0.05));
    CHECK(b.bump.R > a.bump.R);
    // |V0| / Im zeta creeps up towards 1 + sigma, so halving Im zeta gives a
    // little more than half of |V0|.
    const double halving = std::abs(b.bump.v0) / std::abs(a.bump.v0);
    CHECK(halving > 0.5);
    CHECK(halving < 0.51);
    for (const BumpReport* r : {&a, &b}) {
      CHECK(std::abs(r->bump.v0) <= 2.0 * r->zeta.imag());
    }
  }

  TEST_CASE("construct_bump scaling covariance") {
    const cplx z(1.0, 0.1);
    const BumpReport a = construct_bump(z);
    const BumpReport b = construct_bump(4.0 * z);
    CHECK(std::abs(b.bump.v0 - 4.0 * a.bump.v0) < 1e-12 * std::abs(b.bump.v0));
    CHECK(b.bump.R == doctest::Approx(a.bump.R / 2.0).epsilon(1e-12));
    CHECK(std::abs(b.achieved_eigenvalue - 4.0 * z) < 1e-9);
  }

  TEST_CASE("construct_bump refuses targets outside the sector") {
    CHECK_THROWS_AS(construct_bump(cplx(1.0, -0.1)), DomainError);
    CHECK_THROWS_AS(construct_bump(cplx(1.0, 0.5)), DomainError);
    CHECK_THROWS_AS(construct_bump(cplx(-1.0, 0.1)), DomainError);
  }

  TEST_CASE("bump_norm_lq and davies_nath closed forms") {
    const StepBump b{cplx(0.0, 0.1), 5.0, 0.0};
    CHECK(bump_norm_lq(b, 1.0) == doctest::Approx(1.0));
    CHECK(bump_norm_lq(b, 2.0) == doctest::Approx(0.1 * std::sqrt(10.0)));
    CHECK(bump_norm_lq(b, HUGE_VAL) == doctest::Approx(0.1));
    const StepBump u{1.0, 1.0, 0.0};
    CHECK(davies_nath(u, 1.0, 1.0) == doctest::Approx(2.0 * (1.0 - std::exp(-1.0))).epsilon(1e-14));
    CHECK(davies_nath(b, 2.0, 1e-9) == doctest::Approx(bump_norm_lq(b, 2.0)).epsilon(1e-8));
    const StepBump u2{2.0, 1.0, 0.0};
    CHECK(davies_nath(u2, 1.0, 0.7) == doctest::Approx(2.0 * davies_nath(u, 1.0, 0.7)));
  }

  TEST_CASE("davies_nath matches a brute-force supremum over translates") {
    const StepBump b{cplx(0.3, 0.4), 2.0, 1.0};
    const double s = 0.6, q = 1.5;
    double best = 0.0;
    for (int j = 0; j <= 400; ++j) {
      const double y = -4.0 + 10.0 * j / 400.0;
      double acc = 0.0;
      const int n = 4000;
      for (int i = 0; i < n; ++i) {
        const double x = b.x0 - b.R + (i + 0.5) * 2.0 * b.R / n;
        acc += std::pow(std::abs(b.v0), q) * std::exp(-s * std::abs(x - y)) * 2.0 * b.R / n;
      }
      best = std::max(best, acc);
    }
    CHECK(davies_nath(b, q, s) == doctest::Approx(std::pow(best, 1.0 / q)).epsilon(1e-5));
  }

  TEST_CASE("eigenfunction of a real well: real, even, normalised") {
    const StepBump well{-1.0, 1.0, 0.5};
    const double E = oracle::square_well_levels(-1.0, 1.0)[0];
    const cplx p0 = eigenfunction(well, E, Parity::even, well.x0);
    const cplx phase = p0 / std::abs(p0);
    double norm = 0.0;
    const double h = 1e-3;
    for (double x = well.x0 - 40.0; x < well.x0 + 40.0; x += h) {
      const cplx p = eigenfunction(well, E, Parity::even, x + 0.5 * h);
      norm += std::norm(p) * h;
      CHECK(std::abs((p / phase).imag()) < 1e-12);
    }
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-6));
    for (double d : {0.3, 1.0, 2.5}) {
      CHECK(std::abs(eigenfunction(well, E, Parity::even, well.x0 + d) -
                     eigenfunction(well, E, Parity::even, well.x0 - d)) < 1e-13);
    }
  }

  TEST_CASE("eigenfunction exterior decay rate equals Im chi") {
    const BumpReport r = construct_bump(cplx(1.0, 0.05));
    const double rate = sqrt_upper(r.zeta).imag();
    std::vector<double> xs;
    std::vector<cplx> ps;
    for (int i = 0; i < 200; ++i) {
      const double x = r.bump.R + 1.0 + i * (3.0 / rate) / 200.0;
      xs.push_back(x);
      ps.push_back(eigenfunction(r.bump, r.zeta, r.parity, x));
    }
    CHECK(-oracle::log_slope(xs, ps) == doctest::Approx(rate).epsilon(0.01));
    CHECK_THROWS_AS(eigenfunction(r.bump, r.zeta + 0.01, r.parity, 0.0), DomainError);
  }

  TEST_CASE("radial secular, d = 3, shares the odd 1D zeros") {
    const double v0 = -10.0, R = 1.0;
    const auto levels = oracle::square_well_levels(v0, R);
    int odd_hits = 0;
    for (double E : levels) {
      const StepBump b{v0, R, 0.0};
      if (std::abs(secular_regular(b, E, Parity::odd)) < 1e-10) {
        ++odd_hits;
        const cplx g = radial_secular(v0, R, E, 3);
        const cplx dg = (radial_secular(v0, R, E + 1e-6, 3) - radial_secular(v0, R, E - 1e-6, 3)) / 2e-6;
        CHECK(std::abs(g / dg) < 1e-9);
      }
    }
    CHECK(odd_hits == 1);
    // sqrt(10) in (pi/2, 3 pi/2): exactly one s-wave bound state.
    const long n = winding_count([&](cplx E) { return radial_secular(v0, R, E, 3); },
                                 Region::rect(-9.5, -0.05, -0.5, 0.5));
    CHECK(n == 1);
    CHECK(winding_count([&](cplx E) { return radial_secular(0.0, R, E, 3); },
                        Region::rect(-5.0, 5.0, 0.05, 3.0)) == 0);
  }

  TEST_CASE("radial secular, d = 2, against a real K-Bessel matching oracle") {
    // 2D s-wave: k J0'(kR) / J0(kR) = q K0'(qR) / K0(qR), k = sqrt(E - v0), q = sqrt(-E).
    const double v0 = -4.0, R = 1.0;
    auto f = [&](double E) {
      const double k = std::sqrt(E - v0), q = std::sqrt(-E);
      using boost::math::cyl_bessel_j;
      using boost::math::cyl_bessel_k;
      return -k * cyl_bessel_j(1, k * R) * cyl_bessel_k(0, q * R) +
             q * cyl_bessel_k(1, q * R) * cyl_bessel_j(0, k * R);
    };
    boost::uintmax_t it = 200;
    const auto br = boost::math::tools::bisect(
        f, -3.999, -1e-3, boost::math::tools::eps_tolerance<double>(50), it);
    const double E = 0.5 * (br.first + br.second);
    const cplx g = radial_secular(v0, R, E, 2);
    const cplx dg = (radial_secular(v0, R, E + 1e-6, 2) - radial_secular(v0, R, E - 1e-6, 2)) / 2e-6;
    CHECK(std::abs(g / dg) < 1e-9);
  }
}
