#include <doctest.h>

#include <random>

#include <boost/math/special_functions/bessel.hpp>

#include "oracles.hpp"
#include "sparsepot/errors.hpp"
#include "sparsepot/special_functions.hpp"

using namespace sparsepot;

namespace {

bool close(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol * (1.0 + std::abs(b)); }

}  // namespace

TEST_SUITE("special_functions") {
  TEST_CASE("sqrt_upper picks the root in the closed upper half plane") {
    CHECK(close(sqrt_upper(-1.0), cplx(0, 1), 1e-15));
    CHECK(close(sqrt_upper(cplx(0, 2)), cplx(1, 1), 1e-15));
    CHECK(close(sqrt_upper(-4.0), cplx(0, 2), 1e-15));
    CHECK(sqrt_upper(cplx(1, -1e-3)).imag() > 0.0);
    CHECK(sqrt_upper(4.0) == cplx(2.0, 0.0));
  }

  TEST_CASE("lambert_w special values") {
    CHECK(lambert_w(0, 0.0) == cplx(0.0, 0.0));
    CHECK(close(lambert_w(0, std::exp(1.0)), 1.0, 1e-15));
    CHECK(close(lambert_w(-1, -std::exp(-1.0)), -1.0, 1e-7));
    CHECK(close(lambert_w(0, -std::exp(-1.0)), -1.0, 1e-7));
    CHECK_THROWS_AS(lambert_w(1, 0.0), DomainError);
  }

  TEST_CASE("lambert_w near the branch point keeps full accuracy in z") {
    for (double d : {1e-6, 1e-9, 1e-12}) {
      const cplx z(-std::exp(-1.0) + d, 0.0);
      for (long n : {0L, -1L}) {
        const cplx w = lambert_w(n, z);
        CHECK(std::abs(w * std::exp(w) - z) <= 1e-15);
      }
    }
  }

  TEST_CASE("lambert_w defining equation, strip and unwinding on random points") {
    std::mt19937_64 rng(20241015);
    std::uniform_real_distribution<double> lg(-4.0, 4.0), ph(-oracle::kPi, oracle::kPi);
    for (long n = -6; n <= 6; ++n) {
      for (int i = 0; i < 300; ++i) {
        const cplx z = std::polar(std::pow(10.0, lg(rng)), ph(rng));
        const cplx w = lambert_w(n, z);
        CAPTURE(n);
        CAPTURE(z);
        CHECK(std::abs(w * std::exp(w) - z) <= 1e-12 * std::abs(z));
        CHECK(oracle::lambert_strip(n, w));
        CHECK(lambert_w_branch_of(w, z) == n);
      }
    }
  }

  TEST_CASE("lambert_w across the negative real axis") {
    // W_{-1} just above the cut continues W_0 from just below.
    const cplx above(-1.5, 1e-9), below(-1.5, -1e-9);
    CHECK(close(lambert_w(-1, above), lambert_w(0, below), 1e-7));
    CHECK(close(lambert_w(1, below), lambert_w(0, above), 1e-7));
  }

  TEST_CASE("lambert_w_seed") {
    const cplx z(0.0, 16.0);
    const cplx L = std::log(z) - cplx(0.0, 80.0 * oracle::kPi);
    CHECK(close(lambert_w_seed(-40, z), L - std::log(L), 1e-15));
    CHECK(close(lambert_w_seed(0, std::exp(3.0)), 3.0 - std::log(3.0), 1e-15));
    const cplx s = lambert_w_seed(100000, cplx(2.0, 1.0));
    CHECK(std::abs(s.imag() / (2.0 * oracle::kPi * 100000) - 1.0) < 0.1);
    CHECK_THROWS_AS(lambert_w_seed(0, std::exp(1.0)), DomainError);
  }

  TEST_CASE("half-integer Bessel closed forms") {
    CHECK(close(bessel_j(0.5, oracle::kPi / 2), 2.0 / oracle::kPi, 1e-14));
    CHECK(close(hankel1(0.5, oracle::kPi), cplx(0.0, std::sqrt(2.0) / oracle::kPi), 1e-14));
  }

  TEST_CASE("J0 against the long-double series") {
    CHECK(std::abs(bessel_j(0, 1.0).real() - 0.7651976865579666) < 1e-15);
    // A double-precision series loses about eps * I0(x) to cancellation.
    for (double x : {0.1, 2.5, 7.0, 11.5}) {
      CAPTURE(x);
      CHECK(std::abs(bessel_j(0, x) - oracle::j0_series(x)) < 1e-15 * boost::math::cyl_bessel_i(0, x));
    }
  }

  TEST_CASE("J0, J1 against the integral representation on a complex grid") {
    for (double r : {0.3, 3.0, 9.0, 11.9, 12.1, 15.0, 25.0, 40.0}) {
      for (double th : {0.0, 0.4, 1.2, 2.0, 2.9}) {
        const cplx z = std::polar(r, th);
        if (std::abs(z.imag()) > 6.0) continue;
        CAPTURE(z);
        const double scale = std::exp(std::abs(z.imag()));
        CHECK(std::abs(bessel_j(0, z) - oracle::bessel_j_integral(0, z)) < 1e-12 * scale);
        CHECK(std::abs(bessel_j(1, z) - oracle::bessel_j_integral(1, z)) < 1e-12 * scale);
        CHECK(std::abs(bessel_j_prime(0, z) + oracle::bessel_j_integral(1, z)) < 1e-12 * scale);
      }
    }
  }

  TEST_CASE("Wronskian J H1' - J' H1 = 2i / (pi z)") {
    for (double nu : {0.0, 0.5, 1.0}) {
      for (cplx z : {cplx(0.7, 0.2), cplx(5.0, 1.0), cplx(11.8, 0.5), cplx(12.2, -0.5), cplx(30.0, 2.0),
                     cplx(-3.0, 2.0), cplx(0.0, 4.0)}) {
        CAPTURE(nu);
        CAPTURE(z);
        const cplx w = bessel_j(nu, z) * hankel1_prime(nu, z) - bessel_j_prime(nu, z) * hankel1(nu, z);
        const cplx expect = cplx(0.0, 2.0) / (oracle::kPi * z);
        CHECK(std::abs(w - expect) <= 1e-11 * std::abs(expect));
      }
    }
  }

  TEST_CASE("H1 above the real axis, where |J| >> |H1|") {
    // Reference values from mpmath at 80 digits.
    struct Row {
      int n;
      cplx z, h;
    };
    const Row rows[] = {
        {0, cplx(0.0, 11.99), cplx(0.0, -1.4157487758790886e-6)},
        {1, cplx(0.0, 11.99), cplx(-1.4736477181403872e-6, 0.0)},
        {0, cplx(3.8268343236508975, 9.238795325112868), cplx(-1.8648613416934869e-5, 1.5504523964053806e-5)},
        {1, cplx(3.8268343236508975, 9.238795325112868), cplx(1.5865570839126257e-5, 1.9778954944262233e-5)},
        {0, cplx(-3.8268343236508975, 9.238795325112868), cplx(1.8648613416934869e-5, 1.5504523964053806e-5)},
        {1, cplx(-3.8268343236508975, 9.238795325112868), cplx(1.5865570839126257e-5, -1.9778954944262233e-5)},
        {0, cplx(4.6, 11.06), cplx(-3.5806387694782926e-6, -2.9050972304139502e-7)},
        {1, cplx(4.6, 11.06), cplx(-3.5693188203995081e-7, 3.7120435048012292e-6)},
        {0, cplx(0.0, 8.0), cplx(0.0, -9.3246147017467839e-5)},
        {1, cplx(0.0, 8.0), cplx(-9.8911112252230354e-5, 0.0)},
        {0, cplx(14.0, 9.0), cplx(2.2525610703350537e-5, 8.3874581478789139e-6)},
        {1, cplx(14.0, 9.0), cplx(9.0851928844944702e-6, -2.2686644269416132e-5)},
        {0, cplx(0.0, 3.0), cplx(0.0, -0.022115855374555689)},
        {1, cplx(0.0, 3.0), cplx(-0.025564378043925439, 0.0)},
        {0, cplx(0.5, 1.5), cplx(0.079995993101668623, -0.10649665936784651)},
        {1, cplx(0.5, 1.5), cplx(-0.12880843965710751, -0.11054326621959824)},
        {0, cplx(-6.0, 1.2), cplx(-0.036229125541781771, -0.089584599058188847)},
        {1, cplx(-6.0, 1.2), cplx(-0.088419803034398987, 0.043940596716334669)},
    };
    for (const Row& r : rows) {
      CAPTURE(r.n);
      CAPTURE(r.z);
      CHECK(std::abs(hankel1(r.n, r.z) - r.h) < 1e-9 * std::abs(r.h));
    }
  }

  TEST_CASE("unsupported Bessel orders are refused") {
    CHECK_THROWS_AS(bessel_j(2.0, cplx(1.0, 0.0)), DomainError);
    CHECK_THROWS_AS(hankel1(0.0, cplx(0.0, 0.0)), DomainError);
  }
}
