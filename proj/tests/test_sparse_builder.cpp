#include <doctest.h>

#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "sparsepot/errors.hpp"
#include "sparsepot/schrodinger_1d.hpp"
#include "sparsepot/sparse_builder.hpp"

using namespace sparsepot;

namespace {

TargetSequence desk_targets() {
  TargetSequence t;
  t.zetas = {cplx(1.0, 0.08), cplx(1.3, 0.06), cplx(0.8, 0.05)};
  return t;
}

EnvelopeParams paper_params() {
  EnvelopeParams P;
  P.d = 1;
  P.q = 2.0;
  P.p = 4.0;
  P.alpha = 1.0;
  P.gamma = 1.0;
  return P;
}

}  // namespace

TEST_SUITE("sparse_builder") {
  TEST_CASE("sequence condition values") {
    CHECK(sequence_condition_value(TargetSequence{}) == 0.0);
    TargetSequence one;
    one.zetas = {cplx(1.0, 0.1)};
    const double r = std::abs(cplx(1.0, 0.1));
    const double expect = std::sqrt(std::sqrt(r) * 0.1 * std::abs(std::log(0.1 / r)));
    CHECK(sequence_condition_value(one) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(sequence_condition_value(one) == doctest::Approx(0.481).epsilon(1e-3));

    const double acc = sequence_condition_value(
        [](long n) { return cplx(1.0, std::ldexp(1.0, -int(n))); }, 1, 2.0);
    CHECK(std::isfinite(acc));
    CHECK(acc > 0.0);
    CHECK_THROWS_AS(sequence_condition_value([](long n) { return cplx(1.0, 1.0 / double(n)); }, 1, 1.5,
                                             2000),
                    DomainError);
  }

  TEST_CASE("target validation and parsing") {
    TargetSequence t = desk_targets();
    CHECK_NOTHROW(t.validate(0.2));
    t.zetas.push_back(cplx(1.0, 0.07));
    CHECK_THROWS_AS(t.validate(0.2), DomainError);
    TargetSequence low;
    low.q = 1.0;
    low.zetas = {cplx(1.0, 0.1)};
    CHECK_THROWS_AS(low.validate(0.2), DomainError);

    const TargetSequence p = TargetSequence::from_json(R"({"zetas":[[1,0.1],[1,0.05]],"q":3})");
    CHECK(p.zetas.size() == 2);
    CHECK(p.q == 3.0);
    CHECK(p.gamma == 1.0);
    CHECK_THROWS_AS(TargetSequence::from_json("not json"), SchemaError);
    try {
      (void)TargetSequence::from_json(R"({"zetas":[[1,0.1],[1]]})");
      FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
      CHECK(e.index() == 1);
    }
  }

  TEST_CASE("faithful gaps follow the power law exactly") {
    TargetSequence t;
    t.zetas = {cplx(1.0, 0.1)};
    ChooseOptions o;
    o.mode = BuildMode::faithful;
    const GapChoice g = choose_L(t, paper_params(), o);
    CHECK(g.kappa_tilde == doctest::Approx(51.0));
    CHECK(g.log_L[0] / std::log(10.0) == doctest::Approx(51.0).epsilon(1e-12));
    CHECK_FALSE(g.raised[0]);
    CHECK(g.rule_lhs[0] >= g.rule_rhs[0]);

    t.zetas.push_back(cplx(1.0, 0.05));
    const GapChoice h = choose_L(t, paper_params(), o);
    CHECK((h.log_L[1] - h.log_L[0]) == doctest::Approx(51.0 * std::log(2.0)).epsilon(1e-12));
  }

  TEST_CASE("desk gaps are monotone and satisfy the separation rule") {
    const GapChoice g = choose_L(desk_targets(), EnvelopeParams{}, ChooseOptions{});
    REQUIRE(g.L.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(g.rule_lhs[i] >= g.rule_rhs[i] * (1.0 - 1e-12));
      if (i > 0) CHECK(g.L.at(i + 1) >= g.L.at(i));
    }
  }

  TEST_CASE("assembly places supports exactly L apart") {
    TargetSequence t;
    t.zetas = {cplx(1.0, 0.1), cplx(1.0, 0.05)};
    const SparseAssembly a = assemble_sparse(t, SeparationSequence::finite({37.5, 80.0}));
    REQUIRE(a.gaps.size() == 1);
    CHECK(a.gaps[0] == doctest::Approx(37.5).epsilon(1e-14));
    CHECK(a.centers[0] == 0.0);
    CHECK(a.potential.size() == 2);
    CHECK_THROWS_AS(assemble_sparse(desk_targets(), SeparationSequence::finite({5.0})), DomainError);
  }

  TEST_CASE("desk build: every target is found inside its disk") {
    const SparseBuild b = build_sparse(desk_targets(), EnvelopeParams{}, ChooseOptions{}, true, 2);
    REQUIRE(b.assembled);
    REQUIRE(b.disks.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CAPTURE(i);
      CHECK(b.disks[i].error.empty());
      CHECK(b.disks[i].found);
      CHECK(b.disks[i].winding == 1);
      REQUIRE(b.disks[i].zeros.size() == 1);
      CHECK(std::abs(b.disks[i].zeros[0].location - desk_targets().zetas[i]) < 0.01);
    }
    for (std::size_t i = 0; i + 1 < b.assembly.gaps.size(); ++i) {
      CHECK(b.assembly.gaps[i] == doctest::Approx(b.gaps.L.at(i + 1)).epsilon(1e-12));
    }
    for (std::size_t i = 0; i + 1 < b.assembly.sparsity.size(); ++i) {
      CHECK(b.assembly.sparsity[i + 1] < b.assembly.sparsity[i]);
    }
    // The L^q norm is computed piecewise; recompute it from the bumps.
    double acc = 0.0;
    for (const BumpReport& r : b.assembly.bumps) acc += std::pow(bump_norm_lq(r.bump, 2.0), 2.0);
    CHECK(b.assembly.norm_lq == doctest::Approx(std::sqrt(acc)).epsilon(1e-12));
    CHECK(b.assembly.norm_lq / b.assembly.condition_value < 10.0);
    CHECK(lp_lq_norm(b.assembly.potential, 2.0, 2.0) == doctest::Approx(b.assembly.norm_lq));
  }

  TEST_CASE("faithful build stops before assembly") {
    TargetSequence t;
    t.zetas = {cplx(1.0, 0.1)};
    ChooseOptions o;
    o.mode = BuildMode::faithful;
    const SparseBuild b = build_sparse(t, paper_params(), o);
    CHECK_FALSE(b.assembled);
    CHECK_FALSE(b.warnings.empty());
    const auto doc = nlohmann::json::parse(build_report_json(b));
    CHECK(doc["mode"] == "faithful");
    CHECK(doc["per_n"][0]["x"].is_null());
    CHECK(doc["per_n"][0]["log10_L"].get<double>() == doctest::Approx(51.0));
  }

  TEST_CASE("report fields") {
    const SparseBuild b = build_sparse(desk_targets(), EnvelopeParams{}, ChooseOptions{}, true, 1);
    const auto doc = nlohmann::json::parse(build_report_json(b));
    for (const char* k : {"mode", "delta", "q", "d", "gamma", "kappa_tilde", "targets", "per_n", "norms",
                          "sep_table", "warnings"}) {
      CHECK(doc.contains(k));
    }
    REQUIRE(doc["per_n"].size() == 3);
    for (const auto& e : doc["per_n"]) {
      for (const char* k : {"n", "zeta", "log10_L", "log_eps_inv", "log_delta", "rule_lhs", "rule_rhs",
                            "raised", "R", "V0", "residual", "x", "decay_ratio", "found", "winding", "zeros"}) {
        CHECK(e.contains(k));
      }
    }
    CHECK(doc["norms"]["lq_over_condition"].is_number());
  }

  TEST_CASE("empty target list builds an empty potential") {
    const SparseBuild b = build_sparse(TargetSequence{}, EnvelopeParams{}, ChooseOptions{});
    CHECK(b.assembled);
    CHECK(b.assembly.potential.empty());
    const auto doc = nlohmann::json::parse(build_report_json(b));
    CHECK(doc["per_n"].empty());
    CHECK(doc["norms"]["lq_over_condition"].is_null());
  }

  TEST_CASE("magnitude check: single bump sharpness") {
    std::vector<double> scaled;
    for (double eps : {0.05, 0.02, 0.01}) {
      const BumpReport r = construct_bump(cplx(1.0, eps));
      const auto m = magnitude_check({r.zeta}, PiecewisePotential::from_bump(r.bump), 2.0, 1);
      REQUIRE(m.size() == 1);
      CHECK(m[0].large_q_form);
      CHECK_FALSE(m[0].flagged);
      scaled.push_back(m[0].ratio * std::log(1.0 / eps));
    }
    const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
    CHECK(*hi / *lo < 2.0);
  }

  TEST_CASE("magnitude check: real well reduces to the classical shape") {
    const PiecewisePotential pot({{-1.0, 1.0, -10.0}});
    const auto levels = oracle::square_well_levels(-10.0, 1.0);
    std::vector<cplx> eigs(levels.begin(), levels.end());
    for (const MagnitudeEntry& e : magnitude_check(eigs, pot, 2.0, 1)) {
      CHECK(e.ratio == doctest::Approx(e.ratio_small_q).epsilon(1e-14));
    }
  }

  TEST_CASE("magnitude check: scaling invariance") {
    const BumpReport r = construct_bump(cplx(1.0, 0.05));
    const PiecewisePotential pot = PiecewisePotential::from_bump(r.bump);
    const double base = magnitude_check({r.zeta}, pot, 2.0, 1)[0].ratio;
    for (double lam : {0.5, 2.0}) {
      const double s = magnitude_check({lam * lam * r.zeta}, pot.scaled(lam), 2.0, 1)[0].ratio;
      CHECK(s == doctest::Approx(base).epsilon(1e-12));
    }
    CHECK_THROWS_AS(magnitude_check({r.zeta}, pot, 0.5, 1), DomainError);
  }
}
