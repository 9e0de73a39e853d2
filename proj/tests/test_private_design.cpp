#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "persuasion/errors.hpp"
#include "persuasion/oracle.hpp"
#include "persuasion/private_design.hpp"
#include "persuasion/public_design.hpp"
#include "persuasion/random.hpp"

using namespace persuasion;

TEST_CASE("marginal-form LP dimensions") {
  const auto big = build_lp2(fixtures::power_instance(20, 0.5, CostFamily::kLinear, 0.5, 0.8));
  CHECK(big.num_vars() == 400);
  CHECK(big.num_constraints() == 441);
  const auto one = build_lp2(fixtures::single_agent());
  CHECK(one.num_vars() == 1);
  CHECK(one.num_constraints() == 4);
  const auto two = build_lp2(fixtures::two_agent());
  CHECK(two.num_vars() == 4);
  CHECK(two.num_constraints() == 9);
  CHECK(two.constraints().front().name == "move_1");
  CHECK(two.constraints()[4].name == "cardinality");
  CHECK_THROWS_AS(build_lp2(fixtures::two_agent(0.0)), ZeroPriorError);
}

TEST_CASE("single agent always moves in the good state") {
  const auto mech = solve_private(fixtures::single_agent());
  CHECK(mech.p(1, 1) == doctest::Approx(1.0));
  CHECK(mech.objective == doctest::Approx(0.35));
}

TEST_CASE("two agents: the cheapest agent alone") {
  const auto mech = solve_private(fixtures::two_agent());
  CHECK(mech.objective == doctest::Approx(0.4));
  CHECK(mech.p(1, 1) == doctest::Approx(1.0));
  CHECK(mech.p(2, 1) == doctest::Approx(0.0));
  CHECK(mech.p(1, 2) == doctest::Approx(0.0));
  CHECK(mech.size_dist[1] == doctest::Approx(1.0));
  CHECK(mech.size_dist[0] == doctest::Approx(0.0));
  CHECK(verify_persuasive_marginals(fixtures::two_agent(), mech.marginals, 1e-7).ok());
}

TEST_CASE("zero prior gives the all-stay mechanism") {
  const auto mech = solve_private(fixtures::two_agent(0.0));
  CHECK(mech.objective == 0.0);
  CHECK(mech.size_dist[0] == 1.0);
  CHECK(mech.marginals.isZero());
}

TEST_CASE("optimal values against an independent LP solver") {
  // Reference optima from a separate formulation solved with HiGHS.
  struct Case {
    Instance inst;
    double value;
  };
  const Case cases[] = {
      {fixtures::three_agent(0.95), 0.6675},
      {fixtures::three_agent(0.6), 0.48},
      {fixtures::four_agent(0.7), 0.586306472355},
      {fixtures::four_agent(0.35), 0.310133240806},
      {fixtures::power_instance(20, 0.8, CostFamily::kConstant, 0.1, 0.5), 0.543632578339},
      {fixtures::power_instance(20, 0.8, CostFamily::kConstant, 0.1, 0.8), 0.762728141349},
      {fixtures::power_instance(20, 0.5, CostFamily::kLinear, 0.5, 0.8), 1.17656844554},
      {fixtures::power_instance(20, 0.2, CostFamily::kQuadratic, 1.0, 0.3), 0.757169495517},
  };
  for (const auto& c : cases) {
    REQUIRE(validate_instance(c.inst).ok());
    const auto mech = solve_private(c.inst);
    CHECK(mech.objective == doctest::Approx(c.value).epsilon(1e-9));
    const auto report = verify_persuasive_marginals(c.inst, mech.marginals, 1e-7);
    CHECK(report.ok());
  }
}

TEST_CASE("fast path") {
  SUBCASE("below the bound") {
    const auto inst = fixtures::power_instance(20, 0.8, CostFamily::kConstant, 0.1, 0.2);
    CHECK(persuasion_bound(inst) == doctest::Approx(0.237).epsilon(5e-4 / 0.237));
    const auto fp = fast_path(inst);
    REQUIRE(fp.has_value());
    CHECK(fp->fast_path);
    CHECK(fp->objective == doctest::Approx(0.2 * welfare_count(inst, 6)));
    CHECK(fp->objective == doctest::Approx(0.226193816221).epsilon(1e-10));
    for (int i = 1; i <= 6; ++i) CHECK(fp->p(i, 6) == 1.0);
    CHECK(solve_private(inst).objective == doctest::Approx(fp->objective).epsilon(1e-7));
    CHECK(verify_persuasive_marginals(inst, fp->marginals, 1e-7).ok());
  }
  SUBCASE("above the bound") {
    CHECK_FALSE(fast_path(fixtures::power_instance(20, 0.8, CostFamily::kConstant, 0.1, 0.5)).has_value());
  }
  SUBCASE("two agents") {
    const auto fp = fast_path(fixtures::two_agent());
    REQUIRE(fp.has_value());
    CHECK(fp->objective == doctest::Approx(0.4));
  }
  SUBCASE("everyone moves at the optimum") {
    // i* = N leaves the bound infinite and the fast path unconditional.
    const Instance inst(2, 1.0, SharingTable{{1.0, 1.0, 0.9}}, CostTable{{0.0, 0.1, 0.1}});
    CHECK(social_optimum(inst).i_star == 2);
    CHECK(std::isinf(persuasion_bound(inst)));
    const auto fp = fast_path(inst);
    REQUIRE(fp.has_value());
    CHECK(fp->objective == doctest::Approx(solve_private(inst).objective));
  }
}

TEST_CASE("persuasion bound spot values") {
  CHECK(persuasion_bound(fixtures::power_instance(20, 0.8, CostFamily::kConstant, 0.2, 0.5)) ==
        doctest::Approx(0.241).epsilon(5e-4 / 0.241));
  CHECK(persuasion_bound(fixtures::power_instance(20, 0.6, CostFamily::kLinear, 0.1, 0.5)) ==
        doctest::Approx(0.464).epsilon(5e-4 / 0.464));
  CHECK(persuasion_bound(fixtures::two_agent()) == doctest::Approx(1.0));
}

TEST_CASE("verification of hand-made marginal tables") {
  const Instance e2 = fixtures::two_agent();
  SUBCASE("all-stay violates the stay row of the cheap agent") {
    const auto report = verify_persuasive_marginals(e2, Eigen::MatrixXd::Zero(2, 2), 1e-7);
    CHECK(report.move == 0.0);
    CHECK(report.matroid == 0.0);
    CHECK(report.cardinality == 0.0);
    // 0.8 (1 - 0.5) - 0.2 * 0.5 relative to the prior-scaled row.
    CHECK(report.stay > 0.0);
    CHECK_FALSE(report.ok());
  }
  SUBCASE("oversized cardinality") {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(2, 2);
    p(0, 0) = 2.0;
    p(1, 0) = 1.0;
    const auto report = verify_persuasive_marginals(e2, p, 1e-7);
    CHECK(report.cardinality == doctest::Approx(2.0));
    CHECK(report.matroid == 0.0);
  }
  SUBCASE("matroid row") {
    // k = 2 column with one agent only: 2 p_12 > p_12.
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(2, 2);
    p(0, 1) = 0.5;
    CHECK(verify_persuasive_marginals(e2, p, 1e-7).matroid > 0.0);
  }
  SUBCASE("negative entry") {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(2, 2);
    p(0, 0) = 1.0;
    p(1, 1) = -0.1;
    CHECK(verify_persuasive_marginals(e2, p, 1e-7).nonnegativity == doctest::Approx(0.1));
  }
}

TEST_CASE("derived fields of assembled mechanisms") {
  const Instance inst = fixtures::three_agent(0.95);
  const auto mech = solve_private(inst);
  double total = mech.size_dist[0];
  for (int k = 1; k <= 3; ++k) {
    total += mech.size_dist[k];
    if (mech.size_dist[k] > 0.0) CHECK(mech.cond_marginals.col(k - 1).sum() == doctest::Approx(k));
  }
  CHECK(total == doctest::Approx(1.0));
  CHECK(private_objective(inst, mech.marginals) == doctest::Approx(mech.objective));
  CHECK_THROWS_AS(assemble_private(inst, Eigen::MatrixXd::Zero(2, 2)), StructuralError);
}

TEST_CASE("random instances: fast path agreement and dominance chain") {
  Rng rng(4242);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(9));
    const Instance inst = oracle::random_instance(n, rng);
    const auto mech = solve_private(inst);
    CHECK(verify_persuasive_marginals(inst, mech.marginals, 1e-7).ok());
    if (auto fp = fast_path(inst)) CHECK(fp->objective == doctest::Approx(mech.objective).epsilon(1e-7));
    const double social = social_optimum(inst).value;
    const double pub = solve_public(inst).objective;
    CHECK(mech.objective <= social + 1e-7);
    CHECK(pub <= mech.objective + 1e-7);
  }
}
