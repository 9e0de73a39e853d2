#include <algorithm>

#include "doctest.h"
#include "fixtures.hpp"
#include "persuasion/bench.hpp"
#include "persuasion/equilibrium.hpp"
#include "persuasion/oracle.hpp"
#include "persuasion/private_design.hpp"
#include "persuasion/public_design.hpp"
#include "persuasion/random.hpp"

using namespace persuasion;

namespace {

// Best public mechanism that splits the prior into two posteriors on a
// grid, each followed by the lowest threshold equilibrium.
double two_posterior_search(const Instance& inst, int steps) {
  const double mu = inst.prior1();
  auto value = [&](double q) { return threshold_welfare(inst, q, underline_i(inst, q)); };
  double best = value(mu);
  for (int a = 0; a <= steps; ++a) {
    const double lo = mu * a / steps;
    for (int b = 0; b <= steps; ++b) {
      const double hi = mu + (1.0 - mu) * b / steps;
      if (hi <= lo) continue;
      const double w = (hi - mu) / (hi - lo);  // mass on the low posterior
      best = std::max(best, w * value(lo) + (1.0 - w) * value(hi));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("public LP dimensions") {
  const auto big = build_public_lp(fixtures::power_instance(20, 0.5, CostFamily::kLinear, 0.5, 0.8));
  CHECK(big.num_vars() == 42);
  CHECK(big.num_constraints() == 42);
  CHECK(build_public_lp(fixtures::single_agent()).num_vars() == 4);
  CHECK(build_public_lp(fixtures::single_agent()).num_constraints() == 4);
  CHECK(build_public_lp(fixtures::two_agent()).num_vars() == 6);
  CHECK(build_public_lp(fixtures::two_agent()).num_constraints() == 6);
}

TEST_CASE("two agents: state revelation is optimal") {
  const Instance e2 = fixtures::two_agent();
  const auto mech = solve_public(e2);
  CHECK(mech.objective == doctest::Approx(0.4));
  CHECK(mech.support() == std::vector<int>{0, 1});
  CHECK(mech.weight(1, 1) == doctest::Approx(0.8));
  CHECK(mech.weight(0, 0) == doctest::Approx(0.2));
  CHECK(mech.posteriors[0].value() == doctest::Approx(0.0));
  CHECK(mech.posteriors[1].value() == doctest::Approx(1.0));
  CHECK_FALSE(mech.posteriors[2].has_value());
  CHECK(verify_public(e2, mech, 1e-7).ok());
}

TEST_CASE("zero prior sends everybody home") {
  const auto mech = solve_public(fixtures::two_agent(0.0));
  CHECK(mech.objective == doctest::Approx(0.0).scale(1.0));
  CHECK(mech.weight(0, 0) == doctest::Approx(1.0));
  CHECK(mech.support() == std::vector<int>{0});
}

TEST_CASE("optimal values against an independent LP solver") {
  struct Case {
    Instance inst;
    double value;
  };
  const Case cases[] = {
      {fixtures::two_agent(0.3), 0.15},
      {fixtures::three_agent(0.6), 0.444},
      {fixtures::three_agent(0.95), 0.6175},
      {fixtures::four_agent(0.7), 0.533217473269},
      {fixtures::four_agent(0.35), 0.266608736634},
      {fixtures::power_instance(20, 0.8, CostFamily::kConstant, 0.1, 0.5), 0.410282101513},
      {fixtures::power_instance(20, 0.5, CostFamily::kLinear, 0.5, 0.8), 1.052477059004},
  };
  for (const auto& c : cases) {
    const auto mech = solve_public(c.inst);
    CHECK(mech.objective == doctest::Approx(c.value).epsilon(1e-9));
    CHECK(verify_public(c.inst, mech, 1e-7).ok());
    CHECK(mech.support().size() <= 2);
  }
}

TEST_CASE("threshold LP matches a direct search over two-posterior splits") {
  for (const Instance& inst : {fixtures::two_agent(0.3), fixtures::three_agent(0.6), fixtures::four_agent(0.35)}) {
    const double lp = solve_public(inst).objective;
    const double grid = two_posterior_search(inst, 400);
    CHECK(grid <= lp + 1e-9);
    CHECK(grid >= lp - 5e-3);
  }
}

TEST_CASE("verification flags broken hand-made mechanisms") {
  const Instance e2 = fixtures::two_agent();
  SUBCASE("bad-state mass on the two-mover signal") {
    // Move row of signal 2: 0.8 (F(2) - r(2)) - 0.2 r(2) = -0.12.
    const auto mech = assemble_public(e2, {0.0, 0.0, 0.2}, {0.0, 0.0, 0.8});
    const auto report = verify_public(e2, mech, 1e-7);
    CHECK(report.move == doctest::Approx(0.12));
    CHECK_FALSE(report.ok());
  }
  SUBCASE("posterior too high for its threshold") {
    // Signal 0 at posterior 0.8: the cheap agent strictly wants to move.
    const auto mech = assemble_public(e2, {0.2, 0.0, 0.0}, {0.8, 0.0, 0.0});
    const auto report = verify_public(e2, mech, 1e-7);
    CHECK(report.stay > 0.0);
    REQUIRE_FALSE(report.issues.empty());
    CHECK(report.issues.front().signal == 0);
  }
  SUBCASE("mass mismatch") {
    const auto mech = assemble_public(e2, {0.1, 0.0, 0.0}, {0.0, 0.8, 0.0});
    CHECK(verify_public(e2, mech, 1e-7).mass == doctest::Approx(0.1));
  }
}

TEST_CASE("random instances: vertex support, dominance, round trip") {
  Rng rng(606);
  for (int trial = 0; trial < 80; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(15));
    const Instance inst = oracle::random_instance(n, rng);
    const auto mech = solve_public(inst);
    CHECK(mech.support().size() <= 2);
    CHECK(verify_public(inst, mech, 1e-7).ok());
    CHECK(mech.objective >= std::max(bench::no_info_welfare(inst), bench::full_info_welfare(inst)) - 1e-7);
    CHECK(mech.objective <= solve_private(inst).objective + 1e-7);
  }
}
