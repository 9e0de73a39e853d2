#include <algorithm>
#include <bit>
#include <stdexcept>

#include "doctest.h"
#include "fixtures.hpp"
#include "persuasion/equilibrium.hpp"
#include "persuasion/errors.hpp"
#include "persuasion/model.hpp"
#include "persuasion/oracle.hpp"
#include "persuasion/random.hpp"

using namespace persuasion;

namespace {

bool has_violation(const ValidationReport& report, const std::string& clause, int index) {
  return std::any_of(report.violations.begin(), report.violations.end(),
                     [&](const Violation& v) { return v.clause == clause && v.index == index; });
}

}  // namespace

TEST_CASE("two-agent instance satisfies every assumption") {
  CHECK(validate_instance(fixtures::two_agent()).ok());
}

TEST_CASE("increasing F is reported at the offending index") {
  const Instance inst(2, 0.5, SharingTable{{1.0, 1.0, 1.2}}, CostTable{{0.0, 0.5, 0.6}});
  const auto report = validate_instance(inst);
  CHECK_FALSE(report.ok());
  CHECK(has_violation(report, "F-decreasing", 1));
}

TEST_CASE("total share that drops is reported as non-increasing") {
  // nF = (0, 1, 0.8, 1.05): the step 1 -> 2 goes down.
  const Instance inst(3, 0.5, SharingTable{{1.0, 1.0, 0.4, 0.35}}, CostTable{{0.0, 0.1, 0.2, 0.3}});
  const auto report = validate_instance(inst);
  CHECK(has_violation(report, "nF-increasing", 1));
}

TEST_CASE("each assumption clause is detected on its own") {
  SUBCASE("prior outside [0,1]") {
    CHECK(has_violation(validate_instance(fixtures::two_agent(1.2)), "prior-range", 0));
  }
  SUBCASE("F(0) differs from F(1)") {
    const Instance inst(2, 0.5, SharingTable{{0.9, 1.0, 0.6}}, CostTable{{0.0, 0.5, 0.6}});
    CHECK(has_violation(validate_instance(inst), "F0-equals-F1", 0));
  }
  SUBCASE("r(0) nonzero") {
    const Instance inst(2, 0.5, SharingTable{{1.0, 1.0, 0.6}}, CostTable{{0.1, 0.5, 0.6}});
    CHECK(has_violation(validate_instance(inst), "r0-zero", 0));
  }
  SUBCASE("decreasing costs") {
    const Instance inst(2, 0.5, SharingTable{{1.0, 1.0, 0.6}}, CostTable{{0.0, 0.6, 0.5}});
    CHECK(has_violation(validate_instance(inst), "r-nondecreasing", 1));
  }
  SUBCASE("concave F") {
    // Differences -0.1, -0.3 are decreasing.
    const Instance inst(3, 0.5, SharingTable{{1.0, 1.0, 0.9, 0.6}}, CostTable{{0.0, 0.1, 0.2, 0.3}});
    CHECK(has_violation(validate_instance(inst), "F-convex", 1));
  }
  SUBCASE("convex total share") {
    // nF = (0, 1, 1.2, 1.65): second difference 0.25 at n = 2.
    const Instance inst(3, 0.5, SharingTable{{1.0, 1.0, 0.6, 0.55}}, CostTable{{0.0, 0.1, 0.2, 0.3}});
    CHECK(has_violation(validate_instance(inst), "nF-concave", 2));
  }
  SUBCASE("negative cost") {
    const Instance inst(2, 0.5, SharingTable{{1.0, 1.0, 0.6}}, CostTable{{0.0, -0.1, 0.6}});
    CHECK(has_violation(validate_instance(inst), "r-nonnegative", 1));
  }
}

TEST_CASE("table length mismatch is a structural error, not a violation") {
  CHECK_THROWS_AS(Instance(2, 0.5, SharingTable{{1.0, 1.0}}, CostTable{{0.0, 0.5, 0.6}}), StructuralError);
  CHECK_THROWS_AS(Instance(2, 0.5, SharingTable{{1.0, 1.0, 0.6}}, CostTable{{0.0, 0.5}}), StructuralError);
  CHECK_THROWS_AS(Instance(0, 0.5, SharingTable{{1.0}}, CostTable{{0.0}}), StructuralError);
}

TEST_CASE("generated power-law instances pass despite round-off") {
  for (double alpha : {0.0, 0.2, 0.5, 0.9, 1.0}) {
    for (auto family : {CostFamily::kConstant, CostFamily::kLinear, CostFamily::kQuadratic}) {
      CHECK(validate_instance(fixtures::power_instance(20, alpha, family, 0.7, 0.8)).ok());
    }
  }
}

TEST_CASE("family generators use the documented scale factors") {
  CHECK(family_costs(3, CostFamily::kConstant, 0.4).values == std::vector<double>{0.0, 0.2, 0.2, 0.2});
  const auto lin = family_costs(3, CostFamily::kLinear, 0.5).values;
  CHECK(lin[2] == doctest::Approx(0.1).epsilon(1e-15));
  const auto quad = family_costs(3, CostFamily::kQuadratic, 1.0).values;
  CHECK(quad[3] == doctest::Approx(0.18).epsilon(1e-15));
  const auto f = power_sharing(4, 0.5).values;
  CHECK(f[0] == 1.0);
  CHECK(f[4] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(parse_cost_family("quadratic") == CostFamily::kQuadratic);
  CHECK(to_string(CostFamily::kLinear) == "linear");
  CHECK_THROWS_AS(parse_cost_family("cubic"), InputError);
}

TEST_CASE("welfare of explicit sets") {
  const Instance e2 = fixtures::two_agent();
  const int one[] = {1};
  const int both[] = {1, 2};
  CHECK(welfare_of_set(e2, 1, one) == doctest::Approx(0.5));
  CHECK(welfare_of_set(e2, 0, std::span<const int>{}) == 0.0);
  CHECK(welfare_of_set(e2, 0, both) == doctest::Approx(-1.1));
  const int bad[] = {3};
  const int dup[] = {1, 1};
  CHECK_THROWS_AS(welfare_of_set(e2, 1, bad), std::out_of_range);
  CHECK_THROWS_AS(welfare_of_set(e2, 1, dup), std::out_of_range);
}

TEST_CASE("welfare of the first n agents") {
  const Instance e2 = fixtures::two_agent();
  CHECK(welfare_count(e2, 0) == 0.0);
  CHECK(welfare_count(e2, 1) == doctest::Approx(0.5));
  CHECK(welfare_count(e2, 2) == doctest::Approx(0.1));
  CHECK_THROWS_AS(welfare_count(e2, 3), std::out_of_range);
}

TEST_CASE("social optimum picks the largest maximizer") {
  SUBCASE("two agents") {
    const auto opt = social_optimum(fixtures::two_agent());
    CHECK(opt.i_star == 1);
    CHECK(opt.value == doctest::Approx(0.8 * 0.5));
  }
  SUBCASE("steep sharing, flat costs") {
    const auto inst = fixtures::power_instance(20, 0.8, CostFamily::kConstant, 0.1, 0.8);
    CHECK(social_optimum(inst).i_star == 6);
  }
  SUBCASE("zero prior gives zero value") {
    CHECK(social_optimum(fixtures::two_agent(0.0)).value == 0.0);
  }
  SUBCASE("ties resolve upward") {
    // welfare_count = (0, 0.5, 0.5): both 1 and 2 maximize.
    const Instance tie(2, 0.5, SharingTable{{1.0, 1.0, 0.75}}, CostTable{{0.0, 0.5, 0.5}});
    CHECK(social_optimum(tie).i_star == 2);
  }
}

TEST_CASE("threshold welfare") {
  const Instance e2 = fixtures::two_agent();
  CHECK(threshold_welfare(e2, 0.7, 1) == doctest::Approx(0.2));
  CHECK(threshold_welfare(e2, 0.3, 0) == 0.0);
  CHECK(threshold_welfare(e2, 1.0, 2) == doctest::Approx(welfare_count(e2, 2)));
  CHECK_THROWS_AS(threshold_welfare(e2, 1.5, 1), std::out_of_range);
}

TEST_CASE("structural properties on random valid instances") {
  Rng rng(20240601);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(12));
    const Instance inst = oracle::random_instance(n, rng);
    REQUIRE(validate_instance(inst).ok());

    // welfare_count is concave.
    for (int k = 1; k < n; ++k) {
      CHECK(welfare_count(inst, k + 1) - 2 * welfare_count(inst, k) + welfare_count(inst, k - 1) <= 1e-12);
    }
    const auto opt = social_optimum(inst);
    // The marginal agent at the optimum still earns a nonnegative share.
    if (opt.i_star > 0) CHECK(inst.share(opt.i_star) >= inst.cost(opt.i_star) - 1e-12);

    // Exhaustive maximum over all sets.
    double best = 0.0;
    for (oracle::Mask s = 0; s < (oracle::Mask{1} << n); ++s) {
      const auto set = oracle::mask_to_set(s);
      best = std::max(best, welfare_of_set(inst, 1, set));
    }
    CHECK(opt.value == doctest::Approx(inst.prior1() * best).epsilon(1e-12));

    // The lowest threshold equilibrium beats adding one more mover.
    for (double q : {0.1, 0.35, 0.6, 0.85, 1.0}) {
      const int lower = underline_i(inst, q);
      if (lower < n) CHECK(threshold_welfare(inst, q, lower) >= threshold_welfare(inst, q, lower + 1) - 1e-12);
    }
  }
}
