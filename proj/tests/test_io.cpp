#include <string>

#include "doctest.h"
#include "fixtures.hpp"
#include "persuasion/errors.hpp"
#include "persuasion/io.hpp"
#include "persuasion/private_design.hpp"
#include "persuasion/public_design.hpp"

using namespace persuasion;

namespace {

const char* kE2 = R"({
  "n_agents": 2, "prior1": 0.8,
  "sharing": {"family": "table", "values": [1.0, 1.0, 0.6]},
  "costs": {"family": "table", "values": [0.0, 0.5, 0.6]}
})";

}  // namespace

TEST_CASE("instance documents: table and generator forms") {
  const Instance e2 = io::parse_instance(kE2);
  CHECK(e2.n_agents() == 2);
  CHECK(e2.prior1() == 0.8);
  CHECK(e2.sharing().values == std::vector<double>{1.0, 1.0, 0.6});
  CHECK(e2.costs().values == std::vector<double>{0.0, 0.5, 0.6});

  const Instance gen = io::parse_instance(R"({"n_agents": 20, "prior1": 0.8,
    "sharing": {"family": "power", "alpha": 0.5}, "costs": {"family": "linear", "coeff": 0.5}})");
  const Instance ref = fixtures::power_instance(20, 0.5, CostFamily::kLinear, 0.5, 0.8);
  CHECK(gen.sharing().values == ref.sharing().values);
  CHECK(gen.costs().values == ref.costs().values);
  CHECK(io::fingerprint(gen) == io::fingerprint(ref));
}

TEST_CASE("malformed instance documents are input errors") {
  const char* bad[] = {
      "{",
      "[]",
      R"({"prior1": 0.8, "sharing": {"family": "power", "alpha": 0.5}, "costs": {"family": "linear", "coeff": 0.5}})",
      R"({"n_agents": 2.5, "prior1": 0.8, "sharing": {"family": "power", "alpha": 0.5}, "costs": {"family": "linear", "coeff": 0.5}})",
      R"({"n_agents": 0, "prior1": 0.8, "sharing": {"family": "power", "alpha": 0.5}, "costs": {"family": "linear", "coeff": 0.5}})",
      R"({"n_agents": 2, "prior1": "high", "sharing": {"family": "power", "alpha": 0.5}, "costs": {"family": "linear", "coeff": 0.5}})",
      R"({"n_agents": 2, "prior1": 0.8, "sharing": {"family": "exp", "alpha": 0.5}, "costs": {"family": "linear", "coeff": 0.5}})",
      R"({"n_agents": 2, "prior1": 0.8, "sharing": {"family": "power", "alpha": 0.5}, "costs": {"family": "cubic", "coeff": 0.5}})",
      R"({"n_agents": 2, "prior1": 0.8, "sharing": {"family": "table", "values": [1, 1]}, "costs": {"family": "linear", "coeff": 0.5}})",
      R"({"n_agents": 2, "prior1": 0.8, "sharing": {"family": "power"}, "costs": {"family": "linear", "coeff": 0.5}})",
  };
  for (const char* text : bad) CHECK_THROWS_AS(io::parse_instance(text), InputError);
  CHECK_THROWS_AS(io::load_instance("/nonexistent/instance.json"), InputError);
}

TEST_CASE("fingerprints are canonical and sensitive") {
  const Instance e2 = io::parse_instance(kE2);
  // FNV-1a 64 of the sorted compact JSON, computed independently.
  CHECK(io::fingerprint(e2) == "14fe571c0d2a442a");
  CHECK(io::instance_to_json(e2).dump() ==
        R"({"costs":{"family":"table","values":[0.0,0.5,0.6]},"n_agents":2,"prior1":0.8,)"
        R"("sharing":{"family":"table","values":[1.0,1.0,0.6]}})");
  CHECK(io::fingerprint(fixtures::two_agent()) == io::fingerprint(e2));
  CHECK(io::fingerprint(fixtures::two_agent(0.7)) != io::fingerprint(e2));
  // Round trip through the canonical form.
  CHECK(io::fingerprint(io::parse_instance(io::instance_to_json(e2).dump())) == io::fingerprint(e2));
}

TEST_CASE("tidy rounds to fifteen significant digits") {
  CHECK(io::tidy(0.1 + 0.2) == 0.3);
  CHECK(io::tidy(1.0 / 3.0) == 0.333333333333333);
  CHECK(io::tidy(0.0) == 0.0);
  CHECK(io::tidy(-2.5) == -2.5);
}

TEST_CASE("grid configs") {
  const auto full = io::parse_sweep_config(R"({"n_agents": 8, "alphas": [0.3], "cost_families": ["linear", "constant"],
    "r_values": [0.1, 0.2], "mu1_values": [0.5]})");
  CHECK(full.n_agents == 8);
  CHECK(full.families == std::vector<CostFamily>{CostFamily::kLinear, CostFamily::kConstant});
  CHECK(full.r_values == std::vector<double>{0.1, 0.2});

  const auto over = io::parse_sweep_config(R"({"preset": "cost-sweep", "alphas": [0.9]})");
  CHECK(over.alphas == std::vector<double>{0.9});
  CHECK(over.r_values.size() == 10);

  CHECK_THROWS_AS(io::parse_sweep_config(R"({"alphas": [0.3]})"), InputError);
  CHECK_THROWS_AS(io::parse_sweep_config(R"({"preset": "nonexistent"})"), InputError);
  CHECK_THROWS_AS(io::parse_sweep_config(R"({"preset": "cost-sweep", "cost_families": ["exotic"]})"), InputError);
  CHECK_THROWS_AS(io::parse_sweep_config(R"({"preset": "cost-sweep", "alphas": "many"})"), InputError);
  CHECK_THROWS_AS(io::parse_sweep_config("3"), InputError);
}

TEST_CASE("mechanism documents") {
  const Instance e2 = fixtures::two_agent();
  const auto priv = io::private_document(e2, solve_private(e2));
  CHECK(priv["toolkit_version"] == "0.1.0");
  CHECK(priv["kind"] == "private");
  CHECK(priv["instance_fingerprint"] == io::fingerprint(e2));
  CHECK(priv["objective"].get<double>() == doctest::Approx(0.4));
  CHECK(priv["marginals"].size() == 2);
  CHECK(priv["marginals"][0][0].get<double>() == doctest::Approx(1.0));
  CHECK(priv["size_dist"].size() == 3);

  const auto pub = io::public_document(e2, solve_public(e2));
  CHECK(pub["kind"] == "public");
  CHECK(pub["rows"].size() == 6);
  CHECK(pub["rows"][2]["posterior"].is_null());
  CHECK(pub["support"] == nlohmann::json::array({0, 1}));
  CHECK(pub.dump() == io::public_document(e2, solve_public(e2)).dump());
}
