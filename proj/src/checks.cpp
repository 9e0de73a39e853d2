#include "persuasion/checks.hpp"

#include <algorithm>
#include <cmath>

#include "persuasion/equilibrium.hpp"
#include "persuasion/errors.hpp"
#include "persuasion/move_sampler.hpp"
#include "persuasion/oracle.hpp"
#include "persuasion/private_design.hpp"
#include "persuasion/random.hpp"

namespace persuasion::oracle {

namespace {

void check_trials(int n_agents, int trials) {
  if (n_agents < 1) throw ContractError("need at least one agent");
  if (trials < 0) throw ContractError("trial count must be nonnegative");
}

}  // namespace

std::vector<Lp1Lp2Trial> check_lp1_vs_lp2(int n_agents, int trials, std::uint64_t seed) {
  check_trials(n_agents, trials);
  const Rng root(seed);
  std::vector<Lp1Lp2Trial> out;
  for (int t = 0; t < trials; ++t) {
    Rng rng = root.split(static_cast<std::uint64_t>(t));
    const Instance inst = random_instance(n_agents, rng);
    const Lp1Result lp1 = solve_lp1(inst);
    const PrivateMechanism lp2 = solve_private(inst);
    const FullMechanism normalized = normalize_mechanism(inst, lp1.mechanism);
    const auto marg = marginals_of_mechanism(normalized);
    const bool persuasive = verify_persuasive_marginals(inst, marg, 1e-7).ok();
    out.push_back({inst.prior1(), lp1.objective, lp2.objective, std::abs(lp1.objective - lp2.objective), persuasive});
  }
  return out;
}

std::vector<SamplerTrial> check_sampler_exact(int n_agents, int trials, std::uint64_t seed) {
  check_trials(n_agents, trials);
  const Rng root(seed);
  std::vector<SamplerTrial> out;
  for (int t = 0; t < trials; ++t) {
    Rng rng = root.split(static_cast<std::uint64_t>(t));
    const Instance inst = random_instance(n_agents, rng);
    const PrivateMechanism mech = assemble_private(inst, random_valid_marginals(n_agents, rng));
    const SetDistribution law = exact_sampler_distribution(mech);
    const Eigen::MatrixXd joint = joint_marginals(law, n_agents);
    double mass = 0.0;
    for (const auto& [set, prob] : law) mass += prob;
    out.push_back({(joint - mech.marginals).cwiseAbs().maxCoeff(), std::abs(mass - 1.0)});
  }
  return out;
}

MonteCarloResult check_sampler_monte_carlo(int n_agents, long draws, std::uint64_t seed, double z) {
  if (draws < 1) throw ContractError("need at least one draw");
  Rng rng(seed);
  Rng table_rng = rng.split(0);
  Rng draw_rng = rng.split(1);
  const Instance inst = random_instance(n_agents, table_rng);
  const PrivateMechanism mech = assemble_private(inst, random_valid_marginals(n_agents, table_rng));
  const MoveSampler sampler(mech);

  std::vector<long> counts(static_cast<std::size_t>(n_agents) * n_agents, 0);
  for (long d = 0; d < draws; ++d) {
    const AgentSet s = sampler.draw(draw_rng);
    if (s.empty()) continue;
    const int k = static_cast<int>(s.size());
    for (int agent : s) ++counts[static_cast<std::size_t>(agent - 1) * n_agents + (k - 1)];
  }

  MonteCarloResult result;
  const double total = static_cast<double>(draws);
  for (int i = 0; i < n_agents; ++i) {
    for (int k = 0; k < n_agents; ++k) {
      const double p = mech.marginals(i, k);
      const long c = counts[static_cast<std::size_t>(i) * n_agents + k];
      if (!(p > 0.0)) {
        result.phantom += c > 0 ? 1 : 0;
        continue;
      }
      ++result.cells;
      const double se = std::sqrt(p * (1.0 - p) / total);
      const double dev = std::abs(c / total - p);
      // p = 1 has zero spread; any deviation there is a failure.
      const double score = se > 0.0 ? dev / se : (dev > 0.0 ? INFINITY : 0.0);
      result.worst_z = std::max(result.worst_z, score);
      result.within += score <= z ? 1 : 0;
    }
  }
  return result;
}

std::vector<ThresholdBoundTrial> check_threshold_bound(int n_agents, int trials, std::uint64_t seed, int grid_points) {
  check_trials(n_agents, trials);
  if (grid_points < 2) throw ContractError("q grid needs at least two points");
  const Rng root(seed);
  std::vector<ThresholdBoundTrial> out;
  for (int t = 0; t < trials; ++t) {
    Rng rng = root.split(static_cast<std::uint64_t>(t));
    const Instance inst = random_instance(n_agents, rng);
    ThresholdBoundTrial trial;
    for (int g = 0; g < grid_points; ++g) {
      const double q = static_cast<double>(g) / (grid_points - 1);
      const int lower = underline_i(inst, q);
      const double bound = threshold_welfare(inst, q, lower);
      for (const auto& pure : enumerate_pure_equilibria(inst, q)) {
        StrategyProfile profile{std::vector<double>(pure.begin(), pure.end()), q};
        const int movers = static_cast<int>(std::count(pure.begin(), pure.end(), 1));
        const double excess = profile_welfare(inst, profile) - bound;
        ++trial.equilibria;
        trial.worst_excess = std::max(trial.worst_excess, excess);
        if (excess > 1e-9 || movers < lower) ++trial.failures;
      }
    }
    out.push_back(trial);
  }
  return out;
}

}  // namespace persuasion::oracle
