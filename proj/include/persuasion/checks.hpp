#pragma once

#include <cstdint>
#include <vector>

// Randomized cross-checks of the solvers against the brute-force oracles.
// Trial t of a run with seed s draws from Rng(s).split(t), so any single
// trial can be replayed in isolation.

namespace persuasion::oracle {

struct Lp1Lp2Trial {
  double prior1;
  double lp1;      // set-form optimum
  double lp2;      // prior1 * marginal-form optimum
  double gap;      // |lp1 - lp2|
  bool persuasive; // marginals of the set-form optimum pass the marginal-form rows
};

std::vector<Lp1Lp2Trial> check_lp1_vs_lp2(int n_agents, int trials, std::uint64_t seed);

struct SamplerTrial {
  double max_error;  // worst |P(|S|=k, i in S) - p_ik| over all cells
  double mass_error; // |total probability - 1|
};

std::vector<SamplerTrial> check_sampler_exact(int n_agents, int trials, std::uint64_t seed);

struct MonteCarloResult {
  int cells = 0;         // cells with 0 < p_ik
  int within = 0;        // of those, within 4 standard errors
  int phantom = 0;       // cells with p_ik = 0 that were ever drawn
  double worst_z = 0.0;  // largest |count/draws - p| / se
};

MonteCarloResult check_sampler_monte_carlo(int n_agents, long draws, std::uint64_t seed, double z = 4.0);

struct ThresholdBoundTrial {
  int equilibria = 0;    // pure equilibria enumerated over the q grid
  int failures = 0;      // equilibria breaking the welfare or mover bound
  double worst_excess = 0.0;  // max(welfare - W(q, underline_i(q)))
};

/// q runs over `grid_points` equally spaced values in [0, 1].
std::vector<ThresholdBoundTrial> check_threshold_bound(int n_agents, int trials, std::uint64_t seed, int grid_points = 21);

}  // namespace persuasion::oracle
