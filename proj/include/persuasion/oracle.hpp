#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "persuasion/model.hpp"
#include "persuasion/private_design.hpp"
#include "persuasion/random.hpp"

// Brute-force ground truth for small instances. Agent sets are bitmasks
// with bit (i-1) standing for agent i.

namespace persuasion::oracle {

inline constexpr int kLp1MaxAgents = 12;
inline constexpr int kPureEqMaxAgents = 16;
inline constexpr int kSamplerTreeMaxAgents = 8;

using Mask = std::uint32_t;

AgentSet mask_to_set(Mask mask);
Mask set_to_mask(std::span<const int> agents);

/// Explicit recommendation law phi(S | theta) over all 2^N sets.
struct FullMechanism {
  int n_agents = 0;
  std::vector<double> given_bad;   // phi(S | 0), indexed by mask
  std::vector<double> given_good;  // phi(S | 1)

  double prob(int theta, Mask set) const { return theta == 0 ? given_bad[set] : given_good[set]; }
  static FullMechanism all_stay(int n_agents);
};

struct Lp1Result {
  FullMechanism mechanism;
  double objective = 0.0;
};

/// Solves the set-form LP directly: 2^(N+1) variables, N move rows, N
/// stay rows, two mass rows. Throws CapacityError for N > 12.
Lp1Result solve_lp1(const Instance& inst);

/// sum_theta mu(theta) sum_S phi(S|theta) W(theta, S).
double lp1_objective(const Instance& inst, const FullMechanism& phi);

struct FullPersuasionReport {
  double move = 0.0;
  double stay = 0.0;
  double mass = 0.0;
  double nonnegativity = 0.0;
  double tol = 0.0;

  double worst() const;
  bool ok() const { return worst() <= tol; }
};

FullPersuasionReport verify_persuasive_full(const Instance& inst, const FullMechanism& phi, double tol);

/// Keeps phi(.|1) and recommends the empty set in the bad state. Throws
/// ContractError when the input is not persuasive at 1e-7.
FullMechanism normalize_mechanism(const Instance& inst, const FullMechanism& phi);

/// p_ik = sum_S phi(S|1) [i in S, |S| = k].
Eigen::MatrixXd marginals_of_mechanism(const FullMechanism& phi);

/// Every pure profile (0/1 per agent) that is a Bayes-Nash equilibrium at
/// belief q, evaluated in closed form. Throws CapacityError for N > 16.
std::vector<std::vector<int>> enumerate_pure_equilibria(const Instance& inst, double q, double tol = 1e-9);

using SetDistribution = std::map<Mask, double>;

/// Exact output law of tille_sample on one column, by expanding every
/// branch of the elimination tree. Throws CapacityError for columns longer
/// than 8.
SetDistribution exact_sampler_distribution(std::span<const double> column, int k);

/// Exact law of the two-stage good-state sampler (size draw, then column).
SetDistribution exact_sampler_distribution(const PrivateMechanism& mech);

/// P(|S| = k, i in S) as an N x N table, from a set law.
Eigen::MatrixXd joint_marginals(const SetDistribution& law, int n_agents);

/// Random instance satisfying every table assumption: F is a mixture of
/// two power laws with exponents in [0,1], costs are sorted uniforms on a
/// random scale, and prior1 is uniform on (0.02, 0.98).
Instance random_instance(int n_agents, Rng& rng);

/// Random marginal table satisfying the cardinality and matroid rows, with
/// some sizes and agents left at zero support.
Eigen::MatrixXd random_valid_marginals(int n_agents, Rng& rng);

}  // namespace persuasion::oracle
