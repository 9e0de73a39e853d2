#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "persuasion/model.hpp"

namespace persuasion {

/// Independent move probabilities under a common belief q = P(theta = 1).
struct StrategyProfile {
  std::vector<double> probs;  // probs[i-1] for agent i
  double belief = 0.0;
};

/// Threshold t in [0, N]: agents below ceil(t) move, agent ceil(t) moves
/// with probability t + 1 - ceil(t), the rest stay.
struct ThresholdProfile {
  double t = 0.0;
};

StrategyProfile threshold_profile(const Instance& inst, double q, ThresholdProfile threshold);

/// max{i in 0..N : q F(i) - r(i) > 0}, 0 when no index qualifies.
int underline_i(const Instance& inst, double q);
/// max{i in 0..N : q F(i) - r(i) >= 0}.
int overline_i(const Instance& inst, double q);

bool is_threshold_equilibrium(const Instance& inst, double q, double t);

/// Law of a sum of independent Bernoulli(p_j), via the O(n^2) convolution
/// recurrence. Entry m is P(sum = m).
std::vector<double> poisson_binomial(std::span<const double> probs);

/// q E[F(1 + movers among the others)] - r(i).
double move_utility(const Instance& inst, const StrategyProfile& profile, int agent);

/// Bayes-Nash check: movers need utility >= -tol, stayers <= tol, mixers
/// |utility| <= tol.
bool is_equilibrium(const Instance& inst, const StrategyProfile& profile, double tol = 1e-8);

/// q E[n F(n)] - sum_i p_i r(i) with n the random mover count.
double profile_welfare(const Instance& inst, const StrategyProfile& profile);

/// Solves the two indifference conditions for a pair i < j that mixes
/// while every other agent plays `background` (0 or 1; the entries for i
/// and j are ignored). Returns (p_i, p_j) when both lie strictly inside
/// (0, 1). Throws ContractError when the background count leaves no room
/// for F(m+2) or is not pure, and InvariantViolation on a zero
/// denominator F(m+1) - F(m+2).
std::optional<std::pair<double, double>> mixed_pair_solve(const Instance& inst, double q, int i, int j,
                                                          std::span<const double> background);

}  // namespace persuasion
