#pragma once

#include <optional>
#include <span>
#include <vector>

#include "persuasion/model.hpp"
#include "persuasion/private_design.hpp"
#include "persuasion/random.hpp"

namespace persuasion {

/// Capped proportional inclusion probabilities for a sample of size n.
///
/// Entries start at n w_i / sum(w); any that reach 1 are pinned at exactly
/// 1 and the rest are recomputed with the multiplier reduced by the number
/// pinned, until nothing exceeds 1. Entries within 1e-12 of 1 count as
/// reaching it. Zero weights map to 0.
///
/// Throws ContractError on negative weights or n outside 0..support size,
/// and InvariantViolation if the capping fails to settle.
std::vector<double> capped_inclusion(std::span<const double> weights, int n);

/// Elimination law over the surviving pool for one step.
///
/// With `pi_prev` empty (the first step) r_i = 1 - pi_now_i, otherwise
/// r_i = 1 - pi_now_i / pi_prev_i. The result must sum to 1 within 1e-9;
/// anything else means the caller passed a pool that does not match the
/// step and raises ContractError.
std::vector<double> elimination_probs(std::span<const double> pi_now, std::span<const double> pi_prev = {});

/// One step of the elimination procedure, kept for inspection.
struct EliminationStep {
  int n = 0;                       // target pool size after the step
  std::vector<double> pi;          // pi(i | n) over the support
  std::vector<double> elim_probs;  // r_{n i} over the pool that was reduced
};

/// Inclusion probabilities pi(.|n) for n = k..M over the M positive-weight
/// entries of one column (pi(.|M) = 1).
class InclusionLadder {
 public:
  /// Throws InvalidMarginalsError when fewer than k weights are positive or
  /// some k w_i / sum(w) exceeds 1 by more than 1e-7.
  InclusionLadder(std::span<const double> weights, int k);

  int k() const { return k_; }
  int support_size() const { return static_cast<int>(support_.size()); }
  /// 0-based positions of the positive weights in the original column.
  const std::vector<int>& support() const { return support_; }
  /// pi(.|n) over the support, n in k..M.
  std::span<const double> pi(int n) const;

  /// r_{n .} over `pool`, a list of positions into support() of size n + 1.
  std::vector<double> step_probs(int n, std::span<const int> pool) const;

 private:
  int k_;
  std::vector<int> support_;
  std::vector<std::vector<double>> levels_;  // levels_[n - k]
};

/// Draws k of the weighted agents so that agent i is included with
/// probability k w_i / sum(w). Consumes one uniform per elimination step.
/// Weights are indexed by agent - 1; the result holds agent ids.
AgentSet tille_sample(std::span<const double> weights, int k, Rng& rng);

/// Same draw, also returning the step-by-step trace.
AgentSet tille_sample_traced(std::span<const double> weights, int k, Rng& rng, std::vector<EliminationStep>& trace);

/// Two-stage good-state recommendation sampler.
///
/// Stream order per draw: one uniform picks the set size k from q_0..q_N,
/// then (if k > 0) one uniform per elimination step n = M-1, ..., k where M
/// is the support size of column k.
class MoveSampler {
 public:
  /// Throws InvalidMarginalsError when q_0 < -1e-9 or a conditional marginal
  /// exceeds 1 by more than 1e-7.
  explicit MoveSampler(const PrivateMechanism& mech);

  AgentSet draw(Rng& rng) const;

  const std::vector<double>& size_dist() const { return size_dist_; }

 private:
  int n_agents_;
  std::vector<double> size_dist_;
  std::vector<std::optional<InclusionLadder>> ladders_;  // index k-1
};

/// Convenience wrapper around MoveSampler for a single draw.
AgentSet sample_move_set(const PrivateMechanism& mech, Rng& rng);

/// Full recommendation for a realised state: the sampled set in the good
/// state, nobody in the bad state.
AgentSet recommend(const PrivateMechanism& mech, int theta, Rng& rng);

}  // namespace persuasion
