#include "persuasion/move_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "persuasion/errors.hpp"

namespace persuasion {

namespace {

constexpr double kPinSlack = 1e-12;
constexpr double kMarginalSlack = 1e-7;
constexpr double kSizeSlack = 1e-9;

// Index drawn from an unnormalised discrete law with one uniform. Falls
// back to the last positive entry when round-off leaves u past the total.
std::size_t draw_index(std::span<const double> probs, double u) {
  const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  const double target = u * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    last_positive = i;
    acc += probs[i];
    if (target < acc) return i;
  }
  return last_positive;
}

}  // namespace

std::vector<double> capped_inclusion(std::span<const double> weights, int n) {
  std::vector<double> pi(weights.size(), 0.0);
  std::vector<bool> pinned(weights.size(), false);
  int support = 0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ContractError("capped_inclusion: negative or NaN weight");
    if (w > 0.0) ++support;
  }
  if (n < 0 || n > support) {
    std::ostringstream os;
    os << "capped_inclusion: sample size " << n << " outside 0.." << support;
    throw ContractError(os.str());
  }
  if (n == 0) return pi;

  int n_pinned = 0;
  for (std::size_t pass = 0; pass <= weights.size(); ++pass) {
    const int multiplier = n - n_pinned;
    double free_mass = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (!pinned[i]) free_mass += weights[i];
    }
    if (free_mass <= 0.0) {
      if (multiplier == 0) return pi;
      throw InvariantViolation("capped_inclusion: no free mass left to place");
    }
    if (multiplier <= 0) throw InvariantViolation("capped_inclusion: capping overran the sample size");

    bool pinned_any = false;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (pinned[i] || weights[i] == 0.0) continue;
      if (multiplier * weights[i] / free_mass >= 1.0 - kPinSlack) {
        pinned[i] = true;
        pi[i] = 1.0;
        ++n_pinned;
        pinned_any = true;
      }
    }
    if (!pinned_any) {
      for (std::size_t i = 0; i < weights.size(); ++i) {
        if (!pinned[i]) pi[i] = multiplier * weights[i] / free_mass;
      }
      return pi;
    }
  }
  throw InvariantViolation("capped_inclusion: capping did not converge");
}

std::vector<double> elimination_probs(std::span<const double> pi_now, std::span<const double> pi_prev) {
  if (!pi_prev.empty() && pi_prev.size() != pi_now.size()) {
    throw ContractError("elimination_probs: pool vectors differ in length");
  }
  std::vector<double> r(pi_now.size());
  for (std::size_t i = 0; i < pi_now.size(); ++i) {
    double value;
    if (pi_prev.empty()) {
      value = 1.0 - pi_now[i];
    } else {
      if (!(pi_prev[i] > 0.0)) {
        throw InvariantViolation("elimination_probs: zero inclusion probability inside the pool");
      }
      value = 1.0 - pi_now[i] / pi_prev[i];
    }
    if (value < 0.0) {
      if (value < -kPinSlack) throw InvariantViolation("elimination_probs: inclusion probability increased");
      value = 0.0;
    }
    r[i] = value;
  }
  const double total = std::accumulate(r.begin(), r.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "elimination_probs: probabilities sum to " << total << " over the pool";
    throw ContractError(os.str());
  }
  return r;
}

InclusionLadder::InclusionLadder(std::span<const double> weights, int k) : k_(k) {
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] < 0.0) throw InvalidMarginalsError("negative marginal in column");
    if (weights[i] > 0.0) {
      support_.push_back(static_cast<int>(i));
      total += weights[i];
    }
  }
  if (k < 1) throw ContractError("InclusionLadder: k must be >= 1");
  const int m = support_size();
  if (m < k) {
    std::ostringstream os;
    os << "column " << k << " has support " << m << " < " << k;
    throw InvalidMarginalsError(os.str());
  }
  std::vector<double> w(support_.size());
  for (std::size_t s = 0; s < support_.size(); ++s) {
    w[s] = weights[static_cast<std::size_t>(support_[s])];
    if (k * w[s] / total > 1.0 + kMarginalSlack) {
      std::ostringstream os;
      os << "column " << k << " violates k p_ik <= sum_j p_jk at agent " << support_[s] + 1;
      throw InvalidMarginalsError(os.str());
    }
  }
  levels_.resize(static_cast<std::size_t>(m - k) + 1);
  for (int n = k; n <= m; ++n) levels_[static_cast<std::size_t>(n - k)] = capped_inclusion(w, n);
}

std::span<const double> InclusionLadder::pi(int n) const {
  if (n < k_ || n > support_size()) throw ContractError("InclusionLadder::pi: level out of range");
  return levels_[static_cast<std::size_t>(n - k_)];
}

std::vector<double> InclusionLadder::step_probs(int n, std::span<const int> pool) const {
  if (n < k_ || n >= support_size()) throw ContractError("InclusionLadder::step_probs: no step to size n");
  if (static_cast<int>(pool.size()) != n + 1) throw ContractError("InclusionLadder::step_probs: pool size must be n + 1");
  const auto now = pi(n);
  std::vector<double> pi_now(pool.size());
  std::vector<double> pi_prev;
  for (std::size_t s = 0; s < pool.size(); ++s) pi_now[s] = now[static_cast<std::size_t>(pool[s])];
  if (n + 1 < support_size()) {
    const auto prev = pi(n + 1);
    pi_prev.resize(pool.size());
    for (std::size_t s = 0; s < pool.size(); ++s) pi_prev[s] = prev[static_cast<std::size_t>(pool[s])];
  }
  return elimination_probs(pi_now, pi_prev);
}

namespace {

AgentSet run_elimination(const InclusionLadder& ladder, Rng& rng, std::vector<EliminationStep>* trace) {
  std::vector<int> pool(static_cast<std::size_t>(ladder.support_size()));
  std::iota(pool.begin(), pool.end(), 0);
  for (int n = ladder.support_size() - 1; n >= ladder.k(); --n) {
    std::vector<double> r = ladder.step_probs(n, pool);
    const std::size_t out = draw_index(r, rng.uniform());
    if (trace != nullptr) {
      const auto pi = ladder.pi(n);
      trace->push_back({n, std::vector<double>(pi.begin(), pi.end()), std::move(r)});
    }
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(out));
  }
  AgentSet agents;
  agents.reserve(pool.size());
  for (int s : pool) agents.push_back(ladder.support()[static_cast<std::size_t>(s)] + 1);
  return agents;
}

}  // namespace

AgentSet tille_sample(std::span<const double> weights, int k, Rng& rng) {
  if (k == 0) return {};
  return run_elimination(InclusionLadder(weights, k), rng, nullptr);
}

AgentSet tille_sample_traced(std::span<const double> weights, int k, Rng& rng, std::vector<EliminationStep>& trace) {
  trace.clear();
  if (k == 0) return {};
  return run_elimination(InclusionLadder(weights, k), rng, &trace);
}

MoveSampler::MoveSampler(const PrivateMechanism& mech) : n_agents_(mech.n_agents), size_dist_(mech.size_dist) {
  if (size_dist_.size() != static_cast<std::size_t>(n_agents_) + 1) throw StructuralError("size distribution has wrong length");
  if (size_dist_[0] < -kSizeSlack) {
    std::ostringstream os;
    os << "invalid size distribution: q_0 = " << size_dist_[0];
    throw InvalidMarginalsError(os.str());
  }
  size_dist_[0] = std::clamp(size_dist_[0], 0.0, 1.0);
  ladders_.resize(static_cast<std::size_t>(n_agents_));
  for (int k = 1; k <= n_agents_; ++k) {
    if (!(size_dist_[k] > 0.0)) continue;
    const Eigen::VectorXd column = mech.marginals.col(k - 1);
    ladders_[static_cast<std::size_t>(k - 1)].emplace(std::span<const double>(column.data(), column.size()), k);
  }
}

AgentSet MoveSampler::draw(Rng& rng) const {
  const auto k = static_cast<int>(draw_index(size_dist_, rng.uniform()));
  if (k == 0) return {};
  return run_elimination(*ladders_[static_cast<std::size_t>(k - 1)], rng, nullptr);
}

AgentSet sample_move_set(const PrivateMechanism& mech, Rng& rng) { return MoveSampler(mech).draw(rng); }

AgentSet recommend(const PrivateMechanism& mech, int theta, Rng& rng) {
  if (theta == 0) return {};
  return sample_move_set(mech, rng);
}

}  // namespace persuasion
