#include "persuasion/equilibrium.hpp"

#include <cmath>
#include <sstream>

#include "persuasion/errors.hpp"

namespace persuasion {

namespace {

void check_profile(const Instance& inst, const StrategyProfile& profile) {
  if (profile.probs.size() != static_cast<std::size_t>(inst.n_agents())) {
    throw StructuralError("strategy profile length differs from N");
  }
  for (double p : profile.probs) {
    if (!(p >= 0.0 && p <= 1.0)) throw ContractError("move probabilities must lie in [0,1]");
  }
  if (!(profile.belief >= 0.0 && profile.belief <= 1.0)) throw ContractError("belief must lie in [0,1]");
}

}  // namespace

StrategyProfile threshold_profile(const Instance& inst, double q, ThresholdProfile threshold) {
  const int n = inst.n_agents();
  if (!(threshold.t >= 0.0 && threshold.t <= n)) throw ContractError("threshold outside [0,N]");
  const int c = static_cast<int>(std::ceil(threshold.t));
  StrategyProfile profile;
  profile.belief = q;
  profile.probs.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 1; i <= n; ++i) {
    if (i < c) {
      profile.probs[i - 1] = 1.0;
    } else if (i == c) {
      profile.probs[i - 1] = threshold.t + 1.0 - c;
    }
  }
  return profile;
}

int underline_i(const Instance& inst, double q) {
  int best = 0;
  for (int i = 0; i <= inst.n_agents(); ++i) {
    if (q * inst.share(i) - inst.cost(i) > 0.0) best = i;
  }
  return best;
}

int overline_i(const Instance& inst, double q) {
  int best = 0;
  for (int i = 0; i <= inst.n_agents(); ++i) {
    if (q * inst.share(i) - inst.cost(i) >= 0.0) best = i;
  }
  return best;
}

bool is_threshold_equilibrium(const Instance& inst, double q, double t) {
  if (!(t >= 0.0 && t <= inst.n_agents())) throw ContractError("threshold outside [0,N]");
  return underline_i(inst, q) <= t && t <= overline_i(inst, q);
}

std::vector<double> poisson_binomial(std::span<const double> probs) {
  std::vector<double> law(probs.size() + 1, 0.0);
  law[0] = 1.0;
  std::size_t filled = 0;
  for (double p : probs) {
    ++filled;
    for (std::size_t m = filled; m > 0; --m) law[m] = law[m] * (1.0 - p) + law[m - 1] * p;
    law[0] *= 1.0 - p;
  }
  return law;
}

double move_utility(const Instance& inst, const StrategyProfile& profile, int agent) {
  check_profile(inst, profile);
  const int n = inst.n_agents();
  if (agent < 1 || agent > n) throw std::out_of_range("move_utility: agent outside 1..N");
  std::vector<double> others;
  others.reserve(static_cast<std::size_t>(n) - 1);
  for (int j = 1; j <= n; ++j) {
    if (j != agent) others.push_back(profile.probs[j - 1]);
  }
  const auto law = poisson_binomial(others);
  double expected_share = 0.0;
  for (std::size_t m = 0; m < law.size(); ++m) expected_share += law[m] * inst.share(static_cast<int>(m) + 1);
  return profile.belief * expected_share - inst.cost(agent);
}

bool is_equilibrium(const Instance& inst, const StrategyProfile& profile, double tol) {
  check_profile(inst, profile);
  for (int i = 1; i <= inst.n_agents(); ++i) {
    const double p = profile.probs[i - 1];
    const double u = move_utility(inst, profile, i);
    if (p == 1.0) {
      if (u < -tol) return false;
    } else if (p == 0.0) {
      if (u > tol) return false;
    } else if (std::abs(u) > tol) {
      return false;
    }
  }
  return true;
}

double profile_welfare(const Instance& inst, const StrategyProfile& profile) {
  check_profile(inst, profile);
  const auto law = poisson_binomial(profile.probs);
  double resource = 0.0;
  for (std::size_t m = 1; m < law.size(); ++m) {
    const int movers = static_cast<int>(m);
    resource += law[m] * movers * inst.share(movers);
  }
  double cost = 0.0;
  for (int i = 1; i <= inst.n_agents(); ++i) cost += profile.probs[i - 1] * inst.cost(i);
  return profile.belief * resource - cost;
}

std::optional<std::pair<double, double>> mixed_pair_solve(const Instance& inst, double q, int i, int j,
                                                          std::span<const double> background) {
  const int n = inst.n_agents();
  if (!(1 <= i && i < j && j <= n)) throw ContractError("mixed_pair_solve needs 1 <= i < j <= N");
  if (background.size() != static_cast<std::size_t>(n)) throw StructuralError("background profile length differs from N");
  int movers = 0;
  for (int a = 1; a <= n; ++a) {
    if (a == i || a == j) continue;
    const double v = background[a - 1];
    if (v != 0.0 && v != 1.0) throw ContractError("background profile must be pure");
    movers += v == 1.0 ? 1 : 0;
  }
  if (!(q > 0.0)) return std::nullopt;

  // Each agent's indifference pins the other's probability:
  //   q (p_other F(m+2) + (1 - p_other) F(m+1)) = r(self).
  const double near = inst.share(movers + 1);
  const double far = inst.share(movers + 2);
  const double denom = near - far;
  if (denom == 0.0) {
    std::ostringstream os;
    os << "mixed_pair_solve: F(" << movers + 1 << ") = F(" << movers + 2 << "), indifference is degenerate";
    throw InvariantViolation(os.str());
  }
  const double p_j = (near - inst.cost(i) / q) / denom;
  const double p_i = (near - inst.cost(j) / q) / denom;
  if (!(p_i > 0.0 && p_i < 1.0 && p_j > 0.0 && p_j < 1.0)) return std::nullopt;
  return std::make_pair(p_i, p_j);
}

}  // namespace persuasion
