#include "persuasion/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "persuasion/errors.hpp"
#include "persuasion/lp.hpp"
#include "persuasion/move_sampler.hpp"

namespace persuasion::oracle {

namespace {

void check_capacity(int n, int cap, const char* what) {
  if (n > cap) {
    std::ostringstream os;
    os << what << " supports at most " << cap << " agents, got " << n;
    throw CapacityError(os.str());
  }
}

std::size_t subsets(int n) { return std::size_t{1} << n; }

double set_cost(const Instance& inst, Mask set) {
  double c = 0.0;
  for (int i = 1; i <= inst.n_agents(); ++i) {
    if (set & (Mask{1} << (i - 1))) c += inst.cost(i);
  }
  return c;
}

double set_welfare(const Instance& inst, int theta, Mask set) {
  const int size = std::popcount(set);
  const double resource = size == 0 ? 0.0 : theta * size * inst.share(size);
  return resource - set_cost(inst, set);
}

}  // namespace

AgentSet mask_to_set(Mask mask) {
  AgentSet out;
  for (int i = 0; i < 32; ++i) {
    if (mask & (Mask{1} << i)) out.push_back(i + 1);
  }
  return out;
}

Mask set_to_mask(std::span<const int> agents) {
  Mask m = 0;
  for (int a : agents) {
    if (a < 1 || a > 32) throw std::out_of_range("agent id outside mask range");
    m |= Mask{1} << (a - 1);
  }
  return m;
}

FullMechanism FullMechanism::all_stay(int n_agents) {
  FullMechanism phi;
  phi.n_agents = n_agents;
  phi.given_bad.assign(subsets(n_agents), 0.0);
  phi.given_good.assign(subsets(n_agents), 0.0);
  phi.given_bad[0] = 1.0;
  phi.given_good[0] = 1.0;
  return phi;
}

Lp1Result solve_lp1(const Instance& inst) {
  const int n = inst.n_agents();
  check_capacity(n, kLp1MaxAgents, "solve_lp1");
  const std::size_t sets = subsets(n);
  const double mu[2] = {inst.prior0(), inst.prior1()};
  auto var = [&](int theta, Mask s) { return static_cast<std::size_t>(theta) * sets + s; };

  lp::LinearProgram lp(2 * sets);
  for (int theta = 0; theta <= 1; ++theta) {
    for (Mask s = 0; s < sets; ++s) lp.set_objective_coeff(var(theta, s), mu[theta] * set_welfare(inst, theta, s));
  }
  for (int i = 1; i <= n; ++i) {
    const Mask bit = Mask{1} << (i - 1);
    std::vector<double> move(2 * sets, 0.0);
    std::vector<double> stay(2 * sets, 0.0);
    for (int theta = 0; theta <= 1; ++theta) {
      for (Mask s = 0; s < sets; ++s) {
        const int size = std::popcount(s);
        if (s & bit) {
          move[var(theta, s)] = mu[theta] * (theta * inst.share(size) - inst.cost(i));
        } else {
          stay[var(theta, s)] = mu[theta] * (theta * inst.share(size + 1) - inst.cost(i));
        }
      }
    }
    lp.add_constraint(std::move(move), lp::Relation::kGreaterEqual, 0.0, "move_" + std::to_string(i));
    lp.add_constraint(std::move(stay), lp::Relation::kLessEqual, 0.0, "stay_" + std::to_string(i));
  }
  for (int theta = 0; theta <= 1; ++theta) {
    std::vector<double> row(2 * sets, 0.0);
    for (Mask s = 0; s < sets; ++s) row[var(theta, s)] = 1.0;
    lp.add_constraint(std::move(row), lp::Relation::kEqual, 1.0, "mass_" + std::to_string(theta));
  }

  const auto sol = lp::solve_lp(lp);
  Lp1Result result;
  result.mechanism.n_agents = n;
  result.mechanism.given_bad.assign(sets, 0.0);
  result.mechanism.given_good.assign(sets, 0.0);
  for (Mask s = 0; s < sets; ++s) {
    result.mechanism.given_bad[s] = sol.values[var(0, s)];
    result.mechanism.given_good[s] = sol.values[var(1, s)];
  }
  result.objective = sol.objective_value;
  return result;
}

double lp1_objective(const Instance& inst, const FullMechanism& phi) {
  double total = 0.0;
  for (Mask s = 0; s < phi.given_bad.size(); ++s) {
    total += inst.prior0() * phi.given_bad[s] * set_welfare(inst, 0, s);
    total += inst.prior1() * phi.given_good[s] * set_welfare(inst, 1, s);
  }
  return total;
}

double FullPersuasionReport::worst() const { return std::max({move, stay, mass, nonnegativity}); }

FullPersuasionReport verify_persuasive_full(const Instance& inst, const FullMechanism& phi, double tol) {
  const int n = inst.n_agents();
  const std::size_t sets = subsets(n);
  if (phi.n_agents != n || phi.given_bad.size() != sets || phi.given_good.size() != sets) {
    throw StructuralError("full mechanism does not match the instance size");
  }
  const double mu[2] = {inst.prior0(), inst.prior1()};
  const std::vector<double>* given[2] = {&phi.given_bad, &phi.given_good};

  FullPersuasionReport report;
  report.tol = tol;
  for (int theta = 0; theta <= 1; ++theta) {
    double total = 0.0;
    for (double v : *given[theta]) {
      total += v;
      report.nonnegativity = std::max(report.nonnegativity, -v);
    }
    report.mass = std::max(report.mass, std::abs(total - 1.0));
  }
  for (int i = 1; i <= n; ++i) {
    const Mask bit = Mask{1} << (i - 1);
    double move = 0.0;
    double stay = 0.0;
    for (int theta = 0; theta <= 1; ++theta) {
      for (Mask s = 0; s < sets; ++s) {
        const double w = mu[theta] * (*given[theta])[s];
        if (w == 0.0) continue;
        const int size = std::popcount(s);
        if (s & bit) {
          move += w * (theta * inst.share(size) - inst.cost(i));
        } else {
          stay += w * (theta * inst.share(size + 1) - inst.cost(i));
        }
      }
    }
    report.move = std::max(report.move, -move);
    report.stay = std::max(report.stay, stay);
  }
  return report;
}

FullMechanism normalize_mechanism(const Instance& inst, const FullMechanism& phi) {
  const auto report = verify_persuasive_full(inst, phi, 1e-7);
  if (!report.ok()) {
    std::ostringstream os;
    os << "normalize_mechanism needs a persuasive input (worst violation " << report.worst() << ")";
    throw ContractError(os.str());
  }
  FullMechanism out = phi;
  std::fill(out.given_bad.begin(), out.given_bad.end(), 0.0);
  out.given_bad[0] = 1.0;
  return out;
}

Eigen::MatrixXd marginals_of_mechanism(const FullMechanism& phi) {
  const int n = phi.n_agents;
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (Mask s = 1; s < phi.given_good.size(); ++s) {
    const double w = phi.given_good[s];
    if (w == 0.0) continue;
    const int size = std::popcount(s);
    for (int i = 1; i <= n; ++i) {
      if (s & (Mask{1} << (i - 1))) p(i - 1, size - 1) += w;
    }
  }
  return p;
}

std::vector<std::vector<int>> enumerate_pure_equilibria(const Instance& inst, double q, double tol) {
  const int n = inst.n_agents();
  check_capacity(n, kPureEqMaxAgents, "enumerate_pure_equilibria");
  std::vector<std::vector<int>> found;
  for (Mask s = 0; s < subsets(n); ++s) {
    const int movers = std::popcount(s);
    bool stable = true;
    for (int i = 1; i <= n && stable; ++i) {
      if (s & (Mask{1} << (i - 1))) {
        stable = q * inst.share(movers) - inst.cost(i) >= -tol;
      } else {
        stable = q * inst.share(movers + 1) - inst.cost(i) <= tol;
      }
    }
    if (!stable) continue;
    std::vector<int> profile(static_cast<std::size_t>(n), 0);
    for (int i = 1; i <= n; ++i) profile[i - 1] = (s >> (i - 1)) & 1U;
    found.push_back(std::move(profile));
  }
  return found;
}

SetDistribution exact_sampler_distribution(std::span<const double> column, int k) {
  check_capacity(static_cast<int>(column.size()), kSamplerTreeMaxAgents, "exact_sampler_distribution");
  SetDistribution law;
  if (k == 0) {
    law[0] = 1.0;
    return law;
  }
  const InclusionLadder ladder(column, k);
  const int m = ladder.support_size();

  // Pools are masks over support positions.
  std::map<Mask, double> frontier{{(Mask{1} << m) - 1, 1.0}};
  for (int n = m - 1; n >= k; --n) {
    std::map<Mask, double> next;
    for (const auto& [pool, prob] : frontier) {
      std::vector<int> members;
      for (int s = 0; s < m; ++s) {
        if (pool & (Mask{1} << s)) members.push_back(s);
      }
      const auto r = ladder.step_probs(n, members);
      for (std::size_t idx = 0; idx < members.size(); ++idx) {
        if (r[idx] <= 0.0) continue;
        next[pool & ~(Mask{1} << members[idx])] += prob * r[idx];
      }
    }
    frontier = std::move(next);
  }
  for (const auto& [pool, prob] : frontier) {
    Mask agents = 0;
    for (int s = 0; s < m; ++s) {
      if (pool & (Mask{1} << s)) agents |= Mask{1} << ladder.support()[static_cast<std::size_t>(s)];
    }
    law[agents] += prob;
  }
  return law;
}

SetDistribution exact_sampler_distribution(const PrivateMechanism& mech) {
  check_capacity(mech.n_agents, kSamplerTreeMaxAgents, "exact_sampler_distribution");
  SetDistribution law;
  const double q0 = std::clamp(mech.size_dist[0], 0.0, 1.0);
  if (q0 > 0.0) law[0] = q0;
  for (int k = 1; k <= mech.n_agents; ++k) {
    const double qk = mech.size_dist[k];
    if (!(qk > 0.0)) continue;
    const Eigen::VectorXd col = mech.marginals.col(k - 1);
    for (const auto& [set, prob] : exact_sampler_distribution(std::span<const double>(col.data(), col.size()), k)) {
      law[set] += qk * prob;
    }
  }
  return law;
}

Eigen::MatrixXd joint_marginals(const SetDistribution& law, int n_agents) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n_agents, n_agents);
  for (const auto& [set, prob] : law) {
    const int size = std::popcount(set);
    if (size == 0) continue;
    for (int i = 1; i <= n_agents; ++i) {
      if (set & (Mask{1} << (i - 1))) p(i - 1, size - 1) += prob;
    }
  }
  return p;
}

Instance random_instance(int n_agents, Rng& rng) {
  const double a = rng.uniform();
  const double alpha1 = rng.uniform();
  const double alpha2 = rng.uniform();
  SharingTable f;
  f.values.resize(static_cast<std::size_t>(n_agents) + 1);
  for (int i = 1; i <= n_agents; ++i) {
    const double x = i;
    f.values[i] = a * std::pow(x, -alpha1) + (1.0 - a) * std::pow(x, -alpha2);
  }
  f.values[0] = f.values[1];

  const double scale = 0.05 + 1.15 * rng.uniform();
  CostTable r;
  r.values.assign(static_cast<std::size_t>(n_agents) + 1, 0.0);
  for (int i = 1; i <= n_agents; ++i) r.values[i] = scale * rng.uniform();
  std::sort(r.values.begin() + 1, r.values.end());

  const double prior1 = 0.02 + 0.96 * rng.uniform();
  return Instance(n_agents, prior1, std::move(f), std::move(r));
}

Eigen::MatrixXd random_valid_marginals(int n_agents, Rng& rng) {
  // Size law: random positive weights with some sizes switched off.
  std::vector<double> q(static_cast<std::size_t>(n_agents) + 1, 0.0);
  double total = 0.0;
  for (int k = 0; k <= n_agents; ++k) {
    if (k > 0 && rng.uniform() < 0.3) continue;
    q[k] = rng.uniform();
    total += q[k];
  }
  for (double& v : q) v /= total;

  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n_agents, n_agents);
  std::vector<int> agents(static_cast<std::size_t>(n_agents));
  for (int k = 1; k <= n_agents; ++k) {
    if (q[k] == 0.0) continue;
    // Conditional marginals as a random mixture of k-subset indicators,
    // which always lands in the k-uniform matroid polytope. Drawing from a
    // random sub-population leaves some agents with zero support.
    const int pool = k + static_cast<int>(rng.below(static_cast<std::uint64_t>(n_agents - k + 1)));
    std::iota(agents.begin(), agents.end(), 0);
    for (int i = n_agents - 1; i > 0; --i) std::swap(agents[i], agents[rng.below(static_cast<std::uint64_t>(i) + 1)]);
    const int pieces = 1 + static_cast<int>(rng.below(4));
    Eigen::VectorXd cond = Eigen::VectorXd::Zero(n_agents);
    double weight_total = 0.0;
    for (int piece = 0; piece < pieces; ++piece) {
      std::vector<int> chosen(agents.begin(), agents.begin() + pool);
      for (int i = pool - 1; i > 0; --i) std::swap(chosen[i], chosen[rng.below(static_cast<std::uint64_t>(i) + 1)]);
      const double w = 0.1 + rng.uniform();
      weight_total += w;
      for (int s = 0; s < k; ++s) cond(chosen[s]) += w;
    }
    cond /= weight_total;
    p.col(k - 1) = q[k] * cond;
  }
  return p;
}

}  // namespace persuasion::oracle
