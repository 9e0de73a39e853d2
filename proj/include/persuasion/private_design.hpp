#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "persuasion/lp.hpp"
#include "persuasion/model.hpp"

namespace persuasion {

/// Optimal private recommendation scheme in marginal form.
///
/// marginals(i-1, k-1) is the probability, given the good state, that
/// exactly k agents are told to move and agent i is one of them. In the bad
/// state every agent is told to stay.
struct PrivateMechanism {
  int n_agents = 0;
  Eigen::MatrixXd marginals;
  /// q_0..q_N: law of the recommended set size in the good state.
  std::vector<double> size_dist;
  /// q_ik = p_ik / q_k, zero wherever q_k = 0.
  Eigen::MatrixXd cond_marginals;
  /// Expected social welfare, prior1 * sum p_ik (F(k) - r(i)).
  double objective = 0.0;
  /// Set when the mechanism came from the deterministic social-optimum
  /// recommendation rather than the LP.
  bool fast_path = false;

  double p(int agent, int size) const { return marginals(agent - 1, size - 1); }
};

/// Derives size_dist, cond_marginals and objective from a marginal table.
PrivateMechanism assemble_private(const Instance& inst, Eigen::MatrixXd marginals);

/// p = 0: everybody stays in both states.
PrivateMechanism zero_mechanism(const Instance& inst);

/// Column of p_ik in the marginal-form variable vector.
std::size_t lp2_var(int n_agents, int agent, int size);

/// Marginal-form LP: N^2 variables p_ik; rows are, in order, N move rows, N
/// stay rows, the cardinality row and N^2 matroid rows. Throws
/// ZeroPriorError when prior1 = 0.
lp::LinearProgram build_lp2(const Instance& inst);

/// Solves the marginal-form LP (or returns the zero mechanism when prior1 = 0).
PrivateMechanism solve_private(const Instance& inst);

/// Deterministic "first i* agents move" mechanism when it is persuasive,
/// i.e. i* = N or prior1 <= r(i*+1)/F(i*+1).
std::optional<PrivateMechanism> fast_path(const Instance& inst);

/// r(i*+1)/F(i*+1), or +infinity when i* = N.
double persuasion_bound(const Instance& inst);

/// Left-hand side of the stay row for `agent`: the good-state gain from
/// moving against a stay recommendation. The row bound is
/// (prior0 / prior1) r(agent).
double stay_gain(const Instance& inst, const Eigen::MatrixXd& p, int agent);

/// prior1 * sum_{i,k} p_ik (F(k) - r(i)).
double private_objective(const Instance& inst, const Eigen::MatrixXd& p);

/// Worst violation of each constraint family; all zero means satisfied.
struct PersuasionReport {
  double move = 0.0;
  double stay = 0.0;
  double cardinality = 0.0;
  double matroid = 0.0;
  double nonnegativity = 0.0;
  double tol = 0.0;

  double worst() const;
  bool ok() const { return worst() <= tol; }
};

PersuasionReport verify_persuasive_marginals(const Instance& inst, const Eigen::MatrixXd& p, double tol);

}  // namespace persuasion
