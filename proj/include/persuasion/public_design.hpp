#pragma once

#include <optional>
#include <string>
#include <vector>

#include "persuasion/lp.hpp"
#include "persuasion/model.hpp"

namespace persuasion {

/// Public threshold recommendations. Signal i announces "the first i agents
/// move"; weights are joint probabilities phi(theta, i).
struct PublicMechanism {
  int n_agents = 0;
  std::vector<double> weight_bad;   // phi(0, i), i = 0..N
  std::vector<double> weight_good;  // phi(1, i), i = 0..N
  /// q_i = phi(1,i) / (phi(0,i) + phi(1,i)); absent for zero-mass signals.
  std::vector<std::optional<double>> posteriors;
  double objective = 0.0;

  double weight(int theta, int signal) const { return theta == 0 ? weight_bad[signal] : weight_good[signal]; }
  /// Signals whose total mass exceeds `threshold`.
  std::vector<int> support(double threshold = 1e-9) const;
};

/// Column of phi(theta, i) in the public LP.
std::size_t public_var(int n_agents, int theta, int signal);

/// W(theta, i) = theta i F(i) - r(1) - ... - r(i).
double public_signal_welfare(const Instance& inst, int theta, int signal);

/// 2(N+1) variables; rows are N move rows (signals 1..N), N stay rows
/// (signals 0..N-1) and the two mass rows.
lp::LinearProgram build_public_lp(const Instance& inst);

/// Optimal vertex of the public LP.
PublicMechanism solve_public(const Instance& inst);

/// Builds posteriors and objective for hand-made weight vectors.
PublicMechanism assemble_public(const Instance& inst, std::vector<double> weight_bad, std::vector<double> weight_good);

struct PublicSignalIssue {
  int signal;
  std::string what;
  double amount;
};

struct PublicReport {
  double mass = 0.0;           // worst |sum_i phi(theta,i) - mu(theta)|
  double nonnegativity = 0.0;  // worst -phi
  double move = 0.0;           // worst move-row violation on positive-mass signals
  double stay = 0.0;           // worst stay-row violation on positive-mass signals
  /// Positive-mass signals whose posterior does not support threshold i
  /// (weak form: q F(i) - r(i) >= 0 and q F(i+1) - r(i+1) <= 0).
  std::vector<PublicSignalIssue> issues;
  double tol = 0.0;

  bool ok() const;
};

PublicReport verify_public(const Instance& inst, const PublicMechanism& mech, double tol);

}  // namespace persuasion
