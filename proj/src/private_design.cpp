#include "persuasion/private_design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "persuasion/errors.hpp"

namespace persuasion {

namespace {

// Entries this small are LP round-off and are zeroed before the derived
// quantities are computed.
constexpr double kMarginalFloor = 1e-12;
constexpr double kSolveCheckTol = 1e-7;

void check_shape(const Instance& inst, const Eigen::MatrixXd& p) {
  const auto n = static_cast<Eigen::Index>(inst.n_agents());
  if (p.rows() != n || p.cols() != n) throw StructuralError("marginal table must be N x N");
}

}  // namespace

std::size_t lp2_var(int n_agents, int agent, int size) {
  return static_cast<std::size_t>(agent - 1) * static_cast<std::size_t>(n_agents) + static_cast<std::size_t>(size - 1);
}

PrivateMechanism assemble_private(const Instance& inst, Eigen::MatrixXd marginals) {
  check_shape(inst, marginals);
  const int n = inst.n_agents();
  PrivateMechanism mech;
  mech.n_agents = n;
  mech.marginals = std::move(marginals);
  mech.size_dist.assign(static_cast<std::size_t>(n) + 1, 0.0);
  mech.cond_marginals = Eigen::MatrixXd::Zero(n, n);
  double total = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double qk = mech.marginals.col(k - 1).sum() / k;
    mech.size_dist[k] = qk;
    total += qk;
    if (qk > 0.0) mech.cond_marginals.col(k - 1) = mech.marginals.col(k - 1) / qk;
  }
  mech.size_dist[0] = 1.0 - total;
  mech.objective = private_objective(inst, mech.marginals);
  return mech;
}

PrivateMechanism zero_mechanism(const Instance& inst) {
  const int n = inst.n_agents();
  return assemble_private(inst, Eigen::MatrixXd::Zero(n, n));
}

double private_objective(const Instance& inst, const Eigen::MatrixXd& p) {
  check_shape(inst, p);
  const int n = inst.n_agents();
  double sum = 0.0;
  for (int i = 1; i <= n; ++i) {
    for (int k = 1; k <= n; ++k) sum += p(i - 1, k - 1) * (inst.share(k) - inst.cost(i));
  }
  return inst.prior1() * sum;
}

double stay_gain(const Instance& inst, const Eigen::MatrixXd& p, int agent) {
  check_shape(inst, p);
  const int n = inst.n_agents();
  const double ri = inst.cost(agent);
  double q_total = 0.0;
  double gain = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double qk = p.col(k - 1).sum() / k;
    q_total += qk;
    if (k <= n - 1) gain += (qk - p(agent - 1, k - 1)) * (inst.share(k + 1) - ri);
  }
  gain += (1.0 - q_total) * (inst.share(1) - ri);
  return gain;
}

lp::LinearProgram build_lp2(const Instance& inst) {
  if (inst.prior1() == 0.0) throw ZeroPriorError("marginal-form stay rows divide by prior1 = 0; use the all-stay mechanism");
  const int n = inst.n_agents();
  const std::size_t vars = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  lp::LinearProgram lp(vars);

  for (int i = 1; i <= n; ++i) {
    for (int k = 1; k <= n; ++k) {
      std::ostringstream name;
      name << "p_" << i << '_' << k;
      lp.set_var_name(lp2_var(n, i, k), name.str());
      lp.set_objective_coeff(lp2_var(n, i, k), inst.share(k) - inst.cost(i));
    }
  }

  // Move rows: told to move, moving is weakly better.
  for (int i = 1; i <= n; ++i) {
    std::vector<double> row(vars, 0.0);
    for (int k = 1; k <= n; ++k) row[lp2_var(n, i, k)] = inst.share(k) - inst.cost(i);
    lp.add_constraint(std::move(row), lp::Relation::kGreaterEqual, 0.0, "move_" + std::to_string(i));
  }

  // Stay rows, expanded in the p_jk variables with the constant q_0 term
  // moved to the right-hand side.
  const double ratio = inst.prior0() / inst.prior1();
  for (int i = 1; i <= n; ++i) {
    const double ri = inst.cost(i);
    const double f1 = inst.share(1) - ri;
    std::vector<double> row(vars, 0.0);
    for (int k = 1; k <= n; ++k) {
      const double next = k <= n - 1 ? inst.share(k + 1) - ri : 0.0;
      const double per_size = (next - f1) / k;
      for (int j = 1; j <= n; ++j) row[lp2_var(n, j, k)] += per_size;
      row[lp2_var(n, i, k)] -= next;
    }
    lp.add_constraint(std::move(row), lp::Relation::kLessEqual, ratio * ri - f1, "stay_" + std::to_string(i));
  }

  {
    std::vector<double> row(vars, 0.0);
    for (int i = 1; i <= n; ++i) {
      for (int k = 1; k <= n; ++k) row[lp2_var(n, i, k)] = 1.0 / k;
    }
    lp.add_constraint(std::move(row), lp::Relation::kLessEqual, 1.0, "cardinality");
  }

  for (int i = 1; i <= n; ++i) {
    for (int k = 1; k <= n; ++k) {
      std::vector<double> row(vars, 0.0);
      for (int j = 1; j <= n; ++j) row[lp2_var(n, j, k)] = -1.0;
      row[lp2_var(n, i, k)] += k;
      lp.add_constraint(std::move(row), lp::Relation::kLessEqual, 0.0,
                        "matroid_" + std::to_string(i) + "_" + std::to_string(k));
    }
  }
  return lp;
}

PrivateMechanism solve_private(const Instance& inst) {
  if (inst.prior1() == 0.0) return zero_mechanism(inst);
  const int n = inst.n_agents();
  const lp::LinearProgram lp = build_lp2(inst);
  lp::LpSolution sol;
  try {
    sol = lp::solve_lp(lp);
  } catch (const InfeasibleError& e) {
    throw SolverFault(std::string("marginal-form LP reported infeasible although p = 0 is feasible: ") + e.what());
  }

  Eigen::MatrixXd p(n, n);
  for (int i = 1; i <= n; ++i) {
    for (int k = 1; k <= n; ++k) {
      const double v = sol.values[lp2_var(n, i, k)];
      p(i - 1, k - 1) = std::abs(v) < kMarginalFloor ? 0.0 : v;
    }
  }
  PrivateMechanism mech = assemble_private(inst, std::move(p));
  const auto report = verify_persuasive_marginals(inst, mech.marginals, kSolveCheckTol);
  if (!report.ok()) {
    std::ostringstream os;
    os << "marginal-form solution fails verification (worst violation " << report.worst() << ")";
    throw SolverFault(os.str());
  }
  return mech;
}

double persuasion_bound(const Instance& inst) {
  const int i_star = social_optimum(inst).i_star;
  if (i_star == inst.n_agents()) return std::numeric_limits<double>::infinity();
  return inst.cost(i_star + 1) / inst.share(i_star + 1);
}

std::optional<PrivateMechanism> fast_path(const Instance& inst) {
  const int n = inst.n_agents();
  const int i_star = social_optimum(inst).i_star;
  if (i_star < n && inst.prior1() > persuasion_bound(inst)) return std::nullopt;
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i <= i_star; ++i) p(i - 1, i_star - 1) = 1.0;
  PrivateMechanism mech = assemble_private(inst, std::move(p));
  mech.fast_path = true;
  return mech;
}

double PersuasionReport::worst() const { return std::max({move, stay, cardinality, matroid, nonnegativity}); }

PersuasionReport verify_persuasive_marginals(const Instance& inst, const Eigen::MatrixXd& p, double tol) {
  check_shape(inst, p);
  const int n = inst.n_agents();
  PersuasionReport report;
  report.tol = tol;

  double q_total = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double column = p.col(k - 1).sum();
    q_total += column / k;
    for (int i = 1; i <= n; ++i) {
      report.matroid = std::max(report.matroid, k * p(i - 1, k - 1) - column);
      report.nonnegativity = std::max(report.nonnegativity, -p(i - 1, k - 1));
    }
  }
  report.cardinality = std::max(0.0, q_total - 1.0);

  for (int i = 1; i <= n; ++i) {
    double move = 0.0;
    for (int k = 1; k <= n; ++k) move += p(i - 1, k - 1) * (inst.share(k) - inst.cost(i));
    report.move = std::max(report.move, -move);
    // With prior1 = 0 the row reads 0 <= prior0 r(i) after clearing the
    // denominator and always holds.
    if (inst.prior1() > 0.0) {
      const double bound = inst.prior0() / inst.prior1() * inst.cost(i);
      report.stay = std::max(report.stay, stay_gain(inst, p, i) - bound);
    }
  }
  return report;
}

}  // namespace persuasion
