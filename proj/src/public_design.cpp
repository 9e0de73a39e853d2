#include "persuasion/public_design.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "persuasion/errors.hpp"

namespace persuasion {

namespace {

constexpr double kWeightFloor = 1e-12;
constexpr double kSupportMass = 1e-9;

void check_lengths(const Instance& inst, const std::vector<double>& a, const std::vector<double>& b) {
  const auto expected = static_cast<std::size_t>(inst.n_agents()) + 1;
  if (a.size() != expected || b.size() != expected) throw StructuralError("public weights need N+1 entries per state");
}

}  // namespace

std::vector<int> PublicMechanism::support(double threshold) const {
  std::vector<int> out;
  for (int i = 0; i <= n_agents; ++i) {
    if (weight_bad[i] + weight_good[i] > threshold) out.push_back(i);
  }
  return out;
}

std::size_t public_var(int n_agents, int theta, int signal) {
  return static_cast<std::size_t>(theta) * (static_cast<std::size_t>(n_agents) + 1) + static_cast<std::size_t>(signal);
}

double public_signal_welfare(const Instance& inst, int theta, int signal) {
  const double resource = signal == 0 ? 0.0 : theta * signal * inst.share(signal);
  return resource - inst.cumulative_cost(signal);
}

lp::LinearProgram build_public_lp(const Instance& inst) {
  const int n = inst.n_agents();
  const std::size_t vars = 2 * (static_cast<std::size_t>(n) + 1);
  lp::LinearProgram lp(vars);
  for (int theta = 0; theta <= 1; ++theta) {
    for (int i = 0; i <= n; ++i) {
      const auto v = public_var(n, theta, i);
      lp.set_var_name(v, "phi_" + std::to_string(theta) + "_" + std::to_string(i));
      lp.set_objective_coeff(v, public_signal_welfare(inst, theta, i));
    }
  }
  for (int i = 1; i <= n; ++i) {
    std::vector<double> row(vars, 0.0);
    row[public_var(n, 1, i)] = inst.share(i) - inst.cost(i);
    row[public_var(n, 0, i)] = -inst.cost(i);
    lp.add_constraint(std::move(row), lp::Relation::kGreaterEqual, 0.0, "move_" + std::to_string(i));
  }
  for (int i = 0; i < n; ++i) {
    std::vector<double> row(vars, 0.0);
    row[public_var(n, 1, i)] = inst.share(i + 1) - inst.cost(i + 1);
    row[public_var(n, 0, i)] = -inst.cost(i + 1);
    lp.add_constraint(std::move(row), lp::Relation::kLessEqual, 0.0, "stay_" + std::to_string(i));
  }
  for (int theta = 0; theta <= 1; ++theta) {
    std::vector<double> row(vars, 0.0);
    for (int i = 0; i <= n; ++i) row[public_var(n, theta, i)] = 1.0;
    lp.add_constraint(std::move(row), lp::Relation::kEqual, theta == 0 ? inst.prior0() : inst.prior1(),
                      "mass_" + std::to_string(theta));
  }
  return lp;
}

PublicMechanism assemble_public(const Instance& inst, std::vector<double> weight_bad, std::vector<double> weight_good) {
  check_lengths(inst, weight_bad, weight_good);
  const int n = inst.n_agents();
  PublicMechanism mech;
  mech.n_agents = n;
  mech.weight_bad = std::move(weight_bad);
  mech.weight_good = std::move(weight_good);
  mech.posteriors.assign(static_cast<std::size_t>(n) + 1, std::nullopt);
  for (int i = 0; i <= n; ++i) {
    const double mass = mech.weight_bad[i] + mech.weight_good[i];
    if (mass > 0.0) mech.posteriors[i] = mech.weight_good[i] / mass;
    mech.objective += public_signal_welfare(inst, 0, i) * mech.weight_bad[i] +
                      public_signal_welfare(inst, 1, i) * mech.weight_good[i];
  }
  return mech;
}

PublicMechanism solve_public(const Instance& inst) {
  const int n = inst.n_agents();
  const lp::LinearProgram lp = build_public_lp(inst);
  lp::LpSolution sol;
  try {
    sol = lp::solve_lp(lp);
  } catch (const InfeasibleError& e) {
    // Putting all mass on signal underline_i(prior1) is always feasible.
    throw SolverFault(std::string("public LP reported infeasible: ") + e.what());
  }
  std::vector<double> bad(static_cast<std::size_t>(n) + 1);
  std::vector<double> good(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    const double b = sol.values[public_var(n, 0, i)];
    const double g = sol.values[public_var(n, 1, i)];
    bad[i] = std::abs(b) < kWeightFloor ? 0.0 : b;
    good[i] = std::abs(g) < kWeightFloor ? 0.0 : g;
  }
  return assemble_public(inst, std::move(bad), std::move(good));
}

bool PublicReport::ok() const {
  return issues.empty() && std::max({mass, nonnegativity, move, stay}) <= tol;
}

PublicReport verify_public(const Instance& inst, const PublicMechanism& mech, double tol) {
  check_lengths(inst, mech.weight_bad, mech.weight_good);
  const int n = inst.n_agents();
  PublicReport report;
  report.tol = tol;

  double total_bad = 0.0;
  double total_good = 0.0;
  for (int i = 0; i <= n; ++i) {
    total_bad += mech.weight_bad[i];
    total_good += mech.weight_good[i];
    report.nonnegativity = std::max({report.nonnegativity, -mech.weight_bad[i], -mech.weight_good[i]});
  }
  report.mass = std::max(std::abs(total_bad - inst.prior0()), std::abs(total_good - inst.prior1()));

  for (int i = 0; i <= n; ++i) {
    const double bad = mech.weight_bad[i];
    const double good = mech.weight_good[i];
    const double mass = bad + good;
    if (!(mass > 0.0)) continue;
    if (i >= 1) report.move = std::max(report.move, -((inst.share(i) - inst.cost(i)) * good - inst.cost(i) * bad));
    if (i < n) report.stay = std::max(report.stay, (inst.share(i + 1) - inst.cost(i + 1)) * good - inst.cost(i + 1) * bad);

    if (mass <= kSupportMass) continue;
    const double q = good / mass;
    if (i >= 1) {
      const double gain = q * inst.share(i) - inst.cost(i);
      if (gain < -tol) report.issues.push_back({i, "marginal mover strictly prefers to stay", -gain});
    }
    if (i < n) {
      const double gain = q * inst.share(i + 1) - inst.cost(i + 1);
      if (gain > tol) report.issues.push_back({i, "first stayer strictly prefers to move", gain});
    }
  }
  return report;
}

}  // namespace persuasion
