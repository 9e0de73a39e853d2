#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace persuasion::lp {

enum class Relation { kLessEqual, kGreaterEqual, kEqual };

struct Constraint {
  std::vector<double> coeffs;
  Relation relation;
  double rhs;
  std::string name;
};

/// Dense maximisation problem
///
///   max c.x  s.t.  a_r.x (<=|>=|=) b_r,  x >= lower.
///
/// Every variable carries a finite lower bound (default 0); there are no
/// upper bounds other than explicit rows.
class LinearProgram {
 public:
  explicit LinearProgram(std::size_t num_vars);

  std::size_t num_vars() const { return objective_.size(); }
  std::size_t num_constraints() const { return constraints_.size(); }

  void set_objective(std::vector<double> coeffs);
  void set_objective_coeff(std::size_t var, double value);
  /// Throws ContractError when coeffs has the wrong dimension or a
  /// non-finite entry.
  void add_constraint(std::vector<double> coeffs, Relation relation, double rhs, std::string name = {});
  void set_lower_bound(std::size_t var, double lower);
  void set_var_name(std::size_t var, std::string name);

  const std::vector<double>& objective() const { return objective_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::vector<double>& lower_bounds() const { return lower_; }
  /// Falls back to "x<index>" when no name was set.
  std::string var_name(std::size_t var) const;

 private:
  std::vector<double> objective_;
  std::vector<Constraint> constraints_;
  std::vector<double> lower_;
  std::vector<std::string> names_;
};

struct LpSolution {
  std::vector<double> values;
  double objective_value = 0.0;
  /// Always true for this solver: the result is a basic solution.
  bool is_vertex = false;
  std::size_t iterations = 0;
};

struct LpOptions {
  double feasibility_tol = 1e-8;
  double pivot_tol = 1e-9;
  double optimality_tol = 1e-9;
  /// 0 selects a limit proportional to the tableau size.
  std::size_t max_iterations = 0;
  /// Consecutive degenerate pivots before switching to Bland's rule.
  std::size_t degenerate_streak = 50;
};

/// Two-phase primal simplex on a dense tableau. The final basis is
/// refactorised with partial-pivot LU so the returned point is the exact
/// basic solution of the chosen basis up to round-off.
///
/// Throws InfeasibleError, UnboundedError, or SolverFault.
LpSolution solve_lp(const LinearProgram& lp, const LpOptions& options = {});

/// Largest violation of any row or lower bound at x (0 when feasible).
double max_violation(const LinearProgram& lp, std::span<const double> x);

/// Dumps the problem in CPLEX LP text format.
void write_lp_format(std::ostream& out, const LinearProgram& lp);

}  // namespace persuasion::lp
