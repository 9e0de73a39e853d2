#include "persuasion/lp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "persuasion/errors.hpp"

namespace persuasion::lp {

LinearProgram::LinearProgram(std::size_t num_vars)
    : objective_(num_vars, 0.0), lower_(num_vars, 0.0), names_(num_vars) {}

void LinearProgram::set_objective(std::vector<double> coeffs) {
  if (coeffs.size() != num_vars()) throw ContractError("objective dimension mismatch");
  objective_ = std::move(coeffs);
}

void LinearProgram::set_objective_coeff(std::size_t var, double value) { objective_.at(var) = value; }

void LinearProgram::add_constraint(std::vector<double> coeffs, Relation relation, double rhs, std::string name) {
  if (coeffs.size() != num_vars()) throw ContractError("constraint dimension mismatch");
  for (double c : coeffs) {
    if (!std::isfinite(c)) throw ContractError("non-finite constraint coefficient");
  }
  if (!std::isfinite(rhs)) throw ContractError("non-finite constraint bound");
  constraints_.push_back({std::move(coeffs), relation, rhs, std::move(name)});
}

void LinearProgram::set_lower_bound(std::size_t var, double lower) {
  if (!std::isfinite(lower)) throw ContractError("lower bounds must be finite");
  lower_.at(var) = lower;
}

void LinearProgram::set_var_name(std::size_t var, std::string name) { names_.at(var) = std::move(name); }

std::string LinearProgram::var_name(std::size_t var) const {
  if (!names_.at(var).empty()) return names_[var];
  return "x" + std::to_string(var);
}

double max_violation(const LinearProgram& lp, std::span<const double> x) {
  if (x.size() != lp.num_vars()) throw ContractError("max_violation: dimension mismatch");
  double worst = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) worst = std::max(worst, lp.lower_bounds()[j] - x[j]);
  for (const auto& row : lp.constraints()) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) lhs += row.coeffs[j] * x[j];
    switch (row.relation) {
      case Relation::kLessEqual:
        worst = std::max(worst, lhs - row.rhs);
        break;
      case Relation::kGreaterEqual:
        worst = std::max(worst, row.rhs - lhs);
        break;
      case Relation::kEqual:
        worst = std::max(worst, std::abs(lhs - row.rhs));
        break;
    }
  }
  return worst;
}

namespace {

// Standard form A y = b, y >= 0, b >= 0, with one slack or surplus column per
// inequality and one artificial column per row lacking a natural basic
// variable. Structural columns come first, then slacks, then artificials.
struct StandardForm {
  std::size_t rows = 0;
  std::size_t structural = 0;
  std::size_t art_begin = 0;
  std::size_t cols = 0;
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  std::vector<std::size_t> basis;
};

StandardForm to_standard_form(const LinearProgram& lp) {
  StandardForm sf;
  sf.rows = lp.num_constraints();
  sf.structural = lp.num_vars();

  std::size_t slacks = 0;
  std::size_t artificials = 0;
  struct RowPlan {
    double sign;
    Relation relation;
  };
  std::vector<RowPlan> plan;
  std::vector<double> shifted_rhs;
  for (const auto& row : lp.constraints()) {
    double rhs = row.rhs;
    for (std::size_t j = 0; j < sf.structural; ++j) rhs -= row.coeffs[j] * lp.lower_bounds()[j];
    double sign = 1.0;
    Relation rel = row.relation;
    // Flip so the bound is nonnegative; a ">= 0" row becomes "<= 0" so it
    // can start from its slack.
    if (rhs < 0.0 || (rhs == 0.0 && rel == Relation::kGreaterEqual)) {
      sign = -1.0;
      if (rel == Relation::kLessEqual) {
        rel = Relation::kGreaterEqual;
      } else if (rel == Relation::kGreaterEqual) {
        rel = Relation::kLessEqual;
      }
    }
    plan.push_back({sign, rel});
    shifted_rhs.push_back(sign * rhs);
    if (rel != Relation::kEqual) ++slacks;
    if (rel != Relation::kLessEqual) ++artificials;
  }

  sf.art_begin = sf.structural + slacks;
  sf.cols = sf.art_begin + artificials;
  sf.a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(sf.rows), static_cast<Eigen::Index>(sf.cols));
  sf.b.resize(static_cast<Eigen::Index>(sf.rows));
  sf.basis.resize(sf.rows);

  std::size_t next_slack = sf.structural;
  std::size_t next_art = sf.art_begin;
  for (std::size_t i = 0; i < sf.rows; ++i) {
    const auto& row = lp.constraints()[i];
    const auto ei = static_cast<Eigen::Index>(i);
    for (std::size_t j = 0; j < sf.structural; ++j) sf.a(ei, static_cast<Eigen::Index>(j)) = plan[i].sign * row.coeffs[j];
    sf.b(ei) = shifted_rhs[i];
    switch (plan[i].relation) {
      case Relation::kLessEqual:
        sf.a(ei, static_cast<Eigen::Index>(next_slack)) = 1.0;
        sf.basis[i] = next_slack++;
        break;
      case Relation::kGreaterEqual:
        sf.a(ei, static_cast<Eigen::Index>(next_slack++)) = -1.0;
        sf.a(ei, static_cast<Eigen::Index>(next_art)) = 1.0;
        sf.basis[i] = next_art++;
        break;
      case Relation::kEqual:
        sf.a(ei, static_cast<Eigen::Index>(next_art)) = 1.0;
        sf.basis[i] = next_art++;
        break;
    }
  }
  return sf;
}

// Row-major tableau with the objective in the last row and the right-hand
// side in the last column. The objective row stores -reduced costs, so a
// negative entry marks an improving column.
class Tableau {
 public:
  Tableau(const StandardForm& sf) : rows_(sf.rows), cols_(sf.cols), stride_(sf.cols + 1), data_((sf.rows + 1) * stride_, 0.0) {
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) at(i, j) = sf.a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      rhs(i) = sf.b(static_cast<Eigen::Index>(i));
    }
  }

  double& at(std::size_t i, std::size_t j) { return data_[i * stride_ + j]; }
  double at(std::size_t i, std::size_t j) const { return data_[i * stride_ + j]; }
  double& rhs(std::size_t i) { return data_[i * stride_ + cols_]; }
  double& obj(std::size_t j) { return data_[rows_ * stride_ + j]; }
  double& obj_value() { return data_[rows_ * stride_ + cols_]; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void clear_objective() { std::fill_n(data_.begin() + static_cast<std::ptrdiff_t>(rows_ * stride_), stride_, 0.0); }

  // Subtracts `factor` times row `src` from row `dst` (dst may be the
  // objective row).
  void axpy_row(std::size_t dst, std::size_t src, double factor) {
    double* d = &data_[dst * stride_];
    const double* s = &data_[src * stride_];
    for (std::size_t j = 0; j < stride_; ++j) d[j] -= factor * s[j];
  }

  void pivot(std::size_t row, std::size_t col) {
    double* p = &data_[row * stride_];
    const double inv = 1.0 / p[col];
    for (std::size_t j = 0; j < stride_; ++j) p[j] *= inv;
    p[col] = 1.0;
    for (std::size_t i = 0; i <= rows_; ++i) {
      if (i == row) continue;
      const double factor = data_[i * stride_ + col];
      if (factor == 0.0) continue;
      axpy_row(i, row, factor);
      data_[i * stride_ + col] = 0.0;
    }
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::size_t stride_;
  std::vector<double> data_;
};

enum class PhaseResult { kOptimal, kUnbounded };

class Simplex {
 public:
  Simplex(const StandardForm& sf, const LpOptions& options)
      : sf_(sf), opt_(options), tab_(sf), basis_(sf.basis), allowed_(sf.cols, true) {
    limit_ = options.max_iterations != 0 ? options.max_iterations : 50 * (sf.rows + sf.cols) + 1000;
  }

  void phase_one() {
    tab_.clear_objective();
    bool any = false;
    for (std::size_t j = sf_.art_begin; j < sf_.cols; ++j) {
      tab_.obj(j) = 1.0;
      any = true;
    }
    if (!any) return;
    for (std::size_t i = 0; i < sf_.rows; ++i) {
      if (basis_[i] >= sf_.art_begin) tab_.axpy_row(sf_.rows, i, 1.0);
    }
    if (iterate() != PhaseResult::kOptimal) throw SolverFault("phase one reported unbounded");
    // obj_value holds max(-sum artificials).
    const double scale = 1.0 + sf_.b.cwiseAbs().maxCoeff();
    if (-tab_.obj_value() > opt_.feasibility_tol * scale) throw InfeasibleError("linear program is infeasible");

    // Drive zero-level artificials out of the basis where possible; the rest
    // sit on redundant rows and never move again.
    for (std::size_t i = 0; i < sf_.rows; ++i) {
      if (basis_[i] < sf_.art_begin) continue;
      tab_.rhs(i) = 0.0;
      std::size_t best = sf_.cols;
      double best_abs = opt_.pivot_tol;
      for (std::size_t j = 0; j < sf_.art_begin; ++j) {
        const double v = std::abs(tab_.at(i, j));
        if (v > best_abs) {
          best_abs = v;
          best = j;
        }
      }
      if (best != sf_.cols) {
        tab_.pivot(i, best);
        basis_[i] = best;
      }
    }
    for (std::size_t j = sf_.art_begin; j < sf_.cols; ++j) allowed_[j] = false;
  }

  PhaseResult phase_two(const std::vector<double>& cost) {
    tab_.clear_objective();
    for (std::size_t j = 0; j < sf_.structural; ++j) tab_.obj(j) = -cost[j];
    for (std::size_t i = 0; i < sf_.rows; ++i) {
      const double c = tab_.obj(basis_[i]);
      if (c != 0.0) tab_.axpy_row(sf_.rows, i, c);
    }
    return iterate();
  }

  const std::vector<std::size_t>& basis() const { return basis_; }
  std::size_t iterations() const { return iterations_; }
  Tableau& tableau() { return tab_; }

 private:
  PhaseResult iterate() {
    std::size_t degenerate = 0;
    while (true) {
      if (++iterations_ > limit_) throw SolverFault("simplex iteration limit reached");
      const bool bland = degenerate >= opt_.degenerate_streak;

      std::size_t enter = sf_.cols;
      double best = -opt_.optimality_tol;
      for (std::size_t j = 0; j < sf_.cols; ++j) {
        if (!allowed_[j]) continue;
        const double d = tab_.obj(j);
        if (d < best) {
          enter = j;
          if (bland) break;
          best = d;
        }
      }
      if (enter == sf_.cols) return PhaseResult::kOptimal;

      std::size_t leave = sf_.rows;
      double best_ratio = std::numeric_limits<double>::infinity();
      double best_piv = 0.0;
      for (std::size_t i = 0; i < sf_.rows; ++i) {
        const double a = tab_.at(i, enter);
        if (a <= opt_.pivot_tol) continue;
        const double ratio = std::max(0.0, tab_.rhs(i)) / a;
        if (leave == sf_.rows || ratio < best_ratio - 1e-12 * (1.0 + best_ratio)) {
          leave = i;
          best_ratio = ratio;
          best_piv = a;
        } else if (ratio <= best_ratio + 1e-12 * (1.0 + best_ratio)) {
          const bool take = bland ? basis_[i] < basis_[leave] : a > best_piv;
          if (take) {
            leave = i;
            best_ratio = std::min(best_ratio, ratio);
            best_piv = a;
          }
        }
      }
      if (leave == sf_.rows) return PhaseResult::kUnbounded;

      degenerate = best_ratio <= 1e-12 ? degenerate + 1 : 0;
      tab_.pivot(leave, enter);
      basis_[leave] = enter;
      for (std::size_t i = 0; i < sf_.rows; ++i) {
        if (tab_.rhs(i) < 0.0 && tab_.rhs(i) > -opt_.feasibility_tol) tab_.rhs(i) = 0.0;
      }
    }
  }

  const StandardForm& sf_;
  LpOptions opt_;
  Tableau tab_;
  std::vector<std::size_t> basis_;
  std::vector<bool> allowed_;
  std::size_t limit_ = 0;
  std::size_t iterations_ = 0;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s;
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const LpOptions& options) {
  const StandardForm sf = to_standard_form(lp);
  Simplex simplex(sf, options);
  simplex.phase_one();
  if (simplex.phase_two(lp.objective()) == PhaseResult::kUnbounded) {
    throw UnboundedError("linear program is unbounded");
  }

  // Values read off the tableau.
  std::vector<double> shifted(sf.cols, 0.0);
  auto& tab = simplex.tableau();
  for (std::size_t i = 0; i < sf.rows; ++i) shifted[simplex.basis()[i]] = tab.rhs(i);

  // Refactorise the final basis for an accurate basic solution.
  std::vector<double> refined = shifted;
  if (sf.rows > 0) {
    const auto m = static_cast<Eigen::Index>(sf.rows);
    Eigen::MatrixXd basis_matrix(m, m);
    for (std::size_t i = 0; i < sf.rows; ++i) {
      basis_matrix.col(static_cast<Eigen::Index>(i)) = sf.a.col(static_cast<Eigen::Index>(simplex.basis()[i]));
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix);
    const Eigen::VectorXd xb = lu.solve(sf.b);
    std::fill(refined.begin(), refined.end(), 0.0);
    for (std::size_t i = 0; i < sf.rows; ++i) refined[simplex.basis()[i]] = xb(static_cast<Eigen::Index>(i));
  }

  auto assemble = [&](const std::vector<double>& y) {
    std::vector<double> x(sf.structural);
    for (std::size_t j = 0; j < sf.structural; ++j) {
      double v = y[j];
      if (v < 0.0 && v > -options.feasibility_tol) v = 0.0;
      x[j] = lp.lower_bounds()[j] + v;
    }
    return x;
  };

  LpSolution solution;
  solution.is_vertex = true;
  solution.iterations = simplex.iterations();
  solution.values = assemble(refined);
  if (!(max_violation(lp, solution.values) <= options.feasibility_tol)) {
    solution.values = assemble(shifted);
    const double violation = max_violation(lp, solution.values);
    if (!(violation <= options.feasibility_tol)) {
      std::ostringstream os;
      os << "simplex result violates constraints by " << violation;
      throw SolverFault(os.str());
    }
  }
  solution.objective_value = dot(lp.objective(), solution.values);
  return solution;
}

void write_lp_format(std::ostream& out, const LinearProgram& lp) {
  auto term_list = [&](const std::vector<double>& coeffs) {
    std::ostringstream os;
    os.precision(17);
    bool first = true;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      const double c = coeffs[j];
      if (c == 0.0) continue;
      if (first) {
        os << (c < 0 ? "- " : "");
      } else {
        os << (c < 0 ? " - " : " + ");
      }
      os << std::abs(c) << ' ' << lp.var_name(j);
      first = false;
    }
    if (first) os << "0 " << lp.var_name(0);
    return os.str();
  };

  out.precision(17);
  out << "\\ generated by persuade\n";
  out << "Maximize\n obj: " << term_list(lp.objective()) << "\n";
  out << "Subject To\n";
  for (std::size_t i = 0; i < lp.num_constraints(); ++i) {
    const auto& row = lp.constraints()[i];
    const std::string name = row.name.empty() ? "c" + std::to_string(i) : row.name;
    const char* rel = row.relation == Relation::kLessEqual ? "<=" : row.relation == Relation::kGreaterEqual ? ">=" : "=";
    out << ' ' << name << ": " << term_list(row.coeffs) << ' ' << rel << ' ' << row.rhs << "\n";
  }
  out << "Bounds\n";
  for (std::size_t j = 0; j < lp.num_vars(); ++j) out << ' ' << lp.var_name(j) << " >= " << lp.lower_bounds()[j] << "\n";
  out << "End\n";
}

}  // namespace persuasion::lp
