#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "persuasion/model.hpp"

namespace persuasion::bench {

/// Expected welfare when the prior is the common belief and agents play the
/// sender-preferred threshold equilibrium: W(prior1, underline_i(prior1)).
double no_info_welfare(const Instance& inst);

/// State revealed: nobody moves at theta = 0, the first underline_i(1) move
/// at theta = 1. Equals prior1 * W(1, underline_i(1)).
double full_info_welfare(const Instance& inst);

struct GridPoint {
  double alpha = 0.0;
  CostFamily family = CostFamily::kConstant;
  double r = 0.0;
  double mu1 = 0.0;
  int n_agents = 0;
};

Instance make_instance(const GridPoint& point);

struct BenchmarkRow {
  GridPoint point;
  double no_info = 0.0;
  double full_info = 0.0;
  double public_opt = 0.0;
  double private_opt = 0.0;
  double social_opt = 0.0;
  double bound = 0.0;  // persuasion bound r(i*+1)/F(i*+1)
  int public_support = 0;

  /// Largest shortfall in the chain social >= private >= public >=
  /// max(no_info, full_info) >= 0.
  double ordering_gap() const;
  /// |private - social| when prior1 <= bound, else 0.
  double tightness_gap() const;
};

struct SkippedPoint {
  GridPoint point;
  ValidationReport report;
};

struct SweepConfig {
  int n_agents = 20;
  std::vector<double> alphas;
  std::vector<CostFamily> families;
  std::vector<double> r_values;
  std::vector<double> mu1_values;
  int jobs = 1;
};

struct SweepResult {
  std::vector<BenchmarkRow> rows;     // grid order
  std::vector<SkippedPoint> skipped;  // instances failing validation
};

/// Grid order: family, then alpha, then r, then mu1.
std::vector<GridPoint> expand_grid(const SweepConfig& config);

/// Solves every grid point. Output order is the grid order regardless of
/// `jobs`. Solver faults propagate.
SweepResult run_sweep(const SweepConfig& config);

BenchmarkRow evaluate_point(const GridPoint& point);

/// "cost-sweep": N = 20, prior1 = 0.8, r = 0.1..1.0.
/// "prior-sweep": N = 20, r = 0.5, prior1 = 0.05..1.0.
/// Both use alpha in {0.2, 0.5, 0.9} and all three cost families. Throws
/// InputError on other names.
SweepConfig preset(std::string_view name);

inline constexpr std::string_view kCsvHeader =
    "alpha,cost_family,r,mu1,n_agents,w_noinfo,w_fullinfo,w_public,w_private,w_socialopt,ratio_flag";

/// Welfares are divided by no_info (ratio_flag 0) unless no_info is zero or
/// `absolute` is set, in which case raw welfares are written (ratio_flag 1).
void write_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows, bool absolute = false);

struct BoundTableConfig {
  int n_agents = 20;
  std::vector<double> alphas{0.2, 0.4, 0.6, 0.8};
  std::vector<double> r_values{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::vector<CostFamily> families{CostFamily::kConstant, CostFamily::kLinear, CostFamily::kQuadratic};
};

struct BoundTableCell {
  CostFamily family;
  double alpha;
  double r;
  int i_star;
  double raw;      // +infinity when i* = N
  double display;  // min(raw, 1)
};

/// Cells in family, alpha, r order.
std::vector<BoundTableCell> bound_table(const BoundTableConfig& config = {});

/// Fixed-point text rendering with `digits` decimals, one block per family.
std::string format_bound_table(const std::vector<BoundTableCell>& cells, int digits = 3);

}  // namespace persuasion::bench
