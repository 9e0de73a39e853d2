#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace persuasion {

/// Agents are numbered 1..N in every public interface. Sets are sorted
/// ascending and hold no duplicates.
using AgentSet = std::vector<int>;

/// Per-mover resource share F(0..N). F(0) mirrors F(1) so that threshold
/// formulas can be evaluated at index 0.
struct SharingTable {
  std::vector<double> values;
};

/// Moving costs r(0..N), r(0) = 0, sorted so that agent 1 is cheapest.
struct CostTable {
  std::vector<double> values;
};

enum class CostFamily { kConstant, kLinear, kQuadratic };

std::string_view to_string(CostFamily family);
/// Accepts "constant", "linear" and "quadratic".
CostFamily parse_cost_family(std::string_view name);

/// F(i) = i^-alpha for i >= 1 and F(0) = F(1) = 1.
SharingTable power_sharing(int n_agents, double alpha);

/// Constant: r(i) = 0.5 c, linear: r(i) = 0.1 c i, quadratic: r(i) = 0.02 c i^2.
CostTable family_costs(int n_agents, CostFamily family, double coeff);

/// The two-location game. Immutable once built.
class Instance {
 public:
  /// Throws StructuralError when n_agents < 1 or either table does not
  /// have exactly n_agents + 1 entries. Assumption checks are left to
  /// validate_instance.
  Instance(int n_agents, double prior1, SharingTable sharing, CostTable costs);

  int n_agents() const { return n_agents_; }
  double prior1() const { return prior1_; }
  double prior0() const { return 1.0 - prior1_; }

  /// F(n) for n in 0..N. Unchecked beyond an assert.
  double share(int n) const;
  /// r(i) for i in 0..N.
  double cost(int i) const;
  /// r(1) + ... + r(n).
  double cumulative_cost(int n) const;

  const SharingTable& sharing() const { return sharing_; }
  const CostTable& costs() const { return costs_; }

  Instance with_prior(double prior1) const;

 private:
  int n_agents_;
  double prior1_;
  SharingTable sharing_;
  CostTable costs_;
  std::vector<double> cumulative_;
};

struct Violation {
  std::string clause;  // short identifier, e.g. "F-decreasing"
  int index;           // offending table index
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks the prior range and every monotonicity / curvature assumption on
/// the tables, using a relative slack of 1e-12.
ValidationReport validate_instance(const Instance& inst);

/// theta |S| F(|S|) - sum_{i in S} r(i). Throws std::out_of_range on agent
/// ids outside 1..N or repeated ids.
double welfare_of_set(const Instance& inst, int theta, std::span<const int> agents);

/// nF(n) - r(1) - ... - r(n), the welfare when the n cheapest agents move
/// in the good state.
double welfare_count(const Instance& inst, int n);

struct SocialOptimum {
  int i_star;    // largest maximizer of welfare_count
  double value;  // prior1 * welfare_count(i_star)
};

/// Binary search on the first differences of welfare_count, which are
/// nonincreasing on valid instances.
SocialOptimum social_optimum(const Instance& inst);

/// q nF(n) - r(1) - ... - r(n).
double threshold_welfare(const Instance& inst, double q, int n);

}  // namespace persuasion
