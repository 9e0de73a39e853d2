#include "persuasion/model.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "persuasion/errors.hpp"

namespace persuasion {

namespace {

constexpr double kAssumptionRelTol = 1e-12;

// a <= b up to a relative slack.
bool leq(double a, double b) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return a <= b + kAssumptionRelTol * scale;
}

std::string describe(std::string_view what, int index) {
  std::ostringstream os;
  os << what << " at n=" << index;
  return os.str();
}

}  // namespace

std::string_view to_string(CostFamily family) {
  switch (family) {
    case CostFamily::kConstant:
      return "constant";
    case CostFamily::kLinear:
      return "linear";
    case CostFamily::kQuadratic:
      return "quadratic";
  }
  return "unknown";
}

CostFamily parse_cost_family(std::string_view name) {
  if (name == "constant") return CostFamily::kConstant;
  if (name == "linear") return CostFamily::kLinear;
  if (name == "quadratic") return CostFamily::kQuadratic;
  throw InputError("unknown cost family '" + std::string(name) + "'");
}

SharingTable power_sharing(int n_agents, double alpha) {
  if (n_agents < 1) throw StructuralError("power_sharing: n_agents must be >= 1");
  SharingTable table;
  table.values.resize(static_cast<std::size_t>(n_agents) + 1);
  for (int i = 1; i <= n_agents; ++i) table.values[i] = std::pow(static_cast<double>(i), -alpha);
  table.values[0] = table.values[1];
  return table;
}

CostTable family_costs(int n_agents, CostFamily family, double coeff) {
  if (n_agents < 1) throw StructuralError("family_costs: n_agents must be >= 1");
  CostTable table;
  table.values.assign(static_cast<std::size_t>(n_agents) + 1, 0.0);
  for (int i = 1; i <= n_agents; ++i) {
    const double x = static_cast<double>(i);
    switch (family) {
      case CostFamily::kConstant:
        table.values[i] = 0.5 * coeff;
        break;
      case CostFamily::kLinear:
        table.values[i] = 0.1 * coeff * x;
        break;
      case CostFamily::kQuadratic:
        table.values[i] = 0.02 * coeff * x * x;
        break;
    }
  }
  return table;
}

Instance::Instance(int n_agents, double prior1, SharingTable sharing, CostTable costs)
    : n_agents_(n_agents), prior1_(prior1), sharing_(std::move(sharing)), costs_(std::move(costs)) {
  if (n_agents_ < 1) throw StructuralError("instance needs at least one agent");
  const auto expected = static_cast<std::size_t>(n_agents_) + 1;
  if (sharing_.values.size() != expected) {
    std::ostringstream os;
    os << "sharing table has " << sharing_.values.size() << " entries, expected " << expected;
    throw StructuralError(os.str());
  }
  if (costs_.values.size() != expected) {
    std::ostringstream os;
    os << "cost table has " << costs_.values.size() << " entries, expected " << expected;
    throw StructuralError(os.str());
  }
  cumulative_.assign(expected, 0.0);
  for (int i = 1; i <= n_agents_; ++i) cumulative_[i] = cumulative_[i - 1] + costs_.values[i];
}

double Instance::share(int n) const {
  assert(n >= 0 && n <= n_agents_);
  return sharing_.values[static_cast<std::size_t>(n)];
}

double Instance::cost(int i) const {
  assert(i >= 0 && i <= n_agents_);
  return costs_.values[static_cast<std::size_t>(i)];
}

double Instance::cumulative_cost(int n) const {
  assert(n >= 0 && n <= n_agents_);
  return cumulative_[static_cast<std::size_t>(n)];
}

Instance Instance::with_prior(double prior1) const {
  return Instance(n_agents_, prior1, sharing_, costs_);
}

ValidationReport validate_instance(const Instance& inst) {
  ValidationReport report;
  auto flag = [&](std::string clause, int index, std::string_view what) {
    report.violations.push_back({std::move(clause), index, describe(what, index)});
  };

  const int n = inst.n_agents();
  const double mu = inst.prior1();
  if (!(mu >= 0.0 && mu <= 1.0)) flag("prior-range", 0, "prior1 outside [0,1]");

  const auto& f = inst.sharing().values;
  const auto& r = inst.costs().values;
  for (int i = 0; i <= n; ++i) {
    if (!(f[i] > 0.0) || !std::isfinite(f[i])) flag("F-positive", i, "F not a positive finite value");
    if (!(r[i] >= 0.0) || !std::isfinite(r[i])) flag("r-nonnegative", i, "r negative or not finite");
  }
  if (f[0] != f[1]) flag("F0-equals-F1", 0, "F(0) differs from F(1)");
  if (r[0] != 0.0) flag("r0-zero", 0, "r(0) is not zero");

  for (int i = 1; i < n; ++i) {
    if (!leq(f[i + 1], f[i])) flag("F-decreasing", i, "F not decreasing");
    if (!leq(r[i], r[i + 1])) flag("r-nondecreasing", i, "r not nondecreasing");
  }
  // Convexity of F on 1..N: F(n+1) - F(n) nondecreasing.
  for (int i = 1; i + 2 <= n; ++i) {
    const double lhs = f[i + 1] - f[i];
    const double rhs = f[i + 2] - f[i + 1];
    if (!leq(lhs, rhs)) flag("F-convex", i, "F not convex");
  }
  // nF(n) increasing on 0..N and concave.
  auto total = [&](int k) { return k == 0 ? 0.0 : k * f[k]; };
  for (int i = 0; i < n; ++i) {
    if (!leq(total(i), total(i + 1))) flag("nF-increasing", i, "nF(n) not increasing");
  }
  for (int i = 1; i < n; ++i) {
    const double second = total(i + 1) - 2.0 * total(i) + total(i - 1);
    const double scale = std::max({1.0, std::abs(total(i + 1)), std::abs(total(i))});
    if (second > kAssumptionRelTol * scale) flag("nF-concave", i, "nF(n) not concave");
  }
  return report;
}

double welfare_of_set(const Instance& inst, int theta, std::span<const int> agents) {
  const int n = inst.n_agents();
  std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
  double cost = 0.0;
  for (int a : agents) {
    if (a < 1 || a > n) throw std::out_of_range("agent index " + std::to_string(a) + " outside 1..N");
    if (seen[a]) throw std::out_of_range("agent " + std::to_string(a) + " listed twice");
    seen[a] = true;
    cost += inst.cost(a);
  }
  const int size = static_cast<int>(agents.size());
  const double resource = size == 0 ? 0.0 : theta * size * inst.share(size);
  return resource - cost;
}

double welfare_count(const Instance& inst, int n) {
  if (n < 0 || n > inst.n_agents()) throw std::out_of_range("welfare_count: n outside 0..N");
  if (n == 0) return 0.0;
  return n * inst.share(n) - inst.cumulative_cost(n);
}

SocialOptimum social_optimum(const Instance& inst) {
  // Last n in 1..N whose increment W(n) - W(n-1) is nonnegative.
  auto increment_ok = [&](int k) { return welfare_count(inst, k) - welfare_count(inst, k - 1) >= 0.0; };
  int lo = 0;
  int hi = inst.n_agents();
  while (lo < hi) {
    const int mid = lo + (hi - lo + 1) / 2;
    if (increment_ok(mid)) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return {lo, inst.prior1() * welfare_count(inst, lo)};
}

double threshold_welfare(const Instance& inst, double q, int n) {
  if (n < 0 || n > inst.n_agents()) throw std::out_of_range("threshold_welfare: n outside 0..N");
  if (!(q >= 0.0 && q <= 1.0)) throw std::out_of_range("threshold_welfare: q outside [0,1]");
  if (n == 0) return 0.0;
  return q * n * inst.share(n) - inst.cumulative_cost(n);
}

}  // namespace persuasion
