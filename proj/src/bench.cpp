#include "persuasion/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <ostream>
#include <sstream>
#include <thread>

#include "persuasion/equilibrium.hpp"
#include "persuasion/errors.hpp"
#include "persuasion/private_design.hpp"
#include "persuasion/public_design.hpp"

namespace persuasion::bench {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::vector<double> linspace_steps(double first, double step, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(std::round((first + step * i) * 1e9) / 1e9);
  return out;
}

}  // namespace

double no_info_welfare(const Instance& inst) {
  const double q = inst.prior1();
  return threshold_welfare(inst, q, underline_i(inst, q));
}

double full_info_welfare(const Instance& inst) {
  return inst.prior1() * threshold_welfare(inst, 1.0, underline_i(inst, 1.0));
}

Instance make_instance(const GridPoint& point) {
  return Instance(point.n_agents, point.mu1, power_sharing(point.n_agents, point.alpha),
                  family_costs(point.n_agents, point.family, point.r));
}

double BenchmarkRow::ordering_gap() const {
  const double floor = std::max(no_info, full_info);
  return std::max({private_opt - social_opt, public_opt - private_opt, floor - public_opt, -no_info, -full_info, 0.0});
}

double BenchmarkRow::tightness_gap() const {
  return point.mu1 <= bound ? std::abs(private_opt - social_opt) : 0.0;
}

std::vector<GridPoint> expand_grid(const SweepConfig& config) {
  std::vector<GridPoint> grid;
  for (CostFamily family : config.families) {
    for (double alpha : config.alphas) {
      for (double r : config.r_values) {
        for (double mu1 : config.mu1_values) grid.push_back({alpha, family, r, mu1, config.n_agents});
      }
    }
  }
  return grid;
}

BenchmarkRow evaluate_point(const GridPoint& point) {
  const Instance inst = make_instance(point);
  BenchmarkRow row;
  row.point = point;
  row.no_info = no_info_welfare(inst);
  row.full_info = full_info_welfare(inst);
  const PublicMechanism pub = solve_public(inst);
  row.public_opt = pub.objective;
  row.public_support = static_cast<int>(pub.support().size());
  row.private_opt = solve_private(inst).objective;
  row.social_opt = social_optimum(inst).value;
  row.bound = persuasion_bound(inst);
  return row;
}

SweepResult run_sweep(const SweepConfig& config) {
  const auto grid = expand_grid(config);
  SweepResult result;
  std::vector<GridPoint> valid;
  for (const auto& point : grid) {
    auto report = validate_instance(make_instance(point));
    if (report.ok()) {
      valid.push_back(point);
    } else {
      result.skipped.push_back({point, std::move(report)});
    }
  }

  result.rows.resize(valid.size());
  std::vector<std::exception_ptr> errors(valid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t idx = next++; idx < valid.size(); idx = next++) {
      try {
        result.rows[idx] = evaluate_point(valid[idx]);
      } catch (...) {
        errors[idx] = std::current_exception();
      }
    }
  };
  const int jobs = std::clamp(config.jobs, 1, std::max(1, static_cast<int>(valid.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  // First failure in grid order, so the reported error is deterministic.
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return result;
}

SweepConfig preset(std::string_view name) {
  SweepConfig config;
  config.n_agents = 20;
  config.alphas = {0.2, 0.5, 0.9};
  config.families = {CostFamily::kConstant, CostFamily::kLinear, CostFamily::kQuadratic};
  if (name == "cost-sweep") {
    config.r_values = linspace_steps(0.1, 0.1, 10);
    config.mu1_values = {0.8};
  } else if (name == "prior-sweep") {
    config.r_values = {0.5};
    config.mu1_values = linspace_steps(0.05, 0.05, 20);
  } else {
    throw InputError("unknown preset '" + std::string(name) + "' (expected cost-sweep or prior-sweep)");
  }
  return config;
}

void write_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows, bool absolute) {
  out << kCsvHeader << '\n';
  for (const auto& row : rows) {
    const bool raw = absolute || row.no_info == 0.0;
    const double scale = raw ? 1.0 : row.no_info;
    out << fmt(row.point.alpha) << ',' << to_string(row.point.family) << ',' << fmt(row.point.r) << ','
        << fmt(row.point.mu1) << ',' << row.point.n_agents << ',' << fmt(row.no_info / scale) << ','
        << fmt(row.full_info / scale) << ',' << fmt(row.public_opt / scale) << ',' << fmt(row.private_opt / scale)
        << ',' << fmt(row.social_opt / scale) << ',' << (raw ? 1 : 0) << '\n';
  }
}

std::vector<BoundTableCell> bound_table(const BoundTableConfig& config) {
  std::vector<BoundTableCell> cells;
  for (CostFamily family : config.families) {
    for (double alpha : config.alphas) {
      for (double r : config.r_values) {
        // The bound does not involve the prior.
        const Instance inst(config.n_agents, 0.5, power_sharing(config.n_agents, alpha),
                            family_costs(config.n_agents, family, r));
        const double raw = persuasion_bound(inst);
        cells.push_back({family, alpha, r, social_optimum(inst).i_star, raw, std::min(raw, 1.0)});
      }
    }
  }
  return cells;
}

std::string format_bound_table(const std::vector<BoundTableCell>& cells, int digits) {
  std::ostringstream os;
  char buf[64];
  const BoundTableCell* prev = nullptr;
  for (const auto& cell : cells) {
    if (!prev || prev->family != cell.family) {
      if (prev) os << "\n\n";
      os << to_string(cell.family) << " costs";
      prev = nullptr;
    }
    if (!prev || prev->alpha != cell.alpha) {
      std::snprintf(buf, sizeof buf, "\nalpha=%.1f:", cell.alpha);
      os << buf;
    }
    std::snprintf(buf, sizeof buf, " %.*f", digits, cell.display);
    os << buf;
    prev = &cell;
  }
  os << '\n';
  return os.str();
}

}  // namespace persuasion::bench
