// persuade: command-line front end for the persuasion toolkit.
//
// Exit codes: 0 success, 1 domain violation (invalid instance, failed
// check, non-equilibrium profile), 2 input error, 3 solver or internal
// fault. Machine output goes to stdout (or --out); summaries go to stderr.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "persuasion/bench.hpp"
#include "persuasion/checks.hpp"
#include "persuasion/equilibrium.hpp"
#include "persuasion/errors.hpp"
#include "persuasion/io.hpp"
#include "persuasion/lp.hpp"
#include "persuasion/move_sampler.hpp"
#include "persuasion/private_design.hpp"
#include "persuasion/public_design.hpp"

namespace {

using namespace persuasion;

constexpr int kOk = 0;
constexpr int kDomain = 1;
constexpr int kInput = 2;
constexpr int kFault = 3;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Exactly one of a file path or the inline generator options.
struct InstanceSource {
  std::string path;
  std::optional<int> n;
  std::optional<double> alpha;
  std::optional<std::string> family;
  std::optional<double> coeff;
  std::optional<double> prior1;

  void attach(CLI::App* cmd) {
    cmd->add_option("instance", path, "Instance JSON file");
    cmd->add_option("--n", n, "Generator: number of agents");
    cmd->add_option("--alpha", alpha, "Generator: F(i) = i^-alpha");
    cmd->add_option("--cost-family", family, "Generator: constant, linear or quadratic");
    cmd->add_option("--coeff", coeff, "Generator: cost coefficient");
    cmd->add_option("--prior1", prior1, "Generator: prior probability of the good state");
  }

  Instance resolve() const {
    const bool any_gen = n || alpha || family || coeff || prior1;
    if (!path.empty() && any_gen) throw InputError("give either an instance file or generator options, not both");
    if (!path.empty()) return io::load_instance(path);
    if (!(n && alpha && family && coeff && prior1)) {
      throw InputError("no instance: pass a file or all of --n --alpha --cost-family --coeff --prior1");
    }
    if (*n < 1) throw InputError("--n must be at least 1");
    return Instance(*n, *prior1, power_sharing(*n, *alpha), family_costs(*n, parse_cost_family(*family), *coeff));
  }
};

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + out_path + "'");
  out << text;
}

// Assumption violations are domain errors for every solving command.
bool require_valid(const Instance& inst) {
  const auto report = validate_instance(inst);
  for (const auto& v : report.violations) std::cerr << "invalid: " << v.clause << " at " << v.index << ": " << v.message << '\n';
  return report.ok();
}

std::vector<double> parse_profile(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError("bad profile entry '" + item + "'");
    }
  }
  return out;
}

std::string set_line(const AgentSet& s) {
  std::string line;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) line += ' ';
    line += std::to_string(s[i]);
  }
  return line;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal private and public persuasion mechanisms for the two-location resource game"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(io::kToolkitVersion));

  InstanceSource src;
  std::string out_path;

  auto* validate = app.add_subcommand("validate", "Check an instance against the model assumptions");
  src.attach(validate);

  bool fast_only = false;
  std::string lp_dump;
  auto* solve_priv = app.add_subcommand("solve-private", "Optimal private mechanism (marginal form)");
  src.attach(solve_priv);
  solve_priv->add_option("--out", out_path, "Write the mechanism document here");
  solve_priv->add_flag("--fast-path-only", fast_only, "Use the first-i* recommendation; fail if it is not persuasive");
  solve_priv->add_option("--lp-dump", lp_dump, "Also write the LP in CPLEX LP format");

  auto* solve_pub = app.add_subcommand("solve-public", "Optimal public threshold mechanism");
  src.attach(solve_pub);
  solve_pub->add_option("--out", out_path, "Write the mechanism document here");

  std::uint64_t seed = 1;
  long draws = 1;
  int theta = 1;
  auto* sample = app.add_subcommand("sample", "Draw recommendation sets from the optimal private mechanism");
  src.attach(sample);
  sample->add_option("--seed", seed, "RNG seed")->capture_default_str();
  sample->add_option("--draws", draws, "Number of draws")->capture_default_str()->check(CLI::PositiveNumber);
  sample->add_option("--theta", theta, "Realised state (0 or 1)")->capture_default_str()->check(CLI::Range(0, 1));
  sample->add_option("--out", out_path, "Write draws here");

  std::string grid_path;
  std::string preset_name;
  int jobs = 1;
  bool absolute = false;
  auto* benchmark = app.add_subcommand("benchmark", "Welfare of all mechanisms and benchmarks over a grid, as CSV");
  auto* grid_opt = benchmark->add_option("--grid", grid_path, "Grid config JSON");
  auto* preset_opt = benchmark->add_option("--preset", preset_name, "Built-in grid: cost-sweep or prior-sweep");
  grid_opt->excludes(preset_opt);
  benchmark->add_option("--jobs", jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  benchmark->add_option("--out", out_path, "Write CSV here");
  benchmark->add_flag("--absolute", absolute, "Write raw welfares instead of ratios to no-information welfare");

  int digits = 3;
  bool table_csv = false;
  auto* table = app.add_subcommand("bound-table", "Persuasion bound r(i*+1)/F(i*+1) on the N=20 reference grid");
  table->add_option("--digits", digits, "Decimals in the text table")->capture_default_str()->check(CLI::Range(0, 12));
  table->add_flag("--csv", table_csv, "CSV with raw and displayed values");
  table->add_option("--out", out_path, "Write output here");

  int oracle_n = 4;
  int trials = 20;
  std::uint64_t oracle_seed = 1;
  auto* oracle = app.add_subcommand("oracle", "Cross-check solvers against brute force");
  oracle->require_subcommand(1);
  std::vector<CLI::App*> checks;
  for (const char* name : {"lp1-vs-lp2", "sampler-exact", "threshold-bound"}) {
    auto* sub = oracle->add_subcommand(name);
    sub->add_option("--n", oracle_n, "Number of agents")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--trials", trials, "Random instances")->capture_default_str()->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", oracle_seed, "RNG seed")->capture_default_str();
    checks.push_back(sub);
  }

  double q = 0.0;
  std::string profile_text;
  double tol = 1e-8;
  auto* eq = app.add_subcommand("eq-check", "Test whether a strategy profile is an equilibrium at belief q");
  src.attach(eq);
  eq->add_option("--q", q, "Common belief")->required()->check(CLI::Range(0.0, 1.0));
  eq->add_option("--profile", profile_text, "Comma-separated move probabilities")->required();
  eq->add_option("--tol", tol, "Indifference tolerance")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (validate->parsed()) {
      const Instance inst = src.resolve();
      const auto report = validate_instance(inst);
      if (report.ok()) {
        std::cout << "valid\n";
        return kOk;
      }
      for (const auto& v : report.violations) std::cout << v.clause << ' ' << v.index << ' ' << v.message << '\n';
      return kDomain;
    }

    if (solve_priv->parsed()) {
      const Instance inst = src.resolve();
      if (!require_valid(inst)) return kDomain;
      PrivateMechanism mech;
      if (fast_only) {
        auto fp = fast_path(inst);
        if (!fp) {
          std::cerr << "first-i* recommendation is not persuasive: prior1 " << num(inst.prior1()) << " > bound "
                    << num(persuasion_bound(inst)) << '\n';
          return kDomain;
        }
        mech = *fp;
      } else {
        mech = solve_private(inst);
      }
      if (!lp_dump.empty() && inst.prior1() > 0.0) {
        std::ofstream dump(lp_dump, std::ios::binary);
        if (!dump) throw InputError("cannot write '" + lp_dump + "'");
        lp::write_lp_format(dump, build_lp2(inst));
      }
      emit(io::private_document(inst, mech).dump(2) + "\n", out_path);
      std::cerr << "objective " << num(mech.objective) << (mech.fast_path ? " (fast path)" : "") << '\n';
      return kOk;
    }

    if (solve_pub->parsed()) {
      const Instance inst = src.resolve();
      if (!require_valid(inst)) return kDomain;
      const PublicMechanism mech = solve_public(inst);
      if (!verify_public(inst, mech, 1e-7).ok()) throw InvariantViolation("public solution failed verification");
      emit(io::public_document(inst, mech).dump(2) + "\n", out_path);
      std::cerr << "objective " << num(mech.objective) << ", " << mech.support().size() << " signal(s) in support\n";
      return kOk;
    }

    if (sample->parsed()) {
      const Instance inst = src.resolve();
      if (!require_valid(inst)) return kDomain;
      const PrivateMechanism mech = solve_private(inst);
      const MoveSampler sampler(mech);
      Rng rng(seed);
      std::string text;
      for (long d = 0; d < draws; ++d) text += (theta == 1 ? set_line(sampler.draw(rng)) : std::string()) + '\n';
      emit(text, out_path);
      std::cerr << draws << " draw(s), seed " << seed << ", theta " << theta << '\n';
      return kOk;
    }

    if (benchmark->parsed()) {
      if (grid_path.empty() == preset_name.empty()) throw InputError("benchmark needs exactly one of --grid or --preset");
      bench::SweepConfig config = grid_path.empty() ? bench::preset(preset_name) : io::load_sweep_config(grid_path);
      config.jobs = jobs;
      const auto result = bench::run_sweep(config);
      std::ostringstream csv;
      bench::write_csv(csv, result.rows, absolute);
      emit(csv.str(), out_path);

      int broken = 0;
      for (const auto& row : result.rows) {
        if (row.ordering_gap() > 1e-7 || row.tightness_gap() > 1e-7) {
          ++broken;
          std::cerr << "invariant broken at alpha=" << num(row.point.alpha) << " " << to_string(row.point.family)
                    << " r=" << num(row.point.r) << " mu1=" << num(row.point.mu1) << '\n';
        }
      }
      for (const auto& skip : result.skipped) {
        std::cerr << "skipped alpha=" << num(skip.point.alpha) << " " << to_string(skip.point.family)
                  << " r=" << num(skip.point.r) << " mu1=" << num(skip.point.mu1) << ":";
        for (const auto& v : skip.report.violations) std::cerr << ' ' << v.clause;
        std::cerr << '\n';
      }
      std::cerr << result.rows.size() << " row(s), " << result.skipped.size() << " skipped\n";
      return broken == 0 && result.skipped.empty() ? kOk : kDomain;
    }

    if (table->parsed()) {
      const auto cells = bench::bound_table();
      std::string text;
      if (table_csv) {
        text = "cost_family,alpha,r,i_star,bound_raw,bound_display\n";
        for (const auto& c : cells) {
          text += std::string(to_string(c.family)) + ',' + num(c.alpha) + ',' + num(c.r) + ',' +
                  std::to_string(c.i_star) + ',' + (std::isinf(c.raw) ? std::string("inf") : num(c.raw)) + ',' +
                  num(c.display) + '\n';
        }
      } else {
        text = bench::format_bound_table(cells, digits);
      }
      emit(text, out_path);
      return kOk;
    }

    if (oracle->parsed()) {
      int failed = 0;
      if (checks[0]->parsed()) {
        const auto runs = oracle::check_lp1_vs_lp2(oracle_n, trials, oracle_seed);
        for (std::size_t t = 0; t < runs.size(); ++t) {
          const auto& r = runs[t];
          const bool ok = r.gap < 1e-6 && r.persuasive;
          failed += ok ? 0 : 1;
          std::cout << "trial " << t << " prior1 " << num(r.prior1) << " lp1 " << num(r.lp1) << " lp2 " << num(r.lp2)
                    << " gap " << num(r.gap) << (ok ? " ok" : " FAIL") << '\n';
        }
      } else if (checks[1]->parsed()) {
        const auto runs = oracle::check_sampler_exact(oracle_n, trials, oracle_seed);
        for (std::size_t t = 0; t < runs.size(); ++t) {
          const auto& r = runs[t];
          const bool ok = r.max_error <= 1e-10 && r.mass_error <= 1e-10;
          failed += ok ? 0 : 1;
          std::cout << "trial " << t << " max_error " << num(r.max_error) << " mass_error " << num(r.mass_error)
                    << (ok ? " ok" : " FAIL") << '\n';
        }
      } else {
        const auto runs = oracle::check_threshold_bound(oracle_n, trials, oracle_seed);
        for (std::size_t t = 0; t < runs.size(); ++t) {
          const auto& r = runs[t];
          failed += r.failures == 0 ? 0 : 1;
          std::cout << "trial " << t << " equilibria " << r.equilibria << " failures " << r.failures
                    << " worst_excess " << num(r.worst_excess) << (r.failures == 0 ? " ok" : " FAIL") << '\n';
        }
      }
      std::cerr << trials - failed << '/' << trials << " trial(s) passed\n";
      return failed == 0 ? kOk : kDomain;
    }

    if (eq->parsed()) {
      const Instance inst = src.resolve();
      StrategyProfile profile{parse_profile(profile_text), q};
      const bool ok = is_equilibrium(inst, profile, tol);
      for (int i = 1; i <= inst.n_agents(); ++i) {
        std::cout << "agent " << i << " p " << num(profile.probs[i - 1]) << " move_utility "
                  << num(move_utility(inst, profile, i)) << '\n';
      }
      std::cout << "welfare " << num(profile_welfare(inst, profile)) << '\n';
      std::cout << (ok ? "equilibrium" : "not an equilibrium") << '\n';
      return ok ? kOk : kDomain;
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const StructuralError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const ContractError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const CapacityError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "fault: " << e.what() << '\n';
    return kFault;
  }
  return kFault;
}
