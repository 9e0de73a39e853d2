#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"

#include "persuasion/bench.hpp"
#include "persuasion/model.hpp"
#include "persuasion/private_design.hpp"
#include "persuasion/public_design.hpp"

// JSON documents for instances, grid configs and solved mechanisms. All
// parse failures raise InputError.

namespace persuasion::io {

inline constexpr std::string_view kToolkitVersion = "0.1.0";

/// {"n_agents": N, "prior1": mu,
///  "sharing": {"family": "power", "alpha": a} | {"family": "table", "values": [...]},
///  "costs": {"family": "constant"|"linear"|"quadratic", "coeff": c} | {"family": "table", "values": [...]}}
Instance parse_instance(std::string_view text);
Instance load_instance(const std::string& path);

/// Explicit-table form with keys in sorted order.
nlohmann::json instance_to_json(const Instance& inst);

/// 16 hex digits of FNV-1a 64 over the compact canonical JSON.
std::string fingerprint(const Instance& inst);

/// {"n_agents", "alphas", "cost_families", "r_values", "mu1_values"}, or
/// {"preset": "cost-sweep"|"prior-sweep"} optionally overriding any of those keys.
bench::SweepConfig parse_sweep_config(std::string_view text);
bench::SweepConfig load_sweep_config(const std::string& path);

nlohmann::json private_document(const Instance& inst, const PrivateMechanism& mech);
nlohmann::json public_document(const Instance& inst, const PublicMechanism& mech);

/// Rounds to 15 significant digits so output is stable across libm builds.
double tidy(double v);

std::string read_file(const std::string& path);

}  // namespace persuasion::io
