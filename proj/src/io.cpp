#include "persuasion/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "persuasion/errors.hpp"

namespace persuasion::io {

using nlohmann::json;

namespace {

const json& require(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) throw InputError(std::string("missing key '") + key + "'");
  return obj.at(key);
}

double number(const json& v, const char* what) {
  if (!v.is_number()) throw InputError(std::string(what) + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw InputError(std::string(what) + " must be finite");
  return x;
}

std::vector<double> number_list(const json& v, const char* what) {
  if (!v.is_array()) throw InputError(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) out.push_back(number(x, what));
  return out;
}

std::vector<double> table_values(const json& spec, int n, const char* what) {
  auto values = number_list(require(spec, "values"), what);
  if (values.size() != static_cast<std::size_t>(n) + 1) {
    std::ostringstream os;
    os << what << " table needs " << n + 1 << " entries (indices 0..N), got " << values.size();
    throw InputError(os.str());
  }
  return values;
}

std::string family_name(const json& spec, const char* what) {
  const auto& f = require(spec, "family");
  if (!f.is_string()) throw InputError(std::string(what) + " family must be a string");
  return f.get<std::string>();
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

json number_array(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(tidy(x));
  return out;
}

json matrix_rows(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(tidy(m(i, k)));
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

double tidy(double v) {
  if (v == 0.0 || !std::isfinite(v)) return v == 0.0 ? 0.0 : v;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return std::strtod(buf, nullptr);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Instance parse_instance(std::string_view text) {
  const json doc = parse_json(text);
  try {
    const auto& n_json = require(doc, "n_agents");
    if (!n_json.is_number_integer()) throw InputError("n_agents must be an integer");
    const int n = n_json.get<int>();
    if (n < 1) throw InputError("n_agents must be at least 1");
    const double prior1 = number(require(doc, "prior1"), "prior1");

    const auto& sharing = require(doc, "sharing");
    SharingTable f;
    const std::string sf = family_name(sharing, "sharing");
    if (sf == "power") {
      f = power_sharing(n, number(require(sharing, "alpha"), "sharing alpha"));
    } else if (sf == "table") {
      f.values = table_values(sharing, n, "sharing");
    } else {
      throw InputError("unknown sharing family '" + sf + "' (expected power or table)");
    }

    const auto& costs = require(doc, "costs");
    CostTable r;
    const std::string cf = family_name(costs, "costs");
    if (cf == "table") {
      r.values = table_values(costs, n, "costs");
    } else {
      r = family_costs(n, parse_cost_family(cf), number(require(costs, "coeff"), "costs coeff"));
    }
    return Instance(n, prior1, std::move(f), std::move(r));
  } catch (const json::exception& e) {
    throw InputError(std::string("bad instance document: ") + e.what());
  }
}

Instance load_instance(const std::string& path) { return parse_instance(read_file(path)); }

json instance_to_json(const Instance& inst) {
  json doc;
  doc["costs"] = {{"family", "table"}, {"values", number_array(inst.costs().values)}};
  doc["n_agents"] = inst.n_agents();
  doc["prior1"] = tidy(inst.prior1());
  doc["sharing"] = {{"family", "table"}, {"values", number_array(inst.sharing().values)}};
  return doc;
}

std::string fingerprint(const Instance& inst) {
  const std::string canonical = instance_to_json(inst).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

bench::SweepConfig parse_sweep_config(std::string_view text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw InputError("grid config must be a JSON object");
  try {
    bench::SweepConfig config;
    if (doc.contains("preset")) {
      if (!doc["preset"].is_string()) throw InputError("preset must be a string");
      config = bench::preset(doc["preset"].get<std::string>());
    } else {
      for (const char* key : {"n_agents", "alphas", "cost_families", "r_values", "mu1_values"}) require(doc, key);
    }
    if (doc.contains("n_agents")) {
      if (!doc["n_agents"].is_number_integer() || doc["n_agents"].get<int>() < 1) {
        throw InputError("n_agents must be a positive integer");
      }
      config.n_agents = doc["n_agents"].get<int>();
    }
    if (doc.contains("alphas")) config.alphas = number_list(doc["alphas"], "alphas");
    if (doc.contains("r_values")) config.r_values = number_list(doc["r_values"], "r_values");
    if (doc.contains("mu1_values")) config.mu1_values = number_list(doc["mu1_values"], "mu1_values");
    if (doc.contains("cost_families")) {
      const auto& fams = doc["cost_families"];
      if (!fams.is_array()) throw InputError("cost_families must be an array of strings");
      config.families.clear();
      for (const auto& f : fams) {
        if (!f.is_string()) throw InputError("cost_families must be an array of strings");
        config.families.push_back(parse_cost_family(f.get<std::string>()));
      }
    }
    return config;
  } catch (const json::exception& e) {
    throw InputError(std::string("bad grid config: ") + e.what());
  }
}

bench::SweepConfig load_sweep_config(const std::string& path) { return parse_sweep_config(read_file(path)); }

json private_document(const Instance& inst, const PrivateMechanism& mech) {
  json doc;
  doc["toolkit_version"] = std::string(kToolkitVersion);
  doc["instance_fingerprint"] = fingerprint(inst);
  doc["kind"] = "private";
  doc["n_agents"] = mech.n_agents;
  doc["objective"] = tidy(mech.objective);
  doc["fast_path"] = mech.fast_path;
  doc["size_dist"] = number_array(mech.size_dist);
  doc["marginals"] = matrix_rows(mech.marginals);
  return doc;
}

json public_document(const Instance& inst, const PublicMechanism& mech) {
  json doc;
  doc["toolkit_version"] = std::string(kToolkitVersion);
  doc["instance_fingerprint"] = fingerprint(inst);
  doc["kind"] = "public";
  doc["n_agents"] = mech.n_agents;
  doc["objective"] = tidy(mech.objective);
  json rows = json::array();
  for (int theta = 0; theta <= 1; ++theta) {
    for (int i = 0; i <= mech.n_agents; ++i) {
      const auto& post = mech.posteriors[i];
      rows.push_back({{"theta", theta},
                      {"signal", i},
                      {"weight", tidy(mech.weight(theta, i))},
                      {"posterior", post ? json(tidy(*post)) : json(nullptr)}});
    }
  }
  doc["rows"] = std::move(rows);
  json support = json::array();
  for (int s : mech.support()) support.push_back(s);
  doc["support"] = std::move(support);
  return doc;
}

}  // namespace persuasion::io
