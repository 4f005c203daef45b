#include "magpos/scenario_file.hpp"

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

namespace magpos {

namespace {

using nlohmann::json;

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void reject_unknown(const json& obj, const std::string& prefix, std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ConfigError(join(prefix, key), "unknown key '" + join(prefix, key) + "'");
  }
}

const json& require(const json& obj, const std::string& prefix, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(join(prefix, key), "missing required key '" + join(prefix, key) + "'");
  return *it;
}

const json& require_object(const json& obj, const std::string& prefix, const char* key) {
  const json& v = require(obj, prefix, key);
  if (!v.is_object()) throw ConfigError(join(prefix, key), "'" + join(prefix, key) + "' must be an object");
  return v;
}

std::uint64_t as_u64(const json& v, const std::string& key) {
  if (!v.is_number_unsigned()) throw ConfigError(key, "'" + key + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

double as_double(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(key, "'" + key + "' must be a number");
  return v.get<double>();
}

std::string as_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError(key, "'" + key + "' must be a string");
  return v.get<std::string>();
}

const json& as_array(const json& v, const std::string& key) {
  if (!v.is_array()) throw ConfigError(key, "'" + key + "' must be an array");
  return v;
}

StakeDist parse_stake(const json& s) {
  const std::string kind = as_string(require(s, "stake", "kind"), "stake.kind");
  if (kind == "uniform") {
    reject_unknown(s, "stake", {"kind", "amount"});
    return UniformStake{as_u64(require(s, "stake", "amount"), "stake.amount")};
  }
  if (kind == "pareto") {
    reject_unknown(s, "stake", {"kind", "scale", "shape"});
    return ParetoStake{as_double(require(s, "stake", "scale"), "stake.scale"),
                       as_double(require(s, "stake", "shape"), "stake.shape")};
  }
  if (kind == "explicit") {
    reject_unknown(s, "stake", {"kind", "values"});
    ExplicitStake e;
    for (const auto& v : as_array(require(s, "stake", "values"), "stake.values"))
      e.values.push_back(as_u64(v, "stake.values"));
    return e;
  }
  throw ConfigError("stake.kind", "stake.kind must be uniform, pareto or explicit (got '" + kind + "')");
}

InitialAssignment parse_assignment(const json& a) {
  const std::string kind = as_string(require(a, "assignment", "kind"), "assignment.kind");
  if (kind == "random") {
    reject_unknown(a, "assignment", {"kind", "weights"});
    RandomAssignment r;
    for (const auto& w : as_array(require(a, "assignment", "weights"), "assignment.weights"))
      r.weights.push_back(as_double(w, "assignment.weights"));
    return r;
  }
  if (kind == "explicit") {
    reject_unknown(a, "assignment", {"kind", "forks"});
    ExplicitAssignment e;
    for (const auto& f : as_array(require(a, "assignment", "forks"), "assignment.forks"))
      e.forks.push_back(as_string(f, "assignment.forks"));
    return e;
  }
  if (kind == "adversary") {
    reject_unknown(a, "assignment", {"kind", "stake_fraction", "node_fraction", "attacker_fork", "honest_fork"});
    AdversaryAssignment adv;
    adv.stake_fraction = as_double(require(a, "assignment", "stake_fraction"), "assignment.stake_fraction");
    adv.attacker_fork = as_string(require(a, "assignment", "attacker_fork"), "assignment.attacker_fork");
    if (a.contains("node_fraction"))
      adv.node_fraction = as_double(a["node_fraction"], "assignment.node_fraction");
    if (a.contains("honest_fork")) adv.honest_fork = as_string(a["honest_fork"], "assignment.honest_fork");
    return adv;
  }
  throw ConfigError("assignment.kind",
                    "assignment.kind must be random, explicit or adversary (got '" + kind + "')");
}

std::vector<std::uint64_t> parse_seeds(const json& s) {
  std::vector<std::uint64_t> out;
  if (s.is_array()) {
    for (const auto& v : s) out.push_back(as_u64(v, "seeds"));
    return out;
  }
  if (!s.is_object()) throw ConfigError("seeds", "'seeds' must be an array or {\"start\", \"count\"}");
  reject_unknown(s, "seeds", {"start", "count"});
  const auto start = as_u64(require(s, "seeds", "start"), "seeds.start");
  const auto count = as_u64(require(s, "seeds", "count"), "seeds.count");
  if (count > 1'000'000) throw ConfigError("seeds.count", "seeds.count is unreasonably large");
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(start + i);
  return out;
}

}  // namespace

ScenarioFile parse_scenario(const std::string& text, const std::string& default_name) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("file", std::string("malformed scenario document: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("file", "scenario document must be a JSON object");
  reject_unknown(doc, "", {"name", "n_nodes", "k", "forks", "stake", "assignment", "update_order", "seeds",
                           "max_rounds", "ids", "output"});

  ScenarioFile out;
  ScenarioConfig& cfg = out.config;
  cfg.name = doc.contains("name") ? as_string(doc["name"], "name") : default_name;
  cfg.n_nodes = as_u64(require(doc, "", "n_nodes"), "n_nodes");
  if (doc.contains("k")) {
    const auto k = as_u64(doc["k"], "k");
    if (k > UINT32_MAX) throw ConfigError("k", "k too large");
    cfg.k = static_cast<unsigned>(k);
  }
  for (const auto& f : as_array(require(doc, "", "forks"), "forks")) cfg.forks.push_back(as_string(f, "forks"));
  cfg.stake = parse_stake(require_object(doc, "", "stake"));
  cfg.assignment = parse_assignment(require_object(doc, "", "assignment"));
  if (doc.contains("update_order")) {
    try {
      cfg.update_order = parse_update_order(as_string(doc["update_order"], "update_order"));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw ConfigError("update_order", e.what());
    }
  }
  cfg.seeds = parse_seeds(require(doc, "", "seeds"));
  if (doc.contains("max_rounds")) cfg.max_rounds = as_u64(doc["max_rounds"], "max_rounds");
  if (doc.contains("ids")) {
    const auto ids = as_string(doc["ids"], "ids");
    if (ids == "random") cfg.ids = IdScheme::Random;
    else if (ids == "sequential") cfg.ids = IdScheme::Sequential;
    else throw ConfigError("ids", "ids must be random or sequential (got '" + ids + "')");
  }
  if (doc.contains("output")) out.output = as_string(doc["output"], "output");

  validate_config(cfg);
  return out;
}

ScenarioFile load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("file", "cannot read scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), std::filesystem::path(path).stem().string());
}

}  // namespace magpos
