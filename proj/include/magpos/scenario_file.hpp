#pragma once

#include <optional>
#include <string>

#include "magpos/scenarios.hpp"

namespace magpos {

/// A scenario document as loaded from disk.
///
/// The file is JSON:
///
///   {
///     "name": "attack",                 // optional, defaults to the file stem
///     "n_nodes": 64,
///     "k": 16,                          // optional, default 16
///     "forks": ["honest", "attacker"],
///     "stake": {"kind": "uniform", "amount": 100},
///              // or {"kind": "pareto", "scale": 100, "shape": 1.5}
///              // or {"kind": "explicit", "values": [10, 50, ...]}
///     "assignment": {"kind": "adversary", "stake_fraction": 0.4,
///                    "node_fraction": 0.4, "attacker_fork": "attacker",
///                    "honest_fork": "honest"},
///              // or {"kind": "random", "weights": [0.5, 0.5]}
///              // or {"kind": "explicit", "forks": ["x", "x", ...]}
///     "update_order": "async",          // optional: async | sync
///     "seeds": [1, 2, 3],               // or {"start": 1, "count": 20}
///     "max_rounds": 640,                // optional, default 10 * n_nodes
///     "ids": "random",                  // optional: random | sequential
///     "output": "results/attack.csv"    // optional default for --out
///   }
///
/// Unknown keys are rejected so that typos never silently fall back to defaults.
struct ScenarioFile {
  ScenarioConfig config;
  std::optional<std::string> output;
};

/// Parses a scenario document. default_name is used when "name" is absent.
/// Throws ConfigError naming the offending key.
ScenarioFile parse_scenario(const std::string& text, const std::string& default_name = "scenario");

/// Reads and parses a scenario file. Throws ConfigError (key "file") when unreadable.
ScenarioFile load_scenario_file(const std::string& path);

}  // namespace magpos
