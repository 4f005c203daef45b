#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "magpos/sim_engine.hpp"

namespace magpos {

/// Invalid scenario description. key() names the offending field.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::invalid_argument(message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct UniformStake {
  std::uint64_t amount = 100;
};

/// Heavy-tailed stakes: floor(scale * (1 - u)^(-1/shape)), at least 1.
struct ParetoStake {
  double scale = 100.0;
  double shape = 1.5;
};

struct ExplicitStake {
  std::vector<std::uint64_t> values;
};

using StakeDist = std::variant<UniformStake, ParetoStake, ExplicitStake>;

/// Each node draws its fork independently with the given weights (one per fork).
struct RandomAssignment {
  std::vector<double> weights;
};

struct ExplicitAssignment {
  std::vector<std::string> forks;
};

/// Attacker nodes hold stake_fraction of the total stake on attacker_fork; the
/// rest sits on honest_fork. node_fraction (default: stake_fraction) sets how
/// many nodes the attacker runs.
struct AdversaryAssignment {
  double stake_fraction = 0.0;
  std::optional<double> node_fraction;
  std::string attacker_fork;
  std::optional<std::string> honest_fork;
};

using InitialAssignment = std::variant<RandomAssignment, ExplicitAssignment, AdversaryAssignment>;

enum class IdScheme { Random, Sequential };

struct ScenarioConfig {
  std::string name = "scenario";
  std::size_t n_nodes = 0;
  unsigned k = kDefaultNeighbors;
  std::vector<std::string> forks;
  StakeDist stake = UniformStake{};
  InitialAssignment assignment = RandomAssignment{};
  UpdateOrder update_order = UpdateOrder::AsyncShuffled;
  std::vector<std::uint64_t> seeds{1};
  std::optional<std::uint64_t> max_rounds;
  IdScheme ids = IdScheme::Random;

  std::uint64_t effective_max_rounds() const { return max_rounds.value_or(10 * static_cast<std::uint64_t>(n_nodes)); }

  /// First n listed seeds, continued with consecutive integers after the last one.
  std::vector<std::uint64_t> seed_list(std::size_t n) const;
};

/// Throws ConfigError naming the first invalid field.
void validate_config(const ScenarioConfig& cfg);

/// Deterministic network for (cfg, seed): ids, stakes, initial forks, topology.
ScenarioState build_scenario(const ScenarioConfig& cfg, std::uint64_t seed);

/// The five-node worked example: stakes 10/50/20/30/80 on forks x/x/y/z/z,
/// sequential ids, complete graph.
ScenarioConfig paper_example_config();
ScenarioState make_paper_example();

/// Fork a run is judged against: the attacker fork for adversary scenarios,
/// otherwise the initial stake-majority fork.
ForkId target_fork(const ScenarioConfig& cfg, const ScenarioState& initial);

struct RunRecord {
  std::uint64_t seed = 0;
  RunMetrics metrics;
  ForkId target;
  bool target_won = false;
};

RunRecord run_scenario(const ScenarioConfig& cfg, std::uint64_t seed, std::vector<RoundTrace>* trace = nullptr);

enum class SweepParam { StakeFraction, NodeFraction, K, NNodes };

std::string to_string(SweepParam p);
SweepParam parse_sweep_param(const std::string& text);

/// cfg with one parameter replaced. Fraction parameters need an adversary assignment.
ScenarioConfig with_param(const ScenarioConfig& cfg, SweepParam p, double value);

struct SweepRow {
  double swept_value = 0.0;
  std::uint64_t runs = 0;
  double win_rate = 0.0;
  double mean_rounds = 0.0;
  double convergence_rate = 0.0;
  std::vector<RunRecord> records;  // ascending seed
};

struct SweepResult {
  SweepParam param = SweepParam::StakeFraction;
  std::vector<SweepRow> rows;  // ascending swept_value
};

/// Every (value, seed) run in parallel with OpenMP; rows are merged in a fixed
/// order, so the result does not depend on the thread count.
SweepResult run_sweep(const ScenarioConfig& base, SweepParam p, const std::vector<double>& values,
                      std::size_t seeds_per_point);

/// Serial reference of run_sweep.
SweepResult run_sweep_serial(const ScenarioConfig& base, SweepParam p, const std::vector<double>& values,
                             std::size_t seeds_per_point);

/// Attacker stake fraction sweep. A base without an adversary assignment gets
/// one: attacker on the last declared fork, honest nodes on the first.
SweepResult attack_sweep(const ScenarioConfig& base, const std::vector<double>& fractions,
                         std::size_t seeds_per_point);

/// Attacker node-count sweep at a fixed attacker stake fraction below one half.
SweepResult sybil_sweep(const ScenarioConfig& base, const std::vector<double>& attacker_node_fractions,
                        double attacker_stake_fraction, std::size_t seeds_per_point);

/// Split `total` proportionally to `weights` with the largest-remainder rule
/// (ties to the lower index). Equal split when every weight is zero.
std::vector<std::uint64_t> apportion(const std::vector<std::uint64_t>& weights, std::uint64_t total);

}  // namespace magpos
