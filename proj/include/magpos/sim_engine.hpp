#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "magpos/consensus.hpp"
#include "magpos/core_types.hpp"
#include "magpos/xor_topology.hpp"

namespace magpos {

/// AsyncShuffled: conflicted nodes step one at a time in a seeded random order,
/// each seeing the updates made earlier in the round.
/// SyncSweep: conflicted nodes decide from the round-start snapshot and apply together.
enum class UpdateOrder { AsyncShuffled, SyncSweep };

std::string to_string(UpdateOrder order);
UpdateOrder parse_update_order(const std::string& text);

/// A network mid-run. nodes[i] sits at topology.ids()[i]; every node's fork
/// indexes fork_names. Counters only grow.
struct ScenarioState {
  std::string name;
  std::vector<SimNode> nodes;
  Topology topology;
  std::vector<std::string> fork_names;
  std::uint64_t rng_seed = 0;
  UpdateOrder update_order = UpdateOrder::AsyncShuffled;

  std::uint64_t round = 0;
  std::uint64_t message_count = 0;
  std::uint64_t flips = 0;
  std::uint64_t node_steps = 0;
  std::uint64_t max_messages_per_step = 0;

  std::size_t fork_count() const { return fork_names.size(); }
  const std::string& fork_name(ForkId f) const { return fork_names.at(f.value); }
};

struct RunMetrics {
  bool converged = false;
  /// Stopped before max_rounds because a whole round changed nothing while
  /// conflicts remained (a fixed point with several forks).
  bool stalled = false;
  std::uint64_t rounds = 0;
  std::uint64_t messages = 0;
  std::uint64_t flips = 0;
  std::uint64_t node_steps = 0;
  std::uint64_t max_messages_per_step = 0;
  std::optional<ForkId> winning_fork;
  /// Share of total stake on the winning fork; on non-convergence the share of
  /// the leading fork.
  double winning_stake_fraction = 0.0;
  std::vector<Stake> final_fork_stake;
};

struct RoundTrace {
  std::uint64_t round = 0;
  std::uint64_t conflicted_at_start = 0;
  std::uint64_t flips = 0;
  std::uint64_t messages = 0;  // cumulative
  std::vector<Stake> fork_stake;
};

/// Throws std::invalid_argument when nodes and topology disagree or a fork is undeclared.
void validate(const ScenarioState& state);

/// Sets each node's conflicted flag: true iff some node on its own list holds a
/// different fork. Observation is free; no messages are counted.
void detect_conflicts(ScenarioState& state);

/// One protocol step for a conflicted node: query every listed peer, choose the
/// minimum-energy fork, adopt it. Returns true if the node changed fork.
/// Non-conflicted nodes are skipped at zero cost.
bool node_step(ScenarioState& state, const NodeId& node);
bool node_step_at(ScenarioState& state, std::size_t index);

/// Runs rounds until no node is conflicted, a round changes nothing, or
/// max_rounds is reached. Non-convergence is reported, not thrown.
RunMetrics run(ScenarioState& state, std::uint64_t max_rounds, std::vector<RoundTrace>* trace = nullptr);

/// Total stake per fork, indexed by ForkId value.
std::vector<Stake> stake_by_fork(const ScenarioState& state);

/// Fork with the largest total stake over all nodes; ties to the smallest ForkId.
ForkId stake_majority_oracle(const ScenarioState& state);

/// True iff every node holds the same fork.
bool all_aligned(const ScenarioState& state);

}  // namespace magpos
