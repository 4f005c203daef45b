#include "magpos/sim_engine.hpp"

#include <algorithm>
#include <stdexcept>

#include "magpos/log.hpp"
#include "magpos/rng.hpp"

namespace magpos {

std::string to_string(UpdateOrder order) {
  return order == UpdateOrder::AsyncShuffled ? "async" : "sync";
}

UpdateOrder parse_update_order(const std::string& text) {
  if (text == "async" || text == "AsyncShuffled") return UpdateOrder::AsyncShuffled;
  if (text == "sync" || text == "SyncSweep") return UpdateOrder::SyncSweep;
  throw std::invalid_argument("unknown update_order '" + text + "' (expected async or sync)");
}

void validate(const ScenarioState& state) {
  if (state.nodes.size() != state.topology.size())
    throw std::invalid_argument("scenario state: node count does not match topology");
  if (state.fork_names.empty()) throw std::invalid_argument("scenario state: no forks declared");
  for (std::size_t i = 0; i < state.nodes.size(); ++i) {
    if (state.nodes[i].id != state.topology.ids()[i])
      throw std::invalid_argument("scenario state: node order does not match topology");
    if (state.nodes[i].fork.value >= state.fork_names.size())
      throw std::invalid_argument("scenario state: node holds an undeclared fork");
  }
}

namespace {

bool has_disagreeing_neighbor(const ScenarioState& state, std::size_t i) {
  const ForkId mine = state.nodes[i].fork;
  for (auto j : state.topology.neighbors(i))
    if (state.nodes[j].fork != mine) return true;
  return false;
}

// Fork choice of node i given the forks its peers report.
template <typename ForkOf>
ForkId decide(ScenarioState& state, std::size_t i, ForkOf fork_of, std::vector<ViewEntry>& view) {
  const auto peers = state.topology.neighbors(i);
  view.clear();
  for (auto j : peers) view.push_back({state.nodes[j].stake, fork_of(j)});
  state.message_count += peers.size();
  state.max_messages_per_step = std::max<std::uint64_t>(state.max_messages_per_step, peers.size());
  ++state.node_steps;
  return choose_fork(state.nodes[i].stake, fork_of(i), view, EnergyRule::PaperMode);
}

// After node i changed fork, re-observe i and every node that lists i.
void refresh_flags_around(ScenarioState& state, std::size_t i) {
  state.nodes[i].conflicted = has_disagreeing_neighbor(state, i);
  for (auto w : state.topology.watchers(i)) state.nodes[w].conflicted = has_disagreeing_neighbor(state, w);
}

std::uint64_t count_conflicted(const ScenarioState& state) {
  return static_cast<std::uint64_t>(
      std::count_if(state.nodes.begin(), state.nodes.end(), [](const SimNode& n) { return n.conflicted; }));
}

std::uint64_t async_round(ScenarioState& state, Rng& rng) {
  std::vector<std::uint32_t> order;
  for (std::size_t i = 0; i < state.nodes.size(); ++i)
    if (state.nodes[i].conflicted) order.push_back(static_cast<std::uint32_t>(i));
  rng.shuffle(std::span<std::uint32_t>(order));
  std::uint64_t flips = 0;
  for (auto i : order)
    if (node_step_at(state, i)) ++flips;
  return flips;
}

std::uint64_t sync_round(ScenarioState& state) {
  std::vector<ForkId> snapshot(state.nodes.size());
  for (std::size_t i = 0; i < state.nodes.size(); ++i) snapshot[i] = state.nodes[i].fork;
  auto fork_of = [&](std::size_t j) { return snapshot[j]; };

  std::vector<ForkId> next = snapshot;
  std::vector<ViewEntry> view;
  for (std::size_t i = 0; i < state.nodes.size(); ++i)
    if (state.nodes[i].conflicted) next[i] = decide(state, i, fork_of, view);

  std::uint64_t flips = 0;
  for (std::size_t i = 0; i < state.nodes.size(); ++i)
    if (next[i] != snapshot[i]) {
      state.nodes[i].fork = next[i];
      ++flips;
    }
  state.flips += flips;
  detect_conflicts(state);
  return flips;
}

}  // namespace

void detect_conflicts(ScenarioState& state) {
  for (std::size_t i = 0; i < state.nodes.size(); ++i) state.nodes[i].conflicted = has_disagreeing_neighbor(state, i);
}

bool node_step_at(ScenarioState& state, std::size_t i) {
  if (i >= state.nodes.size()) throw std::out_of_range("node_step: node index out of range");
  if (!state.nodes[i].conflicted) return false;

  std::vector<ViewEntry> view;
  const ForkId before = state.nodes[i].fork;
  const ForkId chosen = decide(state, i, [&](std::size_t j) { return state.nodes[j].fork; }, view);
  if (chosen == before) {
    state.nodes[i].conflicted = has_disagreeing_neighbor(state, i);
    return false;
  }
  state.nodes[i].fork = chosen;
  ++state.flips;
  refresh_flags_around(state, i);
  return true;
}

bool node_step(ScenarioState& state, const NodeId& node) {
  return node_step_at(state, state.topology.index_of(node));
}

std::vector<Stake> stake_by_fork(const ScenarioState& state) {
  std::vector<Stake> totals(state.fork_names.size());
  for (const auto& n : state.nodes) totals.at(n.fork.value) = checked_add(totals[n.fork.value], n.stake);
  return totals;
}

ForkId stake_majority_oracle(const ScenarioState& state) {
  const auto totals = stake_by_fork(state);
  std::size_t best = 0;
  for (std::size_t f = 1; f < totals.size(); ++f)
    if (totals[f] > totals[best]) best = f;
  return ForkId{static_cast<std::uint32_t>(best)};
}

bool all_aligned(const ScenarioState& state) {
  return std::all_of(state.nodes.begin(), state.nodes.end(),
                     [&](const SimNode& n) { return n.fork == state.nodes.front().fork; });
}

RunMetrics run(ScenarioState& state, std::uint64_t max_rounds, std::vector<RoundTrace>* trace) {
  if (max_rounds < 1) throw std::invalid_argument("run: max_rounds must be >= 1");
  validate(state);
  detect_conflicts(state);

  RunMetrics m;
  Rng rng(state.rng_seed);
  std::uint64_t executed = 0;
  while (executed < max_rounds) {
    const std::uint64_t conflicted = count_conflicted(state);
    if (conflicted == 0) break;
    const std::uint64_t flips =
        state.update_order == UpdateOrder::AsyncShuffled ? async_round(state, rng) : sync_round(state);
    ++executed;
    ++state.round;
    if (trace) trace->push_back({state.round, conflicted, flips, state.message_count, stake_by_fork(state)});
    log().trace("{} round {}: {} conflicted, {} flips", state.name, state.round, conflicted, flips);
    if (flips == 0) {
      m.stalled = true;
      break;
    }
  }

  m.rounds = executed;
  m.messages = state.message_count;
  m.flips = state.flips;
  m.node_steps = state.node_steps;
  m.max_messages_per_step = state.max_messages_per_step;
  m.final_fork_stake = stake_by_fork(state);
  m.converged = all_aligned(state);
  if (m.converged) m.stalled = false;

  Stake total;
  for (auto s : m.final_fork_stake) total = checked_add(total, s);
  const ForkId leader = m.converged ? state.nodes.front().fork : stake_majority_oracle(state);
  if (m.converged) m.winning_fork = leader;
  if (total.amount > 0)
    m.winning_stake_fraction =
        static_cast<double>(m.final_fork_stake[leader.value].amount) / static_cast<double>(total.amount);
  else
    m.winning_stake_fraction = m.converged ? 1.0 : 0.0;

  log().info("{}: converged={} rounds={} messages={} flips={}", state.name, m.converged, m.rounds, m.messages,
               m.flips);
  return m;
}

}  // namespace magpos
