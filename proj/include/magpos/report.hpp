#pragma once

#include <string>
#include <vector>

#include "magpos/lattice.hpp"
#include "magpos/scenarios.hpp"

namespace magpos::report {

// Fixed CSV headers. Changing any of these breaks downstream tooling.
inline constexpr const char* kRunHeader =
    "scenario,seed,n_nodes,k,update_order,converged,rounds,messages,flips,winning_fork,winning_stake_fraction";
inline constexpr const char* kSweepHeader = "swept_param,swept_value,runs,win_rate,mean_rounds,convergence_rate";

/// One run-metrics row (no trailing newline). winning_fork is "none" when the run did not converge.
std::string run_row(const ScenarioConfig& cfg, const RunRecord& rec);

/// Header plus one row.
std::string run_csv(const ScenarioConfig& cfg, const RunRecord& rec);

/// Per-round trace: round,conflicted,flips,messages then one share_<fork> column per fork.
std::string trace_csv(const ScenarioConfig& cfg, const std::vector<RoundTrace>& trace);

/// One aggregate row per swept value, ascending.
std::string sweep_csv(const SweepResult& result);

/// Every run of a sweep: kRunHeader plus swept_param,swept_value; rows sorted by (swept_value, seed).
std::string sweep_runs_csv(const ScenarioConfig& base, const SweepResult& result);

/// theta,normalized_energy
std::string curve_csv(const std::vector<std::pair<double, double>>& curve);

/// phase,sweep,energy for one or more relaxation phases.
struct RelaxPhase {
  std::string phase;
  std::vector<double> energy_trace;
};
std::string relax_trace_csv(const std::vector<RelaxPhase>& phases);

/// x,y,angle
std::string angles_csv(const lattice::DipoleGrid& g);

/// Shortest round-trip decimal form.
std::string format_number(double v);

}  // namespace magpos::report
