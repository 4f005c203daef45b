#include "magpos/report.hpp"

#include <fmt/format.h>

namespace magpos::report {

std::string format_number(double v) { return fmt::format("{}", v); }

namespace {

std::string fixed6(double v) { return fmt::format("{:.6f}", v); }

double share(const std::vector<Stake>& stakes, std::size_t f) {
  std::uint64_t total = 0;
  for (auto s : stakes) total += s.amount;
  return total == 0 ? 0.0 : static_cast<double>(stakes[f].amount) / static_cast<double>(total);
}

}  // namespace

std::string run_row(const ScenarioConfig& cfg, const RunRecord& rec) {
  const auto& m = rec.metrics;
  const std::string winner = m.winning_fork ? cfg.forks.at(m.winning_fork->value) : "none";
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{}", cfg.name, rec.seed, cfg.n_nodes, cfg.k,
                     to_string(cfg.update_order), m.converged ? "true" : "false", m.rounds, m.messages, m.flips,
                     winner, fixed6(m.winning_stake_fraction));
}

std::string run_csv(const ScenarioConfig& cfg, const RunRecord& rec) {
  return std::string(kRunHeader) + "\n" + run_row(cfg, rec) + "\n";
}

std::string trace_csv(const ScenarioConfig& cfg, const std::vector<RoundTrace>& trace) {
  std::string out = "round,conflicted,flips,messages";
  for (const auto& f : cfg.forks) out += ",share_" + f;
  out += "\n";
  for (const auto& t : trace) {
    out += fmt::format("{},{},{},{}", t.round, t.conflicted_at_start, t.flips, t.messages);
    for (std::size_t f = 0; f < t.fork_stake.size(); ++f) out += "," + fixed6(share(t.fork_stake, f));
    out += "\n";
  }
  return out;
}

std::string sweep_csv(const SweepResult& result) {
  std::string out = std::string(kSweepHeader) + "\n";
  for (const auto& row : result.rows)
    out += fmt::format("{},{},{},{},{},{}\n", to_string(result.param), format_number(row.swept_value), row.runs,
                       fixed6(row.win_rate), fixed6(row.mean_rounds), fixed6(row.convergence_rate));
  return out;
}

std::string sweep_runs_csv(const ScenarioConfig& base, const SweepResult& result) {
  std::string out = std::string(kRunHeader) + ",swept_param,swept_value\n";
  for (const auto& row : result.rows) {
    const ScenarioConfig cfg = with_param(base, result.param, row.swept_value);
    for (const auto& rec : row.records)
      out += run_row(cfg, rec) + "," + to_string(result.param) + "," + format_number(row.swept_value) + "\n";
  }
  return out;
}

std::string curve_csv(const std::vector<std::pair<double, double>>& curve) {
  std::string out = "theta,normalized_energy\n";
  for (const auto& [theta, e] : curve) out += fmt::format("{:.9f},{:.9f}\n", theta, e);
  return out;
}

std::string relax_trace_csv(const std::vector<RelaxPhase>& phases) {
  std::string out = "phase,sweep,energy\n";
  for (const auto& p : phases)
    for (std::size_t s = 0; s < p.energy_trace.size(); ++s)
      out += fmt::format("{},{},{:.12f}\n", p.phase, s, p.energy_trace[s]);
  return out;
}

std::string angles_csv(const lattice::DipoleGrid& g) {
  std::string out = "x,y,angle\n";
  for (std::size_t y = 0; y < g.height(); ++y)
    for (std::size_t x = 0; x < g.width(); ++x) out += fmt::format("{},{},{:.12f}\n", x, y, g.angle(x, y));
  return out;
}

}  // namespace magpos::report
