#include "magpos/consensus.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

namespace magpos {

namespace {

std::int64_t term(Stake s, ForkId candidate, ForkId fork, AgreementConvention convention) {
  return checked_mul(signed_amount(s), agreement(candidate, fork, convention));
}

}  // namespace

Energy local_energy(Stake self_stake, ForkId candidate, NeighborView view, AgreementConvention convention) {
  std::int64_t sum = signed_amount(self_stake);
  for (const auto& e : view) sum = checked_add(sum, term(e.stake, candidate, e.fork, convention));
  return Energy{-sum};
}

Energy local_energy_paper_mode(ViewEntry self_entry, ForkId candidate, NeighborView view,
                               AgreementConvention convention) {
  std::int64_t sum = term(self_entry.stake, candidate, self_entry.fork, convention);
  for (const auto& e : view) sum = checked_add(sum, term(e.stake, candidate, e.fork, convention));
  return Energy{-sum};
}

Stake support_weight(ForkId candidate, Stake self_stake, NeighborView view) {
  Stake total = checked_add(self_stake, Stake{0});
  for (const auto& e : view)
    if (e.fork == candidate) total = checked_add(total, e.stake);
  return total;
}

std::vector<ForkId> candidate_forks(ForkId current, NeighborView view) {
  std::vector<ForkId> out{current};
  for (const auto& e : view) out.push_back(e.fork);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ForkId choose_fork(Stake self_stake, ForkId current, std::span<const ForkId> candidates, NeighborView view,
                   EnergyRule rule, AgreementConvention convention) {
  if (candidates.empty()) throw std::invalid_argument("choose_fork: empty candidate set");
  auto listed = [&](ForkId f) { return std::find(candidates.begin(), candidates.end(), f) != candidates.end(); };
  if (!listed(current)) throw std::invalid_argument("choose_fork: current fork not among candidates");
  for (const auto& e : view)
    if (!listed(e.fork)) throw std::invalid_argument("choose_fork: viewed fork not among candidates");

  std::vector<Energy> energies;
  energies.reserve(candidates.size());
  for (ForkId c : candidates)
    energies.push_back(rule == EnergyRule::PaperMode
                           ? local_energy_paper_mode({self_stake, current}, c, view, convention)
                           : local_energy(self_stake, c, view, convention));
  const Energy lowest = *std::min_element(energies.begin(), energies.end());

  std::optional<ForkId> winner;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (energies[i] != lowest) continue;
    if (candidates[i] == current) return current;
    if (!winner || candidates[i] < *winner) winner = candidates[i];
  }
  return *winner;
}

ForkId choose_fork(Stake self_stake, ForkId current, NeighborView view, EnergyRule rule) {
  const auto candidates = candidate_forks(current, view);
  return choose_fork(self_stake, current, candidates, view, rule);
}

}  // namespace magpos
