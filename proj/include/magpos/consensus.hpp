#pragma once

#include <span>
#include <vector>

#include "magpos/core_types.hpp"

namespace magpos {

/// One answer to a fork-choice query: the peer's stake and its current fork.
struct ViewEntry {
  Stake stake;
  ForkId fork;
};

/// Everything a node learned from querying its peers. Order does not matter.
using NeighborView = std::span<const ViewEntry>;

/// Which fork the evaluating node's own term is scored against.
///   PaperMode:  its recorded fork, like every peer term (worked example, pseudo code).
///   SelfAgrees: always the candidate under evaluation.
enum class EnergyRule { PaperMode, SelfAgrees };

/// -[self_stake + sum over view of stake * agreement(candidate, fork)].
Energy local_energy(Stake self_stake, ForkId candidate, NeighborView view,
                    AgreementConvention convention = AgreementConvention::Signed);

/// -[sum over (self_entry + view) of stake * agreement(candidate, fork)].
/// The node's own recorded fork is held fixed while candidates are cycled.
Energy local_energy_paper_mode(ViewEntry self_entry, ForkId candidate, NeighborView view,
                               AgreementConvention convention = AgreementConvention::Signed);

/// self_stake plus the view stake already on `candidate`.
Stake support_weight(ForkId candidate, Stake self_stake, NeighborView view);

/// The node's current fork plus every fork visible in the view, ascending.
std::vector<ForkId> candidate_forks(ForkId current, NeighborView view);

/// Minimum-energy candidate. Ties keep `current` if it is among the minima,
/// otherwise take the smallest ForkId among them.
///
/// Throws std::invalid_argument when candidates is empty or misses `current`
/// or a fork present in the view.
ForkId choose_fork(Stake self_stake, ForkId current, std::span<const ForkId> candidates, NeighborView view,
                   EnergyRule rule = EnergyRule::PaperMode,
                   AgreementConvention convention = AgreementConvention::Signed);

/// choose_fork over candidate_forks(current, view).
ForkId choose_fork(Stake self_stake, ForkId current, NeighborView view, EnergyRule rule = EnergyRule::PaperMode);

}  // namespace magpos
