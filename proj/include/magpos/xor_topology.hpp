#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "magpos/core_types.hpp"

namespace magpos {

/// XOR metric between identifiers.
constexpr NodeId xor_distance(const NodeId& a, const NodeId& b) { return a ^ b; }

/// Neighbor budget used when a scenario does not set one (Kademlia bucket size).
inline constexpr unsigned kDefaultNeighbors = 16;

/// k-nearest peer sets under the XOR metric.
///
/// Nodes are addressed by their position in ids(), which keeps the input
/// order. neighbors(i) lists indices sorted by XOR distance to ids()[i],
/// ties by ascending NodeId, and has length min(k, N-1). Immutable once built.
class Topology {
 public:
  Topology() = default;
  Topology(std::vector<NodeId> ids, unsigned k, std::vector<std::vector<std::uint32_t>> adjacency);

  std::size_t size() const { return ids_.size(); }
  unsigned k() const { return k_; }
  std::span<const NodeId> ids() const { return ids_; }
  std::span<const std::uint32_t> neighbors(std::size_t node) const { return adjacency_[node]; }

  /// Nodes whose list contains `node`. These are the nodes whose view changes when `node` flips.
  std::span<const std::uint32_t> watchers(std::size_t node) const { return reverse_[node]; }

  /// Index of id; throws std::out_of_range if absent.
  std::size_t index_of(const NodeId& id) const;

  /// Neighbor list of `id` as identifiers.
  std::vector<NodeId> neighbor_ids(const NodeId& id) const;

  bool operator==(const Topology& o) const { return ids_ == o.ids_ && k_ == o.k_ && adjacency_ == o.adjacency_; }

 private:
  std::vector<NodeId> ids_;
  unsigned k_ = 0;
  std::vector<std::vector<std::uint32_t>> adjacency_;
  std::vector<std::vector<std::uint32_t>> reverse_;
  std::vector<std::pair<NodeId, std::uint32_t>> sorted_;  // for index_of
};

/// Thrown by build_topology when the id set contains a duplicate.
class DuplicateNodeId : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// OpenMP-parallel k-nearest construction (one independent selection per node).
Topology build_topology(std::span<const NodeId> ids, unsigned k);

/// Serial reference of build_topology. Same output, one thread.
Topology build_topology_serial(std::span<const NodeId> ids, unsigned k);

/// Undirected edges {a, b} (a < b as indices) where a lists b or b lists a.
std::vector<std::pair<std::uint32_t, std::uint32_t>> undirected_peer_graph(const Topology& t);

/// Number of connected components of the undirected peer graph.
std::size_t connected_components(const Topology& t);

}  // namespace magpos
