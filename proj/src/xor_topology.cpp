#include "magpos/xor_topology.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace magpos {

namespace {

struct Candidate {
  NodeId distance;
  NodeId id;
  std::uint32_t index;
};

bool closer(const Candidate& a, const Candidate& b) {
  if (a.distance != b.distance) return a.distance < b.distance;
  return a.id < b.id;
}

void check_inputs(std::span<const NodeId> ids, unsigned k) {
  if (ids.empty()) throw std::invalid_argument("build_topology: empty id set");
  if (k < 1) throw std::invalid_argument("build_topology: k must be >= 1");
  if (ids.size() > UINT32_MAX) throw std::invalid_argument("build_topology: too many nodes");
  std::vector<NodeId> sorted(ids.begin(), ids.end());
  std::sort(sorted.begin(), sorted.end());
  auto dup = std::adjacent_find(sorted.begin(), sorted.end());
  if (dup != sorted.end()) throw DuplicateNodeId("duplicate node id " + dup->to_hex());
}

// Selects the nearest peers of one node. Shared by the serial and parallel drivers.
std::vector<std::uint32_t> nearest_peers(std::span<const NodeId> ids, std::size_t self, unsigned k,
                                         std::vector<Candidate>& scratch) {
  scratch.clear();
  for (std::size_t j = 0; j < ids.size(); ++j) {
    if (j == self) continue;
    scratch.push_back({xor_distance(ids[self], ids[j]), ids[j], static_cast<std::uint32_t>(j)});
  }
  const std::size_t keep = std::min<std::size_t>(k, scratch.size());
  std::partial_sort(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(keep), scratch.end(), closer);
  std::vector<std::uint32_t> out(keep);
  for (std::size_t i = 0; i < keep; ++i) out[i] = scratch[i].index;
  return out;
}

}  // namespace

Topology::Topology(std::vector<NodeId> ids, unsigned k, std::vector<std::vector<std::uint32_t>> adjacency)
    : ids_(std::move(ids)), k_(k), adjacency_(std::move(adjacency)), reverse_(ids_.size()) {
  for (std::size_t i = 0; i < adjacency_.size(); ++i)
    for (auto j : adjacency_[i]) reverse_[j].push_back(static_cast<std::uint32_t>(i));
  sorted_.reserve(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) sorted_.emplace_back(ids_[i], static_cast<std::uint32_t>(i));
  std::sort(sorted_.begin(), sorted_.end());
}

std::size_t Topology::index_of(const NodeId& id) const {
  auto it = std::lower_bound(sorted_.begin(), sorted_.end(), std::pair<NodeId, std::uint32_t>{id, 0});
  if (it == sorted_.end() || it->first != id) throw std::out_of_range("unknown node id " + id.to_hex());
  return it->second;
}

std::vector<NodeId> Topology::neighbor_ids(const NodeId& id) const {
  std::vector<NodeId> out;
  for (auto j : neighbors(index_of(id))) out.push_back(ids_[j]);
  return out;
}

Topology build_topology_serial(std::span<const NodeId> ids, unsigned k) {
  check_inputs(ids, k);
  std::vector<std::vector<std::uint32_t>> adjacency(ids.size());
  std::vector<Candidate> scratch;
  for (std::size_t i = 0; i < ids.size(); ++i) adjacency[i] = nearest_peers(ids, i, k, scratch);
  return Topology({ids.begin(), ids.end()}, k, std::move(adjacency));
}

Topology build_topology(std::span<const NodeId> ids, unsigned k) {
  check_inputs(ids, k);
  std::vector<std::vector<std::uint32_t>> adjacency(ids.size());
  const auto n = static_cast<std::int64_t>(ids.size());
#pragma omp parallel
  {
    std::vector<Candidate> scratch;
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < n; ++i)
      adjacency[static_cast<std::size_t>(i)] = nearest_peers(ids, static_cast<std::size_t>(i), k, scratch);
  }
  return Topology({ids.begin(), ids.end()}, k, std::move(adjacency));
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> undirected_peer_graph(const Topology& t) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (std::size_t i = 0; i < t.size(); ++i)
    for (auto j : t.neighbors(i)) {
      auto a = static_cast<std::uint32_t>(i);
      edges.emplace_back(std::min(a, j), std::max(a, j));
    }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

std::size_t connected_components(const Topology& t) {
  std::vector<std::uint32_t> parent(t.size());
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = t.size();
  for (auto [a, b] : undirected_peer_graph(t)) {
    auto ra = find(a), rb = find(b);
    if (ra != rb) {
      parent[ra] = rb;
      --components;
    }
  }
  return components;
}

}  // namespace magpos
