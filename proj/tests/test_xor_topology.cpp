#include <doctest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "magpos/rng.hpp"
#include "magpos/xor_topology.hpp"

using namespace magpos;

namespace {

std::vector<NodeId> random_ids(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<NodeId> ids(n);
  for (auto& id : ids) id = rng.node_id();
  return ids;
}

// Independent oracle: XOR word by word, full sort of every peer, truncate.
std::vector<NodeId> oracle_neighbors(const std::vector<NodeId>& ids, const NodeId& self, std::size_t k) {
  std::vector<std::pair<std::array<std::uint64_t, 4>, NodeId>> all;
  for (const auto& other : ids) {
    if (other == self) continue;
    std::array<std::uint64_t, 4> d{};
    for (int w = 0; w < 4; ++w) d[w] = self.words[w] ^ other.words[w];
    all.emplace_back(d, other);
  }
  std::sort(all.begin(), all.end());
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < std::min(k, all.size()); ++i) out.push_back(all[i].second);
  return out;
}

}  // namespace

TEST_CASE("xor_distance basics") {
  const NodeId a = NodeId::from_u64(0b0101);
  CHECK(xor_distance(a, a).is_zero());
  CHECK(xor_distance(a, NodeId::from_u64(0b0001)) == NodeId::from_u64(0b0100));
}

TEST_CASE("XOR metric axioms on random triples") {
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    const NodeId a = rng.node_id(), b = rng.node_id(), c = rng.node_id();
    CHECK(xor_distance(a, b) == xor_distance(b, a));
    CHECK(xor_distance(a, b).is_zero() == (a == b));
    // exact identity, stronger than the triangle inequality
    NodeId expected;
    for (int w = 0; w < 4; ++w) expected.words[w] = (a.words[w] ^ b.words[w]) ^ (b.words[w] ^ c.words[w]);
    CHECK(xor_distance(a, c) == expected);
    CHECK(xor_distance(a, c) == (xor_distance(a, b) ^ xor_distance(b, c)));
  }
}

TEST_CASE("two nodes list each other") {
  const std::vector<NodeId> ids{NodeId::from_u64(5), NodeId::from_u64(9)};
  const Topology t = build_topology(ids, 4);
  CHECK(t.neighbor_ids(ids[0]) == std::vector<NodeId>{ids[1]});
  CHECK(t.neighbor_ids(ids[1]) == std::vector<NodeId>{ids[0]});
  CHECK(undirected_peer_graph(t).size() == 1);
}

TEST_CASE("low-bit ids pick the nearest under XOR") {
  std::vector<NodeId> ids;
  for (std::uint64_t i = 0; i < 4; ++i) ids.push_back(NodeId::from_u64(i));
  const Topology t = build_topology(ids, 2);
  CHECK(t.neighbor_ids(ids[0]) == std::vector<NodeId>{ids[1], ids[2]});
  // d(3,2)=1, d(3,1)=2
  CHECK(t.neighbor_ids(ids[3]) == std::vector<NodeId>{ids[2], ids[1]});
}

TEST_CASE("random 64-node topology matches the sort-and-truncate oracle") {
  const auto ids = random_ids(64, 3);
  const Topology t = build_topology(ids, 8);
  for (const auto& id : ids) {
    const auto got = t.neighbor_ids(id);
    CHECK(got.size() == 8);
    CHECK(got == oracle_neighbors(ids, id, 8));
    CHECK(std::find(got.begin(), got.end(), id) == got.end());
  }
}

TEST_CASE("parallel and serial construction agree") {
  for (std::size_t n : {1u, 2u, 17u, 300u}) {
    const auto ids = random_ids(n, n);
    for (unsigned k : {1u, 3u, 16u}) CHECK(build_topology(ids, k) == build_topology_serial(ids, k));
  }
}

TEST_CASE("construction is permutation invariant") {
  auto ids = random_ids(100, 5);
  const Topology t = build_topology(ids, 10);
  Rng rng(99);
  rng.shuffle(std::span<NodeId>(ids));
  const Topology shuffled = build_topology(ids, 10);
  for (const auto& id : ids) CHECK(t.neighbor_ids(id) == shuffled.neighbor_ids(id));
}

TEST_CASE("raising k only extends each list") {
  const auto ids = random_ids(80, 8);
  const Topology small = build_topology(ids, 4);
  const Topology large = build_topology(ids, 12);
  for (const auto& id : ids) {
    const auto a = small.neighbor_ids(id), b = large.neighbor_ids(id);
    REQUIRE(b.size() >= a.size());
    CHECK(std::equal(a.begin(), a.end(), b.begin()));
  }
}

TEST_CASE("k >= N-1 yields the complete graph") {
  const auto ids = random_ids(12, 4);
  const Topology t = build_topology(ids, 50);
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(t.neighbors(i).size() == 11);
  CHECK(undirected_peer_graph(t).size() == 12 * 11 / 2);
  CHECK(connected_components(t) == 1);
}

TEST_CASE("k=1 connectivity against a union-find oracle") {
  auto oracle_components = [](const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges, std::uint32_t n) {
    std::map<std::uint32_t, std::uint32_t> parent;
    for (std::uint32_t i = 0; i < n; ++i) parent[i] = i;
    std::function<std::uint32_t(std::uint32_t)> find = [&](std::uint32_t v) {
      return parent[v] == v ? v : parent[v] = find(parent[v]);
    };
    for (auto [a, b] : edges) parent[find(a)] = find(b);
    std::set<std::uint32_t> roots;
    for (std::uint32_t i = 0; i < n; ++i) roots.insert(find(i));
    return roots.size();
  };

  // star: the hub 0 is every leaf's nearest peer
  const std::vector<NodeId> star{NodeId::from_u64(0), NodeId::from_u64(8), NodeId::from_u64(4), NodeId::from_u64(2)};
  const Topology s = build_topology(star, 1);
  const auto star_edges = undirected_peer_graph(s);
  CHECK(star_edges.size() >= 3);
  CHECK(oracle_components(star_edges, 4) == 1);
  CHECK(connected_components(s) == 1);

  // pairs: 0<->1 and 2<->3 split into two islands
  const std::vector<NodeId> pairs{NodeId::from_u64(0), NodeId::from_u64(1), NodeId::from_u64(2), NodeId::from_u64(3)};
  const Topology p = build_topology(pairs, 1);
  const auto pair_edges = undirected_peer_graph(p);
  CHECK(pair_edges.size() == 2);
  CHECK(oracle_components(pair_edges, 4) == 2);
  CHECK(connected_components(p) == 2);
}

TEST_CASE("no node lists itself and lists are sorted by distance") {
  const auto ids = random_ids(200, 12);
  const Topology t = build_topology(ids, 16);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto peers = t.neighbors(i);
    CHECK(peers.size() == 16);
    for (std::size_t p = 0; p < peers.size(); ++p) {
      CHECK(peers[p] != i);
      if (p > 0) CHECK(xor_distance(ids[i], ids[peers[p - 1]]) < xor_distance(ids[i], ids[peers[p]]));
    }
  }
}

TEST_CASE("input errors") {
  const std::vector<NodeId> dup{NodeId::from_u64(1), NodeId::from_u64(1)};
  CHECK_THROWS_AS(build_topology(dup, 2), DuplicateNodeId);
  CHECK_THROWS_AS(build_topology({}, 2), std::invalid_argument);
  const std::vector<NodeId> one{NodeId::from_u64(1)};
  CHECK_THROWS_AS(build_topology(one, 0), std::invalid_argument);
  const Topology t = build_topology(one, 3);
  CHECK(t.neighbors(0).empty());
  CHECK_THROWS_AS(t.index_of(NodeId::from_u64(2)), std::out_of_range);
}
