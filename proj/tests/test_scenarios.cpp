#include <doctest.h>

#include <cmath>
#include <numeric>

#include "magpos/scenarios.hpp"

using namespace magpos;

namespace {

ScenarioConfig complete_two_fork(std::size_t n) {
  ScenarioConfig cfg;
  cfg.name = "complete";
  cfg.n_nodes = n;
  cfg.k = static_cast<unsigned>(n);
  cfg.forks = {"honest", "attacker"};
  cfg.stake = UniformStake{100};
  cfg.assignment = AdversaryAssignment{0.4, std::nullopt, "attacker", "honest"};
  cfg.seeds = {1, 2, 3, 4, 5};
  return cfg;
}

std::uint64_t total_stake(const ScenarioState& s) {
  std::uint64_t t = 0;
  for (const auto& n : s.nodes) t += n.stake.amount;
  return t;
}

}  // namespace

TEST_CASE("make_paper_example") {
  const ScenarioState s = make_paper_example();
  CHECK(s.nodes.size() == 5);
  CHECK(total_stake(s) == 190);
  CHECK(s.fork_name(stake_majority_oracle(s)) == "z");
  const std::vector<std::uint64_t> stakes{10, 50, 20, 30, 80};
  const std::vector<std::string> forks{"x", "x", "y", "z", "z"};
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(s.nodes[i].stake.amount == stakes[i]);
    CHECK(s.fork_name(s.nodes[i].fork) == forks[i]);
    CHECK(s.topology.neighbors(i).size() == 4);
  }
}

TEST_CASE("apportion splits exactly") {
  CHECK(apportion({1, 1, 1}, 10) == std::vector<std::uint64_t>{4, 3, 3});
  CHECK(apportion({0, 0}, 5) == std::vector<std::uint64_t>{3, 2});
  CHECK(apportion({3, 1}, 8) == std::vector<std::uint64_t>{6, 2});
  const auto big = apportion({~0ULL / 4, ~0ULL / 4, 1}, 1'000'000'007ULL);
  CHECK(std::accumulate(big.begin(), big.end(), 0ULL) == 1'000'000'007ULL);
}

TEST_CASE("adversary placement hits the requested stake share exactly") {
  for (double f : {0.0, 0.3, 0.49, 0.51, 0.7, 1.0}) {
    ScenarioConfig cfg = complete_two_fork(40);
    std::get<AdversaryAssignment>(cfg.assignment).stake_fraction = f;
    for (std::uint64_t seed : {1, 2, 3}) {
      const ScenarioState s = build_scenario(cfg, seed);
      const auto totals = stake_by_fork(s);
      CHECK(total_stake(s) == 4000);
      CHECK(totals[1].amount == static_cast<std::uint64_t>(std::llround(f * 4000)));
    }
  }
}

TEST_CASE("adversary node fraction controls the attacker node count") {
  ScenarioConfig cfg = complete_two_fork(100);
  auto& adv = std::get<AdversaryAssignment>(cfg.assignment);
  adv.stake_fraction = 0.1;
  adv.node_fraction = 0.9;
  const ScenarioState s = build_scenario(cfg, 4);
  std::size_t attackers = 0;
  for (const auto& n : s.nodes) attackers += n.fork == ForkId{1};
  CHECK(attackers == 90);
  CHECK(stake_by_fork(s)[1].amount == 1000);
}

TEST_CASE("build_scenario is deterministic per seed and varies across seeds") {
  ScenarioConfig cfg;
  cfg.n_nodes = 50;
  cfg.forks = {"a", "b", "c"};
  cfg.stake = ParetoStake{10.0, 1.5};
  cfg.assignment = RandomAssignment{{0.2, 0.3, 0.5}};
  const auto a = build_scenario(cfg, 9), b = build_scenario(cfg, 9), c = build_scenario(cfg, 10);
  bool differs = false;
  for (std::size_t i = 0; i < 50; ++i) {
    CHECK(a.nodes[i].id == b.nodes[i].id);
    CHECK(a.nodes[i].stake == b.nodes[i].stake);
    CHECK(a.nodes[i].fork == b.nodes[i].fork);
    CHECK(a.nodes[i].stake.amount >= 10);
    differs = differs || a.nodes[i].id != c.nodes[i].id;
  }
  CHECK(differs);
  CHECK(a.topology == b.topology);
}

TEST_CASE("random assignment never picks a zero-weight fork") {
  ScenarioConfig cfg;
  cfg.n_nodes = 300;
  cfg.forks = {"a", "b", "c"};
  cfg.assignment = RandomAssignment{{1.0, 0.0, 1.0}};
  const auto s = build_scenario(cfg, 1);
  for (const auto& n : s.nodes) CHECK(n.fork != ForkId{1});
}

TEST_CASE("validate_config names the offending key") {
  auto key_of = [](const ScenarioConfig& cfg) {
    try {
      validate_config(cfg);
    } catch (const ConfigError& e) {
      return e.key();
    }
    return std::string("<valid>");
  };
  ScenarioConfig ok = complete_two_fork(10);
  CHECK(key_of(ok) == "<valid>");

  ScenarioConfig c = ok;
  c.n_nodes = 0;
  CHECK(key_of(c) == "n_nodes");
  c = ok;
  c.k = 0;
  CHECK(key_of(c) == "k");
  c = ok;
  c.forks = {"a", "a"};
  CHECK(key_of(c) == "forks");
  c = ok;
  c.stake = ExplicitStake{{1, 2}};
  CHECK(key_of(c) == "stake.values");
  c = ok;
  c.assignment = AdversaryAssignment{1.5, std::nullopt, "attacker", std::nullopt};
  CHECK(key_of(c) == "assignment.stake_fraction");
  c = ok;
  c.assignment = AdversaryAssignment{0.5, std::nullopt, "nobody", std::nullopt};
  CHECK(key_of(c) == "assignment.attacker_fork");
  c = ok;
  c.assignment = ExplicitAssignment{{"honest"}};
  CHECK(key_of(c) == "assignment.forks");
  c = ok;
  c.assignment = RandomAssignment{{1.0}};
  CHECK(key_of(c) == "assignment.weights");
  c = ok;
  c.seeds.clear();
  CHECK(key_of(c) == "seeds");
}

TEST_CASE("seed_list continues past the listed seeds") {
  ScenarioConfig cfg;
  cfg.seeds = {7, 9};
  CHECK(cfg.seed_list(1) == std::vector<std::uint64_t>{7});
  CHECK(cfg.seed_list(4) == std::vector<std::uint64_t>{7, 9, 10, 11});
}

TEST_CASE("attack_sweep on a complete graph") {
  const ScenarioConfig base = complete_two_fork(20);
  SUBCASE("extremes") {
    const auto r = attack_sweep(base, {0.0, 1.0}, 3);
    REQUIRE(r.rows.size() == 2);
    CHECK(r.rows[0].win_rate == 0.0);
    CHECK(r.rows[1].win_rate == 1.0);
    for (const auto& row : r.rows) CHECK(row.runs == 3);
  }
  SUBCASE("crossover at one half") {
    const auto r = attack_sweep(base, {0.6, 0.4, 0.45, 0.55}, 5);
    REQUIRE(r.rows.size() == 4);
    const std::vector<double> expected{0.0, 0.0, 1.0, 1.0};
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(r.rows[i].win_rate == expected[i]);
      CHECK(r.rows[i].convergence_rate == 1.0);
    }
    CHECK(r.rows.front().swept_value == 0.4);
  }
  SUBCASE("base without an adversary gets one") {
    ScenarioConfig plain = base;
    plain.assignment = RandomAssignment{{1.0, 1.0}};
    const auto r = attack_sweep(plain, {0.7}, 2);
    CHECK(r.rows[0].win_rate == 1.0);
  }
  CHECK_THROWS(attack_sweep(base, {1.2}, 1));
  CHECK_THROWS(attack_sweep(base, {}, 1));
}

TEST_CASE("win rate is non-decreasing in attacker stake on a complete graph") {
  const auto r = attack_sweep(complete_two_fork(15), {0.05, 0.2, 0.35, 0.48, 0.52, 0.65, 0.8, 0.95}, 4);
  for (std::size_t i = 1; i < r.rows.size(); ++i) CHECK(r.rows[i].win_rate >= r.rows[i - 1].win_rate);
}

TEST_CASE("sybil_sweep: node count does not buy a takeover") {
  const ScenarioConfig base = complete_two_fork(40);
  const auto r = sybil_sweep(base, {0.0, 0.5, 0.9}, 0.1, 5);
  for (const auto& row : r.rows) CHECK(row.win_rate == 0.0);
  const auto r49 = sybil_sweep(base, {0.5}, 0.49, 5);
  CHECK(r49.rows[0].win_rate == 0.0);
  // the honest fork wins at every node fraction
  for (const auto& row : r.rows)
    for (const auto& rec : row.records) CHECK(rec.metrics.winning_fork == ForkId{0});
  CHECK_THROWS_AS(sybil_sweep(base, {0.5}, 0.5, 1), std::invalid_argument);
}

TEST_CASE("parallel and serial sweeps agree") {
  ScenarioConfig cfg;
  cfg.n_nodes = 64;
  cfg.k = 6;
  cfg.forks = {"h", "a"};
  cfg.stake = ParetoStake{20.0, 1.3};
  cfg.assignment = AdversaryAssignment{0.4, std::nullopt, "a", std::nullopt};
  const auto p = run_sweep(cfg, SweepParam::K, {4, 8, 16}, 6);
  const auto s = run_sweep_serial(cfg, SweepParam::K, {4, 8, 16}, 6);
  REQUIRE(p.rows.size() == s.rows.size());
  for (std::size_t i = 0; i < p.rows.size(); ++i) {
    CHECK(p.rows[i].win_rate == s.rows[i].win_rate);
    CHECK(p.rows[i].mean_rounds == s.rows[i].mean_rounds);
    for (std::size_t j = 0; j < p.rows[i].records.size(); ++j) {
      CHECK(p.rows[i].records[j].seed == s.rows[i].records[j].seed);
      CHECK(p.rows[i].records[j].metrics.messages == s.rows[i].records[j].metrics.messages);
    }
  }
}

TEST_CASE("with_param") {
  const ScenarioConfig base = complete_two_fork(10);
  CHECK(with_param(base, SweepParam::K, 3).k == 3);
  CHECK(with_param(base, SweepParam::NNodes, 12).n_nodes == 12);
  CHECK_THROWS_AS(with_param(base, SweepParam::K, 2.5), ConfigError);
  ScenarioConfig plain = base;
  plain.assignment = RandomAssignment{{1.0, 1.0}};
  CHECK_THROWS_AS(with_param(plain, SweepParam::StakeFraction, 0.3), ConfigError);
  CHECK(parse_sweep_param("node_fraction") == SweepParam::NodeFraction);
  CHECK_THROWS_AS(parse_sweep_param("stake"), std::invalid_argument);
}
