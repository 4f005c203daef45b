#include "magpos/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <set>

#include "magpos/rng.hpp"

namespace magpos {

namespace {

constexpr std::uint64_t kMaxParetoStake = 1'000'000'000'000ULL;

std::uint64_t mix_seed(std::uint64_t seed) {
  // splitmix64 finalizer; keeps the generation stream apart from the update-order stream
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::optional<ForkId> find_fork(const ScenarioConfig& cfg, const std::string& name) {
  auto it = std::find(cfg.forks.begin(), cfg.forks.end(), name);
  if (it == cfg.forks.end()) return std::nullopt;
  return ForkId{static_cast<std::uint32_t>(it - cfg.forks.begin())};
}

void check_fraction(double f, const std::string& key) {
  if (!(f >= 0.0 && f <= 1.0)) throw ConfigError(key, key + ": fraction must lie in [0, 1]");
}

ForkId honest_fork_of(const ScenarioConfig& cfg, const AdversaryAssignment& a) {
  if (a.honest_fork) return *find_fork(cfg, *a.honest_fork);
  const ForkId attacker = *find_fork(cfg, a.attacker_fork);
  for (std::uint32_t f = 0; f < cfg.forks.size(); ++f)
    if (ForkId{f} != attacker) return ForkId{f};
  throw ConfigError("assignment.attacker_fork", "adversary assignment needs a second fork");
}

std::vector<std::uint64_t> sample_stakes(const ScenarioConfig& cfg, Rng& rng) {
  std::vector<std::uint64_t> out(cfg.n_nodes);
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UniformStake>) {
          std::fill(out.begin(), out.end(), d.amount);
        } else if constexpr (std::is_same_v<T, ParetoStake>) {
          for (auto& s : out) {
            const double v = std::floor(d.scale * std::pow(1.0 - rng.unit(), -1.0 / d.shape));
            s = static_cast<std::uint64_t>(std::clamp(v, 1.0, static_cast<double>(kMaxParetoStake)));
          }
        } else {
          out = d.values;
        }
      },
      cfg.stake);
  return out;
}

struct Placement {
  std::vector<std::uint64_t> stakes;
  std::vector<ForkId> forks;
};

Placement place_adversary(const ScenarioConfig& cfg, const AdversaryAssignment& a, std::vector<std::uint64_t> base,
                          Rng& rng) {
  const std::size_t n = cfg.n_nodes;
  const double f = a.stake_fraction;
  const double nf = a.node_fraction.value_or(f);
  std::size_t m = static_cast<std::size_t>(std::llround(nf * static_cast<double>(n)));
  const std::size_t lo = f > 0.0 ? 1 : 0;
  const std::size_t hi = f < 1.0 ? n - 1 : n;
  if (n == 1) m = f >= 0.5 ? 1 : 0;
  else m = std::clamp(m, lo, hi);

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  rng.shuffle(std::span<std::uint32_t>(order));

  std::uint64_t total = 0;
  for (auto s : base) total = checked_add(Stake{total}, Stake{s}).amount;
  const auto attacker_total =
      static_cast<std::uint64_t>(std::llround(static_cast<long double>(f) * static_cast<long double>(total)));

  std::vector<std::uint64_t> attacker_w, honest_w;
  for (std::size_t i = 0; i < n; ++i) (i < m ? attacker_w : honest_w).push_back(base[order[i]]);
  const auto attacker_s = m > 0 ? apportion(attacker_w, attacker_total) : std::vector<std::uint64_t>{};
  const auto honest_s = m < n ? apportion(honest_w, total - (m > 0 ? attacker_total : 0)) : std::vector<std::uint64_t>{};

  const ForkId attacker = *find_fork(cfg, a.attacker_fork);
  const ForkId honest = honest_fork_of(cfg, a);
  Placement p{std::vector<std::uint64_t>(n), std::vector<ForkId>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const auto node = order[i];
    p.stakes[node] = i < m ? attacker_s[i] : honest_s[i - m];
    p.forks[node] = i < m ? attacker : honest;
  }
  return p;
}

}  // namespace

std::vector<std::uint64_t> ScenarioConfig::seed_list(std::size_t n) const {
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < n && i < seeds.size(); ++i) out.push_back(seeds[i]);
  std::uint64_t next = seeds.empty() ? 1 : seeds.back() + 1;
  while (out.size() < n) out.push_back(next++);
  return out;
}

__extension__ using u128 = unsigned __int128;

std::vector<std::uint64_t> apportion(const std::vector<std::uint64_t>& weights, std::uint64_t total) {
  const std::size_t n = weights.size();
  if (n == 0) throw std::invalid_argument("apportion: no recipients");
  u128 wsum = 0;
  for (auto w : weights) wsum += w;
  std::vector<std::uint64_t> out(n, 0);
  if (wsum == 0) {
    for (std::size_t i = 0; i < n; ++i) out[i] = total / n + (i < total % n ? 1 : 0);
    return out;
  }
  std::vector<u128> rem(n);
  std::uint64_t given = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const u128 num = static_cast<u128>(total) * weights[i];
    out[i] = static_cast<std::uint64_t>(num / wsum);
    rem[i] = num % wsum;
    given += out[i];
  }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
  for (std::size_t r = 0; given < total; ++r, ++given) ++out[idx[r % n]];
  return out;
}

void validate_config(const ScenarioConfig& cfg) {
  if (cfg.n_nodes < 1) throw ConfigError("n_nodes", "n_nodes must be >= 1");
  if (cfg.n_nodes > UINT32_MAX) throw ConfigError("n_nodes", "n_nodes too large");
  if (cfg.k < 1) throw ConfigError("k", "k must be >= 1");
  if (cfg.forks.empty()) throw ConfigError("forks", "at least one fork is required");
  if (std::set<std::string>(cfg.forks.begin(), cfg.forks.end()).size() != cfg.forks.size())
    throw ConfigError("forks", "fork names must be unique");
  if (cfg.seeds.empty()) throw ConfigError("seeds", "at least one seed is required");
  if (cfg.max_rounds && *cfg.max_rounds < 1) throw ConfigError("max_rounds", "max_rounds must be >= 1");

  if (auto* e = std::get_if<ExplicitStake>(&cfg.stake); e && e->values.size() != cfg.n_nodes)
    throw ConfigError("stake.values", "stake.values must list exactly n_nodes stakes");
  if (auto* p = std::get_if<ParetoStake>(&cfg.stake)) {
    if (!(p->scale > 0.0) || !std::isfinite(p->scale)) throw ConfigError("stake.scale", "stake.scale must be > 0");
    if (!(p->shape > 0.0) || !std::isfinite(p->shape)) throw ConfigError("stake.shape", "stake.shape must be > 0");
  }

  if (auto* r = std::get_if<RandomAssignment>(&cfg.assignment)) {
    if (r->weights.size() != cfg.forks.size())
      throw ConfigError("assignment.weights", "assignment.weights needs one weight per fork");
    double sum = 0.0;
    for (double w : r->weights) {
      if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError("assignment.weights", "weights must be >= 0");
      sum += w;
    }
    if (!(sum > 0.0)) throw ConfigError("assignment.weights", "weights must not all be zero");
  } else if (auto* e = std::get_if<ExplicitAssignment>(&cfg.assignment)) {
    if (e->forks.size() != cfg.n_nodes)
      throw ConfigError("assignment.forks", "assignment.forks must list exactly n_nodes forks");
    for (const auto& f : e->forks)
      if (!find_fork(cfg, f)) throw ConfigError("assignment.forks", "undeclared fork '" + f + "'");
  } else {
    const auto& a = std::get<AdversaryAssignment>(cfg.assignment);
    check_fraction(a.stake_fraction, "assignment.stake_fraction");
    if (a.node_fraction) check_fraction(*a.node_fraction, "assignment.node_fraction");
    if (!find_fork(cfg, a.attacker_fork))
      throw ConfigError("assignment.attacker_fork", "undeclared fork '" + a.attacker_fork + "'");
    if (cfg.forks.size() < 2) throw ConfigError("forks", "adversary assignment needs two forks");
    if (a.honest_fork) {
      if (!find_fork(cfg, *a.honest_fork))
        throw ConfigError("assignment.honest_fork", "undeclared fork '" + *a.honest_fork + "'");
      if (*a.honest_fork == a.attacker_fork)
        throw ConfigError("assignment.honest_fork", "honest and attacker forks must differ");
    }
  }
}

ScenarioState build_scenario(const ScenarioConfig& cfg, std::uint64_t seed) {
  validate_config(cfg);
  Rng rng(mix_seed(seed));

  std::vector<NodeId> ids(cfg.n_nodes);
  for (std::size_t i = 0; i < cfg.n_nodes; ++i)
    ids[i] = cfg.ids == IdScheme::Sequential ? NodeId::from_u64(i) : rng.node_id();

  std::vector<std::uint64_t> stakes = sample_stakes(cfg, rng);
  std::vector<ForkId> forks(cfg.n_nodes);
  if (auto* r = std::get_if<RandomAssignment>(&cfg.assignment)) {
    const double sum = std::accumulate(r->weights.begin(), r->weights.end(), 0.0);
    for (auto& f : forks) {
      double u = rng.unit() * sum;
      std::uint32_t pick = 0;
      while (pick + 1 < r->weights.size() && (u >= r->weights[pick] || r->weights[pick] == 0.0)) {
        u -= r->weights[pick];
        ++pick;
      }
      f = ForkId{pick};
    }
  } else if (auto* e = std::get_if<ExplicitAssignment>(&cfg.assignment)) {
    for (std::size_t i = 0; i < cfg.n_nodes; ++i) forks[i] = *find_fork(cfg, e->forks[i]);
  } else {
    auto placed = place_adversary(cfg, std::get<AdversaryAssignment>(cfg.assignment), std::move(stakes), rng);
    stakes = std::move(placed.stakes);
    forks = std::move(placed.forks);
  }

  ScenarioState s;
  s.name = cfg.name;
  s.fork_names = cfg.forks;
  s.rng_seed = seed;
  s.update_order = cfg.update_order;
  s.topology = build_topology(ids, cfg.k);
  s.nodes.resize(cfg.n_nodes);
  Stake total;
  for (std::size_t i = 0; i < cfg.n_nodes; ++i) {
    s.nodes[i] = SimNode{ids[i], Stake{stakes[i]}, forks[i], false};
    total = checked_add(total, s.nodes[i].stake);
  }
  detect_conflicts(s);
  return s;
}

ScenarioConfig paper_example_config() {
  ScenarioConfig cfg;
  cfg.name = "paper_example";
  cfg.n_nodes = 5;
  cfg.k = 4;
  cfg.forks = {"x", "y", "z"};
  cfg.stake = ExplicitStake{{10, 50, 20, 30, 80}};
  cfg.assignment = ExplicitAssignment{{"x", "x", "y", "z", "z"}};
  cfg.ids = IdScheme::Sequential;
  cfg.seeds = {1};
  return cfg;
}

ScenarioState make_paper_example() { return build_scenario(paper_example_config(), 1); }

ForkId target_fork(const ScenarioConfig& cfg, const ScenarioState& initial) {
  if (auto* a = std::get_if<AdversaryAssignment>(&cfg.assignment)) return *find_fork(cfg, a->attacker_fork);
  return stake_majority_oracle(initial);
}

RunRecord run_scenario(const ScenarioConfig& cfg, std::uint64_t seed, std::vector<RoundTrace>* trace) {
  ScenarioState state = build_scenario(cfg, seed);
  RunRecord rec;
  rec.seed = seed;
  rec.target = target_fork(cfg, state);
  rec.metrics = run(state, cfg.effective_max_rounds(), trace);
  rec.target_won = rec.metrics.converged && rec.metrics.winning_fork == rec.target;
  return rec;
}

std::string to_string(SweepParam p) {
  switch (p) {
    case SweepParam::StakeFraction: return "stake_fraction";
    case SweepParam::NodeFraction: return "node_fraction";
    case SweepParam::K: return "k";
    case SweepParam::NNodes: return "n_nodes";
  }
  return "?";
}

SweepParam parse_sweep_param(const std::string& text) {
  for (auto p : {SweepParam::StakeFraction, SweepParam::NodeFraction, SweepParam::K, SweepParam::NNodes})
    if (to_string(p) == text) return p;
  throw std::invalid_argument("unknown sweep parameter '" + text +
                              "' (expected stake_fraction, node_fraction, k or n_nodes)");
}

ScenarioConfig with_param(const ScenarioConfig& cfg, SweepParam p, double value) {
  ScenarioConfig out = cfg;
  auto whole = [&](const char* key) {
    if (!(value >= 1.0) || value != std::floor(value) || value > 4.0e9)
      throw ConfigError(key, std::string(key) + ": sweep value must be a positive integer");
    return static_cast<std::uint64_t>(value);
  };
  switch (p) {
    case SweepParam::StakeFraction:
    case SweepParam::NodeFraction: {
      auto* a = std::get_if<AdversaryAssignment>(&out.assignment);
      if (!a) throw ConfigError("assignment", "fraction sweeps need an adversary assignment");
      if (p == SweepParam::StakeFraction) a->stake_fraction = value;
      else a->node_fraction = value;
      break;
    }
    case SweepParam::K: out.k = static_cast<unsigned>(whole("k")); break;
    case SweepParam::NNodes: out.n_nodes = whole("n_nodes"); break;
  }
  validate_config(out);
  return out;
}

namespace {

struct Job {
  std::size_t row;
  std::uint64_t seed;
};

SweepResult sweep_impl(const ScenarioConfig& base, SweepParam p, const std::vector<double>& values,
                       std::size_t seeds_per_point, bool parallel) {
  if (values.empty()) throw std::invalid_argument("sweep: empty value list");
  if (seeds_per_point < 1) throw std::invalid_argument("sweep: seeds_per_point must be >= 1");

  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  std::vector<ScenarioConfig> configs;
  for (double v : sorted) configs.push_back(with_param(base, p, v));

  const auto seeds = base.seed_list(seeds_per_point);
  std::vector<Job> jobs;
  for (std::size_t r = 0; r < sorted.size(); ++r)
    for (auto s : seeds) jobs.push_back({r, s});

  std::vector<RunRecord> records(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  const auto n = static_cast<std::int64_t>(jobs.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::int64_t j = 0; j < n; ++j) {
    const auto& job = jobs[static_cast<std::size_t>(j)];
    try {
      records[static_cast<std::size_t>(j)] = run_scenario(configs[job.row], job.seed);
    } catch (...) {
      errors[static_cast<std::size_t>(j)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  SweepResult result;
  result.param = p;
  for (std::size_t r = 0; r < sorted.size(); ++r) {
    SweepRow row;
    row.swept_value = sorted[r];
    std::uint64_t wins = 0, converged = 0, rounds = 0;
    for (std::size_t j = 0; j < jobs.size(); ++j) {
      if (jobs[j].row != r) continue;
      const auto& rec = records[j];
      row.records.push_back(rec);
      wins += rec.target_won;
      converged += rec.metrics.converged;
      rounds += rec.metrics.rounds;
    }
    std::sort(row.records.begin(), row.records.end(),
              [](const RunRecord& a, const RunRecord& b) { return a.seed < b.seed; });
    row.runs = row.records.size();
    row.win_rate = static_cast<double>(wins) / static_cast<double>(row.runs);
    row.convergence_rate = static_cast<double>(converged) / static_cast<double>(row.runs);
    row.mean_rounds = static_cast<double>(rounds) / static_cast<double>(row.runs);
    result.rows.push_back(std::move(row));
  }
  return result;
}

ScenarioConfig ensure_adversary(const ScenarioConfig& base) {
  if (std::holds_alternative<AdversaryAssignment>(base.assignment)) return base;
  if (base.forks.size() < 2) throw ConfigError("forks", "attack sweeps need two forks");
  ScenarioConfig cfg = base;
  AdversaryAssignment a;
  a.attacker_fork = cfg.forks.back();
  a.honest_fork = cfg.forks.front();
  cfg.assignment = a;
  return cfg;
}

}  // namespace

SweepResult run_sweep(const ScenarioConfig& base, SweepParam p, const std::vector<double>& values,
                      std::size_t seeds_per_point) {
  return sweep_impl(base, p, values, seeds_per_point, true);
}

SweepResult run_sweep_serial(const ScenarioConfig& base, SweepParam p, const std::vector<double>& values,
                             std::size_t seeds_per_point) {
  return sweep_impl(base, p, values, seeds_per_point, false);
}

SweepResult attack_sweep(const ScenarioConfig& base, const std::vector<double>& fractions,
                         std::size_t seeds_per_point) {
  for (double f : fractions) check_fraction(f, "assignment.stake_fraction");
  return run_sweep(ensure_adversary(base), SweepParam::StakeFraction, fractions, seeds_per_point);
}

SweepResult sybil_sweep(const ScenarioConfig& base, const std::vector<double>& attacker_node_fractions,
                        double attacker_stake_fraction, std::size_t seeds_per_point) {
  if (!(attacker_stake_fraction >= 0.0 && attacker_stake_fraction < 0.5))
    throw std::invalid_argument("sybil_sweep: attacker stake fraction must lie in [0, 0.5)");
  ScenarioConfig cfg = ensure_adversary(base);
  std::get<AdversaryAssignment>(cfg.assignment).stake_fraction = attacker_stake_fraction;
  return run_sweep(cfg, SweepParam::NodeFraction, attacker_node_fractions, seeds_per_point);
}

}  // namespace magpos
