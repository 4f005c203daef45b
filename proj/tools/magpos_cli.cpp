// magpos: run MaGPoS consensus scenarios, parameter sweeps and lattice demos.
//
//   magpos run <file> [--seed N] [--max-rounds N] [--out PATH] [--trace PATH]
//   magpos sweep <file> --param NAME --values a,b,c --seeds-per-point N --out PATH [--runs-out PATH]
//   magpos lattice <curve|relax|domainwall> --size WxH --sweeps N --seed N --out PATH
//
// Exit codes: 0 success (run: converged), 2 run hit max_rounds without
// converging, 1 input error.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "magpos/lattice.hpp"
#include "magpos/log.hpp"
#include "magpos/report.hpp"
#include "magpos/scenario_file.hpp"

namespace {

using namespace magpos;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNotConverged = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_output(const std::string& path, const std::string& data) {
  if (path == "-") {
    std::fwrite(data.data(), 1, data.size(), stdout);
    std::fflush(stdout);
    return;
  }
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << data;
  log().info("wrote {}", path);
}

// results/run.csv + "trace" -> results/run.trace.csv; nothing for stdout.
std::optional<std::string> sibling(const std::string& out, const std::string& tag) {
  if (out == "-") return std::nullopt;
  std::filesystem::path p(out);
  return (p.parent_path() / (p.stem().string() + "." + tag + ".csv")).string();
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    const std::string item = text.substr(start, end - start);
    if (!item.empty()) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
      if (ec != std::errc() || ptr != item.data() + item.size())
        throw InputError("--values: '" + item + "' is not a number");
      out.push_back(v);
    }
    start = end + 1;
  }
  if (out.empty()) throw InputError("--values: empty list");
  return out;
}

std::pair<std::size_t, std::size_t> parse_size(const std::string& text) {
  const auto x = text.find('x');
  if (x == std::string::npos) throw InputError("--size must look like WxH");
  std::size_t w = 0, h = 0;
  auto r1 = std::from_chars(text.data(), text.data() + x, w);
  auto r2 = std::from_chars(text.data() + x + 1, text.data() + text.size(), h);
  if (r1.ec != std::errc() || r1.ptr != text.data() + x || r2.ec != std::errc() ||
      r2.ptr != text.data() + text.size())
    throw InputError("--size must look like WxH");
  if (w < 2 || h < 2) throw InputError("--size: width and height must be >= 2");
  if (w > 4096 || h > 4096) throw InputError("--size: at most 4096x4096");
  return {w, h};
}

struct RunArgs {
  std::string file;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> max_rounds;
  std::optional<std::string> out;
  std::optional<std::string> trace;
};

int cmd_run(const RunArgs& a) {
  const ScenarioFile sf = load_scenario_file(a.file);
  ScenarioConfig cfg = sf.config;
  if (a.max_rounds) {
    if (*a.max_rounds < 1) throw ConfigError("max_rounds", "--max-rounds must be >= 1");
    cfg.max_rounds = a.max_rounds;
  }
  const std::uint64_t seed = a.seed.value_or(cfg.seeds.front());
  const std::string out = a.out.value_or(sf.output.value_or("-"));

  std::vector<RoundTrace> trace;
  const RunRecord rec = run_scenario(cfg, seed, &trace);
  write_output(out, report::run_csv(cfg, rec));
  if (auto trace_path = a.trace ? a.trace : sibling(out, "trace")) write_output(*trace_path, report::trace_csv(cfg, trace));
  return rec.metrics.converged ? kExitOk : kExitNotConverged;
}

struct SweepArgs {
  std::string file;
  std::string param;
  std::string values;
  std::size_t seeds_per_point = 1;
  std::optional<std::string> out;
  std::optional<std::string> runs_out;
};

int cmd_sweep(const SweepArgs& a) {
  const ScenarioFile sf = load_scenario_file(a.file);
  SweepParam param;
  try {
    param = parse_sweep_param(a.param);
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("--param: ") + e.what());
  }
  const auto values = parse_values(a.values);
  if (a.seeds_per_point < 1) throw InputError("--seeds-per-point must be >= 1");
  const std::string out = a.out.value_or(sf.output.value_or("-"));

  const SweepResult result = run_sweep(sf.config, param, values, a.seeds_per_point);
  write_output(out, report::sweep_csv(result));
  if (auto runs = a.runs_out ? a.runs_out : sibling(out, "runs"))
    write_output(*runs, report::sweep_runs_csv(sf.config, result));
  return kExitOk;
}

struct LatticeArgs {
  std::string demo;
  std::string size = "32x32";
  std::size_t sweeps = 5000;
  std::uint64_t seed = 1;
  std::string out = "-";
  std::optional<std::string> angles_out;
};

int cmd_lattice(const LatticeArgs& a) {
  const auto [w, h] = parse_size(a.size);
  if (a.demo == "curve") {
    write_output(a.out, report::curve_csv(lattice::energy_curve(101)));
    return kExitOk;
  }
  if (a.sweeps < 1) throw InputError("--sweeps must be >= 1");
  std::vector<report::RelaxPhase> phases;
  std::optional<lattice::DipoleGrid> final_grid;
  if (a.demo == "relax") {
    auto r = lattice::relax(lattice::random_grid(w, h, a.seed), a.sweeps, {}, a.seed);
    log().info("relax: {} sweeps, settled={}, max neighbour difference {}", r.sweeps, r.settled,
               lattice::max_neighbor_difference(r.grid));
    phases.push_back({"free", r.energy_trace});
    final_grid = r.grid;
  } else if (a.demo == "domainwall") {
    auto r = lattice::domain_wall(w, h, a.sweeps, a.seed);
    log().info("domainwall: pinned gradient {}, released max difference {}",
               lattice::max_neighbor_difference(r.pinned.grid), lattice::max_neighbor_difference(r.released.grid));
    phases.push_back({"pinned", r.pinned.energy_trace});
    phases.push_back({"released", r.released.energy_trace});
    final_grid = r.released.grid;
  } else {
    throw InputError("lattice demo must be curve, relax or domainwall (got '" + a.demo + "')");
  }
  write_output(a.out, report::relax_trace_csv(phases));
  if (auto angles = a.angles_out ? a.angles_out : sibling(a.out, "angles"))
    write_output(*angles, report::angles_csv(*final_grid));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MaGPoS consensus simulator"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run one scenario and write its metrics row");
  run->add_option("file", run_args.file, "Scenario file")->required();
  run->add_option("--seed", run_args.seed, "Seed (default: first seed in the file)");
  run->add_option("--max-rounds", run_args.max_rounds, "Round budget (default: 10 * n_nodes)");
  run->add_option("--out", run_args.out, "Metrics CSV, '-' for stdout");
  run->add_option("--trace", run_args.trace, "Per-round trace CSV (default: <out>.trace.csv)");

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Sweep one parameter over several seeds");
  sweep->add_option("file", sweep_args.file, "Scenario file")->required();
  sweep->add_option("--param", sweep_args.param, "stake_fraction, node_fraction, k or n_nodes")->required();
  sweep->add_option("--values", sweep_args.values, "Comma-separated values")->required();
  sweep->add_option("--seeds-per-point", sweep_args.seeds_per_point, "Runs per value")->required();
  sweep->add_option("--out", sweep_args.out, "Aggregate CSV, '-' for stdout");
  sweep->add_option("--runs-out", sweep_args.runs_out, "Per-run CSV (default: <out>.runs.csv)");

  LatticeArgs lattice_args;
  auto* lat = app.add_subcommand("lattice", "Dipole-lattice analogue demos");
  lat->add_option("demo", lattice_args.demo, "curve, relax or domainwall")->required();
  lat->add_option("--size", lattice_args.size, "Grid size WxH")->capture_default_str();
  lat->add_option("--sweeps", lattice_args.sweeps, "Sweep budget per phase")->capture_default_str();
  lat->add_option("--seed", lattice_args.seed, "Seed")->capture_default_str();
  lat->add_option("--out", lattice_args.out, "Output CSV, '-' for stdout")->capture_default_str();
  lat->add_option("--angles-out", lattice_args.angles_out, "Final angle field CSV (default: <out>.angles.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*run) return cmd_run(run_args);
    if (*sweep) return cmd_sweep(sweep_args);
    return cmd_lattice(lattice_args);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << " [key: " << e.key() << "]\n";
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kExitInput;
}
