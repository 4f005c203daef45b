#include "magpos/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "magpos/rng.hpp"

namespace magpos::lattice {

double wrap_angle(double theta) {
  if (!std::isfinite(theta)) throw std::invalid_argument("angle must be finite");
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double angle_difference(double a, double b) {
  double d = std::remainder(a - b, kTwoPi);
  if (d <= -kPi) d += kTwoPi;
  return d;
}

DipoleGrid::DipoleGrid(std::size_t width, std::size_t height, double coupling_j, double moment_m)
    : DipoleGrid(width, height, std::vector<double>(width * height, 0.0), coupling_j, moment_m) {}

DipoleGrid::DipoleGrid(std::size_t width, std::size_t height, std::vector<double> angles, double coupling_j,
                       double moment_m)
    : width_(width), height_(height), coupling_j_(coupling_j), moment_m_(moment_m), angles_(std::move(angles)) {
  if (width < 2 || height < 2) throw std::invalid_argument("dipole grid needs width and height >= 2");
  if (angles_.size() != width * height) throw std::invalid_argument("dipole grid: angle count mismatch");
  if (!(coupling_j > 0.0) || !(moment_m > 0.0)) throw std::invalid_argument("dipole grid: J and M must be > 0");
  for (auto& a : angles_) a = wrap_angle(a);
}

void DipoleGrid::rotate_all(double delta) {
  for (auto& a : angles_) a = wrap_angle(a + delta);
}

DipoleGrid random_grid(std::size_t width, std::size_t height, std::uint64_t seed, double coupling_j,
                       double moment_m) {
  Rng rng(seed);
  std::vector<double> angles(width * height);
  for (auto& a : angles) a = rng.unit() * kTwoPi;
  return DipoleGrid(width, height, std::move(angles), coupling_j, moment_m);
}

std::size_t edge_count(std::size_t width, std::size_t height) { return (width - 1) * height + width * (height - 1); }

namespace {

double row_bond_sum(const DipoleGrid& g, std::size_t y) {
  double s = 0.0;
  for (std::size_t x = 0; x < g.width(); ++x) {
    const double a = g.angle(x, y);
    if (x + 1 < g.width()) s += std::cos(a - g.angle(x + 1, y));
    if (y + 1 < g.height()) s += std::cos(a - g.angle(x, y + 1));
  }
  return s;
}

double scale(const DipoleGrid& g) { return -g.coupling_j() * g.moment_m() * g.moment_m(); }

}  // namespace

double grid_energy_serial(const DipoleGrid& g) {
  double total = 0.0;
  for (std::size_t y = 0; y < g.height(); ++y) total += row_bond_sum(g, y);
  return scale(g) * total;
}

double grid_energy(const DipoleGrid& g) {
  std::vector<double> rows(g.height());
  const auto h = static_cast<std::int64_t>(g.height());
#pragma omp parallel for schedule(static)
  for (std::int64_t y = 0; y < h; ++y) rows[static_cast<std::size_t>(y)] = row_bond_sum(g, static_cast<std::size_t>(y));
  double total = 0.0;
  for (double r : rows) total += r;
  return scale(g) * total;
}

double uniform_rotation_energy(std::size_t width, std::size_t height, double theta, double coupling_j,
                               double moment_m) {
  if (width < 2 || height < 2) throw std::invalid_argument("grid needs width and height >= 2");
  return -coupling_j * moment_m * moment_m * static_cast<double>(edge_count(width, height)) * std::cos(theta);
}

std::vector<std::pair<double, double>> energy_curve(std::size_t samples) {
  if (samples < 2) throw std::invalid_argument("energy curve needs at least 2 samples");
  std::vector<std::pair<double, double>> out;
  const double half = static_cast<double>(samples - 1) / 2.0;
  for (std::size_t i = 0; i < samples; ++i) {
    // (i - half) is exact, so sample i and sample samples-1-i are exact negatives
    const double theta = kPi * ((static_cast<double>(i) - half) / half);
    out.emplace_back(theta, -std::cos(theta));
  }
  return out;
}

double max_neighbor_difference(const DipoleGrid& g) {
  double worst = 0.0;
  for (std::size_t y = 0; y < g.height(); ++y)
    for (std::size_t x = 0; x < g.width(); ++x) {
      if (x + 1 < g.width()) worst = std::max(worst, std::abs(angle_difference(g.angle(x, y), g.angle(x + 1, y))));
      if (y + 1 < g.height()) worst = std::max(worst, std::abs(angle_difference(g.angle(x, y), g.angle(x, y + 1))));
    }
  return worst;
}

std::size_t count_vortices(const DipoleGrid& g) {
  std::size_t n = 0;
  for (std::size_t y = 0; y + 1 < g.height(); ++y)
    for (std::size_t x = 0; x + 1 < g.width(); ++x) {
      const double a = g.angle(x, y), b = g.angle(x + 1, y), c = g.angle(x + 1, y + 1), d = g.angle(x, y + 1);
      const double winding = angle_difference(b, a) + angle_difference(c, b) + angle_difference(d, c) +
                             angle_difference(a, d);
      n += std::abs(winding) > kPi;
    }
  return n;
}

RelaxResult relax(const DipoleGrid& start, std::size_t max_sweeps, std::span<const Cell> pinned, std::uint64_t seed) {
  if (max_sweeps < 1) throw std::invalid_argument("relax: max_sweeps must be >= 1");
  const std::size_t w = start.width(), h = start.height();
  std::vector<char> is_pinned(w * h, 0);
  for (const auto& c : pinned) {
    if (c.x >= w || c.y >= h) throw std::invalid_argument("relax: pinned cell outside the grid");
    is_pinned[c.y * w + c.x] = 1;
  }
  std::vector<std::uint32_t> order;
  for (std::size_t i = 0; i < w * h; ++i)
    if (!is_pinned[i]) order.push_back(static_cast<std::uint32_t>(i));

  RelaxResult r{start, {grid_energy(start)}, 0, false};
  DipoleGrid& g = r.grid;
  Rng rng(seed);
  while (r.sweeps < max_sweeps) {
    rng.shuffle(std::span<std::uint32_t>(order));
    double largest_move = 0.0;
    for (auto cell : order) {
      const std::size_t x = cell % w, y = cell / w;
      double sx = 0.0, sy = 0.0;
      auto add = [&](std::size_t nx, std::size_t ny) {
        sx += std::cos(g.angle(nx, ny));
        sy += std::sin(g.angle(nx, ny));
      };
      if (x > 0) add(x - 1, y);
      if (x + 1 < w) add(x + 1, y);
      if (y > 0) add(x, y - 1);
      if (y + 1 < h) add(x, y + 1);
      // a vanishing resultant leaves every angle equally good; stay put
      if (std::hypot(sx, sy) < 1e-12) continue;
      const double target = wrap_angle(std::atan2(sy, sx));
      largest_move = std::max(largest_move, std::abs(angle_difference(target, g.angle(x, y))));
      g.set_angle(x, y, target);
    }
    ++r.sweeps;
    r.energy_trace.push_back(grid_energy(g));
    if (largest_move < kSettleTolerance) {
      r.settled = true;
      break;
    }
  }
  return r;
}

DomainWallResult domain_wall(std::size_t width, std::size_t height, std::size_t max_sweeps, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> angles(width * height);
  for (auto& a : angles) a = rng.unit() - 0.5;
  DipoleGrid g(width, height, std::move(angles));
  const Cell corners[] = {{0, 0}, {width - 1, height - 1}};
  g.set_angle(0, 0, 0.0);
  g.set_angle(width - 1, height - 1, kPi);

  RelaxResult pinned = relax(g, max_sweeps, corners, seed);
  RelaxResult released = relax(pinned.grid, max_sweeps, {}, seed + 1);
  return {std::move(pinned), std::move(released)};
}

}  // namespace magpos::lattice
