#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace magpos::lattice {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kPi = 3.14159265358979323846264338327950;

/// Wraps any finite angle into [0, 2π).
double wrap_angle(double theta);

/// Signed smallest rotation from b to a, in (-π, π].
double angle_difference(double a, double b);

struct Cell {
  std::size_t x = 0;
  std::size_t y = 0;
  bool operator==(const Cell&) const = default;
};

/// Open-boundary 2-D grid of classical dipoles with uniform coupling J and
/// uniform moment magnitude M. Angles are stored row-major, wrapped to [0, 2π).
class DipoleGrid {
 public:
  DipoleGrid(std::size_t width, std::size_t height, double coupling_j = 1.0, double moment_m = 1.0);
  DipoleGrid(std::size_t width, std::size_t height, std::vector<double> angles, double coupling_j = 1.0,
             double moment_m = 1.0);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  double coupling_j() const { return coupling_j_; }
  double moment_m() const { return moment_m_; }

  double angle(std::size_t x, std::size_t y) const { return angles_[y * width_ + x]; }
  void set_angle(std::size_t x, std::size_t y, double theta) { angles_[y * width_ + x] = wrap_angle(theta); }
  std::span<const double> angles() const { return angles_; }

  /// Adds `delta` to every angle.
  void rotate_all(double delta);

 private:
  std::size_t width_;
  std::size_t height_;
  double coupling_j_;
  double moment_m_;
  std::vector<double> angles_;
};

/// Angles drawn uniformly from [0, 2π) with a seeded generator.
DipoleGrid random_grid(std::size_t width, std::size_t height, std::uint64_t seed, double coupling_j = 1.0,
                       double moment_m = 1.0);

/// Nearest-neighbour bond count of a width x height open grid.
std::size_t edge_count(std::size_t width, std::size_t height);

/// -J M^2 sum over right and down bonds of cos(θ_i - θ_j). Rows are summed in
/// parallel and the partial sums are combined in row order, so the value does
/// not depend on the thread count.
double grid_energy(const DipoleGrid& g);

/// Serial reference of grid_energy.
double grid_energy_serial(const DipoleGrid& g);

/// Energy of a grid in which every bond has angle difference theta:
/// -J M^2 edge_count cos(theta).
double uniform_rotation_energy(std::size_t width, std::size_t height, double theta, double coupling_j = 1.0,
                               double moment_m = 1.0);

/// (theta, energy / (J M^2 edge_count)) over `samples` evenly spaced points on
/// [-π, π]. With an odd sample count the middle point is exactly theta = 0.
std::vector<std::pair<double, double>> energy_curve(std::size_t samples);

/// Largest |angle difference| across any bond, in [0, π].
double max_neighbor_difference(const DipoleGrid& g);

/// Plaquettes whose angle differences wind by ±2π around the square. A relaxed
/// grid with any of these cannot be aligned.
std::size_t count_vortices(const DipoleGrid& g);

struct RelaxResult {
  DipoleGrid grid;
  /// trace[0] is the starting energy; trace[s] the energy after sweep s.
  std::vector<double> energy_trace;
  std::size_t sweeps = 0;
  /// Stopped because the largest per-cell change fell below the tolerance.
  bool settled = false;
};

inline constexpr double kSettleTolerance = 1e-9;

/// Seeded-order coordinate descent. Each sweep visits every unpinned cell in a
/// fresh shuffled order and turns it to the circular mean of its neighbours,
/// the exact minimiser of its local bond energy. Stops after max_sweeps or once
/// no cell moved by kSettleTolerance or more.
RelaxResult relax(const DipoleGrid& start, std::size_t max_sweeps, std::span<const Cell> pinned, std::uint64_t seed);

/// Two-phase corner experiment. A nearly aligned grid (seeded jitter of at most
/// 0.5 rad around 0) has cell (0, 0) held at 0 and the opposite corner held at
/// π while it relaxes; then both are let go and it relaxes again.
struct DomainWallResult {
  RelaxResult pinned;
  RelaxResult released;
};

DomainWallResult domain_wall(std::size_t width, std::size_t height, std::size_t max_sweeps, std::uint64_t seed);

}  // namespace magpos::lattice
