#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "rwlab/rng.hpp"

namespace rwlab {

/// Axis-aligned square [x0, x0 + side] x [y0, y0 + side].
struct Domain {
  double side = 1.0;
  double x0 = 0.0;
  double y0 = 0.0;

  double area() const { return side * side; }
  double diameter() const;
};

/// Discretization rules used to derive a WaveConfig from an energy.
struct GridRule {
  double grid_per_wavelength = 10.0;  // h <= wavelength / grid_per_wavelength
  double modes_factor = 4.0;          // M = ceil(modes_factor * k * side)
};

inline constexpr double kMinGridPerWavelength = 10.0;
inline constexpr double kMinModesFactor = 4.0;

struct WaveConfig {
  double energy = 1.0;
  int num_modes = 0;
  int grid_points = 0;  // nodes per side
  std::uint64_t seed = 0;
  std::uint64_t replication_index = 0;
  Domain domain;

  double wavenumber() const;
  double eigenvalue() const;  // k^2
  double wavelength() const;  // 2 pi / k
  double spacing() const;     // side / (n - 1)

  /// Throws ConfigError unless h <= wavelength/10 and M >= ceil(4 k L).
  void validate() const;
};

WaveConfig make_config(double energy, const GridRule& rule, const Domain& domain,
                       std::uint64_t seed, std::uint64_t replication_index);

/// Field value and unit-variance partial derivatives on an n x n lattice.
/// Row-major, row index = y.
struct GridPlanes {
  int n = 0;
  std::vector<double> values;
  std::vector<double> d1;
  std::vector<double> d2;

  explicit GridPlanes(int size = 0);
  double& value(int row, int col) { return values[static_cast<std::size_t>(row) * n + col]; }
  double value(int row, int col) const {
    return values[static_cast<std::size_t>(row) * n + col];
  }
};

/// Sampled field: nodes carry (B, d1, d2) at the n x n grid nodes and
/// centers carry the same at the (n-1) x (n-1) cell centers.
struct FieldGrid {
  Domain domain;
  double spacing = 0.0;
  double wavenumber = 0.0;  // 0 for synthetic grids
  GridPlanes nodes;
  GridPlanes centers;
  std::optional<WaveConfig> config;

  int size() const { return nodes.n; }
  double node_x(int col) const { return domain.x0 + col * spacing; }
  double node_y(int row) const { return domain.y0 + row * spacing; }
};

struct FieldPoint {
  double value;
  double d1;
  double d2;
};

/// One realization of the plane-wave superposition
///   B(x) = sqrt(2/M) sum_m [xi_m cos(k<theta_m, x>) + eta_m sin(k<theta_m, x>)].
class WaveRealization {
 public:
  WaveRealization(double wavenumber, std::vector<std::array<double, 2>> directions,
                  std::vector<double> xi, std::vector<double> eta);

  /// Equispaced directions theta_m = (cos 2 pi m/M, sin 2 pi m/M), m = 1..M,
  /// amplitudes N(0, 1/2) drawn in the order xi_1, eta_1, xi_2, ...
  static WaveRealization draw(double wavenumber, int num_modes, NormalStream& stream);

  FieldPoint evaluate(double x, double y) const;

  /// Evaluates the field on `count` x `count` points origin + (i, j) * step.
  GridPlanes sample_lattice(double x0, double y0, double step, int count) const;

  int num_modes() const { return static_cast<int>(xi_.size()); }
  double wavenumber() const { return k_; }

 private:
  double k_;
  std::vector<std::array<double, 2>> directions_;
  std::vector<double> xi_;
  std::vector<double> eta_;
};

/// Samples the realization keyed by (config.seed, config.replication_index).
FieldGrid sample_field(const WaveConfig& config);
FieldGrid sample_field(const WaveConfig& config, NormalStream& stream);

/// Builds node and center planes of an arbitrary realization over a domain.
FieldGrid sample_realization(const WaveRealization& wave, const Domain& domain, int grid_points);

/// Synthetic grid from a scalar function (derivative planes left at zero).
template <class F>
FieldGrid synthetic_grid(const Domain& domain, int grid_points, F&& f, double wavenumber = 0.0) {
  FieldGrid grid;
  grid.domain = domain;
  grid.spacing = domain.side / (grid_points - 1);
  grid.wavenumber = wavenumber;
  grid.nodes = GridPlanes(grid_points);
  grid.centers = GridPlanes(grid_points - 1);
  for (int r = 0; r < grid_points; ++r) {
    for (int c = 0; c < grid_points; ++c) {
      grid.nodes.value(r, c) = f(grid.node_x(c), grid.node_y(r));
    }
  }
  for (int r = 0; r + 1 < grid_points; ++r) {
    for (int c = 0; c + 1 < grid_points; ++c) {
      grid.centers.value(r, c) =
          f(grid.node_x(c) + 0.5 * grid.spacing, grid.node_y(r) + 0.5 * grid.spacing);
    }
  }
  return grid;
}

/// max over interior nodes of |Lap_h B + k^2 B| / (k^2 max|B|), 5-point stencil.
double helmholtz_residual(const FieldGrid& grid);

/// Writes values, d1, d2 (row-major, little-endian float64) to `path` and the
/// generating WaveConfig to `path` + ".json".
void dump_grid(const FieldGrid& grid, const std::filesystem::path& path);

}  // namespace rwlab
