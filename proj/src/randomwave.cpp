#include "rwlab/randomwave.hpp"

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <json.hpp>

#include "rwlab/error.hpp"
#include "rwlab/specfun.hpp"

namespace rwlab {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

double Domain::diameter() const { return side * std::numbers::sqrt2; }

double WaveConfig::wavenumber() const { return rwlab::wavenumber(energy); }
double WaveConfig::eigenvalue() const {
  const double k = wavenumber();
  return k * k;
}
double WaveConfig::wavelength() const { return 2.0 * std::numbers::pi / wavenumber(); }
double WaveConfig::spacing() const { return domain.side / (grid_points - 1); }

void WaveConfig::validate() const {
  if (!(energy > 0.0) || !std::isfinite(energy)) {
    throw ConfigError("energy must be positive and finite");
  }
  if (!(domain.side > 0.0)) throw ConfigError("domain side must be positive");
  if (grid_points < 3) throw ConfigError("grid needs at least 3 points per side");
  const double k = wavenumber();
  const double h = spacing();
  // Small slack so that n = ceil(10 L / lambda) + 1 always passes.
  if (h > wavelength() / kMinGridPerWavelength * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "grid too coarse at E=" << energy << ": h=" << h << " exceeds wavelength/10="
        << wavelength() / kMinGridPerWavelength;
    throw ConfigError(msg.str());
  }
  const double min_modes = std::ceil(kMinModesFactor * k * domain.side);
  if (num_modes < min_modes) {
    std::ostringstream msg;
    msg << "too few modes at E=" << energy << ": M=" << num_modes << " < ceil(4 k L)=" << min_modes;
    throw ConfigError(msg.str());
  }
}

WaveConfig make_config(double energy, const GridRule& rule, const Domain& domain,
                       std::uint64_t seed, std::uint64_t replication_index) {
  if (!(energy > 0.0) || !std::isfinite(energy)) {
    throw ConfigError("energy must be positive and finite");
  }
  if (!(rule.grid_per_wavelength > 0.0) || !(rule.modes_factor > 0.0)) {
    throw ConfigError("grid and mode rules must be positive");
  }
  WaveConfig config;
  config.energy = energy;
  config.domain = domain;
  config.seed = seed;
  config.replication_index = replication_index;
  const double k = rwlab::wavenumber(energy);
  const double lambda = 2.0 * std::numbers::pi / k;
  config.grid_points =
      static_cast<int>(std::ceil(rule.grid_per_wavelength * domain.side / lambda)) + 1;
  config.num_modes = static_cast<int>(std::ceil(rule.modes_factor * k * domain.side));
  return config;
}

GridPlanes::GridPlanes(int size)
    : n(size),
      values(static_cast<std::size_t>(size) * size, 0.0),
      d1(static_cast<std::size_t>(size) * size, 0.0),
      d2(static_cast<std::size_t>(size) * size, 0.0) {}

WaveRealization::WaveRealization(double wavenumber,
                                 std::vector<std::array<double, 2>> directions,
                                 std::vector<double> xi, std::vector<double> eta)
    : k_(wavenumber), directions_(std::move(directions)), xi_(std::move(xi)), eta_(std::move(eta)) {
  if (directions_.empty() || directions_.size() != xi_.size() || xi_.size() != eta_.size()) {
    throw DomainError("WaveRealization: mode arrays must be non-empty and of equal length");
  }
  if (!(k_ > 0.0)) throw DomainError("WaveRealization: wavenumber must be positive");
}

WaveRealization WaveRealization::draw(double wavenumber, int num_modes, NormalStream& stream) {
  if (num_modes < 1) throw DomainError("WaveRealization: need at least one mode");
  std::vector<std::array<double, 2>> directions(num_modes);
  std::vector<double> xi(num_modes);
  std::vector<double> eta(num_modes);
  for (int m = 0; m < num_modes; ++m) {
    const double angle = 2.0 * std::numbers::pi * (m + 1) / num_modes;
    directions[m] = {std::cos(angle), std::sin(angle)};
    // N(0, 1/2) amplitudes: with the sqrt(2/M) prefactor the field has unit variance
    xi[m] = std::numbers::sqrt2 * 0.5 * stream.next();
    eta[m] = std::numbers::sqrt2 * 0.5 * stream.next();
  }
  return WaveRealization(wavenumber, std::move(directions), std::move(xi), std::move(eta));
}

FieldPoint WaveRealization::evaluate(double x, double y) const {
  double value = 0.0;
  double g1 = 0.0;
  double g2 = 0.0;
  for (std::size_t m = 0; m < xi_.size(); ++m) {
    const double phase = k_ * (directions_[m][0] * x + directions_[m][1] * y);
    const double c = std::cos(phase);
    const double s = std::sin(phase);
    value += xi_[m] * c + eta_[m] * s;
    const double slope = -xi_[m] * s + eta_[m] * c;
    g1 += directions_[m][0] * slope;
    g2 += directions_[m][1] * slope;
  }
  const double scale = std::sqrt(2.0 / static_cast<double>(xi_.size()));
  // d/dx carries a factor k, the unit-variance normalization divides by k/sqrt2
  const double dscale = scale * std::numbers::sqrt2;
  return {scale * value, dscale * g1, dscale * g2};
}

GridPlanes WaveRealization::sample_lattice(double x0, double y0, double step, int count) const {
  const int modes = num_modes();
  // cos(a + b) and sin(a + b) are split into x-only and y-only factors so that
  // the lattice sum becomes three dense (count x 2M) * (2M x count) products.
  RowMatrix ytab(count, 2 * modes);
  RowMatrix xval(count, 2 * modes);
  RowMatrix xd1(count, 2 * modes);
  RowMatrix xd2(count, 2 * modes);
  for (int i = 0; i < count; ++i) {
    const double x = x0 + i * step;
    const double y = y0 + i * step;
    for (int m = 0; m < modes; ++m) {
      const double a = k_ * directions_[m][0] * x;
      const double b = k_ * directions_[m][1] * y;
      const double ca = std::cos(a);
      const double sa = std::sin(a);
      ytab(i, m) = std::cos(b);
      ytab(i, modes + m) = std::sin(b);
      const double p = xi_[m] * ca + eta_[m] * sa;
      const double q = eta_[m] * ca - xi_[m] * sa;
      xval(i, m) = p;
      xval(i, modes + m) = q;
      xd1(i, m) = directions_[m][0] * q;
      xd1(i, modes + m) = -directions_[m][0] * p;
      xd2(i, m) = directions_[m][1] * q;
      xd2(i, modes + m) = -directions_[m][1] * p;
    }
  }
  const double scale = std::sqrt(2.0 / static_cast<double>(modes));
  const double dscale = scale * std::numbers::sqrt2;
  GridPlanes planes(count);
  using Map = Eigen::Map<RowMatrix>;
  Map(planes.values.data(), count, count).noalias() = scale * (ytab * xval.transpose());
  Map(planes.d1.data(), count, count).noalias() = dscale * (ytab * xd1.transpose());
  Map(planes.d2.data(), count, count).noalias() = dscale * (ytab * xd2.transpose());
  return planes;
}

FieldGrid sample_realization(const WaveRealization& wave, const Domain& domain, int grid_points) {
  if (grid_points < 2) throw DomainError("sample_realization: need at least 2 points per side");
  FieldGrid grid;
  grid.domain = domain;
  grid.spacing = domain.side / (grid_points - 1);
  grid.wavenumber = wave.wavenumber();
  grid.nodes = wave.sample_lattice(domain.x0, domain.y0, grid.spacing, grid_points);
  grid.centers = wave.sample_lattice(domain.x0 + 0.5 * grid.spacing,
                                     domain.y0 + 0.5 * grid.spacing, grid.spacing,
                                     grid_points - 1);
  return grid;
}

FieldGrid sample_field(const WaveConfig& config, NormalStream& stream) {
  config.validate();
  const auto wave = WaveRealization::draw(config.wavenumber(), config.num_modes, stream);
  FieldGrid grid = sample_realization(wave, config.domain, config.grid_points);
  grid.config = config;
  return grid;
}

FieldGrid sample_field(const WaveConfig& config) {
  NormalStream stream(config.seed, config.replication_index);
  return sample_field(config, stream);
}

double helmholtz_residual(const FieldGrid& grid) {
  const int n = grid.size();
  if (n < 3) throw DomainError("helmholtz_residual: need n >= 3");
  if (!(grid.wavenumber > 0.0)) throw DomainError("helmholtz_residual: grid has no wavenumber");
  const double lambda = grid.wavenumber * grid.wavenumber;
  const double inv_h2 = 1.0 / (grid.spacing * grid.spacing);
  double max_abs = 0.0;
  for (double v : grid.nodes.values) max_abs = std::max(max_abs, std::abs(v));
  if (max_abs == 0.0) return 0.0;
  double worst = 0.0;
  const auto& b = grid.nodes;
  for (int r = 1; r + 1 < n; ++r) {
    for (int c = 1; c + 1 < n; ++c) {
      const double lap = (b.value(r, c + 1) + b.value(r, c - 1) + b.value(r + 1, c) +
                          b.value(r - 1, c) - 4.0 * b.value(r, c)) * inv_h2;
      worst = std::max(worst, std::abs(lap + lambda * b.value(r, c)));
    }
  }
  return worst / (lambda * max_abs);
}

namespace {

void write_le_doubles(std::ofstream& out, const std::vector<double>& data) {
  for (double v : data) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    if constexpr (std::endian::native == std::endian::big) {
      bits = __builtin_bswap64(bits);
    }
    char bytes[8];
    std::memcpy(bytes, &bits, 8);
    out.write(bytes, 8);
  }
}

}  // namespace

void dump_grid(const FieldGrid& grid, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string());
  write_le_doubles(out, grid.nodes.values);
  write_le_doubles(out, grid.nodes.d1);
  write_le_doubles(out, grid.nodes.d2);
  if (!out) throw IoError("write failed: " + path.string());

  nlohmann::ordered_json meta;
  meta["schema"] = "rwlab.grid/1";
  meta["grid_points"] = grid.size();
  meta["spacing"] = grid.spacing;
  meta["layout"] = "values,d1,d2; row-major, row index = y; float64 little-endian";
  meta["domain"] = {{"side", grid.domain.side}, {"x0", grid.domain.x0}, {"y0", grid.domain.y0}};
  if (grid.config) {
    const auto& c = *grid.config;
    meta["config"] = {{"energy", c.energy},
                      {"wavenumber", c.wavenumber()},
                      {"eigenvalue", c.eigenvalue()},
                      {"num_modes", c.num_modes},
                      {"grid_points", c.grid_points},
                      {"seed", c.seed},
                      {"replication_index", c.replication_index}};
  }
  std::ofstream side(path.string() + ".json");
  if (!side) throw IoError("cannot open " + path.string() + ".json");
  side << meta.dump(2) << '\n';
}

}  // namespace rwlab
