#include "rwlab/oracle.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "rwlab/chaos.hpp"
#include "rwlab/error.hpp"
#include "rwlab/specfun.hpp"

namespace rwlab {

double pair_distance_measure(double r, const Domain& domain) {
  const double side = domain.side;
  const double s = r / side;
  constexpr double pi = std::numbers::pi;
  double density = 0.0;  // square line picking density for the unit square
  if (s < 0.0 || s > std::numbers::sqrt2) {
    density = 0.0;
  } else if (s <= 1.0) {
    density = 2.0 * s * (pi - 4.0 * s + s * s);
  } else {
    density = 2.0 * s *
              (4.0 * std::sqrt(s * s - 1.0) - (s * s + 2.0 - pi) - 4.0 * std::acos(1.0 / s));
  }
  return side * side * side * std::max(density, 0.0);
}

RadialIntegral pair_integral(const Domain& domain, const std::function<double(double)>& g,
                             double piece) {
  using boost::math::quadrature::gauss_kronrod;
  if (!(piece > 0.0)) throw DomainError("pair_integral: panel length must be positive");
  auto integrand = [&](double r) { return g(r) * pair_distance_measure(r, domain); };
  RadialIntegral total;
  // The density has a kink at r = side; panel boundaries include it.
  const double breaks[3] = {0.0, domain.side, domain.diameter()};
  for (int seg = 0; seg < 2; ++seg) {
    const double lo = breaks[seg];
    const double hi = breaks[seg + 1];
    const auto panels = static_cast<long>(std::ceil((hi - lo) / piece));
    const double width = (hi - lo) / static_cast<double>(panels);
    for (long i = 0; i < panels; ++i) {
      const double a = lo + width * static_cast<double>(i);
      const double b = (i + 1 == panels) ? hi : a + width;
      double err = 0.0;
      total.value += gauss_kronrod<double, 31>::integrate(integrand, a, b, 8, 1e-9, &err);
      total.est_error += err;
    }
  }
  return total;
}

KernelIntegral pair_kernel_integral(double energy, int power, const Domain& domain) {
  if (power < 2 || power > 4) {
    throw DomainError("pair_kernel_integral: power must be 2, 3 or 4, got " +
                      std::to_string(power));
  }
  const double k = wavenumber(energy);
  auto kernel = [k, power](double r) { return std::pow(std::abs(bessel_j0(k * r)), power); };
  const auto radial = pair_integral(domain, kernel, std::numbers::pi / k);
  return {energy, power, radial.value, radial.est_error};
}

double var_m_oracle(double energy, const Domain& domain) {
  const double scale = derivative_scale(energy);
  return scale * scale / (96.0 * 96.0) * 24.0 * pair_kernel_integral(energy, 4, domain).value;
}

LineFit slope_fit(std::span<const double> energies, std::span<const double> values) {
  if (energies.size() != values.size()) {
    throw DomainError("slope_fit: energies and values differ in length");
  }
  if (energies.size() < 3) throw DomainError("slope_fit: need at least 3 energies");
  for (std::size_t i = 0; i < energies.size(); ++i) {
    if (!(energies[i] > 0.0)) throw DomainError("slope_fit: energies must be positive");
    if (i > 0 && !(energies[i] > energies[i - 1])) {
      throw DomainError("slope_fit: energies must be strictly increasing");
    }
  }
  const auto n = static_cast<double>(energies.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < energies.size(); ++i) {
    mean_x += std::log(energies[i]);
    mean_y += values[i];
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < energies.size(); ++i) {
    const double dx = std::log(energies[i]) - mean_x;
    sxx += dx * dx;
    sxy += dx * (values[i] - mean_y);
  }
  if (!(sxx > 0.0)) throw DomainError("slope_fit: degenerate design");
  const double slope = sxy / sxx;
  return {slope, mean_y - slope * mean_x};
}

double log_law_slope(const Domain& domain) { return domain.area() / (512.0 * std::numbers::pi); }

}  // namespace rwlab
