#include "rwlab/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rwlab/error.hpp"

namespace rwlab {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

double j0_series(double t) {
  // sum_m (-1)^m (t/2)^{2m} / (m!)^2 with the term ratio -(t/2)^2 / m^2
  const double q = 0.25 * t * t;
  double term = 1.0;
  double sum = 1.0;
  for (int m = 1; m < 200; ++m) {
    term *= -q / (static_cast<double>(m) * m);
    sum += term;
    if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(sum))) break;
  }
  return sum;
}

double j0_hankel(double x) {
  // J0(x) = sqrt(2/(pi x)) (P cos chi - Q sin chi), chi = x - pi/4.
  // t_k = prod_{j<=k} (-(2j-1)^2) / (k! (8x)^k); P takes even k, Q odd k.
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  double prev = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -odd * odd / (k * 8.0 * x);
    if (std::abs(term) > std::abs(prev)) break;  // asymptotic series turned
    if (k % 2 == 0) {
      p += ((k / 2) % 2 == 0 ? 1.0 : -1.0) * term;
    } else {
      q += (((k - 1) / 2) % 2 == 0 ? 1.0 : -1.0) * term;
    }
    if (std::abs(term) < 1e-17) break;
    prev = term;
  }
  // cos(x - pi/4) = (cos x + sin x)/sqrt2, sin(x - pi/4) = (sin x - cos x)/sqrt2
  const double c = std::cos(x);
  const double s = std::sin(x);
  const double cos_chi = (c + s) * kInvSqrt2;
  const double sin_chi = (s - c) * kInvSqrt2;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * cos_chi - q * sin_chi);
}

}  // namespace

double bessel_j0(double t) {
  if (!std::isfinite(t)) throw DomainError("bessel_j0: non-finite argument");
  const double x = std::abs(t);
  if (x <= kBesselAccuracy.series_cutoff) return j0_series(x);
  return j0_hankel(x);
}

double bessel_j0_asymptotic(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw DomainError("bessel_j0_asymptotic: requires r > 0");
  }
  constexpr double pi = std::numbers::pi;
  return std::cos(2.0 * pi * r - 0.25 * pi) / (pi * std::sqrt(r));
}

double hermite(int n, double u) {
  if (n < 0) throw DomainError("hermite: negative order " + std::to_string(n));
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = u;
  for (int j = 1; j < n; ++j) {
    const double next = u * cur - j * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double wavenumber(double energy) {
  if (!(energy > 0.0) || !std::isfinite(energy)) {
    throw DomainError("energy must be positive and finite");
  }
  return 2.0 * std::numbers::pi * std::sqrt(energy);
}

double covariance(double energy, double r) {
  const double k = wavenumber(energy);
  if (!(r >= 0.0)) throw DomainError("covariance: negative distance");
  return bessel_j0(k * r);
}

}  // namespace rwlab
