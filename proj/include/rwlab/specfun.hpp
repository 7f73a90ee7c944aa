#pragma once

namespace rwlab {

/// Accuracy contract of bessel_j0: power series below `series_cutoff`,
/// Hankel expansion above it.
struct BesselAccuracy {
  double abs_tolerance = 1e-10;
  double series_cutoff = 12.0;
};

inline constexpr BesselAccuracy kBesselAccuracy{};

/// Zero-order Bessel function of the first kind. Throws DomainError for
/// non-finite input.
double bessel_j0(double t);

/// Leading large-argument form of J0(2*pi*r): cos(2*pi*r - pi/4) / (pi*sqrt(r)).
/// Validation only; requires r > 0.
double bessel_j0_asymptotic(double r);

/// Probabilists' Hermite polynomial He_n(u).
double hermite(int n, double u);

inline double hermite2(double u) { return u * u - 1.0; }
inline double hermite4(double u) {
  const double u2 = u * u;
  return u2 * u2 - 6.0 * u2 + 3.0;
}

/// Wavenumber of the random wave at energy E: k = 2*pi*sqrt(E).
double wavenumber(double energy);

/// Model covariance J0(k(E) * r) between field values at distance r.
double covariance(double energy, double r);

}  // namespace rwlab
