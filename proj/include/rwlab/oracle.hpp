#pragma once

#include <functional>
#include <span>

#include "rwlab/randomwave.hpp"

namespace rwlab {

/// Integral of |J0(k r)|^p over pairs of points in the domain.
struct KernelIntegral {
  double energy = 0.0;
  int power = 0;
  double value = 0.0;
  double est_error = 0.0;
};

/// Density of |x - y| for x, y uniform in the square, weighted by area^2:
/// the double integral of g(|x - y|) over D x D equals the integral of
/// g(r) * pair_distance_measure(r) over [0, diam D].
double pair_distance_measure(double r, const Domain& domain);

struct RadialIntegral {
  double value = 0.0;
  double est_error = 0.0;
};

/// Adaptive Gauss-Kronrod integral of g(r) * pair_distance_measure(r).
/// `piece` bounds the length of the panels the range is cut into before
/// adaptation (use about half an oscillation period of g).
RadialIntegral pair_integral(const Domain& domain, const std::function<double(double)>& g,
                             double piece);

KernelIntegral pair_kernel_integral(double energy, int power, const Domain& domain);

/// Exact finite-E variance of the rescaled trispectrum:
/// (2 pi^2 E / 96^2) * 24 * integral of J0(k|x-y|)^4 over D x D.
double var_m_oracle(double energy, const Domain& domain);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Least squares of values against log(energies); needs >= 3 strictly increasing energies.
LineFit slope_fit(std::span<const double> energies, std::span<const double> values);

/// Asymptotic slope of Var(M_E) and Var(L_E) in log E: area / (512 pi).
double log_law_slope(const Domain& domain);

}  // namespace rwlab
