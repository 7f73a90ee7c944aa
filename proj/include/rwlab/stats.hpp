#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace rwlab::stats {

double mean(std::span<const double> x);
/// Unbiased sample variance (n - 1 denominator).
double variance(std::span<const double> x);
double pearson(std::span<const double> x, std::span<const double> y);

/// (x - mean) / population std, so the result has mean 0 and 1/n-variance 1.
std::vector<double> standardize(std::span<const double> x);

/// Unbiased estimator of the fourth cumulant (Fisher's k4); needs n >= 4.
double kstat4(std::span<const double> x);

/// sup |F_n - Phi| against the standard normal.
double ks_statistic(std::span<const double> x);

/// Asymptotic Kolmogorov tail probability with Stephens' finite-n correction.
double ks_pvalue(double statistic, std::size_t n);

/// Integral of |F_n - Phi| over the real line, computed in closed form.
double wasserstein1_to_normal(std::span<const double> x);

double normal_cdf(double x);
double normal_quantile(double p);

/// Bootstrap standard errors of several statistics of the same resample.
/// `statistic` receives the resampled row indices and writes `count` values.
/// Non-finite values mark a degenerate resample and are left out of that
/// statistic's spread; fewer than 2 usable resamples give NaN.
std::vector<double> bootstrap_se(
    std::size_t n, std::size_t count, int resamples, std::uint64_t seed, std::uint64_t stream,
    const std::function<void(std::span<const std::size_t>, std::span<double>)>& statistic);

}  // namespace rwlab::stats
