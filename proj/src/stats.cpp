#include "rwlab/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "rwlab/error.hpp"
#include "rwlab/rng.hpp"

namespace rwlab::stats {

constexpr double kInvSqrt2 = 0.70710678118654752440;

double mean(std::span<const double> x) {
  if (x.empty()) throw DomainError("mean of empty sample");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
  if (x.size() < 2) throw DomainError("variance needs at least 2 values");
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("pearson: bad sample sizes");
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) throw DomainError("pearson: zero variance");
  return sxy / std::sqrt(sxx * syy);
}

std::vector<double> standardize(std::span<const double> x) {
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  const double sd = std::sqrt(s / static_cast<double>(x.size()));
  if (!(sd > 0.0)) throw DomainError("standardize: zero variance");
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - m) / sd;
  return out;
}

double kstat4(std::span<const double> x) {
  if (x.size() < 4) throw DomainError("kstat4 needs at least 4 values");
  const auto n = static_cast<double>(x.size());
  const double m = mean(x);
  double s2 = 0.0;
  double s4 = 0.0;
  for (double v : x) {
    const double d2 = (v - m) * (v - m);
    s2 += d2;
    s4 += d2 * d2;
  }
  const double m2 = s2 / n;
  const double m4 = s4 / n;
  return n * n * ((n + 1.0) * m4 - 3.0 * (n - 1.0) * m2 * m2) /
         ((n - 1.0) * (n - 2.0) * (n - 3.0));
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double normal_quantile(double p) {
  static const boost::math::normal_distribution<double> standard;
  return boost::math::quantile(standard, p);
}

double ks_statistic(std::span<const double> x) {
  if (x.empty()) throw DomainError("ks_statistic of empty sample");
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = normal_cdf(sorted[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_pvalue(double statistic, std::size_t n) {
  const double rn = std::sqrt(static_cast<double>(n));
  const double lambda = (rn + 0.12 + 0.11 / rn) * statistic;
  if (lambda <= 0.0) return 1.0;
  constexpr double pi = std::numbers::pi;
  if (lambda < 1.18) {
    // Jacobi-transformed series converges fast for small lambda
    double s = 0.0;
    for (int j = 1; j < 40; j += 2) s += std::exp(-j * j * pi * pi / (8.0 * lambda * lambda));
    return std::clamp(1.0 - std::sqrt(2.0 * pi) / lambda * s, 0.0, 1.0);
  }
  double q = 0.0;
  for (int j = 1; j < 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    q += (j % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-18) break;
  }
  return std::clamp(q, 0.0, 1.0);
}

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

// Antiderivative of Phi.
double phi_integral(double x) { return x * normal_cdf(x) + normal_pdf(x); }

// Integral over [a, b] of |c - Phi(t)| dt.
double abs_gap(double a, double b, double c) {
  const double z = normal_quantile(c);
  auto below = [&](double lo, double hi) {  // Phi <= c on [lo, hi]
    return c * (hi - lo) - (phi_integral(hi) - phi_integral(lo));
  };
  auto above = [&](double lo, double hi) {
    return (phi_integral(hi) - phi_integral(lo)) - c * (hi - lo);
  };
  if (z <= a) return above(a, b);
  if (z >= b) return below(a, b);
  return below(a, z) + above(z, b);
}

}  // namespace

double wasserstein1_to_normal(std::span<const double> x) {
  if (x.empty()) throw DomainError("wasserstein1_to_normal of empty sample");
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  const auto n = static_cast<double>(s.size());
  double total = phi_integral(s.front());
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    if (s[i + 1] > s[i]) total += abs_gap(s[i], s[i + 1], static_cast<double>(i + 1) / n);
  }
  const double last = s.back();
  total += normal_pdf(last) - last * (1.0 - normal_cdf(last));
  return total;
}

std::vector<double> bootstrap_se(
    std::size_t n, std::size_t count, int resamples, std::uint64_t seed, std::uint64_t stream,
    const std::function<void(std::span<const std::size_t>, std::span<double>)>& statistic) {
  if (resamples < 2) throw DomainError("bootstrap needs at least 2 resamples");
  if (n == 0) throw DomainError("bootstrap of empty sample");
  Philox4x32 rng(seed, stream);
  std::vector<std::size_t> idx(n);
  std::vector<double> values(count);
  std::vector<double> sum(count, 0.0);
  std::vector<double> sum_sq(count, 0.0);
  std::vector<int> used(count, 0);
  for (int b = 0; b < resamples; ++b) {
    for (auto& i : idx) i = static_cast<std::size_t>(rng.next_u64() % n);
    statistic(idx, values);
    for (std::size_t j = 0; j < count; ++j) {
      if (!std::isfinite(values[j])) continue;  // degenerate resample
      sum[j] += values[j];
      sum_sq[j] += values[j] * values[j];
      ++used[j];
    }
  }
  std::vector<double> se(count);
  for (std::size_t j = 0; j < count; ++j) {
    const auto b = static_cast<double>(used[j]);
    if (used[j] < 2) {
      se[j] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    const double m = sum[j] / b;
    se[j] = std::sqrt(std::max(0.0, (sum_sq[j] - b * m * m) / (b - 1.0)));
  }
  return se;
}

}  // namespace rwlab::stats
