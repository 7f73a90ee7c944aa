// Acceptance run: one [PASS]/[FAIL] line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "rwlab/harness.hpp"
#include "rwlab/nodal.hpp"
#include "rwlab/oracle.hpp"
#include "rwlab/specfun.hpp"
#include "rwlab/stats.hpp"

using namespace rwlab;
namespace fs = std::filesystem;

namespace {

// Fixed configuration of the acceptance run.
constexpr std::uint64_t kBaseSeed = 1;
constexpr int kBootstrap = 400;
constexpr int kRepsLow = 2000;    // E = 25
constexpr int kRepsMid = 1000;    // E = 100
constexpr int kRepsHigh = 2000;   // E = 400
constexpr int kRepsOrdering = 500;
constexpr int kRepsVariance = 1000;
constexpr int kRepsMean = 200;
constexpr double kMeanGridPerWavelength = 40.0;

// Pilot run (base seed 1, R = 500, h = wavelength/10), frozen for reference.
constexpr double kPilotCorr25 = -0.0316;
constexpr double kPilotCorr400 = 0.1880;
constexpr double kPilotMse25 = 2.0632;
constexpr double kPilotMse400 = 1.6240;

int failures = 0;

void verdict(int id, bool ok, const std::string& what) {
  std::printf("[%s] C%d %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ExperimentPlan plan_for(double energy, int reps) {
  ExperimentPlan plan;
  plan.energies = {energy};
  plan.replications = reps;
  plan.base_seed = kBaseSeed;
  plan.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  plan.bootstrap_resamples = kBootstrap;
  return plan;
}

std::vector<ChaosRecord> run(double energy, int reps) {
  const auto t0 = std::chrono::steady_clock::now();
  auto records = run_energy(energy, plan_for(energy, reps));
  std::fprintf(stderr, "E=%g R=%d simulated in %.1f s\n", energy, reps, seconds_since(t0));
  return records;
}

EnergyResult summarize_first(const std::vector<ChaosRecord>& records, int count) {
  return aggregate(std::span(records).first(static_cast<std::size_t>(count)), Domain{}, kBaseSeed,
                   kBootstrap);
}

void bessel_accuracy() {
  std::ifstream in(fs::path(RWLAB_TEST_DATA_DIR) / "j0_reference.csv");
  std::string line;
  std::getline(in, line);
  std::vector<double> t, ref;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    double a = 0.0, b = 0.0;
    char comma = 0;
    row >> a >> comma >> b;
    t.push_back(a);
    ref.push_back(b);
  }
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    worst = std::max(worst, std::abs(bessel_j0(t[i]) - ref[i]));
  }
  const double elapsed = seconds_since(t0);
  verdict(1, t.size() >= 10000 && worst <= 1e-10 && elapsed < 1.0,
          fmt("Bessel J0: max abs error %.3g over %zu points in %.3f s", worst, t.size(),
              elapsed));
}

void mean_length() {
  auto plan = plan_for(100.0, kRepsMean);
  plan.rule.grid_per_wavelength = kMeanGridPerWavelength;
  const auto records = run_energy(100.0, plan);
  std::vector<double> len;
  for (const auto& r : records) len.push_back(r.nodal_len);
  const double mean = stats::mean(len);
  const double se = std::sqrt(stats::variance(len) / len.size());
  const double formula = mean_length_formula(100.0, Domain{});
  verdict(2, std::abs(mean - formula) <= 3.0 * se,
          fmt("mean nodal length E=100 R=%d h=wavelength/%g: %.5f +- %.5f vs %.5f (%.2f SE)",
              kRepsMean, kMeanGridPerWavelength, mean, se, formula, (mean - formula) / se));
}

void covariance_fit() {
  const double energy = 25.0;
  const auto plan = plan_for(energy, kRepsLow);
  const std::uint64_t seed = energy_seed(plan.base_seed, energy);
  const auto probe = make_config(energy, plan.rule, plan.domain, seed, 0);
  const int n = probe.grid_points;
  const double h = probe.spacing();
  const int max_lag = static_cast<int>(std::floor(3.0 * probe.wavelength() / h + 1e-9));
  // per replication: spatial average of B(x) B(x + lag) along both axes
  std::vector<std::vector<double>> est(max_lag + 1, std::vector<double>(kRepsLow));
  for (int rep = 0; rep < kRepsLow; ++rep) {
    auto cfg = probe;
    cfg.replication_index = rep;
    const auto g = sample_field(cfg);
    for (int lag = 0; lag <= max_lag; ++lag) {
      double s = 0.0;
      for (int r = 0; r < n; ++r) {
        for (int c = 0; c + lag < n; ++c) {
          s += g.nodes.value(r, c) * g.nodes.value(r, c + lag);
          s += g.nodes.value(c, r) * g.nodes.value(c + lag, r);
        }
      }
      est[lag][rep] = s / (2.0 * n * (n - lag));
    }
  }
  double worst = 0.0;
  int worst_lag = 0;
  for (int lag = 0; lag <= max_lag; ++lag) {
    const double m = stats::mean(est[lag]);
    const double se = std::sqrt(stats::variance(est[lag]) / kRepsLow);
    const double z = std::abs(m - covariance(energy, lag * h)) / se;
    if (z > worst) {
      worst = z;
      worst_lag = lag;
    }
  }
  verdict(3, worst <= 5.0,
          fmt("covariance fit E=25 R=%d, %d lags over [0, 3 wavelengths]: max deviation %.2f SE "
              "(lag %d)",
              kRepsLow, max_lag + 1, worst, worst_lag));
}

void variance_crosscheck(const EnergyResult& e25, const EnergyResult& e100) {
  bool ok = true;
  std::string detail;
  for (const auto* e : {&e25, &e100}) {
    const double z = (e->var_m.value - e->var_m_oracle) / e->var_m.se;
    ok = ok && std::abs(z) <= 3.0;
    detail += fmt(" E=%g: %.5f +- %.5f vs %.5f (%.2f SE);", e->energy, e->var_m.value,
                  e->var_m.se, e->var_m_oracle, z);
  }
  verdict(4, ok, fmt("Var(m_stat) vs oracle, R=%d:", kRepsVariance) + detail);
}

void log_law() {
  const std::vector<double> energies{1e2, 1e3, 1e4, 1e5};
  std::vector<double> v;
  for (double e : energies) v.push_back(var_m_oracle(e, Domain{}));
  const double slope = slope_fit(energies, v).slope;
  const double target = log_law_slope(Domain{});
  verdict(5, std::abs(slope / target - 1.0) <= 0.15,
          fmt("oracle log-law slope %.5e vs %.5e (%.2f%%)", slope, target,
              100.0 * (slope / target - 1.0)));
}

void reduction(const EnergyResult& lo, const EnergyResult& hi) {
  const bool ok = hi.corr_LM.value > lo.corr_LM.value && lo.corr_LM.value > 0.0 &&
                  hi.mse_LM.value < lo.mse_LM.value;
  verdict(6, ok,
          fmt("reduction R=%d: corr_LM(25)=%.4f+-%.4f corr_LM(400)=%.4f+-%.4f; "
              "mse(25)=%.4f mse(400)=%.4f [pilot %.4f %.4f; %.4f %.4f]",
              kRepsOrdering, lo.corr_LM.value, lo.corr_LM.se, hi.corr_LM.value, hi.corr_LM.se,
              lo.mse_LM.value, hi.mse_LM.value, kPilotCorr25, kPilotCorr400, kPilotMse25,
              kPilotMse400));
}

void orthogonality(const EnergyResult& e100) {
  const double z = e100.corr_residual.value / e100.corr_residual.se;
  verdict(7, std::abs(z) <= 5.0,
          fmt("corr(nodal_len - l4, m_stat) E=100 R=%d: %.4f +- %.4f (%.2f SE)", kRepsMid,
              e100.corr_residual.value, e100.corr_residual.se, z));
}

void clt(const EnergyResult& lo, const EnergyResult& hi) {
  const auto v = clt_verdict(hi);
  const bool ok = v.status == Verdict::pass && hi.w1_stat.value < lo.w1_stat.value;
  verdict(8, ok,
          fmt("CLT R=%d: KS(400)=%.4f p=%.3f (%s); W1(25)=%.4f W1(400)=%.4f", kRepsOrdering,
              v.ks_stat, v.ks_pvalue, to_string(v.status), lo.w1_stat.value, hi.w1_stat.value));
}

void cumulants(const EnergyResult& lo, const EnergyResult& hi) {
  const std::vector<EnergyResult> both{lo, hi};
  const auto trend = cumulant_trend(both);
  verdict(9, trend.status == Verdict::pass,
          fmt("fourth cumulant of standardized m_stat R=%d: k4(25)=%.3f+-%.3f k4(400)=%.3f+-%.3f "
              "(%s)",
              kRepsLow, lo.k4_m.value, lo.k4_m.se, hi.k4_m.value, hi.k4_m.se,
              to_string(trend.status)));
}

void geometry() {
  const auto line = synthetic_grid(Domain{}, 11, [](double, double y) { return y - 0.5; });
  const double affine = nodal_length(line).total_length;
  const double k = 6.0 * std::numbers::pi;
  const auto cosine_grid =
      synthetic_grid(Domain{}, 301, [k](double x, double) { return std::cos(k * x); });
  const double cosine = nodal_length(cosine_grid).total_length;
  const Domain box{2.0, -1.0, -1.0};
  const auto circle_grid =
      synthetic_grid(box, 2001, [](double x, double y) { return x * x + y * y - 0.09; });
  const double circle = nodal_length(circle_grid).total_length;
  const double exact = 2.0 * std::numbers::pi * 0.3;
  const double rel = std::abs(circle - exact) / exact;
  verdict(10, affine == 1.0 && std::abs(cosine - 6.0) <= 1e-9 && rel <= 0.01,
          fmt("geometry: affine %.17g, cosine |err| %.2e, circle rel err %.2e at h=1e-3", affine,
              std::abs(cosine - 6.0), rel));
}

void determinism() {
  const auto dir = fs::temp_directory_path() / "rwlab_acceptance";
  fs::create_directories(dir);
  std::string reference;
  bool same = true;
  for (int threads : {1, 4, 16}) {
    ExperimentPlan plan = plan_for(25.0, 24);
    plan.energies = {25.0, 100.0};
    plan.threads = threads;
    plan.bootstrap_resamples = 50;
    plan.output_path = dir / ("threads_" + std::to_string(threads) + ".csv");
    run_ensemble(plan);
    std::ifstream in(*plan.output_path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    if (reference.empty()) reference = ss.str();
    same = same && ss.str() == reference && !reference.empty();
  }
  verdict(11, same, fmt("records CSV byte-identical for 1, 4, 16 workers (%zu bytes)",
                        reference.size()));
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  bessel_accuracy();
  mean_length();
  covariance_fit();

  const auto rec25 = run(25.0, kRepsLow);
  const auto rec100 = run(100.0, kRepsMid);
  const auto rec400 = run(400.0, kRepsHigh);

  variance_crosscheck(summarize_first(rec25, kRepsVariance), summarize_first(rec100, kRepsVariance));
  log_law();
  const auto lo500 = summarize_first(rec25, kRepsOrdering);
  const auto hi500 = summarize_first(rec400, kRepsOrdering);
  reduction(lo500, hi500);
  const auto mid = summarize_first(rec100, kRepsMid);
  orthogonality(mid);
  clt(lo500, hi500);
  const auto hi_all = summarize_first(rec400, kRepsHigh);
  cumulants(summarize_first(rec25, kRepsLow), hi_all);
  for (const auto* e : {&mid, &hi_all}) {
    std::printf("[INFO] Var(nodal_len)/Var(l4) E=%g R=%d: %.4f +- %.4f\n", e->energy,
                e->replications, e->var_ratio.value, e->var_ratio.se);
  }
  geometry();
  determinism();

  std::printf("%d of 11 criteria failed (%.0f s)\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
