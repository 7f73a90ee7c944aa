#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rwlab/chaos.hpp"
#include "rwlab/randomwave.hpp"

namespace rwlab {

struct ExperimentPlan {
  std::vector<double> energies;
  int replications = 2;
  std::uint64_t base_seed = 0;
  GridRule rule;
  Domain domain;
  std::optional<std::filesystem::path> output_path;  // records CSV
  int threads = 1;
  int bootstrap_resamples = 400;

  /// Throws ConfigError if any energy cannot be run.
  void validate() const;
};

/// Seed of the per-energy wave streams; replication r uses stream id r.
std::uint64_t energy_seed(std::uint64_t base_seed, double energy);

struct Estimate {
  double value = 0.0;
  double se = 0.0;
};

struct EnergyResult {
  double energy = 0.0;
  int replications = 0;
  Estimate mean_L, var_L;
  Estimate mean_m, var_m;
  Estimate mean_l4, var_l4;
  Estimate mean_h4, var_h4;
  Estimate corr_LM;        // Pearson(nodal_len, m_stat)
  Estimate corr_residual;  // Pearson(nodal_len - l4, m_stat)
  Estimate mse_LM;         // mean of (std_L - std_m)^2
  Estimate var_ratio;      // Var(nodal_len) / Var(l4)
  Estimate ks_stat;        // std_L against N(0, 1)
  double ks_pvalue = 1.0;
  Estimate w1_stat;
  Estimate k4_m;  // fourth k-statistic of standardized m_stat
  std::vector<double> std_L;
  std::vector<double> std_m;
  double var_m_oracle = 0.0;
  double mean_length_formula = 0.0;
};

struct EnsembleResult {
  ExperimentPlan plan;
  std::vector<EnergyResult> energies;
  std::vector<std::vector<ChaosRecord>> records;  // per energy, by replication index
};

/// Replication-level computation for one energy: sample, trace, integrate.
ChaosRecord simulate_replication(const WaveConfig& config);

/// Runs replications 0..R-1 at one energy on `threads` workers.
std::vector<ChaosRecord> run_energy(double energy, const ExperimentPlan& plan);

/// Aggregates per-replication records; bootstrap stream keyed by (base_seed, E).
EnergyResult aggregate(std::span<const ChaosRecord> records, const Domain& domain,
                       std::uint64_t base_seed, int bootstrap_resamples);

using ProgressFn = std::function<void(double energy, int done, int total)>;

EnsembleResult run_ensemble(const ExperimentPlan& plan, const ProgressFn& progress = {});

enum class Verdict { pass, fail, inconclusive };
const char* to_string(Verdict v);

inline constexpr int kMinCltReplications = 100;
inline constexpr double kKsLevel = 0.01;

struct CltVerdict {
  Verdict status = Verdict::inconclusive;
  std::size_t samples = 0;
  double ks_stat = 0.0;
  double ks_pvalue = 1.0;
  double w1_stat = 0.0;
};

/// KS test of an already standardized sample at the 1% level.
CltVerdict clt_verdict(std::span<const double> standardized);
CltVerdict clt_verdict(const EnergyResult& result);

inline constexpr int kMinTrendReplications = 2000;

struct CumulantPoint {
  double energy = 0.0;
  int replications = 0;
  Estimate k4;
};

struct TrendRecord {
  Verdict status = Verdict::inconclusive;
  std::vector<CumulantPoint> points;
};

/// Fourth k-statistic with a bootstrap standard error.
Estimate fourth_cumulant(std::span<const double> sample, std::uint64_t seed, int resamples);

/// Passes when k4 at the largest energy is below k4 at the smallest, or both
/// are within 2 bootstrap SEs of zero. Needs >= 2 energies with R >= 2000.
TrendRecord cumulant_trend(std::span<const EnergyResult> results);

struct RecordsFile {
  std::filesystem::path path;
  std::uint64_t base_seed = 0;
  Domain domain;
  GridRule rule;
  std::vector<ChaosRecord> records;
};

/// Writes the metadata line and the column header.
void write_records_header(std::ostream& out, const ExperimentPlan& plan);
void write_records(std::ostream& out, std::span<const ChaosRecord> records);
RecordsFile read_records(const std::filesystem::path& path);

struct ReportSummary {
  std::string json;
  std::vector<EnergyResult> energies;
  TrendRecord trend;
  std::vector<CltVerdict> clt;
};

/// JSON summary of aggregated results plus oracle overlay and slope fits
/// (slopes only when at least 3 energies are present).
ReportSummary summarize(std::span<const EnergyResult> energies, const Domain& domain,
                        std::uint64_t base_seed);

/// Reads record files, aggregates, and writes summary.json and gnuplot .dat
/// files into `out_dir`. Throws ParseError on empty or malformed input.
ReportSummary report(std::span<const std::filesystem::path> inputs,
                     const std::filesystem::path& out_dir, int bootstrap_resamples = 400);

void write_dat_files(std::span<const EnergyResult> energies, const std::filesystem::path& out_dir);

}  // namespace rwlab
