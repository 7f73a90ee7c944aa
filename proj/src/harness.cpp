#include "rwlab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "rwlab/error.hpp"
#include "rwlab/nodal.hpp"
#include "rwlab/oracle.hpp"
#include "rwlab/stats.hpp"

namespace rwlab {

namespace {

constexpr const char* kRecordsSchema = "rwlab.records/1";
constexpr const char* kSummarySchema = "rwlab.summary/1";
constexpr std::uint64_t kBootstrapSalt = 0xB0075EEDB0075EEDull;

std::uint64_t energy_bits(double energy) { return std::bit_cast<std::uint64_t>(energy); }

}  // namespace

void ExperimentPlan::validate() const {
  if (energies.empty()) throw ConfigError("plan has no energies");
  if (replications < 2) throw ConfigError("plan needs at least 2 replications");
  if (threads < 1) throw ConfigError("plan needs at least 1 worker thread");
  if (bootstrap_resamples < 2) throw ConfigError("plan needs at least 2 bootstrap resamples");
  for (std::size_t i = 0; i < energies.size(); ++i) {
    if (i > 0 && !(energies[i] > energies[i - 1])) {
      throw ConfigError("energies must be strictly increasing");
    }
    make_config(energies[i], rule, domain, 0, 0).validate();
  }
}

std::uint64_t energy_seed(std::uint64_t base_seed, double energy) {
  return mix64(base_seed ^ mix64(energy_bits(energy)));
}

ChaosRecord simulate_replication(const WaveConfig& config) {
  const FieldGrid grid = sample_field(config);
  const NodalCurve curve = nodal_length(grid);
  return make_record(grid, config.energy, config.replication_index, curve.total_length);
}

std::vector<ChaosRecord> run_energy(double energy, const ExperimentPlan& plan) {
  const std::uint64_t seed = energy_seed(plan.base_seed, energy);
  std::vector<ChaosRecord> records(static_cast<std::size_t>(plan.replications));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int i = next++; i < plan.replications; i = next++) {
      try {
        records[i] = simulate_replication(make_config(energy, plan.rule, plan.domain, seed, i));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = plan.replications;
      }
    }
  };
  const int workers = std::min(plan.threads, plan.replications);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

namespace {

// Statistics shared by the point estimate and every bootstrap resample.
enum Stat : std::size_t {
  kMeanL, kVarL, kMeanM, kVarM, kMeanL4, kVarL4, kMeanH4, kVarH4,
  kCorrLM, kCorrResidual, kMseLM, kVarRatio, kKs, kW1, kK4M, kStatCount
};

// A resample with repeated rows can have zero spread; its statistics are NaN.
template <class F>
double guarded(F&& f) {
  try {
    return f();
  } catch (const DomainError&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

void compute_stats(std::span<const ChaosRecord> rec, std::span<const std::size_t> idx,
                   std::span<double> out) {
  const std::size_t n = idx.size();
  std::vector<double> L(n), m(n), l4(n), h4(n), resid(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = rec[idx[i]];
    L[i] = r.nodal_len;
    m[i] = r.m_stat;
    l4[i] = r.l4;
    h4[i] = r.h4;
    resid[i] = r.nodal_len - r.l4;
  }
  out[kMeanL] = stats::mean(L);
  out[kVarL] = stats::variance(L);
  out[kMeanM] = stats::mean(m);
  out[kVarM] = stats::variance(m);
  out[kMeanL4] = stats::mean(l4);
  out[kVarL4] = stats::variance(l4);
  out[kMeanH4] = stats::mean(h4);
  out[kVarH4] = stats::variance(h4);
  out[kCorrLM] = guarded([&] { return stats::pearson(L, m); });
  out[kCorrResidual] = guarded([&] { return stats::pearson(resid, m); });
  out[kVarRatio] = out[kVarL] / out[kVarL4];
  std::vector<double> sL, sM;
  try {
    sL = stats::standardize(L);
    sM = stats::standardize(m);
  } catch (const DomainError&) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out[kMseLM] = out[kKs] = out[kW1] = out[kK4M] = nan;
    return;
  }
  double mse = 0.0;
  for (std::size_t i = 0; i < n; ++i) mse += (sL[i] - sM[i]) * (sL[i] - sM[i]);
  out[kMseLM] = mse / static_cast<double>(n);
  out[kKs] = stats::ks_statistic(sL);
  out[kW1] = stats::wasserstein1_to_normal(sL);
  out[kK4M] = n >= 4 ? stats::kstat4(sM) : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

EnergyResult aggregate(std::span<const ChaosRecord> records, const Domain& domain,
                       std::uint64_t base_seed, int bootstrap_resamples) {
  if (records.size() < 2) throw DomainError("aggregate needs at least 2 records");
  const double energy = records.front().energy;
  for (const auto& r : records) {
    if (r.energy != energy) throw DomainError("aggregate: records mix energies");
  }
  const std::size_t n = records.size();
  std::vector<std::size_t> identity(n);
  for (std::size_t i = 0; i < n; ++i) identity[i] = i;
  std::vector<double> point(kStatCount);
  compute_stats(records, identity, point);
  const auto se = stats::bootstrap_se(
      n, kStatCount, bootstrap_resamples, base_seed ^ kBootstrapSalt, energy_bits(energy),
      [&](std::span<const std::size_t> idx, std::span<double> out) {
        compute_stats(records, idx, out);
      });
  auto est = [&](Stat s) { return Estimate{point[s], se[s]}; };

  EnergyResult res;
  res.energy = energy;
  res.replications = static_cast<int>(n);
  res.mean_L = est(kMeanL);
  res.var_L = est(kVarL);
  res.mean_m = est(kMeanM);
  res.var_m = est(kVarM);
  res.mean_l4 = est(kMeanL4);
  res.var_l4 = est(kVarL4);
  res.mean_h4 = est(kMeanH4);
  res.var_h4 = est(kVarH4);
  res.corr_LM = est(kCorrLM);
  res.corr_residual = est(kCorrResidual);
  res.mse_LM = est(kMseLM);
  res.var_ratio = est(kVarRatio);
  res.ks_stat = est(kKs);
  res.w1_stat = est(kW1);
  res.k4_m = est(kK4M);
  std::vector<double> L(n), m(n);
  for (std::size_t i = 0; i < n; ++i) {
    L[i] = records[i].nodal_len;
    m[i] = records[i].m_stat;
  }
  res.std_L = stats::standardize(L);
  res.std_m = stats::standardize(m);
  res.ks_pvalue = stats::ks_pvalue(res.ks_stat.value, n);
  res.var_m_oracle = var_m_oracle(energy, domain);
  res.mean_length_formula = mean_length_formula(energy, domain);
  return res;
}

EnsembleResult run_ensemble(const ExperimentPlan& plan, const ProgressFn& progress) {
  plan.validate();
  EnsembleResult result;
  result.plan = plan;

  std::ofstream out;
  if (plan.output_path) {
    out.open(*plan.output_path);
    if (!out) throw IoError("cannot open " + plan.output_path->string());
    write_records_header(out, plan);
  }
  for (double energy : plan.energies) {
    auto records = run_energy(energy, plan);
    if (plan.output_path) {
      write_records(out, records);
      out.flush();
      if (!out) throw IoError("write failed: " + plan.output_path->string());
    }
    if (progress) progress(energy, plan.replications, plan.replications);
    result.energies.push_back(aggregate(records, plan.domain, plan.base_seed,
                                        plan.bootstrap_resamples));
    result.records.push_back(std::move(records));
  }
  return result;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "?";
}

CltVerdict clt_verdict(std::span<const double> standardized) {
  CltVerdict v;
  v.samples = standardized.size();
  if (standardized.size() < static_cast<std::size_t>(kMinCltReplications)) return v;
  v.ks_stat = stats::ks_statistic(standardized);
  v.ks_pvalue = stats::ks_pvalue(v.ks_stat, standardized.size());
  v.w1_stat = stats::wasserstein1_to_normal(standardized);
  v.status = v.ks_pvalue >= kKsLevel ? Verdict::pass : Verdict::fail;
  return v;
}

CltVerdict clt_verdict(const EnergyResult& result) { return clt_verdict(result.std_L); }

Estimate fourth_cumulant(std::span<const double> sample, std::uint64_t seed, int resamples) {
  const auto se = stats::bootstrap_se(
      sample.size(), 1, resamples, seed, 0,
      [&](std::span<const std::size_t> idx, std::span<double> out) {
        std::vector<double> x(idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i) x[i] = sample[idx[i]];
        out[0] = stats::kstat4(stats::standardize(x));
      });
  return {stats::kstat4(stats::standardize(sample)), se[0]};
}

TrendRecord cumulant_trend(std::span<const EnergyResult> results) {
  TrendRecord trend;
  for (const auto& r : results) trend.points.push_back({r.energy, r.replications, r.k4_m});
  if (results.size() < 2) return trend;
  for (const auto& r : results) {
    if (r.replications < kMinTrendReplications) return trend;
  }
  auto lo = std::min_element(results.begin(), results.end(),
                             [](const auto& a, const auto& b) { return a.energy < b.energy; });
  auto hi = std::max_element(results.begin(), results.end(),
                             [](const auto& a, const auto& b) { return a.energy < b.energy; });
  const bool decreasing = hi->k4_m.value <= lo->k4_m.value;
  const bool both_null = std::abs(lo->k4_m.value) <= 2.0 * lo->k4_m.se &&
                         std::abs(hi->k4_m.value) <= 2.0 * hi->k4_m.se;
  trend.status = (decreasing || both_null) ? Verdict::pass : Verdict::fail;
  return trend;
}

void write_records_header(std::ostream& out, const ExperimentPlan& plan) {
  char meta[256];
  std::snprintf(meta, sizeof meta,
                "# %s base_seed=%llu side=%.17g x0=%.17g y0=%.17g grid_per_wavelength=%.17g "
                "modes_factor=%.17g\n",
                kRecordsSchema, static_cast<unsigned long long>(plan.base_seed),
                plan.domain.side, plan.domain.x0, plan.domain.y0, plan.rule.grid_per_wavelength,
                plan.rule.modes_factor);
  out << meta << kRecordHeader << '\n';
}

void write_records(std::ostream& out, std::span<const ChaosRecord> records) {
  for (const auto& r : records) out << format_record(r) << '\n';
}

RecordsFile read_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open");
  RecordsFile file;
  file.path = path;
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": row 1: empty file");
  {
    std::istringstream meta(line);
    std::string hash, schema;
    meta >> hash >> schema;
    if (hash != "#" || schema != kRecordsSchema) {
      throw ParseError(path.string() + ": row 1: expected '# " + kRecordsSchema + "' metadata");
    }
    std::string kv;
    bool have_seed = false;
    while (meta >> kv) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        throw ParseError(path.string() + ": row 1: bad metadata token '" + kv + "'");
      }
      const std::string key = kv.substr(0, eq);
      const std::string val = kv.substr(eq + 1);
      try {
        if (key == "base_seed") {
          file.base_seed = std::stoull(val);
          have_seed = true;
        } else if (key == "side") {
          file.domain.side = std::stod(val);
        } else if (key == "x0") {
          file.domain.x0 = std::stod(val);
        } else if (key == "y0") {
          file.domain.y0 = std::stod(val);
        } else if (key == "grid_per_wavelength") {
          file.rule.grid_per_wavelength = std::stod(val);
        } else if (key == "modes_factor") {
          file.rule.modes_factor = std::stod(val);
        }
      } catch (const std::exception&) {
        throw ParseError(path.string() + ": row 1: bad value for " + key);
      }
    }
    if (!have_seed) throw ParseError(path.string() + ": row 1: missing base_seed");
  }
  if (!std::getline(in, line) || line != kRecordHeader) {
    throw ParseError(path.string() + ": row 2: expected column header '" +
                     std::string(kRecordHeader) + "'");
  }
  std::size_t row = 2;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    file.records.push_back(parse_record(line, path.string() + ": row " + std::to_string(row)));
  }
  return file;
}

namespace {

nlohmann::ordered_json to_json(const Estimate& e) { return {{"value", e.value}, {"se", e.se}}; }

}  // namespace

ReportSummary summarize(std::span<const EnergyResult> energies, const Domain& domain,
                        std::uint64_t base_seed) {
  ReportSummary summary;
  summary.energies.assign(energies.begin(), energies.end());
  nlohmann::ordered_json j;
  j["schema"] = kSummarySchema;
  j["base_seed"] = base_seed;
  j["domain"] = {{"side", domain.side}, {"x0", domain.x0}, {"y0", domain.y0}};
  j["energies"] = nlohmann::ordered_json::array();
  for (const auto& e : energies) {
    const auto clt = clt_verdict(e);
    summary.clt.push_back(clt);
    nlohmann::ordered_json row;
    row["E"] = e.energy;
    row["replications"] = e.replications;
    row["mean_L"] = to_json(e.mean_L);
    row["mean_length_formula"] = e.mean_length_formula;
    row["var_L"] = to_json(e.var_L);
    row["mean_m"] = to_json(e.mean_m);
    row["var_m"] = to_json(e.var_m);
    row["var_m_oracle"] = e.var_m_oracle;
    row["mean_l4"] = to_json(e.mean_l4);
    row["var_l4"] = to_json(e.var_l4);
    row["mean_h4"] = to_json(e.mean_h4);
    row["var_h4"] = to_json(e.var_h4);
    row["corr_LM"] = to_json(e.corr_LM);
    row["corr_residual"] = to_json(e.corr_residual);
    row["mse_LM"] = to_json(e.mse_LM);
    row["var_ratio_L_l4"] = to_json(e.var_ratio);
    row["ks_stat"] = to_json(e.ks_stat);
    row["ks_pvalue"] = e.ks_pvalue;
    row["w1_stat"] = to_json(e.w1_stat);
    row["k4_m"] = to_json(e.k4_m);
    row["clt_verdict"] = to_string(clt.status);
    j["energies"].push_back(row);
  }
  if (energies.size() >= 3) {
    std::vector<double> es, var_m, var_L, var_l4, oracle;
    for (const auto& e : energies) {
      es.push_back(e.energy);
      var_m.push_back(e.var_m.value);
      var_L.push_back(e.var_L.value);
      var_l4.push_back(e.var_l4.value);
      oracle.push_back(e.var_m_oracle);
    }
    auto fit_json = [](const LineFit& f) {
      return nlohmann::ordered_json{{"slope", f.slope}, {"intercept", f.intercept}};
    };
    j["slopes"] = {{"var_m", fit_json(slope_fit(es, var_m))},
                   {"var_m_oracle", fit_json(slope_fit(es, oracle))},
                   {"var_L", fit_json(slope_fit(es, var_L))},
                   {"var_l4", fit_json(slope_fit(es, var_l4))},
                   {"asymptotic", log_law_slope(domain)}};
  }
  summary.trend = cumulant_trend(energies);
  nlohmann::ordered_json trend;
  trend["verdict"] = to_string(summary.trend.status);
  trend["points"] = nlohmann::ordered_json::array();
  for (const auto& p : summary.trend.points) {
    trend["points"].push_back({{"E", p.energy}, {"replications", p.replications},
                               {"k4", p.k4.value}, {"se", p.k4.se}});
  }
  j["cumulant_trend"] = trend;
  summary.json = j.dump(2);
  return summary;
}

void write_dat_files(std::span<const EnergyResult> energies, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  auto open = [&](const char* name) {
    std::ofstream f(out_dir / name);
    if (!f) throw IoError("cannot open " + (out_dir / name).string());
    return f;
  };
  char line[512];
  {
    auto f = open("corr_vs_E.dat");
    f << "# E corr_LM se mse_LM se corr_residual se\n";
    for (const auto& e : energies) {
      std::snprintf(line, sizeof line, "%.17g %.17g %.17g %.17g %.17g %.17g %.17g\n", e.energy,
                    e.corr_LM.value, e.corr_LM.se, e.mse_LM.value, e.mse_LM.se,
                    e.corr_residual.value, e.corr_residual.se);
      f << line;
    }
  }
  {
    auto f = open("variance_vs_logE.dat");
    f << "# logE var_m se var_m_oracle var_L se var_l4 se\n";
    for (const auto& e : energies) {
      std::snprintf(line, sizeof line, "%.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g\n",
                    std::log(e.energy), e.var_m.value, e.var_m.se, e.var_m_oracle, e.var_L.value,
                    e.var_L.se, e.var_l4.value, e.var_l4.se);
      f << line;
    }
  }
  {
    auto f = open("distance_vs_E.dat");
    f << "# E ks_stat se w1_stat se k4_m se\n";
    for (const auto& e : energies) {
      std::snprintf(line, sizeof line, "%.17g %.17g %.17g %.17g %.17g %.17g %.17g\n", e.energy,
                    e.ks_stat.value, e.ks_stat.se, e.w1_stat.value, e.w1_stat.se, e.k4_m.value,
                    e.k4_m.se);
      f << line;
    }
  }
}

ReportSummary report(std::span<const std::filesystem::path> inputs,
                     const std::filesystem::path& out_dir, int bootstrap_resamples) {
  if (inputs.empty()) throw ParseError("report: no input files");
  std::map<double, std::vector<ChaosRecord>> by_energy;
  std::optional<RecordsFile> first;
  for (const auto& path : inputs) {
    RecordsFile file = read_records(path);
    if (first) {
      if (file.base_seed != first->base_seed || file.domain.side != first->domain.side) {
        throw ParseError(path.string() + ": row 1: base_seed/domain differ from " +
                         first->path.string());
      }
    }
    for (auto& r : file.records) by_energy[r.energy].push_back(r);
    if (!first) {
      file.records.clear();
      first = std::move(file);
    }
  }
  if (by_energy.empty()) throw ParseError("report: input files contain no records");
  std::vector<EnergyResult> results;
  for (auto& [energy, recs] : by_energy) {
    std::sort(recs.begin(), recs.end(), [](const auto& a, const auto& b) {
      return a.replication_index < b.replication_index;
    });
    for (std::size_t i = 1; i < recs.size(); ++i) {
      if (recs[i].replication_index == recs[i - 1].replication_index) {
        throw ParseError("report: duplicate replication " +
                         std::to_string(recs[i].replication_index) + " at E=" +
                         std::to_string(energy));
      }
    }
    if (recs.size() < 2) {
      throw ParseError("report: energy " + std::to_string(energy) + " has fewer than 2 records");
    }
    results.push_back(aggregate(recs, first->domain, first->base_seed, bootstrap_resamples));
  }
  auto summary = summarize(results, first->domain, first->base_seed);
  std::filesystem::create_directories(out_dir);
  std::ofstream js(out_dir / "summary.json");
  if (!js) throw IoError("cannot open " + (out_dir / "summary.json").string());
  js << summary.json << '\n';
  write_dat_files(results, out_dir);
  return summary;
}

}  // namespace rwlab
