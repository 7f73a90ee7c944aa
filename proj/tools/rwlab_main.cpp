// rwlab: command-line front end for the random wave laboratory.
#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "rwlab/error.hpp"
#include "rwlab/harness.hpp"
#include "rwlab/nodal.hpp"
#include "rwlab/oracle.hpp"

namespace fs = std::filesystem;

namespace {

enum ExitCode : int { kOk = 0, kVerdictFailed = 1, kConfigError = 2, kIoError = 3 };

fs::path default_output_dir() {
  if (const char* dir = std::getenv("RWLAB_OUTPUT_DIR"); dir != nullptr && *dir != '\0') {
    return dir;
  }
  return ".";
}

struct RunOptions {
  std::vector<double> energies;
  int replications = 100;
  std::uint64_t seed = 1;
  double grid_per_wavelength = 10.0;
  double modes_per_wavelength = 4.0;
  double side = 1.0;
  std::string out;
  int threads = 1;
  int bootstrap = 400;
  std::string dump_grid;
  std::string dump_segments;
};

void add_run_options(CLI::App* cmd, RunOptions& opt) {
  cmd->add_option("--replications,-R", opt.replications, "Replications per energy")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", opt.seed, "Base seed");
  cmd->add_option("--grid-per-wavelength", opt.grid_per_wavelength,
                  "Grid nodes per wavelength (>= 10)");
  cmd->add_option("--modes-per-wavelength", opt.modes_per_wavelength,
                  "Mode factor c in M = ceil(c k L) (>= 4)");
  cmd->add_option("--side", opt.side, "Side length of the square domain");
  cmd->add_option("--out", opt.out, "Records CSV path (default $RWLAB_OUTPUT_DIR/records.csv)");
  cmd->add_option("--threads", opt.threads, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--bootstrap", opt.bootstrap, "Bootstrap resamples for standard errors");
  cmd->add_option("--dump-grid", opt.dump_grid,
                  "Write replication 0 of the first energy as raw float64 grid");
  cmd->add_option("--dump-segments", opt.dump_segments,
                  "Write the nodal segments of that replication as CSV");
}

rwlab::ExperimentPlan make_plan(const RunOptions& opt) {
  rwlab::ExperimentPlan plan;
  plan.energies = opt.energies;
  plan.replications = opt.replications;
  plan.base_seed = opt.seed;
  plan.rule = {opt.grid_per_wavelength, opt.modes_per_wavelength};
  plan.domain.side = opt.side;
  plan.threads = opt.threads;
  plan.bootstrap_resamples = opt.bootstrap;
  fs::path out = opt.out.empty() ? default_output_dir() / "records.csv" : fs::path(opt.out);
  plan.output_path = out;
  return plan;
}

bool any_failed(const rwlab::ReportSummary& summary) {
  bool failed = summary.trend.status == rwlab::Verdict::fail;
  for (const auto& clt : summary.clt) failed = failed || clt.status == rwlab::Verdict::fail;
  return failed;
}

int run_plan(const RunOptions& opt) {
  auto plan = make_plan(opt);
  plan.validate();
  if (plan.output_path->has_parent_path()) fs::create_directories(plan.output_path->parent_path());

  if (!opt.dump_grid.empty() || !opt.dump_segments.empty()) {
    const double e = plan.energies.front();
    const auto config = rwlab::make_config(e, plan.rule, plan.domain,
                                           rwlab::energy_seed(plan.base_seed, e), 0);
    const auto grid = rwlab::sample_field(config);
    if (!opt.dump_grid.empty()) rwlab::dump_grid(grid, opt.dump_grid);
    if (!opt.dump_segments.empty()) {
      rwlab::write_segments_csv(rwlab::nodal_length(grid), opt.dump_segments);
    }
  }

  const auto result = rwlab::run_ensemble(plan, [](double e, int done, int total) {
    std::fprintf(stderr, "E=%g: %d/%d replications\n", e, done, total);
  });
  const auto summary = rwlab::summarize(result.energies, plan.domain, plan.base_seed);
  fs::path summary_path = *plan.output_path;
  summary_path.replace_extension(".summary.json");
  std::ofstream js(summary_path);
  if (!js) throw rwlab::IoError("cannot open " + summary_path.string());
  js << summary.json << '\n';
  if (!js) throw rwlab::IoError("write failed: " + summary_path.string());

  for (std::size_t i = 0; i < summary.clt.size(); ++i) {
    const auto& e = result.energies[i];
    const auto& clt = summary.clt[i];
    std::printf("E=%-8g R=%-5d mean_L=%.6g (formula %.6g) corr_LM=%.4f mse=%.4f KS=%.4f "
                "p=%.3g W1=%.4f k4=%.4f clt=%s\n",
                e.energy, e.replications, e.mean_L.value, e.mean_length_formula,
                e.corr_LM.value, e.mse_LM.value, clt.ks_stat, clt.ks_pvalue, clt.w1_stat,
                e.k4_m.value, rwlab::to_string(clt.status));
  }
  std::printf("cumulant trend: %s\nrecords: %s\nsummary: %s\n",
              rwlab::to_string(summary.trend.status), plan.output_path->string().c_str(),
              summary_path.string().c_str());
  return any_failed(summary) ? kVerdictFailed : kOk;
}

int run_oracle(const std::vector<double>& energies, double side, const std::string& out) {
  rwlab::Domain domain;
  domain.side = side;
  std::vector<double> vars;
  for (double e : energies) vars.push_back(rwlab::var_m_oracle(e, domain));
  std::ofstream file;
  if (!out.empty()) {
    file.open(out);
    if (!file) throw rwlab::IoError("cannot open " + out);
  }
  std::ostream& os = out.empty() ? std::cout : file;
  os << "E,var_m_oracle,mean_length_formula,log_law,ratio,local_slope\n";
  char line[512];
  for (std::size_t i = 0; i < energies.size(); ++i) {
    const double log_law = rwlab::log_law_slope(domain) * std::log(energies[i]);
    const double local =
        i == 0 ? std::nan("")
               : (vars[i] - vars[i - 1]) / (std::log(energies[i]) - std::log(energies[i - 1]));
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", energies[i],
                  vars[i], rwlab::mean_length_formula(energies[i], domain), log_law,
                  vars[i] / log_law, local);
    os << line;
  }
  if (energies.size() >= 3) {
    const auto fit = rwlab::slope_fit(energies, vars);
    std::snprintf(line, sizeof line, "# ols_slope=%.17g intercept=%.17g asymptotic_slope=%.17g\n",
                  fit.slope, fit.intercept, rwlab::log_law_slope(domain));
    os << line;
  }
  if (!os) throw rwlab::IoError("write failed");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo laboratory for nodal lengths of planar random waves"};
  app.require_subcommand(1);

  RunOptions sim;
  double energy = 0.0;
  auto* simulate = app.add_subcommand("simulate", "Run replications at one energy");
  simulate->add_option("--energy,-E", energy, "Energy E")->required();
  add_run_options(simulate, sim);

  RunOptions sweep_opt;
  auto* sweep = app.add_subcommand("sweep", "Run replications over several energies");
  sweep->add_option("--energies", sweep_opt.energies, "Comma separated energies")
      ->required()
      ->delimiter(',');
  add_run_options(sweep, sweep_opt);

  std::vector<double> oracle_energies;
  double oracle_side = 1.0;
  std::string oracle_out;
  auto* oracle = app.add_subcommand("oracle", "Deterministic variance oracle over energies");
  oracle->add_option("--energies", oracle_energies, "Comma separated energies")
      ->required()
      ->delimiter(',');
  oracle->add_option("--side", oracle_side, "Side length of the square domain");
  oracle->add_option("--out", oracle_out, "CSV output path (default stdout)");

  std::vector<std::string> report_in;
  std::string report_out;
  int report_bootstrap = 400;
  auto* report = app.add_subcommand("report", "Summarize persisted record files");
  report->add_option("--in", report_in, "Record CSV files")->required();
  report->add_option("--out", report_out, "Output directory (default $RWLAB_OUTPUT_DIR/report)");
  report->add_option("--bootstrap", report_bootstrap, "Bootstrap resamples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*simulate) {
      sim.energies = {energy};
      return run_plan(sim);
    }
    if (*sweep) return run_plan(sweep_opt);
    if (*oracle) return run_oracle(oracle_energies, oracle_side, oracle_out);
    if (*report) {
      std::vector<fs::path> paths(report_in.begin(), report_in.end());
      const fs::path out = report_out.empty() ? default_output_dir() / "report" : fs::path(report_out);
      const auto summary = rwlab::report(paths, out, report_bootstrap);
      std::cout << summary.json << '\n';
      return any_failed(summary) ? kVerdictFailed : kOk;
    }
  } catch (const rwlab::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const rwlab::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kConfigError;
  } catch (const rwlab::DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kConfigError;
  } catch (const rwlab::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIoError;
  }
  return kOk;
}
