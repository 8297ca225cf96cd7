// experiments.hpp — Config-driven experiment execution: seeded studies over
// (n, t, trials) grids with a deterministic work pool, slope fits with
// bootstrap confidence intervals, and CSV/JSON report emission.

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qds/config.hpp"

namespace qds::harness {

struct ReportRow {
    std::string experiment;
    int n;
    double t_star;
    double value;
    double std_error;
};

struct ConvergenceReport {
    std::vector<ReportRow> rows;
    std::optional<double> fitted_slope;
    std::optional<std::pair<double, double>> slope_ci; // bootstrap 95% interval
    std::uint64_t seed = 0;
    std::string config_hash;
    double wall_time_seconds = 0.0;
    bool gate_ok = true;       // scientific thresholds for this experiment
    std::string gate_message;
};

// Runs the configured experiment. Results are bit-identical for a fixed
// (config, seed) regardless of `threads`: trials land in slots indexed by
// trial id and every reduction is sequential.
ConvergenceReport run_experiment(const ExperimentConfig& config, int threads);

std::string report_to_csv(const ConvergenceReport& report);
std::string report_to_json(const ConvergenceReport& report);

// Writes <output_dir>/data.csv and <output_dir>/report.json (UTF-8, LF).
void write_report_files(const ConvergenceReport& report, const std::string& output_dir);

// Work pool: executes task(0..tasks-1), each at most once, on up to
// `threads` workers. Exceptions are captured and rethrown on the caller.
void parallel_for(int tasks, int threads, const std::function<void(int)>& task);

// Least-squares slope of log(value) against log(n).
double fit_loglog_slope(const std::vector<int>& ns, const std::vector<double>& values);

} // namespace qds::harness
