// experiments.cpp — Experiment drivers and report assembly

#include "qds/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include "json.hpp"

#include "qds/lln.hpp"

namespace qds::harness {

using gkls::Picture;
using linalg::ComplexMatrix;
using linalg::ComplexVector;
using linalg::spectral_norm;
using lln::GridSpec;
using rng::Domain;
using rng::Stream;

namespace {

constexpr int kBootstrapResamples = 200;

std::string fmt_g(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.12g", v);
    return buffer;
}

std::vector<std::size_t> bootstrap_indices(std::uint64_t seed, std::uint64_t resample,
                                           std::uint64_t lane, std::size_t count) {
    Stream stream(seed, Domain::Bootstrap, resample, lane);
    std::vector<std::size_t> indices(count);
    for (auto& index : indices) {
        index = static_cast<std::size_t>(stream.next_index(count));
    }
    return indices;
}

std::pair<double, double> percentile_interval(std::vector<double> samples) {
    std::sort(samples.begin(), samples.end());
    const auto at = [&](double q) {
        const double pos = q * static_cast<double>(samples.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = static_cast<std::size_t>(std::ceil(pos));
        const double frac = pos - std::floor(pos);
        return samples[lo] * (1.0 - frac) + samples[hi] * frac;
    };
    return {at(0.025), at(0.975)};
}

struct GateCheck {
    bool ok = true;
    std::string message = "ok";
};

// ---- mean_identity ------------------------------------------------------

void run_mean_identity(const ExperimentConfig& config, int threads, ConvergenceReport& report) {
    const auto& dist = config.distribution;
    std::vector<ReportRow> rows(config.n_list.size());
    parallel_for(static_cast<int>(config.n_list.size()), threads, [&](int idx) {
        const int n = config.n_list[static_cast<std::size_t>(idx)];
        const auto [t_star, value] = lln::sup_over_grid(
            [&](double t) {
                const auto exact = lln::expected_composition(dist, n, t);
                const auto iterate = lln::chernoff_iterate(dist, t, n);
                return (exact.matrix - iterate.matrix).norm();
            },
            config.grid);
        rows[static_cast<std::size_t>(idx)] = {"mean_identity", n, t_star, value, 0.0};
    });
    report.rows = std::move(rows);

    double worst = 0.0;
    for (const auto& row : report.rows) {
        worst = std::max(worst, row.value);
    }
    if (worst > 1e-10) {
        report.gate_ok = false;
        report.gate_message = "mean identity residual " + fmt_g(worst) + " exceeds 1e-10";
    }
}

// ---- variance_decay -----------------------------------------------------

void run_variance_decay(const ExperimentConfig& config, int threads, ConvergenceReport& report) {
    const auto& dist = config.distribution;
    const int trials = config.trials;
    const GridSpec& grid = config.grid;
    const auto points = static_cast<std::size_t>(grid.points);

    std::vector<double> sup_values(config.n_list.size());
    // boot_values[b][k]: resampled sup-variance for n_list[k].
    std::vector<std::vector<double>> boot_values(
        kBootstrapResamples, std::vector<double>(config.n_list.size()));

    for (std::size_t k = 0; k < config.n_list.size(); ++k) {
        const int n = config.n_list[k];
        const lln::StepTable table(dist, n, grid, Picture::Heisenberg);

        std::vector<ComplexMatrix> means(points);
        for (int i = 0; i < grid.points; ++i) {
            means[static_cast<std::size_t>(i)] =
                lln::chernoff_iterate(dist, grid.time_at(i), n).matrix;
        }

        // grams[j][i] = (Psi_j(t_i) - M(t_i))^dag (Psi_j(t_i) - M(t_i))
        std::vector<std::vector<ComplexMatrix>> grams(static_cast<std::size_t>(trials));
        parallel_for(trials, threads, [&](int j) {
            const auto indices =
                dist::sample_atom_indices(dist, static_cast<std::uint64_t>(j), n);
            const auto curve = lln::composition_curve(table, indices);
            auto& slot = grams[static_cast<std::size_t>(j)];
            slot.resize(points);
            for (std::size_t i = 0; i < points; ++i) {
                const ComplexMatrix deviation = curve[i] - means[i];
                slot[i] = deviation.adjoint() * deviation;
            }
        });

        // Sequential reduction in trial order keeps the bytes deterministic.
        const Eigen::Index d2 = dist.dim() * dist.dim();
        std::size_t best_i = 0;
        double best_value = -1.0;
        std::vector<ComplexMatrix> d_hat(points);
        for (std::size_t i = 0; i < points; ++i) {
            ComplexMatrix sum = ComplexMatrix::Zero(d2, d2);
            for (int j = 0; j < trials; ++j) {
                sum += grams[static_cast<std::size_t>(j)][i];
            }
            sum /= static_cast<double>(trials);
            d_hat[i] = sum;
            const double value = spectral_norm(sum);
            if (value > best_value) {
                best_value = value;
                best_i = i;
            }
        }
        sup_values[k] = best_value;

        std::vector<double> trial_norms(static_cast<std::size_t>(trials));
        for (int j = 0; j < trials; ++j) {
            trial_norms[static_cast<std::size_t>(j)] =
                spectral_norm(grams[static_cast<std::size_t>(j)][best_i]);
        }
        double mean_norm = 0.0;
        for (double v : trial_norms) {
            mean_norm += v;
        }
        mean_norm /= trials;
        double variance = 0.0;
        for (double v : trial_norms) {
            variance += (v - mean_norm) * (v - mean_norm);
        }
        const double se = trials > 1 ? std::sqrt(variance / (trials - 1) / trials) : 0.0;

        report.rows.push_back(
            {"variance_decay", n, grid.time_at(static_cast<int>(best_i)), best_value, se});

        // Bootstrap over trials at the full-sample argmax time.
        for (int b = 0; b < kBootstrapResamples; ++b) {
            const auto indices = bootstrap_indices(config.seed, static_cast<std::uint64_t>(b),
                                                   static_cast<std::uint64_t>(n),
                                                   static_cast<std::size_t>(trials));
            ComplexMatrix sum = ComplexMatrix::Zero(d2, d2);
            for (std::size_t j : indices) {
                sum += grams[j][best_i];
            }
            sum /= static_cast<double>(trials);
            boot_values[static_cast<std::size_t>(b)][k] = spectral_norm(sum);
        }
    }

    const bool fit_possible =
        std::all_of(sup_values.begin(), sup_values.end(), [](double v) { return v > 0.0; });
    if (!fit_possible) {
        report.gate_ok = false;
        report.gate_message = "sup variance vanished for some n; decay slope undefined";
        return;
    }
    report.fitted_slope = fit_loglog_slope(config.n_list, sup_values);
    std::vector<double> slopes;
    slopes.reserve(kBootstrapResamples);
    for (int b = 0; b < kBootstrapResamples; ++b) {
        const auto& resample = boot_values[static_cast<std::size_t>(b)];
        if (std::all_of(resample.begin(), resample.end(), [](double v) { return v > 0.0; })) {
            slopes.push_back(fit_loglog_slope(config.n_list, resample));
        }
    }
    if (!slopes.empty()) {
        report.slope_ci = percentile_interval(std::move(slopes));
    }

    GateCheck gate;
    if (*report.fitted_slope < -1.25 || *report.fitted_slope > -0.80) {
        gate.ok = false;
        gate.message = "variance slope " + fmt_g(*report.fitted_slope) + " outside [-1.25, -0.80]";
    } else {
        const double first = config.n_list.front() * sup_values.front();
        const double last = config.n_list.back() * sup_values.back();
        if (last > 1.5 * first) {
            gate.ok = false;
            gate.message = "n * sup variance grew from " + fmt_g(first) + " to " + fmt_g(last);
        }
    }
    report.gate_ok = gate.ok;
    report.gate_message = gate.message;
}

// ---- chernoff_convergence -----------------------------------------------

void run_chernoff_convergence(const ExperimentConfig& config, int threads,
                              ConvergenceReport& report) {
    const auto& dist = config.distribution;
    const GridSpec& grid = config.grid;
    const auto mean_gen = dist::mean_generator(dist);

    std::vector<ComplexMatrix> limits(static_cast<std::size_t>(grid.points));
    for (int i = 0; i < grid.points; ++i) {
        limits[static_cast<std::size_t>(i)] =
            lln::semigroup_map(mean_gen, grid.time_at(i), Picture::Heisenberg).matrix;
    }

    std::vector<ReportRow> rows(config.n_list.size());
    parallel_for(static_cast<int>(config.n_list.size()), threads, [&](int idx) {
        const int n = config.n_list[static_cast<std::size_t>(idx)];
        std::size_t best_i = 0;
        double best_value = -1.0;
        for (int i = 0; i < grid.points; ++i) {
            const double value =
                spectral_norm(lln::chernoff_iterate(dist, grid.time_at(i), n).matrix -
                              limits[static_cast<std::size_t>(i)]);
            if (value > best_value) {
                best_value = value;
                best_i = static_cast<std::size_t>(i);
            }
        }
        rows[static_cast<std::size_t>(idx)] = {"chernoff_convergence", n,
                                               grid.time_at(static_cast<int>(best_i)), best_value,
                                               0.0};
    });
    report.rows = std::move(rows);

    std::vector<double> values;
    values.reserve(report.rows.size());
    for (const auto& row : report.rows) {
        values.push_back(row.value);
    }
    if (!std::all_of(values.begin(), values.end(), [](double v) { return v > 0.0; })) {
        report.gate_ok = false;
        report.gate_message = "chernoff error vanished for some n; decay slope undefined";
        return;
    }
    report.fitted_slope = fit_loglog_slope(config.n_list, values);
    report.slope_ci = std::pair{*report.fitted_slope, *report.fitted_slope};

    if (*report.fitted_slope < -1.3 || *report.fitted_slope > -0.7) {
        report.gate_ok = false;
        report.gate_message =
            "chernoff slope " + fmt_g(*report.fitted_slope) + " outside [-1.3, -0.7]";
    }
}

// ---- exceedance ----------------------------------------------------------

void run_exceedance(const ExperimentConfig& config, int threads, ConvergenceReport& report) {
    const auto& dist = config.distribution;
    const GridSpec& grid = config.grid;
    const int trials = config.trials;
    const double epsilon = *config.epsilon;
    const ComplexVector x_vec = linalg::vec(*config.observable);
    const auto points = static_cast<std::size_t>(grid.points);

    std::vector<double> fractions(config.n_list.size());
    std::vector<std::vector<char>> exceeded_any(config.n_list.size());

    for (std::size_t k = 0; k < config.n_list.size(); ++k) {
        const int n = config.n_list[k];
        const lln::StepTable table(dist, n, grid, Picture::Heisenberg);
        std::vector<ComplexVector> mean_applied(points);
        for (int i = 0; i < grid.points; ++i) {
            mean_applied[static_cast<std::size_t>(i)] =
                lln::chernoff_iterate(dist, grid.time_at(i), n).matrix * x_vec;
        }

        // flags[j][i]: trial j exceeded epsilon at grid point i.
        std::vector<std::vector<char>> flags(static_cast<std::size_t>(trials),
                                             std::vector<char>(points, 0));
        parallel_for(trials, threads, [&](int j) {
            const auto indices =
                dist::sample_atom_indices(dist, static_cast<std::uint64_t>(j), n);
            const auto curve = lln::composition_curve(table, indices);
            for (std::size_t i = 0; i < points; ++i) {
                const double deviation = (curve[i] * x_vec - mean_applied[i]).norm();
                flags[static_cast<std::size_t>(j)][i] = deviation > epsilon ? 1 : 0;
            }
        });

        std::vector<int> per_point_counts(points, 0);
        auto& any = exceeded_any[k];
        any.assign(static_cast<std::size_t>(trials), 0);
        int count_any = 0;
        for (int j = 0; j < trials; ++j) {
            bool hit = false;
            for (std::size_t i = 0; i < points; ++i) {
                if (flags[static_cast<std::size_t>(j)][i]) {
                    ++per_point_counts[i];
                    hit = true;
                }
            }
            if (hit) {
                any[static_cast<std::size_t>(j)] = 1;
                ++count_any;
            }
        }
        const double fraction = static_cast<double>(count_any) / trials;
        fractions[k] = fraction;
        const double se = std::sqrt(fraction * (1.0 - fraction) / trials);
        const std::size_t best_i = static_cast<std::size_t>(
            std::max_element(per_point_counts.begin(), per_point_counts.end()) -
            per_point_counts.begin());
        report.rows.push_back(
            {"exceedance", n, grid.time_at(static_cast<int>(best_i)), fraction, se});
    }

    // Slope fits need strictly positive fractions; omit otherwise.
    const bool all_positive =
        std::all_of(fractions.begin(), fractions.end(), [](double f) { return f > 0.0; });
    if (all_positive) {
        report.fitted_slope = fit_loglog_slope(config.n_list, fractions);
        std::vector<double> slopes;
        slopes.reserve(kBootstrapResamples);
        for (int b = 0; b < kBootstrapResamples; ++b) {
            std::vector<double> resampled(config.n_list.size());
            bool positive = true;
            for (std::size_t k = 0; k < config.n_list.size(); ++k) {
                const auto indices =
                    bootstrap_indices(config.seed, static_cast<std::uint64_t>(b),
                                      static_cast<std::uint64_t>(config.n_list[k]),
                                      static_cast<std::size_t>(trials));
                int count = 0;
                for (std::size_t j : indices) {
                    count += exceeded_any[k][j];
                }
                resampled[k] = static_cast<double>(count) / trials;
                positive = positive && resampled[k] > 0.0;
            }
            if (positive) {
                slopes.push_back(fit_loglog_slope(config.n_list, resampled));
            }
        }
        if (slopes.size() >= static_cast<std::size_t>(kBootstrapResamples) / 2) {
            report.slope_ci = percentile_interval(std::move(slopes));
        }
    }

    GateCheck gate;
    for (std::size_t k = 0; k + 1 < config.n_list.size(); ++k) {
        const double se_pair = std::sqrt(
            fractions[k] * (1.0 - fractions[k]) / trials +
            fractions[k + 1] * (1.0 - fractions[k + 1]) / trials);
        if (fractions[k + 1] > fractions[k] + 2.0 * se_pair) {
            gate.ok = false;
            gate.message = "exceedance fraction increased from n=" +
                           std::to_string(config.n_list[k]) + " to n=" +
                           std::to_string(config.n_list[k + 1]);
        }
    }
    if (gate.ok && config.n_list.size() >= 2 && fractions.front() > 0.0 &&
        fractions.back() >= fractions.front()) {
        gate.ok = false;
        gate.message = "exceedance fraction at n=" + std::to_string(config.n_list.back()) +
                       " is not strictly below its value at n=" +
                       std::to_string(config.n_list.front());
    }
    report.gate_ok = gate.ok;
    report.gate_message = gate.message;
}

// ---- cptp_audit -----------------------------------------------------------

void run_cptp_audit(const ExperimentConfig& config, int threads, ConvergenceReport& report) {
    const auto& dist = config.distribution;
    const GridSpec& grid = config.grid;

    struct SampleWorst {
        double violation = 0.0;
        double t = 0.0;
        int violations = 0;
    };

    GateCheck gate;
    for (const int n : config.n_list) {
        std::vector<SampleWorst> worst(static_cast<std::size_t>(n));
        parallel_for(n, threads, [&](int j) {
            const auto gen = dist::sample_generator(dist, static_cast<std::uint64_t>(j));
            auto& slot = worst[static_cast<std::size_t>(j)];
            for (int i = 0; i < grid.points; ++i) {
                const double t = grid.time_at(i);
                const auto map = lln::semigroup_map(gen, t, Picture::Schrodinger);
                const auto rep = gkls::check_cptp(map, 1e-8);
                const double cp_violation = std::max(0.0, -rep.min_choi_eig);
                const double magnitude = std::max(cp_violation, rep.constraint_residual);
                if (magnitude > slot.violation) {
                    slot.violation = magnitude;
                    slot.t = t;
                }
                if (rep.min_choi_eig < -1e-8 || rep.constraint_residual > 1e-9) {
                    ++slot.violations;
                }
            }
        });
        SampleWorst overall;
        int violations = 0;
        for (const auto& slot : worst) {
            violations += slot.violations;
            if (slot.violation > overall.violation) {
                overall.violation = slot.violation;
                overall.t = slot.t;
            }
        }
        report.rows.push_back({"cptp_audit", n, overall.t, overall.violation, 0.0});
        if (violations > 0) {
            gate.ok = false;
            gate.message = std::to_string(violations) + " CPTP violations among " +
                           std::to_string(n) + " sampled generators";
        }
    }
    report.gate_ok = gate.ok;
    report.gate_message = gate.message;
}

// ---- norm_bounds ----------------------------------------------------------

void run_norm_bounds(const ExperimentConfig& config, int threads, ConvergenceReport& report) {
    const auto& dist = config.distribution;
    const GridSpec& grid = config.grid;
    const double lambda = dist::norm_bound(dist);

    struct SampleWorst {
        double margin = std::numeric_limits<double>::infinity();
        double t = 0.0;
    };

    GateCheck gate;
    for (const int n : config.n_list) {
        std::vector<SampleWorst> worst(static_cast<std::size_t>(n));
        parallel_for(n, threads, [&](int j) {
            const auto gen = dist::sample_generator(dist, static_cast<std::uint64_t>(j));
            auto& slot = worst[static_cast<std::size_t>(j)];
            for (int i = 0; i < grid.points; ++i) {
                const double t = grid.time_at(i);
                const auto rep = lln::lagrange_bounds_check(gen, t, lambda);
                const double margin = std::min(rep.first_order_margin, rep.second_order_margin);
                if (margin < slot.margin) {
                    slot.margin = margin;
                    slot.t = t;
                }
            }
        });
        SampleWorst overall;
        for (const auto& slot : worst) {
            if (slot.margin < overall.margin) {
                overall = slot;
            }
        }
        report.rows.push_back({"norm_bounds", n, overall.t, overall.margin, 0.0});
        if (overall.margin < 0.0) {
            gate.ok = false;
            gate.message =
                "Lagrange bound margin " + fmt_g(overall.margin) + " is negative at t=" +
                fmt_g(overall.t);
        }
    }
    report.gate_ok = gate.ok;
    report.gate_message = gate.message;
}

} // namespace

void parallel_for(int tasks, int threads, const std::function<void(int)>& task) {
    if (tasks <= 0) {
        return;
    }
    const int workers = std::max(1, std::min(threads, tasks));
    if (workers == 1) {
        for (int i = 0; i < tasks; ++i) {
            task(i);
        }
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto body = [&] {
        while (true) {
            const int i = next.fetch_add(1);
            if (i >= tasks) {
                return;
            }
            try {
                task(i);
            } catch (...) {
                std::scoped_lock lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back(body);
    }
    for (auto& worker : pool) {
        worker.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

double fit_loglog_slope(const std::vector<int>& ns, const std::vector<double>& values) {
    if (ns.size() != values.size() || ns.size() < 2) {
        throw ValidationError("slope fit needs at least two (n, value) pairs");
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const auto count = static_cast<double>(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) {
        if (values[i] <= 0.0) {
            throw ValidationError("slope fit requires positive values");
        }
        const double x = std::log(static_cast<double>(ns[i]));
        const double y = std::log(values[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

ConvergenceReport run_experiment(const ExperimentConfig& config, int threads) {
    const auto start = std::chrono::steady_clock::now();
    ConvergenceReport report;
    report.seed = config.seed;
    report.config_hash = config.config_hash;

    switch (config.experiment) {
        case ExperimentKind::MeanIdentity:
            run_mean_identity(config, threads, report);
            break;
        case ExperimentKind::VarianceDecay:
            run_variance_decay(config, threads, report);
            break;
        case ExperimentKind::ChernoffConvergence:
            run_chernoff_convergence(config, threads, report);
            break;
        case ExperimentKind::Exceedance:
            run_exceedance(config, threads, report);
            break;
        case ExperimentKind::CptpAudit:
            run_cptp_audit(config, threads, report);
            break;
        case ExperimentKind::NormBounds:
            run_norm_bounds(config, threads, report);
            break;
    }

    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::string report_to_csv(const ConvergenceReport& report) {
    std::string csv = "experiment,n,t_star,value,std_error\n";
    for (const auto& row : report.rows) {
        csv += row.experiment;
        csv += ',';
        csv += std::to_string(row.n);
        csv += ',';
        csv += fmt_g(row.t_star);
        csv += ',';
        csv += fmt_g(row.value);
        csv += ',';
        csv += fmt_g(row.std_error);
        csv += '\n';
    }
    return csv;
}

std::string report_to_json(const ConvergenceReport& report) {
    nlohmann::json doc;
    doc["metadata"] = {{"seed", report.seed},
                       {"config_hash", report.config_hash},
                       {"wall_time_seconds", report.wall_time_seconds}};
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : report.rows) {
        rows.push_back({{"experiment", row.experiment},
                        {"n", row.n},
                        {"t_star", row.t_star},
                        {"value", row.value},
                        {"std_error", row.std_error}});
    }
    doc["rows"] = rows;
    doc["fitted_slope"] = report.fitted_slope ? nlohmann::json(*report.fitted_slope)
                                              : nlohmann::json(nullptr);
    doc["slope_ci"] = report.slope_ci
                          ? nlohmann::json::array({report.slope_ci->first, report.slope_ci->second})
                          : nlohmann::json(nullptr);
    doc["gate"] = {{"ok", report.gate_ok}, {"message", report.gate_message}};
    return doc.dump(2) + "\n";
}

void write_report_files(const ConvergenceReport& report, const std::string& output_dir) {
    std::filesystem::create_directories(output_dir);
    const auto write = [&](const char* name, const std::string& content) {
        const auto path = std::filesystem::path(output_dir) / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw Error("cannot open '" + path.string() + "' for writing");
        }
        out << content;
        if (!out) {
            throw Error("failed writing '" + path.string() + "'");
        }
    };
    write("data.csv", report_to_csv(report));
    write("report.json", report_to_json(report));
}

} // namespace qds::harness
