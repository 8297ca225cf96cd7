// main.cpp — qds-lln command line: validate configs, run experiments,
// emit oracle reference tables.

#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"

#include "qds/experiments.hpp"
#include "qds/lln.hpp"
#include "qds/oracles.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw qds::Error("cannot open config file '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

int default_threads() {
    if (const char* env = std::getenv("QDS_LLN_THREADS")) {
        const int parsed = std::atoi(env);
        if (parsed >= 1) {
            return parsed;
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void emit_oracle_tables(std::ostream& out) {
    char line[128];

    out << "table,gamma,t,coherence_factor\n";
    for (const double gamma : {0.5, 1.0, 3.0}) {
        for (const double t : {0.1, 0.5, 1.0, 2.0}) {
            const auto map = qds::oracle::dephasing_map_analytic(gamma, t);
            std::snprintf(line, sizeof(line), "dephasing_map,%g,%g,%.12g\n", gamma, t,
                          map.matrix(1, 1).real());
            out << line;
        }
    }

    out << "\ntable,n,t,variance\n";
    const qds::oracle::DephasingModel reference({1.0, 3.0}, {0.5, 0.5});
    for (const int n : {2, 4, 8, 16, 32, 64, 128, 256}) {
        for (const double t : {0.5, 1.0}) {
            std::snprintf(line, sizeof(line), "dephasing_variance,%d,%g,%.12g\n", n, t,
                          qds::oracle::dephasing_variance_analytic(reference, n, t));
            out << line;
        }
    }

    out << "\ntable,case,residual\n";
    const auto residual = [](const Eigen::MatrixXcd& a) {
        return qds::linalg::relative_frobenius_error(qds::linalg::mat_exp(a),
                                                     qds::oracle::taylor_exp(a, 40));
    };
    Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(2, 2);
    diag(0, 0) = 1.0;
    diag(1, 1) = -1.0;
    std::snprintf(line, sizeof(line), "taylor_vs_matexp_diag,%.3e\n", residual(diag));
    out << line;
    const std::complex<double> i_half_pi(0.0, 1.5707963267948966);
    std::snprintf(line, sizeof(line), "taylor_vs_matexp_pauli_rotation,%.3e\n",
                  residual(i_half_pi * qds::linalg::pauli_x()));
    out << line;
    const auto dephasing = qds::gkls::make_lindblad({qds::linalg::pauli_z()},
                                                    qds::linalg::HermitianMatrix(
                                                        Eigen::MatrixXcd::Zero(2, 2)));
    std::snprintf(line, sizeof(line), "taylor_vs_matexp_dephasing_superop,%.3e\n",
                  residual(dephasing.superop(qds::gkls::Picture::Heisenberg).matrix));
    out << line;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qds-lln: random quantum dynamical semigroup laboratory"};
    app.require_subcommand(1);

    auto* validate_cmd = app.add_subcommand("validate", "parse and validate a config file");
    std::string validate_path;
    validate_cmd->add_option("config", validate_path, "experiment config JSON")->required();

    auto* run_cmd = app.add_subcommand("run", "run an experiment and write reports");
    std::string run_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed_override;
    int threads = default_threads();
    run_cmd->add_option("config", run_path, "experiment config JSON")->required();
    run_cmd->add_option("--out", out_dir, "override output directory");
    run_cmd->add_option("--seed", seed_override, "override the config seed");
    run_cmd->add_option("--threads", threads, "work pool width")->check(CLI::PositiveNumber);

    auto* oracle_cmd = app.add_subcommand("oracle", "emit oracle reference tables");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return 64;
    }

    try {
        if (*validate_cmd) {
            qds::harness::parse_config(
                read_file(validate_path), std::nullopt,
                std::filesystem::path(validate_path).parent_path().string());
            std::cout << "OK\n";
            return 0;
        }
        if (*run_cmd) {
            auto config = qds::harness::parse_config(
                read_file(run_path), seed_override,
                std::filesystem::path(run_path).parent_path().string());
            if (!out_dir.empty()) {
                config.output_dir = out_dir;
            }
            const auto report = qds::harness::run_experiment(config, threads);
            qds::harness::write_report_files(report, config.output_dir);
            std::cout << "wrote " << config.output_dir << "/data.csv and report.json ("
                      << report.rows.size() << " rows, " << report.wall_time_seconds << " s)\n";
            if (!report.gate_ok) {
                std::cerr << "threshold check failed: " << report.gate_message << "\n";
                return 2;
            }
            return 0;
        }
        if (*oracle_cmd) {
            emit_oracle_tables(std::cout);
            return 0;
        }
    } catch (const qds::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
