#include "catch_amalgamated.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <vector>

#include "json.hpp"

#include "qds/experiments.hpp"
#include "qds/gkls_json.hpp"

using namespace qds;
using nlohmann::json;

namespace {

json dephasing_generator_doc(double gamma) {
    const auto gen = gkls::make_lindblad(
        {std::sqrt(gamma) * linalg::pauli_z()},
        linalg::HermitianMatrix(Eigen::MatrixXcd::Zero(2, 2)));
    return gkls::generator_to_json(gen);
}

json reference_mixture_doc() {
    return {{"type", "discrete"},
            {"atoms", json::array({{{"weight", 0.5}, {"generator", dephasing_generator_doc(1.0)}},
                                   {{"weight", 0.5}, {"generator", dephasing_generator_doc(3.0)}}})}};
}

harness::ExperimentConfig make_config(json doc) {
    return harness::parse_config(doc.dump());
}

// Strip the only nondeterministic report field before comparing.
json masked_report(const std::string& text) {
    json doc = json::parse(text);
    doc["metadata"]["wall_time_seconds"] = 0.0;
    return doc;
}

} // namespace

TEST_CASE("parallel_for", "[experiments]") {
    SECTION("covers every index exactly once") {
        for (const int threads : {1, 2, 7}) {
            std::vector<std::atomic<int>> hits(101);
            harness::parallel_for(101, threads, [&](int i) { hits[static_cast<std::size_t>(i)]++; });
            for (const auto& h : hits) {
                REQUIRE(h.load() == 1);
            }
        }
    }
    SECTION("propagates exceptions") {
        REQUIRE_THROWS_AS(harness::parallel_for(8, 4,
                                                [](int i) {
                                                    if (i == 5) {
                                                        throw ValidationError("boom");
                                                    }
                                                }),
                          ValidationError);
    }
}

TEST_CASE("fit_loglog_slope", "[experiments]") {
    SECTION("recovers an exact power law") {
        const std::vector<int> ns{2, 4, 8, 16};
        std::vector<double> values;
        for (const int n : ns) {
            values.push_back(3.0 * std::pow(n, -1.5));
        }
        REQUIRE(harness::fit_loglog_slope(ns, values) == Catch::Approx(-1.5).margin(1e-12));
    }
    SECTION("rejects nonpositive values") {
        REQUIRE_THROWS_AS(harness::fit_loglog_slope({2, 4}, {1.0, 0.0}), ValidationError);
    }
}

TEST_CASE("mean_identity experiment", "[experiments]") {
    auto doc = json{{"experiment", "mean_identity"},
                    {"distribution", reference_mixture_doc()},
                    {"n_list", json::array({1, 2, 3, 4})},
                    {"grid", {{"T", 1.0}, {"points", 5}}},
                    {"trials", 1},
                    {"seed", 7}};
    const auto report = harness::run_experiment(make_config(doc), 2);
    REQUIRE(report.rows.size() == 4);
    for (const auto& row : report.rows) {
        REQUIRE(row.experiment == "mean_identity");
        REQUIRE(row.value <= 1e-10);
    }
    REQUIRE_FALSE(report.fitted_slope.has_value());
    REQUIRE(report.gate_ok);
}

TEST_CASE("variance_decay experiment", "[experiments]") {
    auto doc = json{{"experiment", "variance_decay"},
                    {"distribution", reference_mixture_doc()},
                    {"n_list", json::array({8, 16, 32, 64})},
                    {"grid", {{"T", 1.0}, {"points", 11}}},
                    {"trials", 400},
                    {"seed", 11}};
    const auto report = harness::run_experiment(make_config(doc), 2);
    REQUIRE(report.rows.size() == 4);
    REQUIRE(report.fitted_slope.has_value());
    REQUIRE(report.slope_ci.has_value());
    REQUIRE(report.slope_ci->first <= *report.fitted_slope);
    REQUIRE(report.slope_ci->second >= *report.fitted_slope);
    REQUIRE(report.gate_ok);
    for (std::size_t k = 1; k < report.rows.size(); ++k) {
        REQUIRE(report.rows[k].value < report.rows[k - 1].value);
    }
}

TEST_CASE("chernoff_convergence experiment", "[experiments]") {
    auto doc = json{{"experiment", "chernoff_convergence"},
                    {"distribution", reference_mixture_doc()},
                    {"n_list", json::array({2, 4, 8, 16, 32, 64})},
                    {"grid", {{"T", 1.0}, {"points", 11}}},
                    {"trials", 1},
                    {"seed", 3}};
    const auto report = harness::run_experiment(make_config(doc), 2);
    REQUIRE(report.fitted_slope.has_value());
    REQUIRE(*report.fitted_slope == Catch::Approx(-1.0).margin(0.3));
    REQUIRE(report.gate_ok);
}

TEST_CASE("exceedance experiment", "[experiments]") {
    auto doc = json{{"experiment", "exceedance"},
                    {"distribution", reference_mixture_doc()},
                    {"n_list", json::array({8, 32, 128})},
                    {"grid", {{"T", 1.0}, {"points", 11}}},
                    {"trials", 300},
                    {"epsilon", 0.05},
                    {"seed", 5}};
    const auto report = harness::run_experiment(make_config(doc), 2);
    REQUIRE(report.rows.size() == 3);
    for (const auto& row : report.rows) {
        REQUIRE(row.value >= 0.0);
        REQUIRE(row.value <= 1.0);
    }
    REQUIRE(report.rows.front().value > report.rows.back().value);
    REQUIRE(report.gate_ok);
}

TEST_CASE("cptp_audit experiment", "[experiments]") {
    auto doc = json{{"experiment", "cptp_audit"},
                    {"distribution",
                     {{"type", "parametric"}, {"dim", 2}, {"kossakowski_scale", 0.7},
                      {"hamiltonian_scale", 1.0}, {"wishart_dof", 3}, {"norm_cap", 10.0}}},
                    {"n_list", json::array({25})},
                    {"grid", {{"T", 1.0}, {"points", 5}}},
                    {"trials", 1},
                    {"seed", 13}};
    const auto report = harness::run_experiment(make_config(doc), 2);
    REQUIRE(report.rows.size() == 1);
    REQUIRE(report.rows.front().n == 25);
    REQUIRE(report.gate_ok);
    REQUIRE(report.rows.front().value <= 1e-9);
}

TEST_CASE("norm_bounds experiment", "[experiments]") {
    auto doc = json{{"experiment", "norm_bounds"},
                    {"distribution",
                     {{"type", "parametric"}, {"dim", 2}, {"kossakowski_scale", 0.7},
                      {"hamiltonian_scale", 1.0}, {"wishart_dof", 3}, {"norm_cap", 10.0}}},
                    {"n_list", json::array({25})},
                    {"grid", {{"T", 1.0}, {"points", 5}}},
                    {"trials", 1},
                    {"seed", 17}};
    const auto report = harness::run_experiment(make_config(doc), 2);
    REQUIRE(report.rows.size() == 1);
    REQUIRE(report.rows.front().value >= 0.0);
    REQUIRE(report.gate_ok);
}

TEST_CASE("report serialization and determinism", "[experiments]") {
    auto doc = json{{"experiment", "variance_decay"},
                    {"distribution", reference_mixture_doc()},
                    {"n_list", json::array({4, 8})},
                    {"grid", {{"T", 1.0}, {"points", 5}}},
                    {"trials", 64},
                    {"seed", 21}};
    const auto report_a = harness::run_experiment(make_config(doc), 1);
    const auto report_b = harness::run_experiment(make_config(doc), 4);

    SECTION("csv bytes are identical across thread counts") {
        const std::string csv_a = harness::report_to_csv(report_a);
        REQUIRE(csv_a == harness::report_to_csv(report_b));
        REQUIRE(csv_a.rfind("experiment,n,t_star,value,std_error\n", 0) == 0);
        REQUIRE(std::count(csv_a.begin(), csv_a.end(), '\n') == 3);
    }
    SECTION("json matches modulo wall time and carries provenance") {
        const json a = masked_report(harness::report_to_json(report_a));
        const json b = masked_report(harness::report_to_json(report_b));
        REQUIRE(a == b);
        REQUIRE(a["metadata"]["seed"] == 21);
        REQUIRE(a["metadata"]["config_hash"].is_string());
        REQUIRE(a["rows"].size() == 2);
    }
}
