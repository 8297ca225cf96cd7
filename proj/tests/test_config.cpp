#include "catch_amalgamated.hpp"

#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "qds/config.hpp"
#include "qds/gkls_json.hpp"

using namespace qds;
using harness::ExperimentKind;
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

json minimal_variance_doc() {
    return {{"experiment", "variance_decay"},
            {"distribution", reference_mixture_doc()},
            {"n_list", json::array({8, 16, 32})},
            {"trials", 100},
            {"seed", 42}};
}

} // namespace

TEST_CASE("parse_config minimal document", "[config]") {
    const auto config = harness::parse_config(minimal_variance_doc().dump());
    REQUIRE(config.experiment == ExperimentKind::VarianceDecay);
    REQUIRE(config.n_list == std::vector<int>{8, 16, 32});
    REQUIRE(config.grid.T == 1.0);
    REQUIRE(config.grid.points == 41);
    REQUIRE(config.trials == 100);
    REQUIRE(config.seed == 42);
    REQUIRE(config.output_dir == "out");
    REQUIRE(config.distribution.is_discrete());
    REQUIRE_FALSE(config.epsilon.has_value());
    REQUIRE_FALSE(config.config_hash.empty());
}

TEST_CASE("parse_config diagnostics name the offending key", "[config]") {
    SECTION("exceedance requires epsilon") {
        auto doc = minimal_variance_doc();
        doc["experiment"] = "exceedance";
        try {
            harness::parse_config(doc.dump());
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            REQUIRE(std::string(e.what()).find("epsilon") != std::string::npos);
        }
    }
    SECTION("decreasing n_list") {
        auto doc = minimal_variance_doc();
        doc["n_list"] = json::array({4, 2});
        try {
            harness::parse_config(doc.dump());
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            REQUIRE(std::string(e.what()).find("n_list not increasing") != std::string::npos);
        }
    }
    SECTION("unknown top-level key") {
        auto doc = minimal_variance_doc();
        doc["grdi"] = json::object();
        try {
            harness::parse_config(doc.dump());
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            REQUIRE(std::string(e.what()).find("grdi") != std::string::npos);
        }
    }
    SECTION("unknown experiment name") {
        auto doc = minimal_variance_doc();
        doc["experiment"] = "variance_dekay";
        try {
            harness::parse_config(doc.dump());
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            REQUIRE(std::string(e.what()).find("variance_dekay") != std::string::npos);
        }
    }
    SECTION("epsilon outside exceedance is rejected") {
        auto doc = minimal_variance_doc();
        doc["epsilon"] = 0.1;
        REQUIRE_THROWS_AS(harness::parse_config(doc.dump()), ConfigError);
    }
    SECTION("trials must be positive") {
        auto doc = minimal_variance_doc();
        doc["trials"] = 0;
        REQUIRE_THROWS_AS(harness::parse_config(doc.dump()), ConfigError);
    }
    SECTION("invalid JSON") {
        REQUIRE_THROWS_AS(harness::parse_config("{ not json"), ConfigError);
    }
}

TEST_CASE("parse_config exceedance defaults", "[config]") {
    auto doc = minimal_variance_doc();
    doc["experiment"] = "exceedance";
    doc["epsilon"] = 0.05;
    const auto config = harness::parse_config(doc.dump());
    REQUIRE(config.epsilon == 0.05);
    REQUIRE(config.observable.has_value());
    REQUIRE((*config.observable - linalg::pauli_x()).norm() == 0.0);
}

TEST_CASE("parse_config observables", "[config]") {
    auto doc = minimal_variance_doc();
    SECTION("named pauli") {
        doc["observable"] = {{"pauli", "z"}};
        const auto config = harness::parse_config(doc.dump());
        REQUIRE((*config.observable - linalg::pauli_z()).norm() == 0.0);
    }
    SECTION("explicit entries") {
        doc["observable"] = {{"dim", 2},
                             {"entries", json::array({json::array({1.0, 0.0}),
                                                      json::array({0.0, -1.0}),
                                                      json::array({0.0, 1.0}),
                                                      json::array({2.0, 0.0})})}};
        const auto config = harness::parse_config(doc.dump());
        REQUIRE(config.observable->rows() == 2);
        REQUIRE((*config.observable)(0, 1) == linalg::Complex(0.0, -1.0));
    }
    SECTION("bad pauli name") {
        doc["observable"] = {{"pauli", "w"}};
        REQUIRE_THROWS_AS(harness::parse_config(doc.dump()), ConfigError);
    }
}

TEST_CASE("parse_config distributions", "[config]") {
    SECTION("parametric") {
        auto doc = minimal_variance_doc();
        doc["distribution"] = {{"type", "parametric"}, {"dim", 2},
                               {"kossakowski_scale", 0.7}, {"hamiltonian_scale", 1.0},
                               {"wishart_dof", 3},        {"norm_cap", 10.0}};
        const auto config = harness::parse_config(doc.dump());
        REQUIRE_FALSE(config.distribution.is_discrete());
        REQUIRE(config.distribution.parametric().norm_cap == 10.0);
    }
    SECTION("parametric_snapshot freezes atoms") {
        auto doc = minimal_variance_doc();
        doc["distribution"] = {{"type", "parametric_snapshot"},
                               {"base",
                                {{"type", "parametric"}, {"dim", 2},
                                 {"kossakowski_scale", 0.7}, {"hamiltonian_scale", 1.0},
                                 {"wishart_dof", 3}, {"norm_cap", 10.0}}},
                               {"atoms", 4}};
        const auto config = harness::parse_config(doc.dump());
        REQUIRE(config.distribution.is_discrete());
        REQUIRE(config.distribution.discrete().atoms.size() == 4);
    }
    SECTION("generator_file resolves against the base directory") {
        const auto dir = std::filesystem::path("config_test_tmp");
        std::filesystem::create_directories(dir);
        {
            std::ofstream out(dir / "gen.json");
            out << dephasing_generator_doc(2.0).dump();
        }
        auto doc = minimal_variance_doc();
        doc["distribution"] = {
            {"type", "discrete"},
            {"atoms", json::array({{{"weight", 1.0}, {"generator_file", "gen.json"}}})}};
        const auto config = harness::parse_config(doc.dump(), std::nullopt, dir.string());
        REQUIRE(config.distribution.discrete().atoms.size() == 1);
        std::filesystem::remove_all(dir);
    }
    SECTION("missing generator file") {
        auto doc = minimal_variance_doc();
        doc["distribution"] = {
            {"type", "discrete"},
            {"atoms", json::array({{{"weight", 1.0}, {"generator_file", "no_such.json"}}})}};
        REQUIRE_THROWS_AS(harness::parse_config(doc.dump()), ConfigError);
    }
    SECTION("unknown distribution type") {
        auto doc = minimal_variance_doc();
        doc["distribution"] = {{"type", "gaussian"}};
        REQUIRE_THROWS_AS(harness::parse_config(doc.dump()), ConfigError);
    }
}

TEST_CASE("parse_config seed override", "[config]") {
    const auto doc = minimal_variance_doc();
    const auto config = harness::parse_config(doc.dump(), 777);
    REQUIRE(config.seed == 777);
    REQUIRE(config.distribution.master_seed() == 777);
    // The hash identifies the document, not the override.
    const auto base = harness::parse_config(doc.dump());
    REQUIRE(config.config_hash == base.config_hash);
}
