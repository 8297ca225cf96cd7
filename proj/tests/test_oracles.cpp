#include "catch_amalgamated.hpp"

#include <cmath>

#include "qds/gkls.hpp"
#include "qds/lln.hpp"
#include "qds/oracles.hpp"
#include "test_helpers.hpp"

using namespace qds;
using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::HermitianMatrix;

namespace {

gkls::GklsGenerator dephasing_generator(double gamma) {
    return gkls::make_lindblad({std::sqrt(gamma) * linalg::pauli_z()},
                               HermitianMatrix(ComplexMatrix::Zero(2, 2)));
}

} // namespace

TEST_CASE("dephasing_map_analytic", "[oracles]") {
    SECTION("gamma = 0 and t = 0 are the identity") {
        REQUIRE((oracle::dephasing_map_analytic(0.0, 1.3).matrix -
                 ComplexMatrix::Identity(4, 4))
                    .norm() == 0.0);
        REQUIRE((oracle::dephasing_map_analytic(2.0, 0.0).matrix -
                 ComplexMatrix::Identity(4, 4))
                    .norm() == 0.0);
    }
    SECTION("coherence factor") {
        const auto map = oracle::dephasing_map_analytic(1.0, 0.5);
        REQUIRE(map.matrix(1, 1).real() == Catch::Approx(std::exp(-1.0)).epsilon(1e-14));
        REQUIRE(map.matrix(2, 2).real() == Catch::Approx(std::exp(-1.0)).epsilon(1e-14));
        REQUIRE(map.matrix(0, 0) == Complex(1.0, 0.0));
    }
    SECTION("matches the semigroup map of the dephasing generator") {
        for (const double gamma : {0.5, 1.0, 3.0}) {
            const auto gen = dephasing_generator(gamma);
            for (const double t : {0.1, 1.0, 2.0}) {
                const auto engine = lln::semigroup_map(gen, t, gkls::Picture::Schrodinger);
                const auto closed_form = oracle::dephasing_map_analytic(gamma, t);
                REQUIRE((engine.matrix - closed_form.matrix).norm() < 1e-12);
            }
        }
    }
}

TEST_CASE("dephasing_variance_analytic", "[oracles]") {
    SECTION("single rate has zero variance") {
        const oracle::DephasingModel model({2.0}, {1.0});
        REQUIRE(std::abs(oracle::dephasing_variance_analytic(model, 8, 1.0)) < 1e-18);
    }
    SECTION("n times variance approaches a finite limit") {
        const oracle::DephasingModel model({1.0, 3.0}, {0.5, 0.5});
        const double t = 1.0;
        // Rate spread var(gamma) = 1 gives the limit 4 t^2 e^{-4 t mean(gamma)}.
        const double limit = 4.0 * t * t * std::exp(-8.0 * t);
        const double at_1e4 = 1e4 * oracle::dephasing_variance_analytic(model, 10000, t);
        REQUIRE(std::abs(at_1e4 - limit) < 5e-3 * limit);
        const double at_4e4 = 4e4 * oracle::dephasing_variance_analytic(model, 40000, t);
        REQUIRE(std::abs(at_4e4 - limit) < std::abs(at_1e4 - limit));
    }
    SECTION("agrees with direct path enumeration at n = 4") {
        const oracle::DephasingModel model({1.0, 3.0}, {0.5, 0.5});
        const int n = 4;
        const double t = 1.0;
        double mean = 0.0;
        double second = 0.0;
        for (int path = 0; path < (1 << n); ++path) {
            double weight = 1.0;
            double rate_sum = 0.0;
            for (int step = 0; step < n; ++step) {
                const int pick = (path >> step) & 1;
                weight *= model.weights[static_cast<std::size_t>(pick)];
                rate_sum += model.rates[static_cast<std::size_t>(pick)];
            }
            const double factor = std::exp(-2.0 * (t / n) * rate_sum);
            mean += weight * factor;
            second += weight * factor * factor;
        }
        const double enumerated = second - mean * mean;
        REQUIRE(oracle::dephasing_variance_analytic(model, n, t) ==
                Catch::Approx(enumerated).epsilon(1e-12));
    }
    SECTION("weights must sum to one") {
        REQUIRE_THROWS_AS(oracle::DephasingModel({1.0, 2.0}, {0.5, 0.6}), ValidationError);
    }
}

TEST_CASE("taylor_exp", "[oracles]") {
    SECTION("zero matrix") {
        REQUIRE((oracle::taylor_exp(ComplexMatrix::Zero(3, 3), 25) -
                 ComplexMatrix::Identity(3, 3))
                    .norm() == 0.0);
    }
    SECTION("diagonal") {
        ComplexMatrix a = ComplexMatrix::Zero(2, 2);
        a(0, 0) = 1.0;
        a(1, 1) = -1.0;
        const ComplexMatrix e = oracle::taylor_exp(a, 30);
        REQUIRE(std::abs(e(0, 0) - std::exp(1.0)) < 1e-13);
        REQUIRE(std::abs(e(1, 1) - std::exp(-1.0)) < 1e-13);
    }
    SECTION("agrees with mat_exp on random norm-bounded matrices") {
        rng::Stream stream(23, rng::Domain::Sample, 0, 0);
        for (int rep = 0; rep < 20; ++rep) {
            ComplexMatrix a = test::random_complex_matrix(stream, 4, 4);
            a *= 2.0 / std::max(1.0, linalg::spectral_norm(a));
            REQUIRE(linalg::relative_frobenius_error(linalg::mat_exp(a),
                                                     oracle::taylor_exp(a, 40)) < 1e-12);
        }
    }
    SECTION("rejects large norms and short series") {
        REQUIRE_THROWS_AS(oracle::taylor_exp(10.0 * ComplexMatrix::Identity(2, 2), 40),
                          ValidationError);
        REQUIRE_THROWS_AS(oracle::taylor_exp(ComplexMatrix::Identity(2, 2), 10),
                          ValidationError);
    }
}

TEST_CASE("unitary_conjugation_reference", "[oracles]") {
    rng::Stream stream(29, rng::Domain::Sample, 0, 0);
    SECTION("t = 0 returns the state") {
        const HermitianMatrix h(test::random_hermitian(stream, 3));
        const ComplexMatrix rho = test::random_density(stream, 3);
        REQUIRE((oracle::unitary_conjugation_reference(h, 0.0, rho) - rho).norm() < 1e-14);
    }
    SECTION("sigma_z phases the coherence") {
        const HermitianMatrix h(linalg::pauli_z());
        const ComplexMatrix rho = test::random_density(stream, 2);
        const double t = 0.7;
        const ComplexMatrix out = oracle::unitary_conjugation_reference(h, t, rho);
        // rho_10 picks up e^{+2it} under e^{-iHt} rho e^{iHt} with H = sigma_z.
        REQUIRE(std::abs(out(1, 0) - rho(1, 0) * std::exp(Complex(0.0, 2.0 * t))) < 1e-13);
        REQUIRE(std::abs(out(0, 0) - rho(0, 0)) < 1e-14);
    }
    SECTION("purity is preserved") {
        const HermitianMatrix h(test::random_hermitian(stream, 4));
        const ComplexMatrix rho = test::random_density(stream, 4);
        const ComplexMatrix out = oracle::unitary_conjugation_reference(h, 1.3, rho);
        const double purity_in = (rho * rho).trace().real();
        const double purity_out = (out * out).trace().real();
        REQUIRE(std::abs(purity_in - purity_out) < 1e-12);
    }
    SECTION("agrees with the jump-free semigroup map") {
        const HermitianMatrix h(test::random_hermitian(stream, 2));
        const auto gen = gkls::make_lindblad({}, h);
        const double t = 0.9;
        const auto map = lln::semigroup_map(gen, t, gkls::Picture::Schrodinger);
        for (int rep = 0; rep < 10; ++rep) {
            const ComplexMatrix rho = test::random_density(stream, 2);
            const ComplexMatrix via_map = linalg::unvec(map.apply(linalg::vec(rho)));
            const ComplexMatrix via_phases = oracle::unitary_conjugation_reference(h, t, rho);
            REQUIRE((via_map - via_phases).norm() < 1e-11);
        }
    }
}
