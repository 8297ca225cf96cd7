// oracles.cpp — Reference computations kept independent of the engine

#include "qds/oracles.hpp"

#include <cmath>
#include <numeric>

namespace qds::oracle {

using linalg::Complex;

DephasingModel::DephasingModel(std::vector<double> rates_in, std::vector<double> weights_in)
    : rates(std::move(rates_in)), weights(std::move(weights_in)) {
    if (rates.empty() || rates.size() != weights.size()) {
        throw ValidationError("dephasing model needs matching rates and weights");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < rates.size(); ++i) {
        if (rates[i] < 0.0 || weights[i] <= 0.0) {
            throw ValidationError("dephasing model requires nonnegative rates, positive weights");
        }
        total += weights[i];
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw ValidationError("dephasing model weights must sum to 1");
    }
}

gkls::Superoperator dephasing_map_analytic(double gamma, double t) {
    if (gamma < 0.0 || t < 0.0) {
        throw ValidationError("dephasing_map_analytic requires gamma >= 0 and t >= 0");
    }
    const double factor = std::exp(-2.0 * gamma * t);
    ComplexMatrix m = ComplexMatrix::Zero(4, 4);
    m(0, 0) = 1.0;
    m(1, 1) = factor;
    m(2, 2) = factor;
    m(3, 3) = 1.0;
    return {m, 2, gkls::Picture::Schrodinger};
}

double dephasing_variance_analytic(const DephasingModel& model, int n, double t) {
    if (n < 1 || t < 0.0) {
        throw ValidationError("dephasing_variance_analytic requires n >= 1 and t >= 0");
    }
    const double tau = t / n;
    double second = 0.0; // E[e^{-4 tau gamma}]
    double first = 0.0;  // E[e^{-2 tau gamma}]
    for (std::size_t i = 0; i < model.rates.size(); ++i) {
        second += model.weights[i] * std::exp(-4.0 * tau * model.rates[i]);
        first += model.weights[i] * std::exp(-2.0 * tau * model.rates[i]);
    }
    // A^n - B^{2n} as B^{2n} expm1(n log A - 2n log B) to dodge cancellation.
    const double log_a = std::log(second);
    const double log_b = std::log(first);
    return std::exp(2.0 * n * log_b) * std::expm1(n * (log_a - 2.0 * log_b));
}

ComplexMatrix taylor_exp(const ComplexMatrix& a, int terms) {
    linalg::validate_finite(a, "taylor_exp input");
    if (a.rows() != a.cols()) {
        throw DimensionError("taylor_exp requires a square matrix");
    }
    if (terms < 20) {
        throw ValidationError("taylor_exp needs at least 20 terms");
    }
    if (linalg::spectral_norm(a) > 5.0) {
        throw ValidationError("taylor_exp input norm exceeds 5; series quality not guaranteed");
    }
    const Eigen::Index n = a.rows();
    // Kahan-compensated accumulation of sum_k A^k / k!.
    ComplexMatrix sum = ComplexMatrix::Identity(n, n);
    ComplexMatrix compensation = ComplexMatrix::Zero(n, n);
    ComplexMatrix term = ComplexMatrix::Identity(n, n);
    for (int k = 1; k <= terms; ++k) {
        term = (term * a) / static_cast<double>(k);
        const ComplexMatrix y = term - compensation;
        const ComplexMatrix t = sum + y;
        compensation = (t - sum) - y;
        sum = t;
    }
    return sum;
}

ComplexMatrix unitary_conjugation_reference(const HermitianMatrix& h, double t,
                                            const ComplexMatrix& rho) {
    if (rho.rows() != h.dim() || rho.cols() != h.dim()) {
        throw DimensionError("state dimension does not match Hamiltonian");
    }
    const auto eig = linalg::herm_eig(h);
    const Eigen::Index n = h.dim();
    Eigen::VectorXcd phases(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        phases(i) = std::exp(Complex(0.0, -eig.eigenvalues(i) * t));
    }
    const ComplexMatrix u_t = eig.eigenvectors * phases.asDiagonal() * eig.eigenvectors.adjoint();
    return u_t * rho * u_t.adjoint();
}

} // namespace qds::oracle
