// oracles.hpp — Closed-form and brute-force reference computations.
// These deliberately share no exponentiation code with the main library:
// taylor_exp is a plain truncated series and the dephasing maps are
// assembled from scalar exponentials.

#pragma once

#include <vector>

#include "qds/gkls.hpp"
#include "qds/linalg.hpp"

namespace qds::oracle {

using linalg::ComplexMatrix;
using linalg::HermitianMatrix;

// Commuting qubit benchmark: a mixture of dephasing channels with the
// given rates and weights.
struct DephasingModel {
    std::vector<double> rates;   // gamma_i > 0
    std::vector<double> weights; // sum to 1 within 1e-12

    DephasingModel(std::vector<double> rates, std::vector<double> weights);
};

// Schrodinger-picture dephasing map diag(1, e^{-2 gamma t}, e^{-2 gamma t}, 1)
// in the vec basis.
gkls::Superoperator dephasing_map_analytic(double gamma, double t);

// Var[prod_i e^{-2(t/n) gamma_i}] for n i.i.d. rates from the model:
//   (sum_i w_i e^{-4 t gamma_i / n})^n - (sum_i w_i e^{-2 t gamma_i / n})^{2n}.
double dephasing_variance_analytic(const DephasingModel& model, int n, double t);

// Truncated series sum_{k<=terms} A^k / k! with compensated summation.
// Requires spectral_norm(A) <= 5 and terms >= 20.
ComplexMatrix taylor_exp(const ComplexMatrix& a, int terms);

// e^{-iHt} rho e^{iHt} via eigenphases of H.
ComplexMatrix unitary_conjugation_reference(const HermitianMatrix& h, double t,
                                            const ComplexMatrix& rho);

} // namespace qds::oracle
