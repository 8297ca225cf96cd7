// test_helpers.hpp — Seeded random matrix builders shared by the suites

#pragma once

#include <Eigen/Dense>

#include "qds/rng.hpp"

namespace qds::test {

inline Eigen::MatrixXcd random_complex_matrix(rng::Stream& stream, Eigen::Index rows,
                                              Eigen::Index cols) {
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            m(r, c) = stream.next_complex_gaussian();
        }
    }
    return m;
}

inline Eigen::MatrixXcd random_hermitian(rng::Stream& stream, Eigen::Index n) {
    const Eigen::MatrixXcd a = random_complex_matrix(stream, n, n);
    return 0.5 * (a + a.adjoint().eval());
}

inline Eigen::MatrixXcd random_psd(rng::Stream& stream, Eigen::Index n) {
    const Eigen::MatrixXcd g = random_complex_matrix(stream, n, n);
    return (g * g.adjoint()) / static_cast<double>(n);
}

inline Eigen::MatrixXcd random_unitary(rng::Stream& stream, Eigen::Index n) {
    const Eigen::MatrixXcd a = random_complex_matrix(stream, n, n);
    return Eigen::HouseholderQR<Eigen::MatrixXcd>(a).householderQ();
}

inline Eigen::MatrixXcd random_density(rng::Stream& stream, Eigen::Index n) {
    const Eigen::MatrixXcd p = random_psd(stream, n);
    return p / p.trace().real();
}

} // namespace qds::test
