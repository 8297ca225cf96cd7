// linalg.cpp — Implementation of the dense complex matrix primitives

#include "qds/linalg.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace qds::linalg {

void validate_finite(const ComplexMatrix& a, const char* what) {
    if (a.size() == 0) {
        throw DimensionError(std::string(what) + " is empty");
    }
    if (!a.allFinite()) {
        throw ValidationError(std::string(what) + " has non-finite entries");
    }
}

double frobenius_norm(const ComplexMatrix& a) { return a.norm(); }

double relative_frobenius_error(const ComplexMatrix& a, const ComplexMatrix& b) {
    return (a - b).norm() / std::max(1.0, b.norm());
}

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m) {
    validate_finite(m, "hermitian matrix");
    if (m.rows() != m.cols()) {
        throw DimensionError("hermitian matrix must be square");
    }
    const double defect = (m - m.adjoint()).norm();
    if (defect > 1e-12 * std::max(1.0, m.norm())) {
        throw ValidationError("matrix is not Hermitian within tolerance");
    }
    m_ = 0.5 * (m + m.adjoint().eval());
}

ComplexMatrix mat_exp(const ComplexMatrix& a) {
    validate_finite(a, "mat_exp input");
    if (a.rows() != a.cols()) {
        throw DimensionError("mat_exp requires a square matrix");
    }
    return a.exp();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

ComplexVector vec(const ComplexMatrix& x) {
    if (x.rows() != x.cols()) {
        throw DimensionError("vec requires a square matrix");
    }
    // Eigen is column-major, so a straight reshape is column stacking.
    return ComplexVector(x.reshaped());
}

ComplexMatrix unvec(const ComplexVector& v) {
    const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
    if (n * n != v.size()) {
        throw DimensionError("unvec requires a perfect-square length");
    }
    return Eigen::Map<const ComplexMatrix>(v.data(), n, n);
}

EigResult herm_eig(const HermitianMatrix& h) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix());
    if (solver.info() != Eigen::Success) {
        throw Error("herm_eig failed to converge");
    }
    return EigResult{solver.eigenvalues(), solver.eigenvectors()};
}

double spectral_norm(const ComplexMatrix& a) {
    validate_finite(a, "spectral_norm input");
    const ComplexMatrix gram = a.adjoint() * a;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(gram);
    const double top = solver.eigenvalues().maxCoeff();
    return std::sqrt(std::max(0.0, top));
}

ComplexMatrix pauli_x() {
    ComplexMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

ComplexMatrix pauli_y() {
    ComplexMatrix m(2, 2);
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
}

ComplexMatrix pauli_z() {
    ComplexMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

} // namespace qds::linalg
