// linalg.hpp — Dense complex matrix primitives: exponentials, Kronecker
// products, column-stacking vectorization, Hermitian eigensolves and
// spectral norms. Everything downstream builds on these.

#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qds/errors.hpp"

namespace qds::linalg {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Throws DimensionError / ValidationError when the matrix is empty or
// carries NaN/Inf entries.
void validate_finite(const ComplexMatrix& a, const char* what = "matrix");

double frobenius_norm(const ComplexMatrix& a);

// Scale-free comparison helper: ||a - b||_F / max(1, ||b||_F).
double relative_frobenius_error(const ComplexMatrix& a, const ComplexMatrix& b);

// A square matrix validated to satisfy ||M - M^dag||_F <= 1e-12 * max(1, ||M||_F)
// at construction; stored in exactly Hermitian (symmetrized) form.
class HermitianMatrix {
  public:
    explicit HermitianMatrix(const ComplexMatrix& m);

    const ComplexMatrix& matrix() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }

  private:
    ComplexMatrix m_;
};

struct EigResult {
    RealVector eigenvalues;    // ascending
    ComplexMatrix eigenvectors; // unitary, columns match eigenvalues
};

// Matrix exponential. Accuracy contract: relative error <= 1e-12 against
// the truncated-series reference on norm-bounded inputs.
ComplexMatrix mat_exp(const ComplexMatrix& a);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Column-stacking vectorization; satisfies vec(A X B) = kron(B^T, A) vec(X).
ComplexVector vec(const ComplexMatrix& x);
ComplexMatrix unvec(const ComplexVector& v);

EigResult herm_eig(const HermitianMatrix& h);

// Largest singular value, computed as sqrt of the top eigenvalue of A^dag A.
double spectral_norm(const ComplexMatrix& a);

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

} // namespace qds::linalg
