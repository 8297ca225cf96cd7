// gkls.cpp — Generator forms, superoperator assembly and CPTP diagnostics

#include "qds/gkls.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace qds::gkls {

using linalg::herm_eig;
using linalg::kron;
using linalg::unvec;
using linalg::vec;

namespace {

constexpr double kConservationTol = 1e-10;
constexpr double kBasisTol = 1e-12;
constexpr double kPsdFloor = -1e-10;
constexpr double kRateDropTol = 1e-12;
constexpr double kFormAgreementTol = 1e-9;

void validate_jump_dims(const std::vector<ComplexMatrix>& jump_ops, Eigen::Index dim) {
    for (const auto& l : jump_ops) {
        linalg::validate_finite(l, "jump operator");
        if (l.rows() != dim || l.cols() != dim) {
            throw DimensionError("jump operator dimension does not match Hamiltonian");
        }
    }
}

ComplexMatrix derive_k_op(const std::vector<ComplexMatrix>& jump_ops,
                          const HermitianMatrix& hamiltonian) {
    ComplexMatrix k = Complex(0.0, -1.0) * hamiltonian.matrix();
    for (const auto& l : jump_ops) {
        k -= 0.5 * (l.adjoint() * l);
    }
    return k;
}

double conservation_residual(const std::vector<ComplexMatrix>& jump_ops,
                             const ComplexMatrix& k_op) {
    ComplexMatrix sum = k_op + k_op.adjoint();
    for (const auto& l : jump_ops) {
        sum += l.adjoint() * l;
    }
    return sum.norm();
}

void validate_basis(const std::vector<ComplexMatrix>& basis, Eigen::Index dim) {
    const auto n2 = static_cast<std::size_t>(dim * dim);
    if (basis.size() != n2) {
        throw ValidationError("basis must contain dim^2 elements");
    }
    for (const auto& a : basis) {
        linalg::validate_finite(a, "basis element");
        if (a.rows() != dim || a.cols() != dim) {
            throw ValidationError("basis element has wrong dimension");
        }
    }
    const ComplexMatrix expected_last =
        ComplexMatrix::Identity(dim, dim) / std::sqrt(static_cast<double>(dim));
    if ((basis.back() - expected_last).norm() > kBasisTol) {
        throw ValidationError("last basis element must be I/sqrt(N)");
    }
    for (std::size_t i = 0; i + 1 < n2; ++i) {
        if (std::abs(basis[i].trace()) > kBasisTol) {
            throw ValidationError("basis elements a_1..a_{N^2-1} must be traceless");
        }
    }
    for (std::size_t i = 0; i < n2; ++i) {
        for (std::size_t j = 0; j < n2; ++j) {
            const Complex overlap = (basis[i].adjoint() * basis[j]).trace();
            const double expected = (i == j) ? 1.0 : 0.0;
            if (std::abs(overlap - expected) > kBasisTol) {
                throw ValidationError("basis is not Hilbert-Schmidt orthonormal");
            }
        }
    }
}

ComplexMatrix raw_choi(const Superoperator& s) {
    const Eigen::Index n = s.dim;
    ComplexMatrix choi = ComplexMatrix::Zero(n * n, n * n);
    ComplexMatrix unit = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            unit(i, j) = 1.0;
            choi.block(i * n, j * n, n, n) = unvec(s.apply(vec(unit)));
            unit(i, j) = 0.0;
        }
    }
    return choi;
}

} // namespace

const char* picture_name(Picture p) {
    return p == Picture::Heisenberg ? "Heisenberg" : "Schrodinger";
}

Superoperator identity_superoperator(Eigen::Index dim, Picture picture) {
    return {ComplexMatrix::Identity(dim * dim, dim * dim), dim, picture};
}

Superoperator adjoint(const Superoperator& s) {
    const Picture flipped =
        s.picture == Picture::Heisenberg ? Picture::Schrodinger : Picture::Heisenberg;
    return {s.matrix.adjoint(), s.dim, flipped};
}

LindbladForm::LindbladForm(std::vector<ComplexMatrix> jump_ops, HermitianMatrix hamiltonian)
    : jump_ops_(std::move(jump_ops)), hamiltonian_(std::move(hamiltonian)) {
    validate_jump_dims(jump_ops_, dim());
    k_op_ = derive_k_op(jump_ops_, hamiltonian_);
}

LindbladForm::LindbladForm(std::vector<ComplexMatrix> jump_ops, HermitianMatrix hamiltonian,
                           ComplexMatrix k_op)
    : jump_ops_(std::move(jump_ops)),
      hamiltonian_(std::move(hamiltonian)),
      k_op_(std::move(k_op)) {
    validate_jump_dims(jump_ops_, dim());
    if (k_op_.rows() != dim() || k_op_.cols() != dim()) {
        throw DimensionError("K operator dimension does not match Hamiltonian");
    }
    if (conservation_residual(jump_ops_, k_op_) > kConservationTol) {
        throw ValidationError("conservation constraint violated: sum L^dag L + K + K^dag != 0");
    }
}

KossakowskiForm::KossakowskiForm(HermitianMatrix kossakowski, HermitianMatrix hamiltonian,
                                 std::vector<ComplexMatrix> basis)
    : kossakowski_(std::move(kossakowski)),
      hamiltonian_(std::move(hamiltonian)),
      basis_(std::move(basis)) {
    const Eigen::Index n = hamiltonian_.dim();
    if (kossakowski_.dim() != n * n - 1) {
        throw DimensionError("Kossakowski matrix must be (N^2-1) x (N^2-1)");
    }
    validate_basis(basis_, n);
    const auto eig = herm_eig(kossakowski_);
    if (eig.eigenvalues.minCoeff() < kPsdFloor) {
        throw ValidationError("Kossakowski matrix is not positive semidefinite");
    }
}

GklsGenerator::GklsGenerator(LindbladForm lindblad) : lindblad_(std::move(lindblad)) {
    dim_ = lindblad_->dim();
    heisenberg_ = {lindblad_superoperator_matrix(lindblad_->jump_ops(), lindblad_->k_op(),
                                                 dim_, Picture::Heisenberg),
                   dim_, Picture::Heisenberg};
    schrodinger_ = adjoint(heisenberg_);
    schrodinger_.picture = Picture::Schrodinger;
}

GklsGenerator::GklsGenerator(LindbladForm lindblad, KossakowskiForm kossakowski)
    : GklsGenerator(std::move(lindblad)) {
    kossakowski_ = std::move(kossakowski);
    const ComplexMatrix direct = kossakowski_superoperator_matrix(*kossakowski_, Picture::Heisenberg);
    if ((direct - heisenberg_.matrix).norm() > kFormAgreementTol) {
        throw ValidationError("Kossakowski and Lindblad superoperators disagree");
    }
}

GklsGenerator GklsGenerator::from_superoperator(Superoperator heisenberg) {
    if (heisenberg.picture != Picture::Heisenberg) {
        heisenberg = adjoint(heisenberg);
    }
    GklsGenerator gen;
    gen.dim_ = heisenberg.dim;
    gen.heisenberg_ = std::move(heisenberg);
    gen.schrodinger_ = adjoint(gen.heisenberg_);
    return gen;
}

const LindbladForm& GklsGenerator::lindblad() const {
    if (!lindblad_) {
        throw ValidationError("generator carries only a superoperator representation");
    }
    return *lindblad_;
}

const Superoperator& GklsGenerator::superop(Picture picture) const {
    return picture == Picture::Heisenberg ? heisenberg_ : schrodinger_;
}

GklsGenerator make_lindblad(std::vector<ComplexMatrix> jump_ops, HermitianMatrix hamiltonian) {
    return GklsGenerator(LindbladForm(std::move(jump_ops), std::move(hamiltonian)));
}

GklsGenerator make_kossakowski(HermitianMatrix kossakowski, HermitianMatrix hamiltonian,
                               std::vector<ComplexMatrix> basis) {
    KossakowskiForm kf(std::move(kossakowski), std::move(hamiltonian), std::move(basis));
    LindbladForm lf = kossakowski_to_lindblad(kf);
    return GklsGenerator(std::move(lf), std::move(kf));
}

LindbladForm kossakowski_to_lindblad(const KossakowskiForm& kf) {
    const Eigen::Index n = kf.dim();
    const auto eig = herm_eig(kf.kossakowski());
    std::vector<ComplexMatrix> jumps;
    // Descending rates so the dominant channel comes first.
    for (Eigen::Index j = eig.eigenvalues.size() - 1; j >= 0; --j) {
        const double rate = eig.eigenvalues(j);
        if (rate <= kRateDropTol) {
            continue; // tiny negatives from averaging noise clamp to zero here
        }
        ComplexMatrix l = ComplexMatrix::Zero(n, n);
        for (Eigen::Index m = 0; m < n * n - 1; ++m) {
            l += std::conj(eig.eigenvectors(m, j)) * kf.basis()[static_cast<std::size_t>(m)];
        }
        jumps.push_back(std::sqrt(rate) * l);
    }
    return LindbladForm(std::move(jumps), kf.hamiltonian());
}

const Superoperator& superoperator(const GklsGenerator& gen, Picture picture) {
    return gen.superop(picture);
}

ComplexMatrix lindblad_superoperator_matrix(const std::vector<ComplexMatrix>& jump_ops,
                                            const ComplexMatrix& k_op, Eigen::Index dim,
                                            Picture picture) {
    const ComplexMatrix id = ComplexMatrix::Identity(dim, dim);
    // Heisenberg action M vec(x) = vec(sum_k L_k^dag x L_k + x K + K^dag x)
    // through vec(A X B) = kron(B^T, A) vec(X).
    ComplexMatrix m = kron(k_op.transpose(), id) + kron(id, k_op.adjoint());
    for (const auto& l : jump_ops) {
        m += kron(l.transpose(), l.adjoint());
    }
    if (picture == Picture::Schrodinger) {
        return m.adjoint();
    }
    return m;
}

ComplexMatrix kossakowski_superoperator_matrix(const KossakowskiForm& kf, Picture picture) {
    const Eigen::Index n = kf.dim();
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    const auto& basis = kf.basis();
    const auto& k = kf.kossakowski().matrix();
    ComplexMatrix m = ComplexMatrix::Zero(n * n, n * n);
    for (Eigen::Index a = 0; a < n * n - 1; ++a) {
        for (Eigen::Index b = 0; b < n * n - 1; ++b) {
            const Complex knm = k(a, b);
            if (knm == Complex(0.0, 0.0)) {
                continue;
            }
            const ComplexMatrix& an = basis[static_cast<std::size_t>(a)];
            const ComplexMatrix& am = basis[static_cast<std::size_t>(b)];
            const ComplexMatrix an_dag_am = an.adjoint() * am;
            // (1/2) k_nm ([a_n^dag, x] a_m + a_n^dag [x, a_m])
            //   = k_nm (a_n^dag x a_m - (1/2){a_n^dag a_m, x})
            m += knm * (kron(am.transpose(), an.adjoint()) -
                        0.5 * (kron(an_dag_am.transpose(), id) + kron(id, an_dag_am)));
        }
    }
    const ComplexMatrix h = kf.hamiltonian().matrix();
    m += Complex(0.0, -1.0) * (kron(h.transpose(), id) - kron(id, h));
    if (picture == Picture::Schrodinger) {
        return m.adjoint();
    }
    return m;
}

HermitianMatrix choi_matrix(const Superoperator& s) {
    if (s.picture != Picture::Schrodinger) {
        throw ValidationError("choi_matrix requires a Schrodinger-picture map; convert first");
    }
    const ComplexMatrix choi = raw_choi(s);
    if ((choi - choi.adjoint()).norm() > 1e-10 * std::max(1.0, choi.norm())) {
        throw ValidationError("Choi matrix is not Hermitian within tolerance");
    }
    return HermitianMatrix(0.5 * (choi + choi.adjoint().eval()));
}

CptpReport check_cptp(const Superoperator& s, double tol) {
    CptpReport report;
    const Superoperator schro = s.picture == Picture::Schrodinger ? s : adjoint(s);
    const ComplexMatrix choi = raw_choi(schro);
    const HermitianMatrix sym(0.5 * (choi + choi.adjoint().eval()));
    report.min_choi_eig = herm_eig(sym).eigenvalues.minCoeff();
    report.cp_ok = report.min_choi_eig >= -tol;

    const ComplexVector vec_id = vec(ComplexMatrix::Identity(s.dim, s.dim));
    // Trace preservation of a Schrodinger map is unitality of its adjoint,
    // so both pictures reduce to fixing vec(I) under the Heisenberg matrix.
    const ComplexMatrix heis =
        s.picture == Picture::Heisenberg ? s.matrix : s.matrix.adjoint();
    report.constraint_residual = (heis * vec_id - vec_id).norm();
    report.tp_ok = report.constraint_residual <= tol;
    return report;
}

std::vector<ComplexMatrix> gell_mann_basis(Eigen::Index n) {
    if (n < 2) {
        throw DimensionError("gell_mann_basis requires N >= 2");
    }
    std::vector<ComplexMatrix> basis;
    basis.reserve(static_cast<std::size_t>(n * n));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = j + 1; k < n; ++k) {
            ComplexMatrix sym = ComplexMatrix::Zero(n, n);
            sym(j, k) = inv_sqrt2;
            sym(k, j) = inv_sqrt2;
            basis.push_back(sym);
        }
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = j + 1; k < n; ++k) {
            ComplexMatrix asym = ComplexMatrix::Zero(n, n);
            asym(j, k) = Complex(0.0, -inv_sqrt2);
            asym(k, j) = Complex(0.0, inv_sqrt2);
            basis.push_back(asym);
        }
    }
    for (Eigen::Index l = 1; l < n; ++l) {
        ComplexMatrix diag = ComplexMatrix::Zero(n, n);
        const double norm = std::sqrt(static_cast<double>(l) * (l + 1.0));
        for (Eigen::Index j = 0; j < l; ++j) {
            diag(j, j) = 1.0 / norm;
        }
        diag(l, l) = -static_cast<double>(l) / norm;
        basis.push_back(diag);
    }
    basis.push_back(ComplexMatrix::Identity(n, n) / std::sqrt(static_cast<double>(n)));
    return basis;
}

} // namespace qds::gkls
