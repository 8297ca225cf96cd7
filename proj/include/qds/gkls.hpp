// gkls.hpp — GKLS (Lindblad) generators in jump-operator and Kossakowski
// form, their superoperator matrices in both pictures, and structural
// checks (conservation constraint, complete positivity via the Choi matrix).

#pragma once

#include <optional>
#include <vector>

#include "qds/linalg.hpp"

namespace qds::gkls {

using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::ComplexVector;
using linalg::HermitianMatrix;

enum class Picture { Heisenberg, Schrodinger };

const char* picture_name(Picture p);

// An element of B(B(h)) as an N^2 x N^2 matrix acting on column-stacked
// N x N matrices.
struct Superoperator {
    ComplexMatrix matrix;
    Eigen::Index dim = 0; // N
    Picture picture = Picture::Heisenberg;

    ComplexVector apply(const ComplexVector& v) const { return matrix * v; }
};

Superoperator identity_superoperator(Eigen::Index dim, Picture picture);

// Hilbert-Schmidt adjoint; flips the picture tag.
Superoperator adjoint(const Superoperator& s);

// Generator in jump-operator form: action on observables is
//   L(x) = sum_k L_k^dag x L_k + x K + K^dag x,
// with the conservation constraint sum_k L_k^dag L_k + K + K^dag = 0.
class LindbladForm {
  public:
    // K derived as -iH - (1/2) sum_k L_k^dag L_k; conservation holds by
    // construction.
    LindbladForm(std::vector<ComplexMatrix> jump_ops, HermitianMatrix hamiltonian);

    // Explicit K; conservation residual must stay below 1e-10.
    LindbladForm(std::vector<ComplexMatrix> jump_ops, HermitianMatrix hamiltonian,
                 ComplexMatrix k_op);

    Eigen::Index dim() const { return hamiltonian_.dim(); }
    const std::vector<ComplexMatrix>& jump_ops() const { return jump_ops_; }
    const HermitianMatrix& hamiltonian() const { return hamiltonian_; }
    const ComplexMatrix& k_op() const { return k_op_; }

  private:
    std::vector<ComplexMatrix> jump_ops_;
    HermitianMatrix hamiltonian_;
    ComplexMatrix k_op_;
};

// Generator determined by a PSD Kossakowski matrix k over a
// Hilbert-Schmidt orthonormal basis {a_1..a_{N^2}}, a_{N^2} = I/sqrt(N):
//   L(x) = (1/2) sum_{nm} k_nm ([a_n^dag, x] a_m + a_n^dag [x, a_m]) - i[x, H].
class KossakowskiForm {
  public:
    KossakowskiForm(HermitianMatrix kossakowski, HermitianMatrix hamiltonian,
                    std::vector<ComplexMatrix> basis);

    Eigen::Index dim() const { return hamiltonian_.dim(); }
    const HermitianMatrix& kossakowski() const { return kossakowski_; }
    const HermitianMatrix& hamiltonian() const { return hamiltonian_; }
    const std::vector<ComplexMatrix>& basis() const { return basis_; }

  private:
    HermitianMatrix kossakowski_;
    HermitianMatrix hamiltonian_;
    std::vector<ComplexMatrix> basis_;
};

// A generator with cached superoperators in both pictures. Directly
// constructed generators always carry a Lindblad form; generators that
// arise as superoperator averages of Lindblad-only mixtures carry only
// the cached matrices.
class GklsGenerator {
  public:
    explicit GklsGenerator(LindbladForm lindblad);
    GklsGenerator(LindbladForm lindblad, KossakowskiForm kossakowski);

    static GklsGenerator from_superoperator(Superoperator heisenberg);

    Eigen::Index dim() const { return dim_; }
    bool has_lindblad() const { return lindblad_.has_value(); }
    const LindbladForm& lindblad() const;
    const std::optional<KossakowskiForm>& kossakowski() const { return kossakowski_; }
    const Superoperator& superop(Picture picture) const;

  private:
    GklsGenerator() = default;

    std::optional<LindbladForm> lindblad_;
    std::optional<KossakowskiForm> kossakowski_;
    Superoperator heisenberg_;
    Superoperator schrodinger_;
    Eigen::Index dim_ = 0;
};

struct CptpReport {
    bool cp_ok = false;
    // Trace preservation for Schrodinger maps, unitality for Heisenberg maps.
    bool tp_ok = false;
    double min_choi_eig = 0.0;
    double constraint_residual = 0.0;
};

GklsGenerator make_lindblad(std::vector<ComplexMatrix> jump_ops, HermitianMatrix hamiltonian);

GklsGenerator make_kossakowski(HermitianMatrix kossakowski, HermitianMatrix hamiltonian,
                               std::vector<ComplexMatrix> basis);

// Diagonalize k = U diag(gamma) U^dag, drop rates below 1e-12 and emit
// jump operators L_j = sqrt(gamma_j) sum_n conj(U_nj) a_n. The conjugation
// convention is pinned by the superoperator-equality tests, not trusted
// from the formula.
LindbladForm kossakowski_to_lindblad(const KossakowskiForm& kf);

const Superoperator& superoperator(const GklsGenerator& gen, Picture picture);

// Low-level builders. The first one does not enforce the conservation
// constraint, which the validation tests rely on to fabricate broken maps.
ComplexMatrix lindblad_superoperator_matrix(const std::vector<ComplexMatrix>& jump_ops,
                                            const ComplexMatrix& k_op, Eigen::Index dim,
                                            Picture picture);
ComplexMatrix kossakowski_superoperator_matrix(const KossakowskiForm& kf, Picture picture);

// Choi matrix C = sum_ij E_ij (x) S(E_ij) of a Schrodinger-picture map.
HermitianMatrix choi_matrix(const Superoperator& s);

CptpReport check_cptp(const Superoperator& s, double tol);

// Generalized Gell-Mann matrices, HS-normalized, identity-last (I/sqrt(N)).
std::vector<ComplexMatrix> gell_mann_basis(Eigen::Index n);

} // namespace qds::gkls
