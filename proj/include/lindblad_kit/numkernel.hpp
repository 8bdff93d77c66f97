#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "lindblad_kit/errors.hpp"
#include "lindblad_kit/tolerances.hpp"

namespace lk {

using Complex = std::complex<double>;

// Dense complex matrix, row-major so that the flat storage order coincides
// with the (alpha1,alpha2) -> (alpha1-1)*n + alpha2 vector mapping used for
// superoperators throughout.
using CMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;

// Hermitian, unit-trace state of the electronic subsystem. Positivity is
// deliberately not an invariant: the conventional-Markov evolution can break
// it, and we measure that as a diagnostic instead.
struct DensityMatrix {
    CMatrix mat;

    Eigen::Index dim() const { return mat.rows(); }

    // Validating constructor: Hermiticity and unit trace within tolerance.
    static DensityMatrix checked(CMatrix m);

    // For states produced by propagation, where drift is tracked separately.
    static DensityMatrix unchecked(CMatrix m) { return DensityMatrix{std::move(m)}; }

    double herm_defect() const;
    Complex trace() const { return mat.trace(); }
};

// rho_{a1 a2} stored at component (a1-1)*n + a2 in 1-based index convention,
// i.e. zero-based offset r*n + c for entry (r,c). The round trip through
// devectorize() is bit-exact.
struct VectorizedState {
    Eigen::Index dim = 0;
    CVector components;
};

struct Spectrum {
    std::vector<Complex> eigenvalues;  // descending Re, ties by descending Im
    std::optional<CMatrix> eigenvectors;  // columns, ordered like eigenvalues
    double residual = 0.0;                // max_i ||A v_i - lambda_i v_i||_2
};

struct ExpmResult {
    CMatrix value;
    bool overflow = false;  // entries left the representable range
};

VectorizedState vectorize(const DensityMatrix& rho);
DensityMatrix devectorize(const VectorizedState& v);

// Unsymmetric complex eigendecomposition (Hessenberg + complex QR via Eigen),
// dimensions up to 64. Eigenpairs are ordered deterministically so golden
// files stay stable.
Spectrum eig_general(const CMatrix& a, bool want_vectors = true);

// Smallest eigenvalue of a Hermitian matrix; rejects non-Hermitian input.
double eig_hermitian_min(const CMatrix& a);

// exp(t*A) by scaling-and-squaring on the order-13 Pade approximant.
// Entries leaving the representable range set the overflow flag on the
// result instead of aborting (the CM divergent regime relies on this).
ExpmResult expm(const CMatrix& a, double t);

double matrix_norm_fro(const CMatrix& a);

}  // namespace lk
