#include "lindblad_kit/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace lk {

namespace {

constexpr Eigen::Index kMaxEigDim = 64;

bool all_finite(const CMatrix& m) { return m.allFinite(); }

}  // namespace

double matrix_norm_fro(const CMatrix& a) { return a.norm(); }

double DensityMatrix::herm_defect() const {
    return (mat - mat.adjoint()).cwiseAbs().maxCoeff();
}

DensityMatrix DensityMatrix::checked(CMatrix m) {
    if (m.rows() != m.cols())
        throw InvalidDimension("density matrix must be square");
    DensityMatrix rho{std::move(m)};
    if (rho.herm_defect() > tol::herm)
        throw NotHermitian("density matrix Hermiticity defect exceeds 1e-12");
    const Complex tr = rho.trace();
    if (std::abs(tr.real() - 1.0) > tol::trace_unit ||
        std::abs(tr.imag()) > tol::trace_unit)
        throw InvalidParameter("density matrix trace is not 1 within 1e-12");
    return rho;
}

VectorizedState vectorize(const DensityMatrix& rho) {
    const Eigen::Index n = rho.dim();
    VectorizedState v;
    v.dim = n;
    v.components.resize(n * n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c)
            v.components(r * n + c) = rho.mat(r, c);
    return v;
}

DensityMatrix devectorize(const VectorizedState& v) {
    const Eigen::Index len = v.components.size();
    const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(double(len))));
    if (n * n != len)
        throw InvalidDimension("vector length is not a perfect square");
    CMatrix m(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c)
            m(r, c) = v.components(r * n + c);
    return DensityMatrix::unchecked(std::move(m));
}

Spectrum eig_general(const CMatrix& a, bool want_vectors) {
    if (a.rows() != a.cols())
        throw InvalidDimension("eig_general requires a square matrix");
    if (a.rows() > kMaxEigDim)
        throw InvalidDimension("eig_general supports dimensions up to 64");
    if (!all_finite(a))
        throw InvalidParameter("eig_general requires finite entries");

    const Eigen::Index n = a.rows();
    Eigen::ComplexEigenSolver<CMatrix> solver(a, /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success)
        throw NoConvergence("complex QR iteration did not converge",
                            std::numeric_limits<double>::quiet_NaN());

    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    const auto& vals = solver.eigenvalues();
    std::sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
        if (vals(i).real() != vals(j).real()) return vals(i).real() > vals(j).real();
        return vals(i).imag() > vals(j).imag();
    });

    Spectrum s;
    s.eigenvalues.resize(n);
    CMatrix vecs(n, n);
    double residual = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index i = order[k];
        s.eigenvalues[k] = vals(i);
        CVector v = solver.eigenvectors().col(i);
        vecs.col(k) = v;
        residual = std::max(residual, (a * v - vals(i) * v).norm());
    }
    s.residual = residual;
    if (want_vectors) s.eigenvectors = std::move(vecs);

    const double scale = matrix_norm_fro(a);
    if (scale > 0.0 && residual > tol::eig * scale)
        throw NoConvergence("eigenpair residual exceeds 1e-10 * ||A||", residual);
    return s;
}

double eig_hermitian_min(const CMatrix& a) {
    if (a.rows() != a.cols())
        throw InvalidDimension("eig_hermitian_min requires a square matrix");
    const double defect = (a - a.adjoint()).cwiseAbs().maxCoeff();
    if (defect > tol::herm)
        throw NotHermitian("matrix is not Hermitian within 1e-12");
    CMatrix sym = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw NoConvergence("Hermitian eigensolver did not converge",
                            std::numeric_limits<double>::quiet_NaN());
    return solver.eigenvalues()(0);
}

// Order-13 Pade approximant with the Higham (2005) scaling threshold.
ExpmResult expm(const CMatrix& a, double t) {
    if (a.rows() != a.cols())
        throw InvalidDimension("expm requires a square matrix");
    if (!all_finite(a) || !std::isfinite(t))
        throw InvalidParameter("expm requires finite entries");

    const Eigen::Index n = a.rows();
    const CMatrix id = CMatrix::Identity(n, n);
    CMatrix b = t * a;

    static const double pade_coeffs[] = {
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
        1187353796428800.0,  129060195264000.0,   10559470521600.0,
        670442572800.0,      33522128640.0,       1323241920.0,
        40840800.0,          960960.0,            16380.0,
        182.0,               1.0};
    const double theta13 = 5.371920351148152;

    const double norm1 = b.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm1 > theta13) {
        squarings = std::max(0, int(std::ceil(std::log2(norm1 / theta13))));
        b /= std::pow(2.0, squarings);
    }

    const CMatrix b2 = b * b;
    const CMatrix b4 = b2 * b2;
    const CMatrix b6 = b2 * b4;

    CMatrix u = b * (b6 * (pade_coeffs[13] * b6 + pade_coeffs[11] * b4 +
                           pade_coeffs[9] * b2) +
                     pade_coeffs[7] * b6 + pade_coeffs[5] * b4 +
                     pade_coeffs[3] * b2 + pade_coeffs[1] * id);
    CMatrix v = b6 * (pade_coeffs[12] * b6 + pade_coeffs[10] * b4 +
                      pade_coeffs[8] * b2) +
                pade_coeffs[6] * b6 + pade_coeffs[4] * b4 +
                pade_coeffs[2] * b2 + pade_coeffs[0] * id;

    CMatrix num = v + u;
    CMatrix den = v - u;
    CMatrix r = den.partialPivLu().solve(num);

    ExpmResult out;
    for (int s = 0; s < squarings; ++s) {
        CMatrix next = r * r;
        if (!all_finite(next)) {
            out.overflow = true;  // CM divergent regime: saturate, do not crash
            break;
        }
        r = std::move(next);
    }
    if (!all_finite(r)) out.overflow = true;
    out.value = std::move(r);
    return out;
}

}  // namespace lk
