#include "lindblad_kit/rates.hpp"

#include <cmath>
#include <numbers>

namespace lk {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double detune_tol(const ModeCoupling& mode) {
    return tol::detune * std::max(std::abs(mode.omega_q), 1.0);
}

// Normalized Gaussian used when a finite-width delta replacement is requested.
double gauss_norm(double x, double width) {
    return std::exp(-x * x / (2.0 * width * width)) /
           (std::sqrt(kTwoPi) * width);
}

void check_mode(const SystemBasis& basis, const ModeCoupling& mode) {
    if (basis.n() < 1) throw InvalidParameter("basis needs at least one level");
    if (mode.g.rows() != basis.n() || mode.g.cols() != basis.n())
        throw InvalidDimension("coupling matrix dimension does not match basis");
    if (mode.n_occ < 0.0) throw InvalidParameter("mode occupation must be >= 0");
    if (!mode.g.allFinite()) throw InvalidParameter("coupling matrix must be finite");
}

}  // namespace

std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::CM: return "CM";
        case Scheme::SYM: return "SYM";
        case Scheme::Free: return "FREE";
        case Scheme::Dissipator: return "LINDBLAD-DISSIPATOR";
    }
    return "?";
}

RateTensor RateTensor::zero(Eigen::Index n, Scheme origin) {
    RateTensor t;
    t.n = n;
    t.p.assign(static_cast<std::size_t>(n * n * n * n), Complex(0, 0));
    t.origin = origin;
    return t;
}

double RateTensor::pairing_defect() const {
    double worst = 0.0;
    for (Eigen::Index l1 = 0; l1 < n; ++l1)
        for (Eigen::Index l2 = 0; l2 < n; ++l2)
            for (Eigen::Index a = 0; a < n; ++a)
                for (Eigen::Index b = 0; b < n; ++b)
                    worst = std::max(worst,
                                     std::abs(at(l1, l2, a, b) -
                                              std::conj(at(l2, l1, b, a))));
    return worst;
}

double Liouvillian::trace_defect() const {
    double worst = 0.0;
    for (Eigen::Index col = 0; col < n * n; ++col) {
        Complex sum(0, 0);
        for (Eigen::Index d = 0; d < n; ++d) sum += mat(d * n + d, col);
        worst = std::max(worst, std::abs(sum));
    }
    return worst;
}

Liouvillian Liouvillian::checked(Eigen::Index n, CMatrix m, Scheme s,
                                 std::string params) {
    if (m.rows() != n * n || m.cols() != n * n)
        throw InvalidDimension("Liouvillian must be n^2 x n^2");
    Liouvillian l{n, std::move(m), s, std::move(params)};
    const double scale = std::max(1.0, l.mat.cwiseAbs().maxCoeff());
    if (l.trace_defect() > tol::trace_preserve * scale)
        throw InvariantViolation("Liouvillian is not trace preserving");
    return l;
}

RateTensor cm_rates(const SystemBasis& basis, const ModeCoupling& mode,
                    double delta_width) {
    check_mode(basis, mode);
    if (delta_width < 0.0)
        throw InvalidParameter("delta_width must be >= 0");

    const Eigen::Index n = basis.n();
    RateTensor t = RateTensor::zero(n, Scheme::CM);
    const CMatrix gm = mode.g;            // absorption vertex
    const CMatrix gp = mode.g.adjoint();  // emission vertex g^+_{ab} = conj(g_{ba})
    const double wN = mode.n_occ;
    const double wN1 = mode.n_occ + 1.0;
    const double tolk = detune_tol(mode);

    // The energy delta involves only the second index pair: that asymmetry is
    // the defining feature of the completed-collision (CM) limit.
    for (Eigen::Index l1 = 0; l1 < n; ++l1)
        for (Eigen::Index l2 = 0; l2 < n; ++l2)
            for (Eigen::Index a = 0; a < n; ++a)
                for (Eigen::Index b = 0; b < n; ++b) {
                    const double det = basis.omegas[l2] - basis.omegas[b];
                    double abs_factor, em_factor;
                    if (delta_width == 0.0) {
                        abs_factor = std::abs(det - mode.omega_q) < tolk ? 1.0 : 0.0;
                        em_factor = std::abs(det + mode.omega_q) < tolk ? 1.0 : 0.0;
                    } else {
                        abs_factor = gauss_norm(det - mode.omega_q, delta_width);
                        em_factor = gauss_norm(det + mode.omega_q, delta_width);
                    }
                    Complex v(0, 0);
                    if (abs_factor != 0.0)
                        v += wN * abs_factor * gm(l1, a) * std::conj(gm(l2, b));
                    if (em_factor != 0.0)
                        v += wN1 * em_factor * gp(l1, a) * std::conj(gp(l2, b));
                    t.at(l1, l2, a, b) = kTwoPi * v;
                }
    return t;
}

namespace {

template <typename PairFactor, typename BranchFactor>
RateTensor doubly_filtered_rates(const SystemBasis& basis,
                                 const ModeCoupling& mode, Scheme origin,
                                 PairFactor pair_factor,
                                 BranchFactor branch_factor) {
    const Eigen::Index n = basis.n();
    RateTensor t = RateTensor::zero(n, origin);
    const CMatrix gm = mode.g;
    const CMatrix gp = mode.g.adjoint();
    const double wN = mode.n_occ;
    const double wN1 = mode.n_occ + 1.0;

    for (Eigen::Index l1 = 0; l1 < n; ++l1)
        for (Eigen::Index l2 = 0; l2 < n; ++l2)
            for (Eigen::Index a = 0; a < n; ++a)
                for (Eigen::Index b = 0; b < n; ++b) {
                    const double w1 = basis.omegas[l1] - basis.omegas[a];
                    const double w2 = basis.omegas[l2] - basis.omegas[b];
                    const double pre = pair_factor(w1, w2);
                    if (pre == 0.0) continue;
                    const double mean = 0.5 * (w1 + w2);
                    const double fa = branch_factor(mean - mode.omega_q);
                    const double fe = branch_factor(mean + mode.omega_q);
                    Complex v(0, 0);
                    if (fa != 0.0) v += wN * fa * gm(l1, a) * std::conj(gm(l2, b));
                    if (fe != 0.0) v += wN1 * fe * gp(l1, a) * std::conj(gp(l2, b));
                    t.at(l1, l2, a, b) = kTwoPi * pre * v;
                }
    return t;
}

}  // namespace

RateTensor sym_rates(const SystemBasis& basis, const ModeCoupling& mode,
                     double omega_bar) {
    check_mode(basis, mode);
    if (!(omega_bar > 0.0))
        throw InvalidParameter("omega_bar must be > 0");
    return doubly_filtered_rates(
        basis, mode, Scheme::SYM,
        [omega_bar](double w1, double w2) {
            const double d = w1 - w2;
            return std::exp(-d * d / (8.0 * omega_bar * omega_bar));
        },
        [omega_bar](double x) { return gauss_norm(x, omega_bar); });
}

RateTensor sym_rates_limit(const SystemBasis& basis, const ModeCoupling& mode) {
    check_mode(basis, mode);
    const double tolk = detune_tol(mode);
    return doubly_filtered_rates(
        basis, mode, Scheme::SYM,
        [tolk](double w1, double w2) {
            return std::abs(w1 - w2) < tolk ? 1.0 : 0.0;
        },
        [tolk](double x) { return std::abs(x) < tolk ? 1.0 : 0.0; });
}

Liouvillian assemble_liouvillian(const RateTensor& rates) {
    const Eigen::Index n = rates.n;
    if (n < 1 || rates.p.size() != static_cast<std::size_t>(n * n * n * n))
        throw InvalidParameter("malformed rate tensor");
    for (const Complex& v : rates.p)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw InvalidParameter("rate tensor entries must be finite");

    // Out-scattering kernel from the diagonal-pair contraction.
    CMatrix q = CMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index a = 0; a < n; ++a) {
            Complex sum(0, 0);
            for (Eigen::Index c = 0; c < n; ++c) sum += rates.at(c, c, i, a);
            q(i, a) = std::conj(sum);
        }

    CMatrix m(n * n, n * n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index a = 0; a < n; ++a)
                for (Eigen::Index b = 0; b < n; ++b) {
                    Complex v = 0.5 * (rates.at(i, j, a, b) +
                                       std::conj(rates.at(j, i, b, a)));
                    if (j == b) v -= 0.5 * q(i, a);
                    if (i == a) v -= 0.5 * std::conj(q(j, b));
                    m(i * n + j, a * n + b) = v;
                }
    return Liouvillian::checked(n, std::move(m), rates.origin, "");
}

Liouvillian free_liouvillian(const SystemBasis& basis) {
    const Eigen::Index n = basis.n();
    if (n < 1) throw InvalidParameter("basis needs at least one level");
    CMatrix m = CMatrix::Zero(n * n, n * n);
    for (Eigen::Index a1 = 0; a1 < n; ++a1)
        for (Eigen::Index a2 = 0; a2 < n; ++a2)
            m(a1 * n + a2, a1 * n + a2) =
                Complex(0, -(basis.omegas[a1] - basis.omegas[a2]));
    return Liouvillian::checked(n, std::move(m), Scheme::Free, "");
}

double jump_filter(double detuning, double omega_bar) {
    if (!(omega_bar > 0.0))
        throw InvalidParameter("omega_bar must be > 0");
    const double tbar = 1.0 / (2.0 * omega_bar);
    // integral of e^{-i D t} e^{-t^2/(4 tbar^2)} dt = 2 tbar sqrt(pi) e^{-D^2 tbar^2}
    return std::pow(kTwoPi * tbar * tbar, -0.25) * 2.0 *
           std::sqrt(std::numbers::pi) * tbar *
           std::exp(-detuning * detuning * tbar * tbar);
}

std::vector<JumpOperator> jump_operators(const SystemBasis& basis,
                                         const ModeCoupling& mode,
                                         double omega_bar) {
    check_mode(basis, mode);
    if (!(omega_bar > 0.0))
        throw InvalidParameter("omega_bar must be > 0");

    const Eigen::Index n = basis.n();
    const CMatrix gm = mode.g;
    const CMatrix gp = mode.g.adjoint();

    JumpOperator neg{-1, mode.label, CMatrix::Zero(n, n)};
    JumpOperator pos{+1, mode.label, CMatrix::Zero(n, n)};
    for (Eigen::Index a1 = 0; a1 < n; ++a1)
        for (Eigen::Index a2 = 0; a2 < n; ++a2) {
            const double w = basis.omegas[a1] - basis.omegas[a2];
            neg.mat(a1, a2) = gm(a1, a2) * jump_filter(w - mode.omega_q, omega_bar);
            pos.mat(a1, a2) = gp(a1, a2) * jump_filter(w + mode.omega_q, omega_bar);
        }
    return {std::move(neg), std::move(pos)};
}

Liouvillian lindblad_dissipator(std::span<const JumpOperator> jumps,
                                std::span<const ModeOccupation> occupations) {
    Eigen::Index n = 0;
    for (const auto& j : jumps) {
        if (j.mat.rows() != j.mat.cols())
            throw InvalidDimension("jump operators must be square");
        if (n == 0)
            n = j.mat.rows();
        else if (j.mat.rows() != n)
            throw InvalidDimension("jump operators must share one dimension");
    }
    if (n == 0) throw InvalidDimension("no jump operators given");

    auto weight_for = [&](const JumpOperator& j) {
        for (const auto& occ : occupations)
            if (occ.label == j.mode)
                return j.sign < 0 ? occ.n_occ : occ.n_occ + 1.0;
        throw InvalidParameter("no occupation given for mode " + j.mode);
    };

    const CMatrix id = CMatrix::Identity(n, n);
    CMatrix m = CMatrix::Zero(n * n, n * n);
    for (const auto& j : jumps) {
        const double w = weight_for(j);
        if (w < 0.0) throw InvalidParameter("negative branch weight");
        const CMatrix& l = j.mat;
        const CMatrix ldl = l.adjoint() * l;
        // row-major vec: vec(A rho B) = (A kron B^T) vec(rho)
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index jj = 0; jj < n; ++jj)
                for (Eigen::Index a = 0; a < n; ++a)
                    for (Eigen::Index b = 0; b < n; ++b) {
                        Complex v = l(i, a) * std::conj(l(jj, b));
                        if (jj == b) v -= 0.5 * ldl(i, a);
                        if (i == a) v -= 0.5 * std::conj(ldl(jj, b));
                        m(i * n + jj, a * n + b) += w * v;
                    }
    }
    return Liouvillian::checked(n, std::move(m), Scheme::Dissipator, "");
}

RMatrix semiclassical_rates(const RateTensor& rates) {
    const Eigen::Index n = rates.n;
    RMatrix p(n, n);
    for (Eigen::Index l = 0; l < n; ++l)
        for (Eigen::Index lp = 0; lp < n; ++lp) {
            const Complex v = rates.at(l, l, lp, lp);
            if (std::abs(v.imag()) > tol::herm || v.real() < -tol::herm)
                throw InvariantViolation(
                    "semiclassical diagonal entry is not real non-negative");
            p(l, lp) = v.real();
        }
    return p;
}

}  // namespace lk
