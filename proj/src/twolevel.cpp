#include "lindblad_kit/twolevel.hpp"

#include <cmath>
#include <sstream>

namespace lk {

namespace {

constexpr double kPi = std::numbers::pi;

std::string param_echo(const TwoLevelParams& p, const char* scheme) {
    std::ostringstream os;
    os << scheme << " omega0=" << p.omega0 << " |eta|^2=" << std::norm(p.eta)
       << " sigma=" << p.sigma << " N=" << p.n_tilde;
    return os.str();
}

}  // namespace

void TwoLevelParams::validate() const {
    if (!(omega0 > 0.0)) throw InvalidParameter("omega0 must be > 0");
    if (sigma < 0.0) throw InvalidParameter("sigma must be >= 0");
    if (n_tilde < 0.0) throw InvalidParameter("N_tilde must be >= 0");
}

SystemBasis two_level_basis(const TwoLevelParams& p) {
    p.validate();
    return SystemBasis{{0.0, p.omega0}};
}

ModeCoupling two_level_coupling(const TwoLevelParams& p) {
    p.validate();
    ModeCoupling mode;
    mode.omega_q = p.omega0;
    mode.n_occ = p.n_tilde;
    mode.g = CMatrix::Zero(2, 2);
    const double g21 = std::sqrt(2.0 * p.sigma * p.omega0);
    mode.g(1, 0) = g21;
    mode.g(0, 1) = p.eta * g21;
    mode.g(0, 0) = p.zeta * g21;
    return mode;
}

Liouvillian liouvillian_cm(const TwoLevelParams& p) {
    p.validate();
    const double s = 4.0 * kPi * p.omega0 * p.sigma;
    const double n = p.n_tilde;
    const Complex eta = p.eta;
    const Complex zeta = p.zeta;
    const Complex iw(0.0, p.omega0);

    CMatrix m = CMatrix::Zero(4, 4);
    m(0, 0) = -s * n;
    m(0, 3) = s * (n + 1.0);
    m(1, 0) = s * zeta * n / 2.0;
    m(1, 1) = iw - s * (2.0 * n + 1.0) / 2.0;
    m(1, 2) = s * eta * (2.0 * n + 1.0) / 2.0;
    m(1, 3) = -s * zeta * (n + 1.0) / 2.0;
    m(2, 0) = s * std::conj(zeta) * n / 2.0;
    m(2, 1) = s * std::conj(eta) * (2.0 * n + 1.0) / 2.0;
    m(2, 2) = -iw - s * (2.0 * n + 1.0) / 2.0;
    m(2, 3) = -s * std::conj(zeta) * (n + 1.0) / 2.0;
    m(3, 0) = s * n;
    m(3, 3) = -s * (n + 1.0);
    return Liouvillian::checked(2, std::move(m), Scheme::CM, param_echo(p, "CM"));
}

Liouvillian liouvillian_sym(const TwoLevelParams& p) {
    p.validate();
    const double s = 4.0 * kPi * p.omega0 * p.sigma;
    const double n = p.n_tilde;
    const Complex iw(0.0, p.omega0);

    CMatrix m = CMatrix::Zero(4, 4);
    m(0, 0) = -s * n;
    m(0, 3) = s * (n + 1.0);
    m(1, 1) = iw - s * (2.0 * n + 1.0) / 2.0;
    m(2, 2) = -iw - s * (2.0 * n + 1.0) / 2.0;
    m(3, 0) = s * n;
    m(3, 3) = -s * (n + 1.0);
    return Liouvillian::checked(2, std::move(m), Scheme::SYM, param_echo(p, "SYM"));
}

AnalyticSpectrum analytic_eigs(const TwoLevelParams& p, Scheme scheme) {
    p.validate();
    const double k = p.kappa();
    const double kp = p.kappa_prime();
    const double w0 = p.omega0;

    AnalyticSpectrum s;
    s.scheme = scheme;
    switch (scheme) {
        case Scheme::CM: {
            const Complex root = std::sqrt(Complex(k * kp - 1.0, 0.0));
            s.mu = {Complex(0.0, 0.0), Complex(-2.0 * w0 * k, 0.0),
                    w0 * (-k + root), w0 * (-k - root)};
            break;
        }
        case Scheme::SYM:
            s.mu = {Complex(0.0, 0.0), -w0 * Complex(k, 1.0),
                    -w0 * Complex(k, -1.0), Complex(-2.0 * w0 * k, 0.0)};
            break;
        default:
            throw UnsupportedScheme("analytic spectrum exists for CM and SYM only");
    }
    return s;
}

DensityMatrix steady_state(double n_tilde) {
    if (n_tilde < 0.0) throw InvalidParameter("N_tilde must be >= 0");
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 0) = (n_tilde + 1.0) / (2.0 * n_tilde + 1.0);
    m(1, 1) = n_tilde / (2.0 * n_tilde + 1.0);
    return DensityMatrix::checked(std::move(m));
}

DensityMatrix ground_state() {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 0) = 1.0;
    return DensityMatrix::checked(std::move(m));
}

bool divergence_predicate(const TwoLevelParams& p) {
    p.validate();
    const double k = p.kappa();
    return k * k * (std::norm(p.eta) - 1.0) > 1.0;
}

DensityMatrix analytic_evolution(const TwoLevelParams& p, Scheme scheme,
                                 const DensityMatrix& rho0, double t) {
    p.validate();
    if (scheme != Scheme::SYM)
        throw UnsupportedScheme(
            "closed-form evolution exists for the SYM scheme only");
    if (rho0.dim() != 2) throw InvalidDimension("two-level state expected");

    const double k = p.kappa();
    const double w0 = p.omega0;
    const double st11 = (p.n_tilde + 1.0) / (2.0 * p.n_tilde + 1.0);
    const double decay = std::exp(-2.0 * k * w0 * t);
    const Complex d11 = rho0.mat(0, 0) - st11;

    CMatrix m(2, 2);
    m(0, 0) = st11 + d11 * decay;
    // polarization phase follows the free generator: d rho12/dt = +i w0 rho12
    m(0, 1) = rho0.mat(0, 1) * std::exp(Complex(-k * w0 * t, w0 * t));
    m(1, 0) = rho0.mat(1, 0) * std::exp(Complex(-k * w0 * t, -w0 * t));
    m(1, 1) = rho0.trace() - m(0, 0);
    return DensityMatrix::unchecked(std::move(m));
}

std::optional<RelaxationTimes> relaxation_times(const TwoLevelParams& p) {
    p.validate();
    const double k = p.kappa();
    if (k <= 0.0) return std::nullopt;
    const double t1 = 1.0 / (2.0 * k * p.omega0);
    return RelaxationTimes{t1, 2.0 * t1};
}

}  // namespace lk
