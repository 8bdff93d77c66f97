#include "lindblad_kit/qdphonon.hpp"

#include <cmath>
#include <numbers>

namespace lk {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;

void guard(double value, double scale, const char* factor) {
    if (std::abs(value) < tol::singular * std::max(std::abs(scale), 1.0))
        throw SingularGeometry(std::string("singular denominator: ") + factor);
}

}  // namespace

void QDGeometry::validate() const {
    if (!(d_nm > 0.0)) throw InvalidParameter("well width d must be > 0");
    if (!(a_inv_nm > 0.0)) throw InvalidParameter("inverse oscillator length a must be > 0");
    if (!(e_loc_meV > 0.0)) throw InvalidParameter("localization energy must be > 0");
    if (!(m_star_rel > 0.0)) throw InvalidParameter("effective mass must be > 0");
}

void Material::validate() const {
    if (!(eps_def_meV > 0.0)) throw InvalidParameter("deformation potential must be > 0");
    if (!(rho_kg_m3 > 0.0)) throw InvalidParameter("mass density must be > 0");
    if (!(c_s_m_s > 0.0)) throw InvalidParameter("sound speed must be > 0");
    if (!(volume_nm3 > 0.0)) throw InvalidParameter("normalization volume must be > 0");
}

DimensionlessParams DimensionlessParams::make(Complex eta, Complex zeta,
                                              double sigma, double n_tilde) {
    if (sigma < 0.0) throw InvalidParameter("sigma must be >= 0");
    if (n_tilde < 0.0) throw InvalidParameter("N_tilde must be >= 0");
    DimensionlessParams p;
    p.eta = eta;
    p.zeta = zeta;
    p.sigma = sigma;
    p.n_tilde = n_tilde;
    std::tie(p.kappa, p.kappa_prime) = kappas(sigma, n_tilde, eta);
    return p;
}

double eta_closed_form(double d, double k, double q0) {
    const double cm = std::cos(d * (k - q0) / 2.0);
    guard(cm, 1.0, "cos[d(k-q0)/2]");
    const double dp = d * d * (k + q0) * (k + q0) - kPi2;
    guard(dp, kPi2, "d^2(k+q0)^2 - pi^2");
    const double cp = std::cos(d * (k + q0) / 2.0);
    const double dm = d * d * (k - q0) * (k - q0) - kPi2;
    return (cp / cm) * (dm / dp);
}

double zeta_closed_form(double a, double d, double k, double q0) {
    const double cm = std::cos(d * (k - q0) / 2.0);
    guard(cm, 1.0, "cos[d(k-q0)/2]");
    const double den = 4.0 * kPi2 - d * d * q0 * q0;
    guard(den, 4.0 * kPi2, "4 pi^2 - d^2 q0^2");
    const double num = a * d * d * (kPi2 - d * d * (k - q0) * (k - q0)) * q0 *
                       std::sin(d * q0 / 2.0) / cm;
    return num / (2.0 * std::pow(kPi, 1.5) * den);
}

double sigma_closed_form(const Material& mat, const QDGeometry& geo,
                         const PhononDrive& drive) {
    mat.validate();
    geo.validate();
    if (!(drive.hbar_omega0_meV > 0.0))
        throw InvalidParameter("phonon energy must be > 0");

    const double d = geo.d_nm;
    const double k = drive.k_inv_nm;
    const double q0 = drive.q0_inv_nm;
    const double dn = kPi2 - d * d * (k - q0) * (k - q0);
    guard(dn, kPi2, "pi^2 - d^2(k-q0)^2");

    const double w0 = drive.hbar_omega0_meV / units::hbar_meV_ps;  // rad/ps
    const double rho = mat.rho_kg_m3 * units::kg_m3;               // meV ps^2/nm^5
    const double eps = mat.eps_def_meV;
    const double a = geo.a_inv_nm;
    const double form = std::cos(d * (k - q0) / 2.0) / dn;
    return eps * eps * std::pow(q0, 5) /
           (a * a * d * d * rho * units::hbar_meV_ps * w0 * w0 * w0) *
           form * form;
}

std::pair<double, double> kappas(double sigma, double n_tilde, Complex eta) {
    if (sigma < 0.0) throw InvalidParameter("sigma must be >= 0");
    if (n_tilde < 0.0) throw InvalidParameter("N_tilde must be >= 0");
    const double kappa = 2.0 * kPi * (2.0 * n_tilde + 1.0) * sigma;
    return {kappa, std::norm(eta) * kappa};
}

std::optional<double> sigma_crit(Complex eta, double n_tilde) {
    const double eta2 = std::norm(eta);
    if (eta2 <= 1.0) return std::nullopt;
    return 1.0 / ((2.0 * n_tilde + 1.0) * 2.0 * kPi * std::sqrt(eta2 - 1.0));
}

std::optional<double> n_crit(Complex eta, double sigma) {
    const double eta2 = std::norm(eta);
    if (eta2 <= 1.0) return std::nullopt;
    return 0.5 * (1.0 / (sigma * 2.0 * kPi * std::sqrt(eta2 - 1.0)) - 1.0);
}

PhononDrive dispersion(double hbar_omega0_meV, double n_tilde,
                       const Material& mat, const QDGeometry& geo) {
    mat.validate();
    geo.validate();
    if (n_tilde < 0.0) throw InvalidParameter("N_tilde must be >= 0");
    if (hbar_omega0_meV <= geo.e_loc_meV)
        throw BelowThreshold("phonon energy must exceed the localization energy");

    PhononDrive out;
    out.hbar_omega0_meV = hbar_omega0_meV;
    out.n_tilde = n_tilde;
    const double w0 = hbar_omega0_meV / units::hbar_meV_ps;  // rad/ps
    out.q0_inv_nm = w0 / (mat.c_s_m_s * units::m_s);
    const double mstar = geo.m_star_rel * units::electron_mass;
    out.k_inv_nm = std::sqrt(2.0 * mstar * (hbar_omega0_meV - geo.e_loc_meV)) /
                   units::hbar_meV_ps;
    return out;
}

DimensionlessParams dimensionless_from_physical(const Material& mat,
                                                const QDGeometry& geo,
                                                double hbar_omega0_meV,
                                                double n_tilde) {
    const PhononDrive drive = dispersion(hbar_omega0_meV, n_tilde, mat, geo);
    const double eta = eta_closed_form(geo.d_nm, drive.k_inv_nm, drive.q0_inv_nm);
    const double zeta =
        zeta_closed_form(geo.a_inv_nm, geo.d_nm, drive.k_inv_nm, drive.q0_inv_nm);
    const double sigma = sigma_closed_form(mat, geo, drive);
    return DimensionlessParams::make(Complex(eta, 0.0), Complex(zeta, 0.0),
                                     sigma, n_tilde);
}

std::string cell_label_name(CellLabel l) {
    switch (l) {
        case CellLabel::Safe: return "safe";
        case CellLabel::Nonphysical: return "nonphysical";
        case CellLabel::UnboundedSafe: return "unbounded-safe";
        case CellLabel::Singular: return "singular";
    }
    return "?";
}

PartitionMap partition_map(std::span<const double> n_grid,
                           std::span<const double> hw_grid_meV,
                           const Material& mat, const QDGeometry& geo) {
    if (n_grid.empty() || hw_grid_meV.empty())
        throw InvalidParameter("partition grid must be non-empty");

    PartitionMap out;
    out.cells.reserve(n_grid.size() * hw_grid_meV.size());
    out.boundary.reserve(hw_grid_meV.size());

    for (double hw : hw_grid_meV) {
        std::optional<double> nbar;
        bool singular = false;
        try {
            const DimensionlessParams p =
                dimensionless_from_physical(mat, geo, hw, 0.0);
            nbar = n_crit(p.eta, p.sigma);
        } catch (const SingularGeometry&) {
            singular = true;
        } catch (const BelowThreshold&) {
            singular = true;  // no bound-to-continuum channel at this energy
        }
        out.boundary.push_back({hw, singular ? std::nullopt : nbar, singular});
        for (double n : n_grid) {
            CellLabel label;
            if (singular)
                label = CellLabel::Singular;
            else if (!nbar)
                label = CellLabel::UnboundedSafe;
            else
                label = (n > *nbar) ? CellLabel::Nonphysical : CellLabel::Safe;
            out.cells.push_back({n, hw, label});
        }
    }
    return out;
}

}  // namespace lk
