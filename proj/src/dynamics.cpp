#include "lindblad_kit/dynamics.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace lk {

namespace {

void check_times(std::span<const double> times) {
    if (times.empty()) throw InvalidParameter("empty time grid");
    double prev = -1.0;
    for (double t : times) {
        if (!std::isfinite(t) || t < 0.0)
            throw InvalidParameter("times must be finite and >= 0");
        if (t <= prev) throw InvalidParameter("times must be strictly increasing");
        prev = t;
    }
}

StepDiagnostics diagnose_state(const CMatrix& rho) {
    StepDiagnostics d;
    if (!rho.allFinite()) {
        d.trace_re = std::numeric_limits<double>::quiet_NaN();
        d.trace_im = std::numeric_limits<double>::quiet_NaN();
        d.min_eig = std::numeric_limits<double>::quiet_NaN();
        d.herm_defect = std::numeric_limits<double>::quiet_NaN();
        d.overflow = true;
        return d;
    }
    const Complex tr = rho.trace();
    d.trace_re = tr.real();
    d.trace_im = tr.imag();
    d.herm_defect = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    d.overflow = rho.cwiseAbs().maxCoeff() > tol::overflow_entry;
    // positivity is judged on the symmetrized state so round-off Hermiticity
    // defects do not masquerade as positivity loss
    CMatrix sym = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym, Eigen::EigenvaluesOnly);
    d.min_eig = solver.info() == Eigen::Success
                    ? solver.eigenvalues()(0)
                    : std::numeric_limits<double>::quiet_NaN();
    return d;
}

double inf_norm(const CMatrix& m) {
    return m.cwiseAbs().rowwise().sum().maxCoeff();
}

void rk4_step(const CMatrix& l, CVector& u, double h) {
    const CVector k1 = l * u;
    const CVector k2 = l * (u + 0.5 * h * k1);
    const CVector k3 = l * (u + 0.5 * h * k2);
    const CVector k4 = l * (u + h * k3);
    u += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

Trajectory propagate(const Liouvillian& l, const DensityMatrix& rho0,
                     std::span<const double> times, Method method) {
    if (rho0.dim() != l.n)
        throw InvalidDimension("state dimension does not match the Liouvillian");
    check_times(times);

    const double rk_h_cap = 0.01 / std::max(inf_norm(l.mat), 1e-30);

    Trajectory traj;
    traj.times.reserve(times.size());
    traj.states.reserve(times.size());
    traj.diagnostics.reserve(times.size());

    CVector u = vectorize(rho0).components;
    double t_prev = 0.0;
    std::map<double, CMatrix> propagators;  // Expm: one per distinct gap

    for (double t : times) {
        const double gap = t - t_prev;
        if (gap > 0.0) {
            if (method == Method::Expm) {
                auto it = propagators.find(gap);
                if (it == propagators.end()) {
                    // an overflowed propagator flows into the state and is
                    // caught by the per-step overflow flag below
                    ExpmResult e = expm(l.mat, gap);
                    it = propagators.emplace(gap, std::move(e.value)).first;
                }
                u = it->second * u;
            } else {
                const int substeps =
                    std::max(1, int(std::ceil(gap / rk_h_cap)));
                const double h = gap / substeps;
                for (int s = 0; s < substeps; ++s) rk4_step(l.mat, u, h);
            }
        }
        t_prev = t;

        DensityMatrix rho = devectorize(VectorizedState{l.n, u});
        StepDiagnostics d = diagnose_state(rho.mat);
        traj.times.push_back(t);
        traj.states.push_back(std::move(rho));
        traj.diagnostics.push_back(d);
        if (d.overflow) break;  // keep earlier states, stop propagating
    }
    return traj;
}

std::string DiagnoseReport::format() const {
    std::ostringstream os;
    os << "max_trace_drift=" << max_trace_drift
       << " max_herm_defect=" << max_herm_defect
       << " min_eigenvalue=" << min_eigenvalue << " first_positivity_violation=";
    if (first_positivity_violation)
        os << *first_positivity_violation;
    else
        os << "none";
    os << " first_overflow=";
    if (first_overflow)
        os << *first_overflow;
    else
        os << "none";
    return os.str();
}

DiagnoseReport diagnose(const Trajectory& traj) {
    if (traj.times.empty()) throw InvalidParameter("empty trajectory");
    DiagnoseReport r;
    r.min_eigenvalue = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const StepDiagnostics& d = traj.diagnostics[i];
        if (d.overflow) {
            if (!r.first_overflow) r.first_overflow = traj.times[i];
            continue;
        }
        r.max_trace_drift = std::max(
            r.max_trace_drift, std::abs(d.trace_re - 1.0) + std::abs(d.trace_im));
        r.max_herm_defect = std::max(r.max_herm_defect, d.herm_defect);
        r.min_eigenvalue = std::min(r.min_eigenvalue, d.min_eig);
        if (d.min_eig < -tol::positivity && !r.first_positivity_violation)
            r.first_positivity_violation = traj.times[i];
    }
    if (!std::isfinite(r.min_eigenvalue)) r.min_eigenvalue = 0.0;
    return r;
}

std::vector<Distribution> boltzmann_evolve(const RMatrix& rates,
                                           const Distribution& f0,
                                           std::span<const double> times) {
    const Eigen::Index n = rates.rows();
    if (rates.cols() != n) throw InvalidDimension("rate matrix must be square");
    if (static_cast<Eigen::Index>(f0.f.size()) != n)
        throw InvalidDimension("distribution size does not match rates");
    if ((rates.array() < 0.0).any())
        throw InvalidParameter("scattering rates must be >= 0");
    for (double v : f0.f)
        if (v < 0.0) throw InvalidParameter("initial occupations must be >= 0");
    check_times(times);

    // generator G = P - diag(column sums): conserves sum(f) exactly
    RMatrix gen = rates;
    const Eigen::RowVectorXd out_rates = rates.colwise().sum();
    gen.diagonal() -= out_rates.transpose();

    const double h_cap = 0.01 / std::max(out_rates.maxCoeff(), 1e-30);

    Eigen::VectorXd f = Eigen::Map<const Eigen::VectorXd>(f0.f.data(), n);
    std::vector<Distribution> out;
    out.reserve(times.size());
    double t_prev = 0.0;
    for (double t : times) {
        double gap = t - t_prev;
        if (gap > 0.0) {
            const int substeps = std::max(1, int(std::ceil(gap / h_cap)));
            const double h = gap / substeps;
            for (int s = 0; s < substeps; ++s) {
                const Eigen::VectorXd k1 = gen * f;
                const Eigen::VectorXd k2 = gen * (f + 0.5 * h * k1);
                const Eigen::VectorXd k3 = gen * (f + 0.5 * h * k2);
                const Eigen::VectorXd k4 = gen * (f + h * k3);
                f += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
        }
        t_prev = t;
        Distribution d;
        d.f.assign(f.data(), f.data() + n);
        out.push_back(std::move(d));
    }
    return out;
}

}  // namespace lk
