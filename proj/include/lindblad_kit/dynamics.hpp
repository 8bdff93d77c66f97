#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lindblad_kit/rates.hpp"

namespace lk {

enum class Method { Expm, Rk4 };

struct StepDiagnostics {
    double trace_re = 0.0;
    double trace_im = 0.0;
    double min_eig = 0.0;      // of the Hermitian-symmetrized state
    double herm_defect = 0.0;  // max |rho_ij - conj(rho_ji)|
    bool overflow = false;
};

// Time-stamped states plus per-step diagnostics. Once any |entry| exceeds
// 1e12 the offending step is flagged and no further states are produced;
// earlier states are preserved (divergence is data, not an error).
struct Trajectory {
    std::vector<double> times;
    std::vector<DensityMatrix> states;
    std::vector<StepDiagnostics> diagnostics;

    bool overflowed() const {
        return !diagnostics.empty() && diagnostics.back().overflow;
    }
};

// Propagates d rho/dt = L rho from rho0 at t = 0 through the requested
// sample times (strictly increasing, >= 0).
//   Expm: one matrix exponential per distinct time gap, reused across steps.
//   Rk4 : classical fixed-step RK4; each output gap is subdivided so that
//         h <= 0.01 / ||L||_inf (row-sum bound on the spectral radius).
Trajectory propagate(const Liouvillian& l, const DensityMatrix& rho0,
                     std::span<const double> times, Method method);

struct DiagnoseReport {
    double max_trace_drift = 0.0;  // max |Re tr - 1| + |Im tr|
    double max_herm_defect = 0.0;
    double min_eigenvalue = 0.0;
    std::optional<double> first_positivity_violation;  // min_eig < -1e-9
    std::optional<double> first_overflow;

    std::string format() const;
};

DiagnoseReport diagnose(const Trajectory& traj);

// Semiclassical occupations f_lambda; sum conserved, entries stay >= -1e-12.
struct Distribution {
    std::vector<double> f;
};

// Integrates df_l/dt = sum_l' (P_{l l'} f_l' - P_{l' l} f_l) with fixed-step
// RK4 (h <= 0.01 / max total rate), sampling at the given times.
std::vector<Distribution> boltzmann_evolve(const RMatrix& rates,
                                           const Distribution& f0,
                                           std::span<const double> times);

}  // namespace lk
