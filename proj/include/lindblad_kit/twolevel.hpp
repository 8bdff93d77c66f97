#pragma once

#include <array>
#include <optional>

#include "lindblad_kit/rates.hpp"

namespace lk {

// Bound-to-continuum two-level reduction: |1> bound, |2> continuum, driven
// mode resonant with the transition (w_q = w_21 = omega0).
struct TwoLevelParams {
    double omega0 = 1.0;
    Complex eta{0.0, 0.0};
    Complex zeta{0.0, 0.0};
    double sigma = 0.0;
    double n_tilde = 0.0;

    void validate() const;
    double kappa() const { return 2.0 * std::numbers::pi * (2.0 * n_tilde + 1.0) * sigma; }
    double kappa_prime() const { return std::norm(eta) * kappa(); }
};

// The four eigenvalues in the paper's labeling (mu1 = 0 always; for SYM all
// real parts are <= 0).
struct AnalyticSpectrum {
    std::array<Complex, 4> mu;
    Scheme scheme;
};

// Basis {0, omega0} and the coupling matrix packaging (eta, zeta, sigma):
// g21 = sqrt(2 sigma omega0), g12 = eta g21, g11 = zeta g21, g22 = 0.
// Feeding these into the rates module reproduces the explicit 4x4 matrices.
SystemBasis two_level_basis(const TwoLevelParams& p);
ModeCoupling two_level_coupling(const TwoLevelParams& p);

// Free part + the conventional-Markov scattering matrix, exactly as typeset:
// populations decoupled from polarizations, zeta rows feeding polarizations
// from populations, eta coupling rho12 <-> rho21.
Liouvillian liouvillian_cm(const TwoLevelParams& p);

// Free part + the temporally symmetrized scattering matrix: same population
// block, diagonal polarization decay, no population-polarization coupling.
Liouvillian liouvillian_sym(const TwoLevelParams& p);

// Closed-form spectra:
//   CM : {0, -2 w0 k, w0(-k +- sqrt(k k' - 1))}
//   SYM: {0, -w0(k + i), -w0(k - i), -2 w0 k}
// For a negative radicand the conjugate pair is reported with the +Im member
// labeled mu3.
AnalyticSpectrum analytic_eigs(const TwoLevelParams& p, Scheme scheme);

// diag(N+1, N)/(2N+1); identical for both schemes.
DensityMatrix steady_state(double n_tilde);

// Initial state with the bound level occupied.
DensityMatrix ground_state();

// true iff kappa^2 (|eta|^2 - 1) > 1, i.e. Re(mu3) > 0 in the CM scheme.
bool divergence_predicate(const TwoLevelParams& p);

// Exact SYM evolution: populations relax at rate 2 k w0 toward the steady
// state, rho12 rotates with the free phase e^{+i w0 t} and decays at k w0.
// The CM scheme has no closed-form trajectory.
DensityMatrix analytic_evolution(const TwoLevelParams& p, Scheme scheme,
                                 const DensityMatrix& rho0, double t);

struct RelaxationTimes {
    double t1;
    double t2;  // always 2 * t1
};

// nullopt when kappa = 0 (no relaxation).
std::optional<RelaxationTimes> relaxation_times(const TwoLevelParams& p);

}  // namespace lk
