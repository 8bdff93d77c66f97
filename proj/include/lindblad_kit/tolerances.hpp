#pragma once

namespace lk::tol {

// All numerical tolerances live here so tests and implementation agree on
// one set of numbers.

inline constexpr double herm = 1e-12;       // max |A_ij - conj(A_ji)| for a Hermitian input
inline constexpr double trace_unit = 1e-12; // |tr(rho) - 1| at checked construction
inline constexpr double eig = 1e-10;        // eigenpair residual, relative to ||A||_F
inline constexpr double trace_preserve = 1e-12;  // Liouvillian diagonal-row column sums
inline constexpr double detune = 1e-9;      // relative width of exact energy matching
inline constexpr double singular = 1e-9;    // relative guard band around closed-form poles
inline constexpr double positivity = 1e-9;  // min eigenvalue below which a state counts as non-positive
inline constexpr double overflow_entry = 1e12;  // |rho entry| at which a trajectory is declared divergent
inline constexpr double expm_rel = 1e-12;   // target relative accuracy of expm for ||tA|| <= 50

}  // namespace lk::tol

namespace lk::units {

// hbar in meV*ps; the CLI converts between meV inputs and the internal
// dimensionless frequencies with this constant.
inline constexpr double hbar_meV_ps = 0.6582119;

// speed of light in nm/ps and the free electron mass in meV*ps^2/nm^2,
// derived from m_e c^2 = 510998.95 eV.
inline constexpr double c_nm_ps = 2.99792458e5;
inline constexpr double mec2_meV = 5.1099895e8;
inline constexpr double electron_mass = mec2_meV / (c_nm_ps * c_nm_ps);

// 1 kg in meV*ps^2/nm^2 (via 1 J = 6.241509074e21 meV).
inline constexpr double kg = 6.241509074e27;

// mass density: kg/m^3 -> meV*ps^2/nm^5
inline constexpr double kg_m3 = kg / 1e27;

// speed: m/s -> nm/ps
inline constexpr double m_s = 1e-3;

}  // namespace lk::units
