#pragma once

#include <span>
#include <string>
#include <vector>

#include "lindblad_kit/numkernel.hpp"

namespace lk {

// Unperturbed electronic levels; frequencies are dimensionless in units of a
// caller-declared reference (hbar = 1 throughout the core).
struct SystemBasis {
    std::vector<double> omegas;

    Eigen::Index n() const { return static_cast<Eigen::Index>(omegas.size()); }
};

// One driven boson mode: frequency, mean occupation, and the n x n matrix of
// coupling coefficients g_{a1 a2}. The two interaction branches use
//   g^-  = g                    (absorption, weight N)
//   g^+_{a1 a2} = conj(g_{a2 a1})  (emission, weight N+1)
struct ModeCoupling {
    std::string label = "q0";
    double omega_q = 1.0;
    double n_occ = 0.0;
    CMatrix g;
};

enum class Scheme { CM, SYM, Free, Dissipator };

std::string scheme_name(Scheme s);

// Generalized scattering rates P_{l1 l2, l1' l2'}. The CM tensor is
// asymmetric in its energy argument (the delta involves only the second
// index pair); the symmetrized tensor satisfies the Hermitian pairing
// P_{l1 l2, l1' l2'} = conj(P_{l2 l1, l2' l1'}) exactly.
struct RateTensor {
    Eigen::Index n = 0;
    std::vector<Complex> p;  // index ((l1*n + l2)*n + l1')*n + l2'
    Scheme origin = Scheme::CM;

    Complex& at(Eigen::Index l1, Eigen::Index l2, Eigen::Index a, Eigen::Index b) {
        return p[((l1 * n + l2) * n + a) * n + b];
    }
    Complex at(Eigen::Index l1, Eigen::Index l2, Eigen::Index a, Eigen::Index b) const {
        return p[((l1 * n + l2) * n + a) * n + b];
    }
    static RateTensor zero(Eigen::Index n, Scheme origin);

    double pairing_defect() const;  // max |P_{l1l2,ab} - conj(P_{l2l1,ba})|
};

// n^2 x n^2 generator acting on the row-major vectorized density matrix.
// Construction validates trace preservation: for every column, the sum of
// the entries in rows that map to diagonal (a,a) positions vanishes.
struct Liouvillian {
    Eigen::Index n = 0;
    CMatrix mat;
    Scheme scheme = Scheme::Free;
    std::string params;  // human-readable parameter echo

    static Liouvillian checked(Eigen::Index n, CMatrix m, Scheme s, std::string params);
    double trace_defect() const;
};

// Gaussian-filtered jump operator L^(sign) of one mode. sign = -1 selects the
// absorption branch, +1 the emission branch.
struct JumpOperator {
    int sign = -1;
    std::string mode = "q0";
    CMatrix mat;
};

struct ModeOccupation {
    std::string label = "q0";
    double n_occ = 0.0;
};

// Conventional-Markov rates. delta_width = 0 selects exact energy matching
// (Kronecker delta, detuning tolerance 1e-9 relative to the mode frequency);
// delta_width > 0 replaces the energy delta by a normalized Gaussian of that
// width.
RateTensor cm_rates(const SystemBasis& basis, const ModeCoupling& mode,
                    double delta_width);

// Temporally symmetrized rates at coarse-graining width omega_bar > 0:
//   2*pi * exp(-(w1-w2)^2/(8 wbar^2))
//       * sum_{+-} weight * g^{+-}_{l1 l1'} conj(g^{+-}_{l2 l2'})
//       * exp(-((w1+w2)/2 -+ w_q)^2/(2 wbar^2)) / (sqrt(2 pi) wbar)
// with w1 = w_{l1 l1'}, w2 = w_{l2 l2'}.
RateTensor sym_rates(const SystemBasis& basis, const ModeCoupling& mode,
                     double omega_bar);

// The omega_bar -> 0 limit of sym_rates with the normalized Gaussian replaced
// by exact Kronecker matching, i.e. the completed-collision form whose
// two-level assembly is the block-diagonal scattering matrix.
RateTensor sym_rates_limit(const SystemBasis& basis, const ModeCoupling& mode);

// Assembles the generator from a rate tensor:
//   L[(a1,a2),(a1',a2')] = 1/2 (P_{a1 a2, a1' a2'} - delta_{a2' a2} Q_{a1 a1'}) + h.c.
// with the out-kernel Q_{i a} = conj(sum_c P_{c c, i a}). This contraction of
// the diagonal pair makes trace preservation an identity for any tensor and
// reproduces the printed two-level matrices of both schemes entrywise.
Liouvillian assemble_liouvillian(const RateTensor& rates);

// Diagonal free part: entry -i(w_{a1} - w_{a2}) at vector index (a1,a2).
Liouvillian free_liouvillian(const SystemBasis& basis);

// Jump operators with the Gaussian energy filter obtained analytically from
// the time integral of e^{-i(w_{a1 a2} +- w_q) t} e^{-t^2/(4 tbar^2)} with
// the (2 pi tbar^2)^{-1/4} prefactor and tbar = 1/(2 omega_bar):
//   L^{+-}_{a1 a2} = g^{+-}_{a1 a2} * filter(w_{a1 a2} +- w_q, omega_bar).
// With this tbar the dissipator built from the operators coincides with
// assemble_liouvillian(sym_rates(...)) at every omega_bar, not only in the
// limit.
std::vector<JumpOperator> jump_operators(const SystemBasis& basis,
                                         const ModeCoupling& mode,
                                         double omega_bar);

// The analytic filter itself:
//   filter(D, wbar) = (2 pi tbar^2)^{-1/4} * 2 sqrt(pi) tbar * exp(-D^2 tbar^2),
//   tbar = 1/(2 wbar).
// Exposed so tests can pin it against numerical quadrature of the integral.
double jump_filter(double detuning, double omega_bar);

// GKSL dissipator sum_{q,+-} w (L rho L^dag - 1/2 {L^dag L, rho}) in
// vectorized form; w = N_q for absorption, N_q + 1 for emission.
Liouvillian lindblad_dissipator(std::span<const JumpOperator> jumps,
                                std::span<const ModeOccupation> occupations);

// Semiclassical rates P_{l l'} = P_{l l, l' l'}, validated real and >= 0.
RMatrix semiclassical_rates(const RateTensor& rates);

}  // namespace lk
