#pragma once

#include "fluxlattice/numerics.hpp"

#include <utility>
#include <vector>

namespace fluxlattice {

/// Lumped-element description of one generalized flux qubit: a Josephson
/// junction shunted by a linear inductance L and total capacitance C_Sigma,
/// biased by an external flux phi_ext in units of Phi0 (1-periodic).
struct FluxQubitParams {
    double ej_ghz = 0.0;
    double l_nh = 0.0;
    double csigma_ff = 0.0;
    double phi_ext = 0.5;

    void validate() const; ///< throws InputError unless EJ, L, C > 0
};

struct DerivedEnergies {
    double ec_ghz = 0.0;  ///< e^2 / (2 C h)
    double el_ghz = 0.0;  ///< (Phi0/2pi)^2 / (L h)
    double phi_zpf = 0.0; ///< (2 EC / EL)^(1/4)
    double n_zpf = 0.0;   ///< 1 / (2 phi_zpf), so phi_zpf * n_zpf = 1/2
};

/// EC/EL and zero-point amplitudes of the quadratic part. The optional
/// override replaces C_Sigma when charging energy comes from a full inverse
/// capacitance matrix (maxwell-mode array assembly).
DerivedEnergies derive_energies(const FluxQubitParams& p, double csigma_override_ff = 0.0);

/// H/h = 4 EC n^2 + (EL/2) phi^2
///       - EJ [cos(2 pi phi_ext) cos(phi) + sin(2 pi phi_ext) sin(phi)]
/// in the harmonic-oscillator basis of the quadratic part, with
/// phi = phi_zpf (a + a^dag) and n = i n_zpf (a^dag - a). cos/sin of phi are
/// evaluated by spectral decomposition, exact in the truncated basis.
/// dim >= 10 required; smaller truncations are rejected as untrustworthy.
ComplexMatrix build_hamiltonian(const FluxQubitParams& p, int dim,
                                double csigma_override_ff = 0.0);

/// Converged low-lying spectrum of one qubit with gauge-fixed matrix elements.
struct QubitSpectrum {
    std::vector<double> levels; ///< GHz, ground-referenced (levels[0] = 0)
    ComplexMatrix charge_elems; ///< <m| n |k>, Hermitian, Im<0|n|1> >= 0, Re<0|n|1> = 0
    ComplexMatrix flux_elems;   ///< <m| phi |k>
    int truncation = 0;         ///< harmonic basis size that certified convergence

    double f01() const { return levels.size() > 1 ? levels[1] : 0.0; }
};

struct SpectrumOptions {
    int max_dim = 960;             ///< doubling cap
    double level_tol_ghz = 1e-6;   ///< kept-level shift allowed under dim doubling
    double csigma_override_ff = 0; ///< 0 = use p.csigma_ff
    bool converge = true;          ///< false: single solve at dim, no doubling
};

/// Solves at dim and 2*dim and doubles until every kept level moves by less
/// than level_tol_ghz, up to max_dim. Requires n_levels <= dim / 3.
QubitSpectrum spectrum(const FluxQubitParams& p, int n_levels, int dim = 60,
                       const SpectrumOptions& opts = {});

struct FluxSweepRow {
    double phi_ext = 0.0;
    std::vector<double> levels; ///< ground-referenced GHz
};

/// One converged spectrum per grid point, evaluated grid-point-parallel with
/// deterministic row order.
std::vector<FluxSweepRow> flux_sweep(const FluxQubitParams& p,
                                     const std::vector<double>& phi_grid,
                                     int n_levels, int dim = 60);

/// Golden-rule energy relaxation for inductive loss with quality factor Q:
/// 1/T1 = 8 pi^3 EL / Q * |<0|phi|1>|^2 * (1 + coth(h f / 2 kB T)),
/// evaluated in GHz = 1/ns; returns T1 in microseconds. At T = 0 the
/// thermal bracket is exactly 2.
double t1_golden_rule_us(const FluxQubitParams& p, double q_factor,
                         double temperature_k, int dim = 60);

struct SpectrumFit {
    FluxQubitParams params;
    double rms_residual_mhz = 0.0;
    bool degenerate = false; ///< under-determined input (too few / clustered points)
    int iterations = 0;
};

/// Least-squares fit of (EJ, L, C_Sigma) to measured (phi_ext, f01) rows via
/// Nelder-Mead; phi_ext is taken from each data row.
SpectrumFit fit_spectrum(const std::vector<std::pair<double, double>>& data,
                         const FluxQubitParams& x0, int dim = 60);

} // namespace fluxlattice
