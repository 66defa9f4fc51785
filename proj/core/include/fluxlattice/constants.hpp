#pragma once

// Physical constants (CODATA 2018 exact values) and the unit conversions
// used throughout: energies are frequencies in GHz (f = E/h), times in ns,
// inductance in nH, capacitance in fF, flux in units of Phi0.

namespace fluxlattice::constants {

inline constexpr double planck_h = 6.62607015e-34;          // J s
inline constexpr double elementary_charge = 1.602176634e-19; // C
inline constexpr double flux_quantum = 2.067833848e-15;      // Wb
inline constexpr double boltzmann_k = 1.380649e-23;          // J / K
inline constexpr double pi = 3.14159265358979323846;

/// Charging energy e^2 / (2 C h) in GHz for C in fF.
inline constexpr double charging_energy_ghz(double csigma_ff) {
    return elementary_charge * elementary_charge /
           (2.0 * csigma_ff * 1e-15 * planck_h) * 1e-9;
}

/// Inductive energy (Phi0 / 2 pi)^2 / (L h) in GHz for L in nH.
inline constexpr double inductive_energy_ghz(double l_nh) {
    const double phi0_over_2pi = flux_quantum / (2.0 * pi);
    return phi0_over_2pi * phi0_over_2pi / (l_nh * 1e-9 * planck_h) * 1e-9;
}

/// Charge-charge coupling prefactor 4 e^2 / h expressed in GHz per fF^-1,
/// i.e. the pair term C^-1_ij Q_i Q_j with Q = 2e n becomes
/// charge_coupling_ghz_per_inv_ff * cinv_ff * n_i n_j in GHz.
inline constexpr double charge_coupling_ghz_per_inv_ff =
    4.0 * elementary_charge * elementary_charge / planck_h * 1e15 * 1e-9;

} // namespace fluxlattice::constants
