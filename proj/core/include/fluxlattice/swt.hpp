#pragma once

#include "fluxlattice/array.hpp"
#include "fluxlattice/numerics.hpp"

#include <optional>
#include <vector>

namespace fluxlattice {

/// Projectors onto the two-qubit subspace {|0>,|1>}_1 x |0>_2 x {|0>,|1>}_3
/// (rank 4): P0 in the bare product basis, P spanned by the matched dressed
/// eigenvectors, with complements Q0 = 1 - P0 and Q = 1 - P.
struct SwtProjectors {
    ComplexMatrix p0, p, q0, q;
    double overlap_trace = 0.0; ///< Tr(P0 P); must exceed 2 for a well-defined SWT
};

/// Effective two-qubit model of Schrieffer-Wolff reduced dynamics.
/// Basis order |q1 q3> in {00, 01, 10, 11}; Pauli index order (qubit1, qubit3).
struct EffectiveTwoQubit {
    enum class Provenance { numeric, perturbative };

    double omega1_ghz = 0.0; ///< renormalized qubit-1 gap
    double omega3_ghz = 0.0;
    PauliTensor2Q j;         ///< full coefficient tensor, GHz
    double g_eff_ghz = 0.0;  ///< |J_xx + J_yy|
    Provenance provenance = Provenance::numeric;

    // numeric-route diagnostics
    double min_overlap = 1.0;           ///< labeling quality of the matched subspace
    double spectrum_error_ghz = 0.0;    ///< max |eig(H_eff) - matched exact eigenvalue|
    double unitarity_defect = 0.0;      ///< ||P0 - U P U^dag||_max
    double sqrt_residual = 0.0;         ///< ||U U - (P0-Q0)(P-Q)||_max
    double max_residual_coeff_ghz = 0.0; ///< largest coefficient outside {II, zI, Iz, xx, yy, zz}
    bool gauge_flagged = false;         ///< residual coefficients exceed 1e-3 * g_eff

    ComplexMatrix hamiltonian() const { return j.reconstruct(); }
};

/// Builds P0/P for the standard 4-label subspace of a 3-qubit model.
/// Requires diagonalize_labeled to succeed (or force).
SwtProjectors swt_projectors(const ArrayModel& model, const DressedSpectrum& dressed);

/// Exact numerical Schrieffer-Wolff reduction: U = sqrt((P0-Q0)(P-Q))
/// evaluated through the equivalent Hermitian-PSD route
/// U = (P0 P + Q0 Q) [ (P0 P + Q0 Q)^dag (P0 P + Q0 Q) ]^{-1/2},
/// then H_eff = P0 U P H P U^dag P0 restricted to the 4-dim bare basis and
/// Pauli-decomposed. Eigenvalues of H_eff reproduce the four matched
/// eigenvalues of the full Hamiltonian (spectrum_error_ghz reports the
/// deviation; the defining property of the transformation).
EffectiveTwoQubit swt_exact(const ArrayModel& model, bool force = false);

/// Same reduction from an already-computed labeled diagonalization. The
/// result only depends on the spanned subspace, not on eigenvector phases.
EffectiveTwoQubit swt_exact(const ArrayModel& model, const DressedSpectrum& dressed);

/// Low-energy three-qubit model: bare gaps and the sigma_y sigma_y couplings
/// g_ij = (4 e^2/h) C^-1_ij Im<0|n_i|1> Im<0|n_j|1>. g13 is the direct
/// qubit-qubit term entering the perturbative reduction at first order.
struct LowEnergy3Q {
    double omega_t1_ghz = 0.0;
    double omega_t2_ghz = 0.0;
    double omega_t3_ghz = 0.0;
    double g12_ghz = 0.0;
    double g23_ghz = 0.0;
    double g13_ghz = 0.0;
};

/// Projects the array onto the non-interacting qubit subspace. Throws when a
/// spectrum violates the charge-element gauge contract.
LowEnergy3Q project_low_energy(const ArrayModel& model);

/// Second-order perturbative reduction with the coupler eliminated:
/// g_eff = |g12 g23 (1/Delta - 1/Sigma) + g13|, Delta = omega - omega2,
/// Sigma = omega + omega2, omega = (omega1 + omega3)/2; renormalized gaps
/// omega_i = omega + g_i2^2 (1/Delta - 1/Sigma). Diverges (throws) when
/// |Delta| < 1e-6 GHz; the exact route has no such divergence.
EffectiveTwoQubit swt_perturbative(const LowEnergy3Q& low);

struct SweepRow {
    double delta_fc_mhz = 0.0;
    bool reachable = true;
    double coupler_phi_ext = 0.5;
    double fc_ghz = 0.0; ///< realized bare coupler frequency
    double g_eff_numeric_ghz = 0.0;
    std::optional<double> g_eff_pert_ghz; ///< null at the divergence point
    double jxx_ghz = 0.0, jyy_ghz = 0.0, jzz_ghz = 0.0;
    double min_overlap = 1.0;
    double spectrum_error_ghz = 0.0; ///< SWT exactness defect of this row
};

struct SweepResult {
    std::vector<SweepRow> rows;
    double resonance_freq_ghz = 0.0;
    double q1_phi_ext = 0.5;
    double q3_phi_ext = 0.5;
};

struct SweepOptions {
    int kept_levels = 5;
    int dim_single = 60;
    double root_ftol_ghz = 1e-7;   ///< flux-inversion frequency tolerance
    double clamp_tol_mhz = 2.0;    ///< detunings this close below f_c(0.5) park at the sweet spot
    double resonance_freq_ghz = 0; ///< <= 0: qubit 1 sweet-spot f01 of the model
};

/// Coupling-versus-detuning sweep: qubit 1 pinned at its sweet spot, qubit 3
/// flux solved to resonance, and for each detuning the coupler f01 inverted
/// on the monotone branch phi_ext in [0.25, 0.5]; each row carries the exact
/// and perturbative reductions. Rows evaluate in parallel with deterministic
/// ordering. qubits = {qubit1, coupler, qubit3}.
SweepResult coupler_sweep(const std::vector<FluxQubitParams>& qubits,
                          const CouplingNetwork& network,
                          const std::vector<double>& detuning_mhz,
                          const SweepOptions& opts = {});

} // namespace fluxlattice
