#pragma once

#include "fluxlattice/numerics.hpp"
#include "fluxlattice/qubit.hpp"

#include <optional>
#include <vector>

namespace fluxlattice {

enum class NetworkMode { maxwell, effective };

/// Capacitance data of the array. shunt_ff holds per-qubit C_Sigma;
/// couplers_ff(i,j) the coupling capacitance between qubits i and j
/// (symmetric, zero diagonal, in fF).
struct CouplingNetwork {
    NetworkMode mode = NetworkMode::effective;
    std::vector<double> shunt_ff;
    RealMatrix couplers_ff;

    void validate() const;
};

/// Inverse-capacitance coefficients C^-1_ij in fF^-1.
/// maxwell mode: assemble the node capacitance matrix
///   C_ii = C_Sigma,i + sum_j couplers(i,j), C_ij = -couplers(i,j)
/// and invert (must be symmetric positive definite).
/// effective mode: the weak-coupling form
///   C^-1_ii = 1 / C_Sigma,i, C^-1_ij = couplers(i,j) / (C_Sigma,i C_Sigma,j).
RealMatrix cinv_coefficients(const CouplingNetwork& network);

/// The coupled array in the tensor basis of per-qubit eigenstates:
/// H/h = sum_i diag(levels_i) + sum_{i<j} (4 e^2/h) C^-1_ij n_i n_j,
/// with each qubit truncated to its lowest kept_levels eigenstates.
/// Qubit index 0 is data qubit 1, index 1 the coupler, index 2 data qubit 3.
struct ArrayModel {
    std::vector<FluxQubitParams> qubits;
    CouplingNetwork network;
    RealMatrix cinv;
    std::vector<QubitSpectrum> spectra;
    int kept_levels = 0;
    ComplexMatrix h_full;

    int n_qubits() const { return static_cast<int>(qubits.size()); }
    int dim() const { return static_cast<int>(h_full.rows()); }
    /// tensor index of a bare product label (n_0, ..., n_{N-1})
    int bare_index(const std::vector<int>& label) const;
    double bare_f01(int qubit) const { return spectra[qubit].f01(); }
};

/// Solves each qubit at dim_single (with convergence doubling), truncates to
/// kept_levels, and assembles h_full. In maxwell mode the single-qubit
/// charging energy is recomputed from C^-1_ii so the kinetic term is not
/// double counted.
ArrayModel assemble(const std::vector<FluxQubitParams>& qubits,
                    const CouplingNetwork& network, int kept_levels = 5,
                    int dim_single = 60);

/// Same, from already-solved per-qubit spectra (must be gauge fixed and hold
/// at least kept_levels levels each).
ArrayModel assemble_from_spectra(std::vector<FluxQubitParams> qubits,
                                 const CouplingNetwork& network,
                                 std::vector<QubitSpectrum> spectra,
                                 int kept_levels);

struct LabelAssignment {
    std::vector<int> label;
    int eigen_index = -1;
    double overlap = 0.0; ///< squared overlap with the bare product state
};

/// Full spectrum of h_full with the requested bare labels greedily assigned
/// to dressed eigenvectors by descending squared overlap (injective).
struct DressedSpectrum {
    RealVector values; ///< all eigenvalues, ascending, GHz
    ComplexMatrix vectors;
    std::vector<LabelAssignment> labels;
    double min_overlap = 1.0;
    bool flagged = false; ///< true when any assignment overlap < 0.5
};

/// Throws "subspace not adiabatically connected" when an assignment overlap
/// drops below 0.5, unless force is set (the caller then inspects flagged /
/// min_overlap).
DressedSpectrum diagonalize_labeled(const ArrayModel& model,
                                    const std::vector<std::vector<int>>& subspace,
                                    bool force = false);

struct PopulationTrace {
    std::vector<double> t_ns;
    RealMatrix populations; ///< row t, column = bare basis index
};

/// Spectral time evolution |psi(t)> = sum_k e^{-i 2 pi E_k t} |k><k|psi0>
/// (E in GHz, t in ns); exact for the time-independent Hamiltonian.
PopulationTrace evolve(const ComplexMatrix& h, const ComplexVector& psi0,
                       const std::vector<double>& t_ns);

/// Evolution of the full array from a bare product label.
PopulationTrace evolve(const ArrayModel& model, const std::vector<int>& initial_label,
                       const std::vector<double>& t_ns);

} // namespace fluxlattice
