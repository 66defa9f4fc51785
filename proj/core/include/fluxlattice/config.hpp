#pragma once

#include "fluxlattice/array.hpp"
#include "fluxlattice/qubit.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace fluxlattice {

struct NamedQubit {
    std::string name;
    FluxQubitParams params;
};

struct NumericsConfig {
    int dim_single = 60;
    int kept_levels = 5;
    int n_levels = 4;
};

struct SweepSpec {
    double start_mhz = -252.0;
    double stop_mhz = 30.0;
    int points = 48;

    std::vector<double> grid() const;
};

struct IoConfig {
    std::string out_dir = "out";
};

/// Parsed project configuration. Field names in the JSON carry explicit
/// units (EJ_GHz, L_nH, Csigma_fF, phi_ext_phi0, C_fF) to keep the mixed
/// GHz/nH/fF/aF parameter set unambiguous: 5 aF is written 0.005.
struct ProjectConfig {
    std::string schema;
    std::vector<NamedQubit> qubits;
    CouplingNetwork network;
    NumericsConfig numerics;
    SweepSpec sweep;
    IoConfig io;

    std::filesystem::path source_path;
    std::string config_hash; ///< FNV-1a of the config file bytes, hex

    int qubit_index(const std::string& name) const; ///< throws InputError
    std::vector<FluxQubitParams> qubit_params() const;
    /// three-qubit convention checks: {qubit 1, coupler, qubit 3} in order
    void require_three_qubit_array() const;
};

ProjectConfig load_config(const std::filesystem::path& path);

/// FNV-1a 64-bit of a byte string, lowercase hex.
std::string fnv1a_hex(const std::string& bytes);

} // namespace fluxlattice
