#pragma once

#include "fluxlattice/config.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace fluxlattice::cli {

/// "a:b:n" -> n equally spaced values from a to b inclusive.
std::vector<double> parse_grid(const std::string& spec);

struct CommonArgs {
    ProjectConfig config;
    std::filesystem::path out_dir;
    bool plot = false;
};

int cmd_spectrum(const CommonArgs& args, const std::string& qubit_name,
                 const std::vector<double>& phi_grid);
int cmd_coupling_sweep(const CommonArgs& args,
                       const std::optional<std::vector<double>>& grid_mhz);
int cmd_swap(const CommonArgs& args, double t_max_ns, double dt_ns);

enum class FitKind { spectrum, crossing, dephasing };
FitKind parse_fit_kind(const std::string& kind); ///< throws InputError

int cmd_fit(const CommonArgs& args, FitKind kind,
            const std::filesystem::path& data_path, const std::string& qubit_name);
int cmd_report(const CommonArgs& args);

} // namespace fluxlattice::cli
