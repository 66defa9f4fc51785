#include "commands.hpp"

#include "fluxlattice/errors.hpp"
#include "fluxlattice/manifest.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace fluxlattice;

int main(int argc, char** argv) {
    CLI::App app{"fluxlattice: coupled flux-qubit array simulator and analysis toolkit"};
    app.set_version_flag("--version", tool_version());
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    bool plot = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "project config JSON")->required();
        sub->add_option("--out", out_override, "output directory (default: io.out_dir)");
        sub->add_flag("--plot", plot, "emit SVG figures next to the CSV");
    };

    CLI::App* spectrum = app.add_subcommand("spectrum", "single-qubit levels vs external flux");
    std::string qubit_name;
    std::string grid_spec = "0.4:0.6:41";
    add_common(spectrum);
    spectrum->add_option("--qubit", qubit_name, "qubit name from the config")->required();
    spectrum->add_option("--grid", grid_spec, "flux grid a:b:n in Phi0");

    CLI::App* sweep = app.add_subcommand("coupling-sweep",
                                         "effective g vs coupler detuning (exact and perturbative)");
    std::string sweep_grid;
    add_common(sweep);
    sweep->add_option("--grid", sweep_grid, "detuning grid a:b:n in MHz (default: config sweep block)");

    CLI::App* swap = app.add_subcommand("swap", "population transfer at the on point");
    double t_max = 400.0, dt = 0.4;
    add_common(swap);
    swap->add_option("--tmax", t_max, "evolution span in ns");
    swap->add_option("--dt", dt, "time step in ns");

    CLI::App* fit = app.add_subcommand("fit", "least-squares fits of measurement data");
    std::string fit_kind, data_path, fit_qubit;
    add_common(fit);
    fit->add_option("--kind", fit_kind, "spectrum | crossing | dephasing")->required();
    fit->add_option("--data", data_path, "input CSV")->required();
    fit->add_option("--qubit", fit_qubit, "config qubit used as the spectrum-fit start");

    CLI::App* report = app.add_subcommand("report", "headline numbers in one JSON");
    add_common(report);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e); // --help / --version
        app.exit(e);
        return 2;
    }

    try {
        cli::CommonArgs args;
        args.config = load_config(config_path);
        args.plot = plot;
        args.out_dir = out_override.empty() ? args.config.io.out_dir : out_override;

        if (spectrum->parsed())
            return cli::cmd_spectrum(args, qubit_name, cli::parse_grid(grid_spec));
        if (sweep->parsed()) {
            std::optional<std::vector<double>> grid;
            if (!sweep_grid.empty())
                grid = cli::parse_grid(sweep_grid);
            return cli::cmd_coupling_sweep(args, grid);
        }
        if (swap->parsed())
            return cli::cmd_swap(args, t_max, dt);
        if (fit->parsed())
            return cli::cmd_fit(args, cli::parse_fit_kind(fit_kind), data_path, fit_qubit);
        if (report->parsed())
            return cli::cmd_report(args);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
