#include "commands.hpp"

#include "fluxlattice/csv.hpp"
#include "fluxlattice/errors.hpp"
#include "fluxlattice/manifest.hpp"
#include "fluxlattice/measurement.hpp"
#include "fluxlattice/optimize.hpp"
#include "fluxlattice/svg.hpp"
#include "fluxlattice/swt.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

namespace fluxlattice::cli {

using nlohmann::json;

std::vector<double> parse_grid(const std::string& spec) {
    double a = 0.0, b = 0.0;
    int n = 0;
    char c1 = 0, c2 = 0;
    std::istringstream is(spec);
    if (!(is >> a >> c1 >> b >> c2 >> n) || c1 != ':' || c2 != ':' || !is.eof())
        throw InputError("grid: expected a:b:n, got '" + spec + "'");
    if (n < 1)
        throw InputError("grid: need at least one point");
    if (b < a)
        throw InputError("grid: end must be >= start");
    std::vector<double> g(n);
    if (n == 1) {
        g[0] = a;
        return g;
    }
    for (int i = 0; i < n; ++i)
        g[i] = a + (b - a) * i / (n - 1);
    return g;
}

FitKind parse_fit_kind(const std::string& kind) {
    if (kind == "spectrum")
        return FitKind::spectrum;
    if (kind == "crossing")
        return FitKind::crossing;
    if (kind == "dephasing")
        return FitKind::dephasing;
    throw InputError("fit: unknown kind '" + kind + "' (spectrum|crossing|dephasing)");
}

namespace {

void write_json_atomic(const std::filesystem::path& path, const json& j) {
    namespace fs = std::filesystem;
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out)
            throw InputError("cannot write '" + tmp.string() + "'");
        out << j.dump(2) << "\n";
    }
    fs::rename(tmp, path);
}

void finish_manifest(const CommonArgs& args, const std::string& command,
                     std::vector<std::string> outputs) {
    RunManifest m;
    m.command = command;
    m.config_hash = args.config.config_hash;
    m.tool_version = tool_version();
    m.timestamp_utc = utc_timestamp();
    m.outputs = std::move(outputs);
    write_manifest(args.out_dir, m);
}

SweepOptions sweep_options(const ProjectConfig& cfg) {
    SweepOptions o;
    o.kept_levels = cfg.numerics.kept_levels;
    o.dim_single = cfg.numerics.dim_single;
    return o;
}

/// model with qubit 3 and the coupler flux-tuned to qubit 1's operating
/// frequency (the coupling turned fully on)
struct ResonantModel {
    ArrayModel model;
    double resonance_freq_ghz = 0.0;
};

ResonantModel build_resonant_model(const ProjectConfig& cfg) {
    cfg.require_three_qubit_array();
    const int m = cfg.numerics.kept_levels;
    const int dim = cfg.numerics.dim_single;
    std::vector<FluxQubitParams> qs = cfg.qubit_params();

    auto f01_at = [&](const FluxQubitParams& p, double phi) {
        FluxQubitParams q = p;
        q.phi_ext = phi;
        return spectrum(q, 2, dim).f01();
    };
    BisectOptions bisect;
    bisect.ftol = 1e-7;

    ResonantModel out;
    out.resonance_freq_ghz = f01_at(qs[0], qs[0].phi_ext);
    for (int i : {1, 2}) {
        if (std::abs(f01_at(qs[i], qs[i].phi_ext) - out.resonance_freq_ghz) > 1e-7) {
            qs[i].phi_ext = find_root_bisect(
                [&](double phi) { return f01_at(qs[i], phi); }, 0.25, 0.5,
                out.resonance_freq_ghz, bisect);
        }
    }
    out.model = assemble(qs, cfg.network, m, dim);
    return out;
}

} // namespace

int cmd_spectrum(const CommonArgs& args, const std::string& qubit_name,
                 const std::vector<double>& phi_grid) {
    if (phi_grid.empty())
        throw InputError("spectrum: empty flux grid");
    const ProjectConfig& cfg = args.config;
    const int idx = cfg.qubit_index(qubit_name);
    const int n_levels = cfg.numerics.n_levels;

    std::vector<FluxSweepRow> rows =
        flux_sweep(cfg.qubits[idx].params, phi_grid, n_levels, cfg.numerics.dim_single);

    CsvTable table;
    table.header.push_back("phi_ext");
    for (int k = 1; k < n_levels; ++k)
        table.header.push_back("f0" + std::to_string(k) + "_GHz");
    for (const FluxSweepRow& r : rows) {
        std::vector<std::string> cells;
        cells.push_back(format_double(r.phi_ext));
        for (int k = 1; k < n_levels; ++k)
            cells.push_back(format_double(r.levels[k]));
        table.rows.push_back(std::move(cells));
    }
    const std::string csv_name = "spectrum_" + qubit_name + ".csv";
    write_csv_atomic(args.out_dir / csv_name, table);
    std::vector<std::string> outputs{csv_name};

    if (args.plot) {
        std::vector<PlotSeries> series;
        static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728"};
        for (int k = 1; k < n_levels; ++k) {
            PlotSeries s;
            s.label = "f0" + std::to_string(k);
            s.color = colors[(k - 1) % 4];
            for (const FluxSweepRow& r : rows)
                s.points.emplace_back(r.phi_ext, r.levels[k]);
            series.push_back(std::move(s));
        }
        PlotOptions po;
        po.title = "spectrum of " + qubit_name;
        po.x_label = "phi_ext (Phi0)";
        po.y_label = "f (GHz)";
        const std::string svg_name = "spectrum_" + qubit_name + ".svg";
        write_svg_line_plot(args.out_dir / svg_name, series, po);
        outputs.push_back(svg_name);
    }
    finish_manifest(args, "spectrum", std::move(outputs));
    return 0;
}

int cmd_coupling_sweep(const CommonArgs& args,
                       const std::optional<std::vector<double>>& grid_mhz) {
    const ProjectConfig& cfg = args.config;
    cfg.require_three_qubit_array();
    const std::vector<double> grid = grid_mhz ? *grid_mhz : cfg.sweep.grid();

    SweepResult res = coupler_sweep(cfg.qubit_params(), cfg.network, grid,
                                    sweep_options(cfg));

    double g_row0 = 0.0;
    for (const SweepRow& r : res.rows)
        if (r.reachable) {
            g_row0 = r.g_eff_numeric_ghz;
            break;
        }

    CsvTable table;
    table.header = {"delta_fc_MHz",  "g_eff_numeric_MHz", "g_eff_pert_MHz",
                    "Jxx_MHz",       "Jyy_MHz",           "Jzz_MHz",
                    "onoff_ratio_vs_row0"};
    for (const SweepRow& r : res.rows) {
        std::vector<std::string> cells(7);
        cells[0] = format_double(r.delta_fc_mhz);
        if (!r.reachable) {
            std::cerr << "warning: detuning " << r.delta_fc_mhz
                      << " MHz below the coupler band, row left empty\n";
            table.rows.push_back(std::move(cells));
            continue;
        }
        if (r.min_overlap < 0.5)
            std::cerr << "note: detuning " << r.delta_fc_mhz
                      << " MHz is resonant-mixed (min overlap " << r.min_overlap
                      << "), labels forced\n";
        cells[1] = format_double(r.g_eff_numeric_ghz * 1e3);
        if (r.g_eff_pert_ghz)
            cells[2] = format_double(*r.g_eff_pert_ghz * 1e3);
        cells[3] = format_double(r.jxx_ghz * 1e3);
        cells[4] = format_double(r.jyy_ghz * 1e3);
        cells[5] = format_double(r.jzz_ghz * 1e3);
        if (g_row0 > 0.0)
            cells[6] = format_double(r.g_eff_numeric_ghz / g_row0);
        table.rows.push_back(std::move(cells));
    }
    write_csv_atomic(args.out_dir / "coupling_sweep.csv", table);
    std::vector<std::string> outputs{"coupling_sweep.csv"};

    if (args.plot) {
        PlotSeries num{"numeric", "#1f77b4", false, {}};
        PlotSeries pert{"perturbative", "#d62728", true, {}};
        for (const SweepRow& r : res.rows) {
            if (!r.reachable)
                continue;
            num.points.emplace_back(r.delta_fc_mhz, r.g_eff_numeric_ghz * 1e3);
            pert.points.emplace_back(r.delta_fc_mhz,
                                     r.g_eff_pert_ghz ? *r.g_eff_pert_ghz * 1e3
                                                      : std::numeric_limits<double>::quiet_NaN());
        }
        PlotOptions po;
        po.title = "effective qubit-qubit coupling vs coupler detuning";
        po.x_label = "delta_fc (MHz)";
        po.y_label = "g_eff (MHz)";
        po.log_y = true;
        write_svg_line_plot(args.out_dir / "coupling_sweep.svg", {num, pert}, po);
        outputs.push_back("coupling_sweep.svg");
    }
    finish_manifest(args, "coupling-sweep", std::move(outputs));
    return 0;
}

int cmd_swap(const CommonArgs& args, double t_max_ns, double dt_ns) {
    const ProjectConfig& cfg = args.config;
    if (t_max_ns < 0.0 || dt_ns <= 0.0)
        throw InputError("swap: need t_max >= 0 and dt > 0");

    ResonantModel rm = build_resonant_model(cfg);
    const int m = rm.model.kept_levels;

    std::vector<double> t_grid;
    for (double t = 0.0; t <= t_max_ns + 1e-9; t += dt_ns)
        t_grid.push_back(t);

    PopulationTrace trace = evolve(rm.model, {1, 0, 0}, t_grid);
    const int i_q1 = rm.model.bare_index({1, 0, 0});
    const int i_q3 = rm.model.bare_index({0, 0, 1});

    CsvTable table;
    table.header = {"t_ns", "P_q1", "P_q3", "P_coupler_leakage"};
    std::vector<double> p_q1(t_grid.size());
    for (std::size_t ti = 0; ti < t_grid.size(); ++ti) {
        const auto row = trace.populations.row(static_cast<Eigen::Index>(ti));
        double leak = 0.0;
        for (int b = 0; b < rm.model.dim(); ++b)
            if ((b / m) % m > 0)
                leak += row[b];
        p_q1[ti] = row[i_q1];
        table.rows.push_back({format_double(t_grid[ti]), format_double(row[i_q1]),
                              format_double(row[i_q3]), format_double(leak)});
    }
    write_csv_atomic(args.out_dir / "swap.csv", table);
    std::vector<std::string> outputs{"swap.csv"};

    // swap time = first local minimum of the initial-state population
    std::optional<double> swap_time;
    for (std::size_t i = 1; i + 1 < p_q1.size(); ++i) {
        if (p_q1[i] <= p_q1[i - 1] && p_q1[i] <= p_q1[i + 1]) {
            swap_time = t_grid[i];
            break;
        }
    }
    if (swap_time)
        std::cout << "swap_time_ns=" << format_double(*swap_time) << "\n";
    else
        std::cout << "swap_time_ns=\n";

    if (args.plot) {
        PlotSeries s1{"P_q1", "#1f77b4", false, {}};
        PlotSeries s3{"P_q3", "#d62728", false, {}};
        PlotSeries sc{"coupler leakage", "#ff7f0e", true, {}};
        for (std::size_t ti = 0; ti < t_grid.size(); ++ti) {
            const auto row = trace.populations.row(static_cast<Eigen::Index>(ti));
            s1.points.emplace_back(t_grid[ti], p_q1[ti]);
            s3.points.emplace_back(t_grid[ti], row[i_q3]);
            double leak = 0.0;
            for (int b = 0; b < rm.model.dim(); ++b)
                if ((b / m) % m > 0)
                    leak += row[b];
            sc.points.emplace_back(t_grid[ti], leak);
        }
        PlotOptions po;
        po.title = "population transfer at the on point";
        po.x_label = "t (ns)";
        po.y_label = "population";
        write_svg_line_plot(args.out_dir / "swap.svg", {s1, s3, sc}, po);
        outputs.push_back("swap.svg");
    }
    finish_manifest(args, "swap", std::move(outputs));
    return 0;
}

namespace {

json fit_spectrum_report(const CommonArgs& args, const CsvTable& data,
                         const std::string& qubit_name) {
    const ProjectConfig& cfg = args.config;
    const int qi = qubit_name.empty() ? 0 : cfg.qubit_index(qubit_name);
    const int c_phi = data.require_column("phi_ext");
    const int c_f = data.require_column("f01_GHz");
    std::vector<std::pair<double, double>> rows;
    for (std::size_t r = 0; r < data.rows.size(); ++r)
        rows.emplace_back(data.as_double(r, c_phi), data.as_double(r, c_f));

    SpectrumFit fit = fit_spectrum(rows, cfg.qubits[qi].params, cfg.numerics.dim_single);
    json j;
    j["fitted"] = {{"EJ_GHz", fit.params.ej_ghz},
                   {"L_nH", fit.params.l_nh},
                   {"Csigma_fF", fit.params.csigma_ff}};
    j["rms_residual_MHz"] = fit.rms_residual_mhz;
    j["degenerate"] = fit.degenerate;
    j["iterations"] = fit.iterations;
    j["x0_qubit"] = cfg.qubits[qi].name;
    return j;
}

json fit_crossing_report(const CsvTable& data) {
    const int c_x = data.require_column("control");
    const int c_up = data.require_column("f_upper_GHz");
    const int c_lo = data.require_column("f_lower_GHz");
    CrossingData cd;
    for (std::size_t r = 0; r < data.rows.size(); ++r)
        cd.points.push_back({data.as_double(r, c_x), data.as_double(r, c_up),
                             data.as_double(r, c_lo)});

    // starting point from the data: the smallest gap locates the crossing
    double min_gap = std::numeric_limits<double>::infinity();
    double center0 = 0.0;
    for (const CrossingPoint& p : cd.points) {
        const double gap = p.f_upper_ghz - p.f_lower_ghz;
        if (gap < min_gap) {
            min_gap = gap;
            center0 = p.control;
        }
    }
    const CrossingPoint& first = cd.points.front();
    const CrossingPoint& last = cd.points.back();
    auto edge_delta = [&](const CrossingPoint& p) {
        const double gap = p.f_upper_ghz - p.f_lower_ghz;
        return std::sqrt(std::max(gap * gap - min_gap * min_gap, 0.0));
    };
    double denom = std::abs(first.control - center0) + std::abs(last.control - center0);
    const double slope0 =
        denom > 0.0 ? (edge_delta(first) + edge_delta(last)) / denom : 1.0;

    CrossingFit fit = fit_avoided_crossing(cd, 0.5 * min_gap, center0, slope0);
    json j;
    j["g_MHz"] = fit.g_ghz * 1e3;
    j["g_stderr_MHz"] = fit.g_stderr_ghz * 1e3;
    j["center"] = fit.center;
    j["slope_GHz_per_unit"] = fit.slope_ghz;
    j["rms_residual_MHz"] = fit.rms_residual_ghz * 1e3;
    j["ill_conditioned"] = fit.ill_conditioned;
    return j;
}

json fit_dephasing_report(const CsvTable& data) {
    const int c_f = data.require_column("f_d_GHz");
    const int c_a = data.require_column("A_port");
    const int c_g = data.require_column("gamma_per_us");
    const int c_ch = data.column("channel");

    std::map<std::string, std::vector<DephasingPoint>> channels;
    for (std::size_t r = 0; r < data.rows.size(); ++r) {
        const std::string ch = c_ch >= 0 ? data.rows[r][c_ch] : "all";
        channels[ch].push_back({data.as_double(r, c_f), data.as_double(r, c_a),
                                data.as_double(r, c_g)});
    }

    json j;
    json per_channel = json::object();
    std::vector<std::pair<std::string, double>> etas;
    for (const auto& [ch, pts] : channels) {
        // starting point from the data: the response centroid sits at f_r
        // (the lineshape is even), the strongest point near f_r + chi/2
        double wsum = 0.0, centroid = 0.0, g_peak = 0.0, f_peak = pts.front().f_d_ghz;
        double a_at_peak = 1.0;
        for (const DephasingPoint& p : pts) {
            wsum += p.gamma_per_us;
            centroid += p.gamma_per_us * p.f_d_ghz;
            if (p.gamma_per_us > g_peak) {
                g_peak = p.gamma_per_us;
                f_peak = p.f_d_ghz;
                a_at_peak = p.a_port;
            }
        }
        if (wsum <= 0.0)
            throw InputError("fit: dephasing data has no positive rates");
        centroid /= wsum;

        DispersiveParams x0;
        x0.f_r_ghz = centroid;
        x0.chi_mhz = std::max(2.0 * std::abs(f_peak - centroid) * 1e3, 0.1);
        x0.kappa_mhz = 0.25 * x0.chi_mhz;
        x0.eta = 1.0;
        const double model1 = gamma_m({x0.f_r_ghz, x0.kappa_mhz, x0.chi_mhz, 1.0},
                                      f_peak, a_at_peak);
        if (model1 > 0.0)
            x0.eta = g_peak / model1;

        DephasingFit fit = fit_dephasing(pts, x0);
        per_channel[ch] = {{"f_r_GHz", fit.pooled.f_r_ghz},
                           {"kappa_MHz", fit.pooled.kappa_mhz},
                           {"chi_MHz", fit.pooled.chi_mhz},
                           {"eta", fit.pooled.eta},
                           {"eta_spread", fit.eta_spread},
                           {"rms_residual_per_us", fit.rms_residual},
                           {"sideband_coverage", fit.sideband_coverage},
                           {"amplitudes", fit.per_amplitude.size()}};
        etas.emplace_back(ch, fit.pooled.eta);
    }
    j["channels"] = per_channel;
    if (etas.size() == 2) {
        j["isolation_dB"] = std::abs(isolation_db(etas[0].second, etas[1].second));
        j["isolation_channels"] = {etas[0].first, etas[1].first};
    }
    return j;
}

} // namespace

int cmd_fit(const CommonArgs& args, FitKind kind,
            const std::filesystem::path& data_path, const std::string& qubit_name) {
    CsvTable data = read_csv(data_path);

    json j;
    j["schema"] = "1";
    j["input"] = {{"path", data_path.string()},
                  {"rows", data.rows.size()}};
    {
        std::ifstream in(data_path);
        std::stringstream ss;
        ss << in.rdbuf();
        j["input"]["hash"] = fnv1a_hex(ss.str());
    }
    j["config_hash"] = args.config.config_hash;

    std::string name;
    switch (kind) {
    case FitKind::spectrum:
        j["kind"] = "spectrum";
        j["result"] = fit_spectrum_report(args, data, qubit_name);
        name = "fit_spectrum.json";
        break;
    case FitKind::crossing:
        j["kind"] = "crossing";
        j["result"] = fit_crossing_report(data);
        name = "fit_crossing.json";
        break;
    case FitKind::dephasing:
        j["kind"] = "dephasing";
        j["result"] = fit_dephasing_report(data);
        name = "fit_dephasing.json";
        break;
    }
    write_json_atomic(args.out_dir / name, j);
    finish_manifest(args, "fit", {name});
    return 0;
}

int cmd_report(const CommonArgs& args) {
    const ProjectConfig& cfg = args.config;
    cfg.require_three_qubit_array();

    json j;
    j["schema"] = "1";
    j["config_hash"] = cfg.config_hash;

    json sweet = json::object();
    for (const NamedQubit& q : cfg.qubits) {
        FluxQubitParams p = q.params;
        p.phi_ext = 0.5;
        sweet[q.name] = spectrum(p, 2, cfg.numerics.dim_single).f01();
    }
    j["sweet_spot_f01_GHz"] = sweet;

    SweepResult res = coupler_sweep(cfg.qubit_params(), cfg.network,
                                    cfg.sweep.grid(), sweep_options(cfg));
    const SweepRow* off = nullptr;
    const SweepRow* on = nullptr;
    double best_abs = std::numeric_limits<double>::infinity();
    double jzz_bound = 0.0;
    for (const SweepRow& r : res.rows) {
        if (!r.reachable)
            continue;
        if (!off)
            off = &r;
        if (std::abs(r.delta_fc_mhz) < best_abs) {
            best_abs = std::abs(r.delta_fc_mhz);
            on = &r;
        }
        const double jplus = std::abs(r.jxx_ghz + r.jyy_ghz);
        if (jplus > 0.0)
            jzz_bound = std::max(jzz_bound, std::abs(r.jzz_ghz) / jplus);
    }
    if (!on || !off)
        throw NumericError("report: no reachable sweep rows");

    j["resonance_freq_GHz"] = res.resonance_freq_ghz;
    j["g_max_MHz"] = on->g_eff_numeric_ghz * 1e3;
    j["g_off_kHz"] = off->g_eff_numeric_ghz * 1e6;
    j["off_detuning_MHz"] = off->delta_fc_mhz;
    if (off->g_eff_numeric_ghz > 0.0)
        j["onoff_ratio"] = on->g_eff_numeric_ghz / off->g_eff_numeric_ghz;
    else
        j["onoff_ratio"] = nullptr;
    j["Jzz_over_Jplus_bound"] = jzz_bound;
    j["zz_shift_prediction_kHz"] = {{"value", 4.0 * off->jzz_ghz * 1e6},
                                    {"note", "model-derived: 4 J_zz at the off point"}};

    std::optional<double> swap_time;
    if (on->g_eff_numeric_ghz > 0.0) {
        const double t_est = 1.0 / (4.0 * on->g_eff_numeric_ghz); // ns
        ResonantModel rm = build_resonant_model(cfg);
        std::vector<double> t_grid;
        const double t_max = 2.5 * t_est;
        const double dt = t_max / 2500.0;
        for (double t = 0.0; t <= t_max; t += dt)
            t_grid.push_back(t);
        PopulationTrace trace = evolve(rm.model, {1, 0, 0}, t_grid);
        const int i_q1 = rm.model.bare_index({1, 0, 0});
        for (std::size_t i = 1; i + 1 < t_grid.size(); ++i) {
            const double prev = trace.populations(static_cast<Eigen::Index>(i - 1), i_q1);
            const double cur = trace.populations(static_cast<Eigen::Index>(i), i_q1);
            const double next = trace.populations(static_cast<Eigen::Index>(i + 1), i_q1);
            if (cur <= prev && cur <= next) {
                swap_time = t_grid[i];
                break;
            }
        }
    }
    if (swap_time)
        j["swap_time_ns"] = *swap_time;
    else
        j["swap_time_ns"] = nullptr;

    write_json_atomic(args.out_dir / "report.json", j);
    finish_manifest(args, "report", {"report.json"});
    return 0;
}

} // namespace fluxlattice::cli
