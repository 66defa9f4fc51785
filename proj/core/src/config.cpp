#include "fluxlattice/config.hpp"
#include "fluxlattice/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace fluxlattice {

using nlohmann::json;

std::vector<double> SweepSpec::grid() const {
    if (points < 2)
        return {start_mhz};
    std::vector<double> g(points);
    for (int i = 0; i < points; ++i)
        g[i] = start_mhz + (stop_mhz - start_mhz) * i / (points - 1);
    return g;
}

int ProjectConfig::qubit_index(const std::string& name) const {
    for (std::size_t i = 0; i < qubits.size(); ++i)
        if (qubits[i].name == name)
            return static_cast<int>(i);
    throw InputError("config: unknown qubit '" + name + "'");
}

std::vector<FluxQubitParams> ProjectConfig::qubit_params() const {
    std::vector<FluxQubitParams> out;
    out.reserve(qubits.size());
    for (const NamedQubit& q : qubits)
        out.push_back(q.params);
    return out;
}

void ProjectConfig::require_three_qubit_array() const {
    if (qubits.size() != 3)
        throw InputError("config: this command needs exactly three qubits "
                         "(data qubit, coupler, data qubit, in order)");
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

namespace {

double require_positive(const json& j, const char* key, const std::string& ctx) {
    if (!j.contains(key))
        throw InputError("config: " + ctx + " is missing '" + key + "'");
    double v = j.at(key).get<double>();
    if (!(v > 0.0))
        throw InputError("config: " + ctx + " field '" + key + "' must be positive");
    return v;
}

} // namespace

ProjectConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("config: cannot open '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string bytes = buffer.str();

    json j;
    try {
        j = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw InputError("config: JSON parse error in '" + path.string() +
                         "': " + e.what());
    }

    ProjectConfig cfg;
    cfg.source_path = path;
    cfg.config_hash = fnv1a_hex(bytes);
    cfg.schema = j.value("schema", "1");

    if (!j.contains("qubits") || !j["qubits"].is_array() || j["qubits"].empty())
        throw InputError("config: 'qubits' must be a non-empty array");
    std::set<std::string> names;
    for (const json& q : j["qubits"]) {
        NamedQubit nq;
        nq.name = q.value("name", "");
        if (nq.name.empty())
            throw InputError("config: every qubit needs a 'name'");
        if (!names.insert(nq.name).second)
            throw InputError("config: duplicate qubit name '" + nq.name + "'");
        const std::string ctx = "qubit '" + nq.name + "'";
        nq.params.ej_ghz = require_positive(q, "EJ_GHz", ctx);
        nq.params.l_nh = require_positive(q, "L_nH", ctx);
        nq.params.csigma_ff = require_positive(q, "Csigma_fF", ctx);
        nq.params.phi_ext = q.value("phi_ext_phi0", 0.5);
        cfg.qubits.push_back(std::move(nq));
    }

    const int n = static_cast<int>(cfg.qubits.size());
    cfg.network.shunt_ff.resize(n);
    for (int i = 0; i < n; ++i)
        cfg.network.shunt_ff[i] = cfg.qubits[i].params.csigma_ff;
    cfg.network.couplers_ff = RealMatrix::Zero(n, n);

    if (j.contains("network")) {
        const json& net = j["network"];
        const std::string mode = net.value("mode", "effective");
        if (mode == "effective")
            cfg.network.mode = NetworkMode::effective;
        else if (mode == "maxwell")
            cfg.network.mode = NetworkMode::maxwell;
        else
            throw InputError("config: network.mode must be 'effective' or 'maxwell'");
        for (const json& c : net.value("couplers", json::array())) {
            const std::string a = c.value("a", "");
            const std::string b = c.value("b", "");
            const int ia = cfg.qubit_index(a);
            const int ib = cfg.qubit_index(b);
            if (ia == ib)
                throw InputError("config: coupler endpoints must differ");
            const double v = require_positive(c, "C_fF", "coupler " + a + "-" + b);
            cfg.network.couplers_ff(ia, ib) = v;
            cfg.network.couplers_ff(ib, ia) = v;
        }
    }
    cfg.network.validate();

    if (j.contains("numerics")) {
        const json& num = j["numerics"];
        cfg.numerics.dim_single = num.value("dim_single", cfg.numerics.dim_single);
        cfg.numerics.kept_levels = num.value("kept_levels", cfg.numerics.kept_levels);
        cfg.numerics.n_levels = num.value("n_levels", cfg.numerics.n_levels);
        if (cfg.numerics.dim_single < 10 || cfg.numerics.kept_levels < 3 ||
            cfg.numerics.n_levels < 1)
            throw InputError("config: numerics block has out-of-range values");
    }
    if (j.contains("sweep")) {
        const json& sw = j["sweep"];
        cfg.sweep.start_mhz = sw.value("delta_fc_start_MHz", cfg.sweep.start_mhz);
        cfg.sweep.stop_mhz = sw.value("delta_fc_stop_MHz", cfg.sweep.stop_mhz);
        cfg.sweep.points = sw.value("points", cfg.sweep.points);
        if (cfg.sweep.points < 1 || cfg.sweep.stop_mhz < cfg.sweep.start_mhz)
            throw InputError("config: sweep block has out-of-range values");
    }
    if (j.contains("io"))
        cfg.io.out_dir = j["io"].value("out_dir", cfg.io.out_dir);
    return cfg;
}

} // namespace fluxlattice
