#include "fluxlattice/qubit.hpp"
#include "fluxlattice/constants.hpp"
#include "fluxlattice/errors.hpp"
#include "fluxlattice/optimize.hpp"
#include "fluxlattice/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace fluxlattice {

namespace cst = constants;

void FluxQubitParams::validate() const {
    if (!(ej_ghz > 0.0) || !(l_nh > 0.0) || !(csigma_ff > 0.0))
        throw InputError("FluxQubitParams: EJ, L and C_Sigma must be positive");
}

DerivedEnergies derive_energies(const FluxQubitParams& p, double csigma_override_ff) {
    p.validate();
    const double c = csigma_override_ff > 0.0 ? csigma_override_ff : p.csigma_ff;
    DerivedEnergies d;
    d.ec_ghz = cst::charging_energy_ghz(c);
    d.el_ghz = cst::inductive_energy_ghz(p.l_nh);
    d.phi_zpf = std::pow(2.0 * d.ec_ghz / d.el_ghz, 0.25);
    d.n_zpf = 0.5 / d.phi_zpf;
    return d;
}

namespace {

// ladder operator a in the number basis
RealMatrix ladder(int dim) {
    RealMatrix a = RealMatrix::Zero(dim, dim);
    for (int m = 1; m < dim; ++m)
        a(m - 1, m) = std::sqrt(static_cast<double>(m));
    return a;
}

struct QubitOperators {
    ComplexMatrix h;
    ComplexMatrix n_op;
    ComplexMatrix phi_op;
};

QubitOperators build_operators(const FluxQubitParams& p, int dim, double csigma_override_ff) {
    if (dim < 10)
        throw InputError("build_hamiltonian: basis dim < 10 gives untrustworthy truncation");
    const DerivedEnergies d = derive_energies(p, csigma_override_ff);

    RealMatrix a = ladder(dim);
    ComplexMatrix phi = (d.phi_zpf * (a + a.transpose())).cast<Complex>();
    ComplexMatrix n = Complex(0.0, d.n_zpf) * (a.transpose() - a).cast<Complex>();

    // cos(phi), sin(phi) from the unitary exp(i phi)
    ComplexMatrix e = unitary_function_of_hermitian(phi, 1.0);
    ComplexMatrix cos_phi = 0.5 * (e + e.adjoint());
    ComplexMatrix sin_phi = (e - e.adjoint()) / Complex(0.0, 2.0);

    const double angle = 2.0 * cst::pi * p.phi_ext;
    ComplexMatrix h = 4.0 * d.ec_ghz * (n * n) + 0.5 * d.el_ghz * (phi * phi) -
                      p.ej_ghz * (std::cos(angle) * cos_phi + std::sin(angle) * sin_phi);
    h = 0.5 * (h + h.adjoint());
    return {std::move(h), std::move(n), std::move(phi)};
}

struct SolvedQubit {
    std::vector<double> levels; // ground-referenced
    ComplexMatrix charge_elems;
    ComplexMatrix flux_elems;
};

SolvedQubit solve_at_dim(const FluxQubitParams& p, int n_levels, int dim,
                         double csigma_override_ff) {
    QubitOperators ops = build_operators(p, dim, csigma_override_ff);
    EigenDecomposition ed = eigh(ops.h);

    // gauge: largest-magnitude component of each kept eigenvector real positive
    ComplexMatrix v = ed.vectors.leftCols(n_levels);
    for (int k = 0; k < n_levels; ++k) {
        Eigen::Index imax = 0;
        v.col(k).cwiseAbs().maxCoeff(&imax);
        Complex z = v(imax, k);
        v.col(k) *= std::conj(z) / std::abs(z);
    }
    ComplexMatrix n_el = v.adjoint() * ops.n_op * v;
    if (n_levels > 1 && n_el(0, 1).imag() < 0.0) {
        v.col(1) *= -1.0;
        n_el = v.adjoint() * ops.n_op * v;
    }

    SolvedQubit out;
    out.levels.resize(n_levels);
    for (int k = 0; k < n_levels; ++k)
        out.levels[k] = ed.values[k] - ed.values[0];
    out.charge_elems = std::move(n_el);
    out.flux_elems = v.adjoint() * ops.phi_op * v;
    return out;
}

} // namespace

ComplexMatrix build_hamiltonian(const FluxQubitParams& p, int dim,
                                double csigma_override_ff) {
    return build_operators(p, dim, csigma_override_ff).h;
}

QubitSpectrum spectrum(const FluxQubitParams& p, int n_levels, int dim,
                       const SpectrumOptions& opts) {
    if (n_levels < 1)
        throw InputError("spectrum: n_levels must be >= 1");
    if (n_levels > dim / 3)
        throw InputError("spectrum: n_levels exceeds dim/3 truncation safety margin");

    const double over = opts.csigma_override_ff;
    if (!opts.converge) {
        SolvedQubit s = solve_at_dim(p, n_levels, dim, over);
        return {std::move(s.levels), std::move(s.charge_elems),
                std::move(s.flux_elems), dim};
    }

    int d = dim;
    SolvedQubit coarse = solve_at_dim(p, n_levels, d, over);
    double delta = 0.0;
    while (2 * d <= opts.max_dim) {
        SolvedQubit fine = solve_at_dim(p, n_levels, 2 * d, over);
        delta = 0.0;
        for (int k = 0; k < n_levels; ++k)
            delta = std::max(delta, std::abs(fine.levels[k] - coarse.levels[k]));
        if (delta < opts.level_tol_ghz)
            return {std::move(fine.levels), std::move(fine.charge_elems),
                    std::move(fine.flux_elems), 2 * d};
        d *= 2;
        coarse = std::move(fine);
    }
    std::ostringstream os;
    os << "spectrum: not converged at dim cap " << opts.max_dim
       << ", last kept-level shift " << delta << " GHz";
    throw NumericError(os.str());
}

std::vector<FluxSweepRow> flux_sweep(const FluxQubitParams& p,
                                     const std::vector<double>& phi_grid,
                                     int n_levels, int dim) {
    if (phi_grid.empty())
        throw InputError("flux_sweep: empty flux grid");
    std::vector<FluxSweepRow> rows(phi_grid.size());
    parallel_for(phi_grid.size(), [&](std::size_t i) {
        FluxQubitParams q = p;
        q.phi_ext = phi_grid[i];
        QubitSpectrum s = spectrum(q, n_levels, dim);
        rows[i] = {phi_grid[i], std::move(s.levels)};
    });
    return rows;
}

double t1_golden_rule_us(const FluxQubitParams& p, double q_factor,
                         double temperature_k, int dim) {
    if (!(q_factor > 0.0))
        throw InputError("t1_golden_rule: quality factor must be positive");
    if (temperature_k < 0.0)
        throw InputError("t1_golden_rule: temperature must be >= 0");

    QubitSpectrum s = spectrum(p, 2, dim);
    const double f_q = s.f01();
    if (!(f_q > 0.0))
        throw NumericError("t1_golden_rule: qubit frequency is not positive");
    const double el = derive_energies(p).el_ghz;
    const double phi01_sq = std::norm(s.flux_elems(0, 1));

    double bracket = 2.0;
    if (temperature_k > 0.0) {
        const double x = cst::planck_h * f_q * 1e9 /
                         (2.0 * cst::boltzmann_k * temperature_k);
        bracket = 1.0 + 1.0 / std::tanh(x);
    }
    const double pi3 = cst::pi * cst::pi * cst::pi;
    const double rate_per_ns = 8.0 * pi3 * el / q_factor * phi01_sq * bracket;
    return 1.0 / rate_per_ns / 1e3;
}

SpectrumFit fit_spectrum(const std::vector<std::pair<double, double>>& data,
                         const FluxQubitParams& x0, int dim) {
    if (data.empty())
        throw InputError("fit_spectrum: no data");
    x0.validate();

    std::set<double> distinct_phi;
    double phi_min = data.front().first, phi_max = data.front().first;
    for (const auto& [phi, f] : data) {
        distinct_phi.insert(phi);
        phi_min = std::min(phi_min, phi);
        phi_max = std::max(phi_max, phi);
    }
    const bool degenerate = data.size() < 4 || distinct_phi.size() < 3 ||
                            (phi_max - phi_min) < 0.02;

    // fixed-dim solves inside the objective keep the fit fast (f01 is
    // converged to ~1e-12 GHz well below dim 40 for this parameter class);
    // the residual reported at the end uses the converged spectrum
    const int objective_dim = std::min(dim, 40);
    auto model_f01 = [&](const FluxQubitParams& q, double phi, bool converged) {
        FluxQubitParams qq = q;
        qq.phi_ext = phi;
        SpectrumOptions o;
        o.converge = converged;
        return spectrum(qq, 2, converged ? dim : objective_dim, o).f01();
    };

    auto objective = [&](const RealVector& x) -> double {
        if (x[0] <= 0.0 || x[1] <= 0.0 || x[2] <= 0.0)
            return 1e12;
        FluxQubitParams q{x[0], x[1], x[2], 0.5};
        double ss = 0.0;
        for (const auto& [phi, f] : data) {
            const double r = model_f01(q, phi, false) - f;
            ss += r * r;
        }
        return ss;
    };

    RealVector start(3);
    start << x0.ej_ghz, x0.l_nh, x0.csigma_ff;
    SimplexOptions opts;
    opts.xtol = 1e-6;
    opts.ftol = 1e-16;
    opts.restarts = 1;
    SimplexResult res = minimize_simplex(objective, start, opts);

    SpectrumFit fit;
    fit.params = {res.x[0], res.x[1], res.x[2], x0.phi_ext};
    fit.degenerate = degenerate;
    fit.iterations = res.iterations;
    double ss = 0.0;
    for (const auto& [phi, f] : data) {
        const double r = model_f01(fit.params, phi, true) - f;
        ss += r * r;
    }
    fit.rms_residual_mhz = std::sqrt(ss / static_cast<double>(data.size())) * 1e3;
    return fit;
}

} // namespace fluxlattice
