#include "fluxlattice/swt.hpp"
#include "fluxlattice/constants.hpp"
#include "fluxlattice/errors.hpp"
#include "fluxlattice/optimize.hpp"
#include "fluxlattice/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fluxlattice {

namespace {

const std::vector<std::vector<int>>& two_qubit_subspace() {
    // ordered |q1 q3> = 00, 01, 10, 11 with the coupler in its ground state
    static const std::vector<std::vector<int>> labels = {
        {0, 0, 0}, {0, 0, 1}, {1, 0, 0}, {1, 0, 1}};
    return labels;
}

void require_three_qubits(const ArrayModel& model, const char* where) {
    if (model.n_qubits() != 3)
        throw InputError(std::string(where) + ": model must have exactly three qubits "
                                              "(qubit1, coupler, qubit3)");
}

} // namespace

SwtProjectors swt_projectors(const ArrayModel& model, const DressedSpectrum& dressed) {
    require_three_qubits(model, "swt_projectors");
    const int dim = model.dim();
    SwtProjectors pr;
    pr.p0 = ComplexMatrix::Zero(dim, dim);
    pr.p = ComplexMatrix::Zero(dim, dim);
    for (const LabelAssignment& la : dressed.labels) {
        const int bare = model.bare_index(la.label);
        pr.p0(bare, bare) = 1.0;
        const auto v = dressed.vectors.col(la.eigen_index);
        pr.p += v * v.adjoint();
    }
    pr.q0 = ComplexMatrix::Identity(dim, dim) - pr.p0;
    pr.q = ComplexMatrix::Identity(dim, dim) - pr.p;
    pr.overlap_trace = (pr.p0 * pr.p).trace().real();
    if (pr.overlap_trace <= 2.0)
        throw NumericError("swt_projectors: Tr(P0 P) <= 2, subspaces nearly orthogonal; "
                           "the SWT is not well defined here");
    return pr;
}

EffectiveTwoQubit swt_exact(const ArrayModel& model, bool force) {
    require_three_qubits(model, "swt_exact");
    return swt_exact(model, diagonalize_labeled(model, two_qubit_subspace(), force));
}

EffectiveTwoQubit swt_exact(const ArrayModel& model, const DressedSpectrum& dressed) {
    require_three_qubits(model, "swt_exact");
    SwtProjectors pr = swt_projectors(model, dressed);
    const int dim = model.dim();

    // U = sqrt((P0-Q0)(P-Q)). The operand is a product of two reflections:
    // unitary but not Hermitian in floating point. Evaluate the principal
    // root through the polar form U = A (A^dag A)^{-1/2} with
    // A = P0 P + Q0 Q, whose Gram matrix A^dag A = 1 - (P - P0)^2 is
    // Hermitian PSD, then check U U against the direct product.
    ComplexMatrix a = pr.p0 * pr.p + pr.q0 * pr.q;
    ComplexMatrix gram = a.adjoint() * a;
    ComplexMatrix s = matrix_sqrt_psd(gram);
    ComplexMatrix u = s.ldlt().solve(a.adjoint()).adjoint();

    EffectiveTwoQubit eff;
    eff.provenance = EffectiveTwoQubit::Provenance::numeric;
    eff.min_overlap = dressed.min_overlap;
    eff.unitarity_defect = (pr.p0 - u * pr.p * u.adjoint()).cwiseAbs().maxCoeff();
    ComplexMatrix direct = (pr.p0 - pr.q0) * (pr.p - pr.q);
    eff.sqrt_residual = (u * u - direct).cwiseAbs().maxCoeff();

    ComplexMatrix heff_full = pr.p0 * u * pr.p * model.h_full * pr.p * u.adjoint() * pr.p0;

    const auto& labels = two_qubit_subspace();
    ComplexMatrix h4(4, 4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            h4(r, c) = heff_full(model.bare_index(labels[r]), model.bare_index(labels[c]));
    h4 = 0.5 * (h4 + h4.adjoint());

    // the defining property: eig(H_eff) equals the matched exact eigenvalues
    EigenDecomposition e4 = eigh(h4);
    std::vector<double> matched;
    for (const LabelAssignment& la : dressed.labels)
        matched.push_back(dressed.values[la.eigen_index]);
    std::sort(matched.begin(), matched.end());
    for (int k = 0; k < 4; ++k)
        eff.spectrum_error_ghz =
            std::max(eff.spectrum_error_ghz, std::abs(e4.values[k] - matched[k]));

    eff.j = pauli_decompose_2q(h4);
    eff.omega1_ghz = -2.0 * eff.j.c[3][0];
    eff.omega3_ghz = -2.0 * eff.j.c[0][3];
    eff.g_eff_ghz = std::abs(eff.j.xx() + eff.j.yy());

    static const bool expected[4][4] = {
        {true, false, false, true},  // II, Iz
        {false, true, false, false}, // xx
        {false, false, true, false}, // yy
        {true, false, false, true},  // zI, zz
    };
    for (int ai = 0; ai < 4; ++ai)
        for (int bi = 0; bi < 4; ++bi)
            if (!expected[ai][bi])
                eff.max_residual_coeff_ghz =
                    std::max(eff.max_residual_coeff_ghz, std::abs(eff.j.c[ai][bi]));
    eff.gauge_flagged = eff.max_residual_coeff_ghz > 1e-3 * eff.g_eff_ghz;
    return eff;
}

LowEnergy3Q project_low_energy(const ArrayModel& model) {
    require_three_qubits(model, "project_low_energy");
    double im01[3];
    for (int i = 0; i < 3; ++i) {
        const Complex n01 = model.spectra[i].charge_elems(0, 1);
        if (std::abs(n01.real()) > 1e-9 * std::max(1e-300, std::abs(n01.imag())))
            throw NumericError("project_low_energy: charge-element gauge contract violated "
                               "(Re<0|n|1> not negligible)");
        im01[i] = n01.imag();
    }
    const double gc = constants::charge_coupling_ghz_per_inv_ff;
    LowEnergy3Q low;
    low.omega_t1_ghz = model.bare_f01(0);
    low.omega_t2_ghz = model.bare_f01(1);
    low.omega_t3_ghz = model.bare_f01(2);
    low.g12_ghz = gc * model.cinv(0, 1) * im01[0] * im01[1];
    low.g23_ghz = gc * model.cinv(1, 2) * im01[1] * im01[2];
    low.g13_ghz = gc * model.cinv(0, 2) * im01[0] * im01[2];
    return low;
}

EffectiveTwoQubit swt_perturbative(const LowEnergy3Q& low) {
    const double omega = 0.5 * (low.omega_t1_ghz + low.omega_t3_ghz);
    const double delta = omega - low.omega_t2_ghz;
    const double sigma = omega + low.omega_t2_ghz;
    if (std::abs(delta) < 1e-6)
        throw NumericError("swt_perturbative: perturbative divergence, coupler detuning "
                           "|Delta| < 1e-6 GHz");
    const double kernel = 1.0 / delta - 1.0 / sigma;

    EffectiveTwoQubit eff;
    eff.provenance = EffectiveTwoQubit::Provenance::perturbative;
    eff.omega1_ghz = omega + low.g12_ghz * low.g12_ghz * kernel;
    eff.omega3_ghz = omega + low.g23_ghz * low.g23_ghz * kernel;
    const double g_signed = low.g12_ghz * low.g23_ghz * kernel + low.g13_ghz;
    eff.j.c[2][2] = g_signed;
    eff.j.c[3][0] = -0.5 * eff.omega1_ghz;
    eff.j.c[0][3] = -0.5 * eff.omega3_ghz;
    eff.j.c[0][0] = 0.5 * (eff.omega1_ghz + eff.omega3_ghz);
    eff.g_eff_ghz = std::abs(g_signed);
    return eff;
}

SweepResult coupler_sweep(const std::vector<FluxQubitParams>& qubits,
                          const CouplingNetwork& network,
                          const std::vector<double>& detuning_mhz,
                          const SweepOptions& opts) {
    if (qubits.size() != 3)
        throw InputError("coupler_sweep: need {qubit1, coupler, qubit3}");
    if (detuning_mhz.empty())
        throw InputError("coupler_sweep: empty detuning grid");

    const int m = opts.kept_levels;
    const int dim = opts.dim_single;

    auto f01_at = [&](const FluxQubitParams& p, double phi) {
        FluxQubitParams q = p;
        q.phi_ext = phi;
        return spectrum(q, 2, dim).f01();
    };

    SweepResult result;
    result.q1_phi_ext = qubits[0].phi_ext;
    result.resonance_freq_ghz = opts.resonance_freq_ghz > 0.0
                                    ? opts.resonance_freq_ghz
                                    : f01_at(qubits[0], result.q1_phi_ext);
    const double res = result.resonance_freq_ghz;

    BisectOptions bisect;
    bisect.ftol = opts.root_ftol_ghz;
    bisect.xtol = 1e-12;

    // qubit 3 flux solved on the monotone branch adjacent to the sweet spot
    FluxQubitParams q3 = qubits[2];
    if (std::abs(f01_at(q3, 0.5) - res) > opts.root_ftol_ghz) {
        result.q3_phi_ext = find_root_bisect(
            [&](double phi) { return f01_at(q3, phi); }, 0.25, 0.5, res, bisect);
    } else {
        result.q3_phi_ext = 0.5;
    }
    q3.phi_ext = result.q3_phi_ext;

    FluxQubitParams q1 = qubits[0];
    QubitSpectrum s1 = spectrum(q1, m, dim);
    QubitSpectrum s3 = spectrum(q3, m, dim);

    const FluxQubitParams coupler = qubits[1];
    const double fc_min = f01_at(coupler, 0.5);

    result.rows.assign(detuning_mhz.size(), {});
    parallel_for(detuning_mhz.size(), [&](std::size_t i) {
        SweepRow row;
        row.delta_fc_mhz = detuning_mhz[i];
        const double target = res + detuning_mhz[i] * 1e-3;

        if (target < fc_min - opts.clamp_tol_mhz * 1e-3) {
            row.reachable = false;
            result.rows[i] = row;
            return;
        }
        FluxQubitParams c = coupler;
        if (target <= fc_min) {
            row.coupler_phi_ext = 0.5; // parked at the sweet spot
        } else {
            row.coupler_phi_ext = find_root_bisect(
                [&](double phi) { return f01_at(coupler, phi); }, 0.25, 0.5, target,
                bisect);
        }
        c.phi_ext = row.coupler_phi_ext;
        QubitSpectrum sc = spectrum(c, m, dim);
        row.fc_ghz = sc.f01();

        ArrayModel model = assemble_from_spectra({q1, c, q3}, network, {s1, sc, s3}, m);
        EffectiveTwoQubit eff = swt_exact(model, /*force=*/true);
        row.g_eff_numeric_ghz = eff.g_eff_ghz;
        row.jxx_ghz = eff.j.xx();
        row.jyy_ghz = eff.j.yy();
        row.jzz_ghz = eff.j.zz();
        row.min_overlap = eff.min_overlap;
        row.spectrum_error_ghz = eff.spectrum_error_ghz;

        try {
            row.g_eff_pert_ghz = swt_perturbative(project_low_energy(model)).g_eff_ghz;
        } catch (const NumericError&) {
            row.g_eff_pert_ghz = std::nullopt; // divergence at Delta = 0
        }
        result.rows[i] = row;
    });
    return result;
}

} // namespace fluxlattice
