#include "fluxlattice/qubit.hpp"
#include "fluxlattice/constants.hpp"
#include "fluxlattice/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace fluxlattice;
namespace cst = constants;

namespace {

// fitted lumped-element parameters of the three devices
const FluxQubitParams kQ1{6.2, 22.1, 32.2, 0.5};
const FluxQubitParams kCoupler{9.6, 20.2, 22.7, 0.5};
const FluxQubitParams kQ3{5.6, 31.6, 25.2, 0.5};

} // namespace

TEST_SUITE_BEGIN("qubit");

TEST_CASE("derive_energies: EC and EL against direct constants arithmetic") {
    DerivedEnergies d = derive_energies(kQ1);
    // independent recomputation from the CODATA values
    const double ec = cst::elementary_charge * cst::elementary_charge /
                      (2.0 * 32.2e-15 * cst::planck_h) / 1e9;
    const double phi0_2pi = cst::flux_quantum / (2.0 * cst::pi);
    const double el = phi0_2pi * phi0_2pi / (22.1e-9 * cst::planck_h) / 1e9;
    CHECK(d.ec_ghz == doctest::Approx(ec).epsilon(1e-12));
    CHECK(d.el_ghz == doctest::Approx(el).epsilon(1e-12));
    // rounded reference numbers
    CHECK(d.ec_ghz == doctest::Approx(0.6015).epsilon(2e-4));
    CHECK(d.el_ghz == doctest::Approx(7.40).epsilon(1e-3));
    CHECK(d.phi_zpf * d.n_zpf == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(d.ec_ghz > 0.0);
    CHECK(d.el_ghz > 0.0);
}

TEST_CASE("derive_energies: invalid parameters rejected") {
    CHECK_THROWS_AS(derive_energies({0.0, 22.1, 32.2, 0.5}), InputError);
    CHECK_THROWS_AS(derive_energies({6.2, -1.0, 32.2, 0.5}), InputError);
}

TEST_CASE("spectrum: EJ = 0 reproduces the harmonic oscillator") {
    FluxQubitParams p = kQ1;
    p.ej_ghz = 1e-12; // harmonic limit (EJ must stay positive)
    QubitSpectrum s = spectrum(p, 5, 60);
    // closed-form LC frequency, f = 1/(2 pi sqrt(L C))
    const double f_lc = 1.0 / (2.0 * cst::pi * std::sqrt(22.1e-9 * 32.2e-15)) / 1e9;
    CHECK(f_lc == doctest::Approx(5.97).epsilon(2e-3)); // sanity on the oracle itself
    for (int k = 1; k < 5; ++k)
        CHECK(s.levels[k] == doctest::Approx(k * f_lc).epsilon(1e-9));
    // harmonic charge/flux matrix elements equal the zero-point amplitudes
    DerivedEnergies d = derive_energies(p);
    CHECK(std::abs(s.flux_elems(0, 1)) == doctest::Approx(d.phi_zpf).epsilon(1e-9));
    CHECK(std::abs(s.charge_elems(0, 1)) == doctest::Approx(d.n_zpf).epsilon(1e-9));
}

TEST_CASE("spectrum: flux quantum periodicity") {
    FluxQubitParams a = kQ1, b = kQ1;
    a.phi_ext = 0.0;
    b.phi_ext = 1.0;
    QubitSpectrum sa = spectrum(a, 3, 60);
    QubitSpectrum sb = spectrum(b, 3, 60);
    for (int k = 0; k < 3; ++k)
        CHECK(std::abs(sa.levels[k] - sb.levels[k]) <= 1e-9);
}

TEST_CASE("spectrum: sweet-spot frequencies of the three fitted devices") {
    // measured / table values: 3.689, 3.437, 3.084 GHz, 1% tolerance
    CHECK(spectrum(kQ1, 2, 60).f01() == doctest::Approx(3.689).epsilon(0.01));
    CHECK(spectrum(kCoupler, 2, 60).f01() == doctest::Approx(3.437).epsilon(0.01));
    CHECK(spectrum(kQ3, 2, 60).f01() == doctest::Approx(3.084).epsilon(0.01));
}

TEST_CASE("spectrum: reflection symmetry about the sweet spot") {
    FluxQubitParams a = kQ1, b = kQ1;
    a.phi_ext = 0.5 + 0.03;
    b.phi_ext = 0.5 - 0.03;
    CHECK(std::abs(spectrum(a, 2, 60).f01() - spectrum(b, 2, 60).f01()) <= 1e-9);
}

TEST_CASE("spectrum: truncation convergence under dim doubling") {
    QubitSpectrum s = spectrum(kCoupler, 4, 60);
    SpectrumOptions fixed;
    fixed.converge = false;
    QubitSpectrum s1 = spectrum(kCoupler, 4, s.truncation, fixed);
    QubitSpectrum s2 = spectrum(kCoupler, 4, 2 * s.truncation, fixed);
    for (int k = 0; k < 4; ++k)
        CHECK(std::abs(s1.levels[k] - s2.levels[k]) < 1e-6);
}

TEST_CASE("spectrum: preconditions") {
    CHECK_THROWS_AS(build_hamiltonian(kQ1, 8), InputError);
    CHECK_THROWS_AS(spectrum(kQ1, 30, 60), InputError); // n_levels > dim/3
}

TEST_CASE("spectrum: charge-element gauge contract") {
    for (const FluxQubitParams* p : {&kQ1, &kCoupler, &kQ3}) {
        FluxQubitParams q = *p;
        q.phi_ext = 0.47; // off the sweet spot, where phases could wander
        QubitSpectrum s = spectrum(q, 4, 60);
        const Complex n01 = s.charge_elems(0, 1);
        CHECK(n01.imag() > 0.0);
        CHECK(std::abs(n01.real()) <= 1e-9 * n01.imag());
    }
}

TEST_CASE("flux_sweep: matches pointwise spectra, minimum at half flux") {
    std::vector<double> grid;
    for (int i = 0; i <= 10; ++i)
        grid.push_back(0.45 + 0.01 * i);
    std::vector<FluxSweepRow> rows = flux_sweep(kQ1, grid, 2);
    REQUIRE(rows.size() == grid.size());

    std::size_t argmin = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        FluxQubitParams q = kQ1;
        q.phi_ext = grid[i];
        CHECK(rows[i].levels[1] == doctest::Approx(spectrum(q, 2, 60).f01()).epsilon(1e-12));
        if (rows[i].levels[1] < rows[argmin].levels[1])
            argmin = i;
    }
    CHECK(grid[argmin] == doctest::Approx(0.5));
    CHECK(rows[argmin].levels[1] == doctest::Approx(3.689).epsilon(0.01));
}

TEST_CASE("flux_sweep: EJ = 0 spectrum is flux independent") {
    FluxQubitParams p = kQ1;
    p.ej_ghz = 1e-12;
    std::vector<FluxSweepRow> rows = flux_sweep(p, {0.1, 0.3, 0.5}, 2);
    CHECK(std::abs(rows[0].levels[1] - rows[2].levels[1]) <= 1e-9);
    CHECK(std::abs(rows[1].levels[1] - rows[2].levels[1]) <= 1e-9);
}

TEST_CASE("flux_sweep: empty grid rejected") {
    CHECK_THROWS_AS(flux_sweep(kQ1, {}, 2), InputError);
}

TEST_CASE("t1_golden_rule: exactly linear in Q, bracket 2 at T = 0") {
    const double t1 = t1_golden_rule_us(kQ1, 1e6, 0.0);
    const double t2 = t1_golden_rule_us(kQ1, 2e6, 0.0);
    CHECK(t2 / t1 == doctest::Approx(2.0).epsilon(1e-12));

    // T = 0 value against the formula with the bracket pinned to 2
    QubitSpectrum s = spectrum(kQ1, 2, 60);
    const double el = derive_energies(kQ1).el_ghz;
    const double rate = 8.0 * std::pow(cst::pi, 3) * el / 1e6 *
                        std::norm(s.flux_elems(0, 1)) * 2.0;
    CHECK(t1 == doctest::Approx(1.0 / rate / 1e3).epsilon(1e-10));
}

TEST_CASE("t1_golden_rule: monotone in Q and temperature") {
    CHECK(t1_golden_rule_us(kQ1, 3e6, 0.05) > t1_golden_rule_us(kQ1, 1e6, 0.05));
    CHECK(t1_golden_rule_us(kQ1, 1e6, 0.02) > t1_golden_rule_us(kQ1, 1e6, 0.1));
    CHECK_THROWS_AS(t1_golden_rule_us(kQ1, -1.0, 0.0), InputError);
}

TEST_CASE("fit_spectrum: noiseless round trip recovers the parameters") {
    std::vector<std::pair<double, double>> data;
    for (int i = 0; i <= 8; ++i) {
        const double phi = 0.46 + 0.01 * i;
        FluxQubitParams q = kQ1;
        q.phi_ext = phi;
        data.emplace_back(phi, spectrum(q, 2, 60).f01());
    }
    FluxQubitParams x0 = kQ1;
    x0.ej_ghz *= 1.10;
    x0.l_nh *= 0.90;
    x0.csigma_ff *= 1.07;
    SpectrumFit fit = fit_spectrum(data, x0);
    CHECK_FALSE(fit.degenerate);
    CHECK(fit.params.ej_ghz == doctest::Approx(kQ1.ej_ghz).epsilon(0.005));
    CHECK(fit.params.l_nh == doctest::Approx(kQ1.l_nh).epsilon(0.005));
    CHECK(fit.params.csigma_ff == doctest::Approx(kQ1.csigma_ff).epsilon(0.005));
    CHECK(fit.rms_residual_mhz < 0.05);
}

TEST_CASE("fit_spectrum: repeated single point is flagged degenerate") {
    std::vector<std::pair<double, double>> data(5, {0.5, 3.689});
    SpectrumFit fit = fit_spectrum(data, kQ1);
    CHECK(fit.degenerate);
}

TEST_SUITE_END();
