#pragma once

#include "fluxlattice/swt.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fluxlattice {

/// Dispersive readout parameters of one port-resonator pair. eta is the
/// power transfer coefficient; it absorbs the overall drive normalization,
/// so only eta ratios (isolation) are physically meaningful.
struct DispersiveParams {
    double f_r_ghz = 0.0;
    double kappa_mhz = 0.0;
    double chi_mhz = 0.0;
    double eta = 0.0;

    void validate() const;
};

/// Measurement-induced dephasing rate in 1/us when driving at f_d with port
/// amplitude A: gamma = eta A^2 [1/(k^2/4 + (d + chi/2)^2)
///                              + 1/(k^2/4 + (d - chi/2)^2)]
///                      * (k chi^2/4) / (k^2/4 + chi^2/4 + d^2),
/// d = f_d - f_r, all frequencies in MHz internally. Even in d, and exactly
/// quadratic in A.
double gamma_m(const DispersiveParams& p, double f_d_ghz, double a_port);

struct DephasingPoint {
    double f_d_ghz = 0.0;
    double a_port = 0.0;
    double gamma_per_us = 0.0;
};

struct DephasingFit {
    /// one fit per drive amplitude; eta varies between them and its spread
    /// is the reported uncertainty
    std::vector<std::pair<double, DispersiveParams>> per_amplitude;
    DispersiveParams pooled; ///< mean parameters
    double eta_spread = 0.0;
    double rms_residual = 0.0;
    bool sideband_coverage = true; ///< false when data misses one sideband
};

DephasingFit fit_dephasing(const std::vector<DephasingPoint>& data,
                           const DispersiveParams& x0);

/// Port-to-resonator isolation 10 log10(eta_far / eta_near) in dB.
double isolation_db(double eta_far, double eta_near);

/// Qubit drive selectivity 10 log10((Omega_far / Omega_near)^2) in dB.
double drive_selectivity_db(double omega_far, double omega_near);

struct GaussianFit {
    double mu = 0.0;
    double sigma = 0.0;
    double amplitude = 0.0;
    bool valid = false;
};

struct ZzStats {
    double mean_khz = 0.0;
    double sigma_khz = 0.0; ///< sample standard deviation (n - 1)
    GaussianFit fit;        ///< least-squares Gaussian on the histogram
    std::optional<double> model_delta_khz; ///< model-derived 4 J_zz when supplied
};

/// Statistics of measured zz shifts. When an effective two-qubit model is
/// supplied, the predicted conditional shift 4 J_zz is reported alongside
/// (model-derived; the measurement itself fixes only mean and sigma).
ZzStats zz_stats(const std::vector<double>& samples_khz, int bins = 0,
                 const EffectiveTwoQubit* model = nullptr);

struct CrossingPoint {
    double control = 0.0; ///< flux- or detuning-like axis
    double f_upper_ghz = 0.0;
    double f_lower_ghz = 0.0;
};

struct CrossingData {
    std::vector<CrossingPoint> points;

    /// Reduces raw spectroscopy rows (control, probe frequency, response
    /// magnitude) to branch points by picking the two strongest responses
    /// per control value.
    static CrossingData from_raw(
        const std::vector<std::tuple<double, double, double>>& rows);
};

struct CrossingFit {
    double g_ghz = 0.0;
    double g_stderr_ghz = 0.0;
    double center = 0.0;
    double slope_ghz = 0.0; ///< bare-branch detuning slope per control unit
    double rms_residual_ghz = 0.0;
    bool ill_conditioned = false; ///< data on one side of the crossing only
};

/// Least-squares hyperbola fit f+-(x) = fbar(x) +- sqrt(delta(x)^2/4 + g^2)
/// with delta(x) = slope (x - center); the minimum branch separation is 2g.
CrossingFit fit_avoided_crossing(const CrossingData& data, double g0_ghz,
                                 double center0, double slope0);

} // namespace fluxlattice
