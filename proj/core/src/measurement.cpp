#include "fluxlattice/measurement.hpp"
#include "fluxlattice/errors.hpp"
#include "fluxlattice/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace fluxlattice {

void DispersiveParams::validate() const {
    if (!(kappa_mhz > 0.0))
        throw InputError("DispersiveParams: kappa must be positive");
    if (eta < 0.0)
        throw InputError("DispersiveParams: eta must be >= 0");
}

double gamma_m(const DispersiveParams& p, double f_d_ghz, double a_port) {
    p.validate();
    const double d = (f_d_ghz - p.f_r_ghz) * 1e3; // MHz
    const double k = p.kappa_mhz;
    const double chi = p.chi_mhz;
    const double eps2 = p.eta * a_port * a_port;
    const double k24 = 0.25 * k * k;
    const double lor = 1.0 / (k24 + (d + 0.5 * chi) * (d + 0.5 * chi)) +
                       1.0 / (k24 + (d - 0.5 * chi) * (d - 0.5 * chi));
    const double filt = 0.25 * k * chi * chi / (k24 + 0.25 * chi * chi + d * d);
    return eps2 * lor * filt;
}

namespace {

double dephasing_sse(const std::vector<DephasingPoint>& pts,
                     const DispersiveParams& p, double a) {
    double ss = 0.0;
    for (const DephasingPoint& q : pts) {
        if (q.a_port != a)
            continue;
        const double r = gamma_m(p, q.f_d_ghz, q.a_port) - q.gamma_per_us;
        ss += r * r;
    }
    return ss;
}

} // namespace

DephasingFit fit_dephasing(const std::vector<DephasingPoint>& data,
                           const DispersiveParams& x0) {
    if (data.size() < 8)
        throw InputError("fit_dephasing: need at least 8 points spanning both sidebands");
    x0.validate();

    std::map<double, int> amplitudes;
    bool above = false, below = false;
    for (const DephasingPoint& q : data) {
        amplitudes[q.a_port]++;
        if (q.f_d_ghz > x0.f_r_ghz)
            above = true;
        if (q.f_d_ghz < x0.f_r_ghz)
            below = true;
    }

    DephasingFit fit;
    fit.sideband_coverage = above && below;

    // fit in conditioned coordinates: resonator offset in MHz, kappa and chi
    // in MHz, eta on a log scale (it spans the isolation ratio's decades)
    if (!(x0.eta > 0.0))
        throw InputError("fit_dephasing: starting eta must be positive");
    for (const auto& [a, count] : amplitudes) {
        auto unpack = [&](const RealVector& x) {
            return DispersiveParams{x0.f_r_ghz + x[0] * 1e-3, x[1], x[2],
                                    std::exp(x[3])};
        };
        auto objective = [&](const RealVector& x) -> double {
            if (x[1] <= 0.0)
                return 1e12;
            return dephasing_sse(data, unpack(x), a);
        };
        RealVector start(4);
        start << 0.0, x0.kappa_mhz, x0.chi_mhz, std::log(x0.eta);
        SimplexOptions opts;
        opts.xtol = 1e-12;
        opts.ftol = 1e-24;
        opts.absolute_step = 0.2; // MHz-scale offset, log-eta decade fraction
        opts.restarts = 3;
        SimplexResult res = minimize_simplex(objective, start, opts);
        fit.per_amplitude.emplace_back(a, unpack(res.x));
    }

    const double n = static_cast<double>(fit.per_amplitude.size());
    double eta_mean = 0.0;
    for (const auto& [a, p] : fit.per_amplitude) {
        fit.pooled.f_r_ghz += p.f_r_ghz / n;
        fit.pooled.kappa_mhz += p.kappa_mhz / n;
        fit.pooled.chi_mhz += p.chi_mhz / n;
        eta_mean += p.eta / n;
    }
    fit.pooled.eta = eta_mean;
    double var = 0.0;
    for (const auto& [a, p] : fit.per_amplitude)
        var += (p.eta - eta_mean) * (p.eta - eta_mean);
    fit.eta_spread = fit.per_amplitude.size() > 1
                         ? std::sqrt(var / (n - 1.0))
                         : 0.0;

    double ss = 0.0;
    for (const DephasingPoint& q : data) {
        const double r = gamma_m(fit.pooled, q.f_d_ghz, q.a_port) - q.gamma_per_us;
        ss += r * r;
    }
    fit.rms_residual = std::sqrt(ss / static_cast<double>(data.size()));
    return fit;
}

double isolation_db(double eta_far, double eta_near) {
    if (!(eta_far > 0.0) || !(eta_near > 0.0))
        throw InputError("isolation_db: transfer coefficients must be positive");
    return 10.0 * std::log10(eta_far / eta_near);
}

double drive_selectivity_db(double omega_far, double omega_near) {
    if (!(omega_far > 0.0) || !(omega_near > 0.0))
        throw InputError("drive_selectivity_db: Rabi rates must be positive");
    const double r = omega_far / omega_near;
    return 10.0 * std::log10(r * r);
}

ZzStats zz_stats(const std::vector<double>& samples_khz, int bins,
                 const EffectiveTwoQubit* model) {
    if (samples_khz.size() < 2)
        throw InputError("zz_stats: need at least 2 samples");
    const double n = static_cast<double>(samples_khz.size());

    ZzStats out;
    for (double s : samples_khz)
        out.mean_khz += s / n;
    double var = 0.0;
    for (double s : samples_khz)
        var += (s - out.mean_khz) * (s - out.mean_khz);
    out.sigma_khz = std::sqrt(var / (n - 1.0));

    if (model)
        out.model_delta_khz = 4.0 * model->j.zz() * 1e6; // GHz -> kHz

    if (out.sigma_khz <= 0.0)
        return out; // degenerate histogram, nothing to fit

    if (bins <= 0)
        bins = std::max(5, 1 + static_cast<int>(std::lround(std::log2(n))));
    const auto [lo_it, hi_it] = std::minmax_element(samples_khz.begin(), samples_khz.end());
    const double lo = *lo_it, hi = *hi_it;
    const double width = (hi - lo) / bins;
    std::vector<double> centers(bins), counts(bins, 0.0);
    for (int b = 0; b < bins; ++b)
        centers[b] = lo + (b + 0.5) * width;
    for (double s : samples_khz) {
        int b = std::min(bins - 1, static_cast<int>((s - lo) / width));
        counts[b] += 1.0;
    }

    auto objective = [&](const RealVector& x) -> double {
        if (x[2] <= 0.0 || x[0] <= 0.0)
            return 1e12;
        double ss = 0.0;
        for (int b = 0; b < bins; ++b) {
            const double z = (centers[b] - x[1]) / x[2];
            const double r = x[0] * std::exp(-0.5 * z * z) - counts[b];
            ss += r * r;
        }
        return ss;
    };
    RealVector start(3);
    start << *std::max_element(counts.begin(), counts.end()), out.mean_khz, out.sigma_khz;
    SimplexResult res = minimize_simplex(objective, start);
    out.fit = {res.x[1], res.x[2], res.x[0], true};
    return out;
}

CrossingData CrossingData::from_raw(
    const std::vector<std::tuple<double, double, double>>& rows) {
    std::map<double, std::vector<std::pair<double, double>>> by_control;
    for (const auto& [x, f, mag] : rows)
        by_control[x].emplace_back(mag, f);
    CrossingData out;
    for (auto& [x, peaks] : by_control) {
        if (peaks.size() < 2)
            continue;
        std::sort(peaks.begin(), peaks.end(), std::greater<>());
        const double fa = peaks[0].second, fb = peaks[1].second;
        out.points.push_back({x, std::max(fa, fb), std::min(fa, fb)});
    }
    return out;
}

CrossingFit fit_avoided_crossing(const CrossingData& data, double g0_ghz,
                                 double center0, double slope0) {
    if (data.points.size() < 3)
        throw InputError("fit_avoided_crossing: need at least 3 branch points");
    for (const CrossingPoint& p : data.points)
        if (p.f_upper_ghz < p.f_lower_ghz)
            throw InputError("fit_avoided_crossing: f_upper < f_lower in input row");

    // with fbar taken from the data midpoints the residual reduces to the
    // half-gap: minimize sum (gap/2 - sqrt(delta^2/4 + g^2))^2
    auto half_gap_model = [](double g, double center, double slope, double x) {
        const double d = slope * (x - center);
        return std::sqrt(0.25 * d * d + g * g);
    };
    auto objective = [&](const RealVector& v) -> double {
        double ss = 0.0;
        for (const CrossingPoint& p : data.points) {
            const double r = 0.5 * (p.f_upper_ghz - p.f_lower_ghz) -
                             half_gap_model(v[0], v[1], v[2], p.control);
            ss += r * r;
        }
        return ss;
    };
    RealVector start(3);
    start << g0_ghz, center0, slope0;
    SimplexOptions opts;
    opts.xtol = 1e-13;
    opts.ftol = 1e-26;
    opts.restarts = 3;
    SimplexResult res = minimize_simplex(objective, start, opts);

    CrossingFit fit;
    fit.g_ghz = std::abs(res.x[0]);
    fit.center = res.x[1];
    fit.slope_ghz = res.x[2];
    fit.rms_residual_ghz = std::sqrt(res.fval / static_cast<double>(data.points.size()));

    // residual-based standard error: sigma_g = rms / sqrt(sum (dmodel/dg)^2)
    double sens = 0.0;
    for (const CrossingPoint& p : data.points) {
        const double s = half_gap_model(fit.g_ghz, fit.center, fit.slope_ghz, p.control);
        if (s > 0.0) {
            const double dg = fit.g_ghz / s;
            sens += dg * dg;
        }
    }
    fit.g_stderr_ghz = sens > 0.0 ? fit.rms_residual_ghz / std::sqrt(sens)
                                  : fit.rms_residual_ghz;

    bool left = false, right = false;
    for (const CrossingPoint& p : data.points) {
        if (p.control < fit.center)
            left = true;
        if (p.control > fit.center)
            right = true;
    }
    fit.ill_conditioned = !(left && right);
    return fit;
}

} // namespace fluxlattice
