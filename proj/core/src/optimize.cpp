#include "fluxlattice/optimize.hpp"
#include "fluxlattice/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace fluxlattice {

namespace {

double checked_eval(const std::function<double(const RealVector&)>& f,
                    const RealVector& x) {
    double v = f(x);
    if (std::isnan(v)) {
        std::ostringstream os;
        os << "minimize_simplex: objective returned NaN at x = [";
        for (Eigen::Index i = 0; i < x.size(); ++i)
            os << (i ? ", " : "") << x[i];
        os << "]";
        throw NumericError(os.str());
    }
    return v;
}

struct NmState {
    std::vector<RealVector> x;
    std::vector<double> f;
};

double simplex_diameter(const NmState& s) {
    double d = 0.0;
    for (size_t i = 1; i < s.x.size(); ++i)
        d = std::max(d, (s.x[i] - s.x[0]).cwiseAbs().maxCoeff());
    return d;
}

// one Nelder-Mead run; appends per-iteration best values to history
void nm_run(const std::function<double(const RealVector&)>& fn, NmState& s,
            const SimplexOptions& opts, SimplexResult& out) {
    const int n = static_cast<int>(s.x[0].size());
    constexpr double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

    for (int iter = 0; iter < opts.max_iter; ++iter) {
        std::vector<int> order(s.x.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return s.f[a] < s.f[b]; });
        NmState sorted;
        for (int k : order) {
            sorted.x.push_back(s.x[k]);
            sorted.f.push_back(s.f[k]);
        }
        s = std::move(sorted);
        ++out.iterations;
        out.best_history.push_back(out.best_history.empty()
                                       ? s.f[0]
                                       : std::min(out.best_history.back(), s.f[0]));

        if (std::abs(s.f[n] - s.f[0]) < opts.ftol || simplex_diameter(s) < opts.xtol) {
            out.converged = true;
            return;
        }

        RealVector centroid = RealVector::Zero(n);
        for (int i = 0; i < n; ++i)
            centroid += s.x[i];
        centroid /= n;

        RealVector xr = centroid + alpha * (centroid - s.x[n]);
        double fr = checked_eval(fn, xr);
        if (fr < s.f[0]) {
            RealVector xe = centroid + gamma * (xr - centroid);
            double fe = checked_eval(fn, xe);
            if (fe < fr) {
                s.x[n] = xe;
                s.f[n] = fe;
            } else {
                s.x[n] = xr;
                s.f[n] = fr;
            }
        } else if (fr < s.f[n - 1]) {
            s.x[n] = xr;
            s.f[n] = fr;
        } else {
            const bool outside = fr < s.f[n];
            RealVector xc = outside ? centroid + rho * (xr - centroid)
                                    : centroid + rho * (s.x[n] - centroid);
            double fc = checked_eval(fn, xc);
            if (fc < (outside ? fr : s.f[n])) {
                s.x[n] = xc;
                s.f[n] = fc;
            } else {
                for (size_t i = 1; i < s.x.size(); ++i) {
                    s.x[i] = s.x[0] + sigma * (s.x[i] - s.x[0]);
                    s.f[i] = checked_eval(fn, s.x[i]);
                }
            }
        }
    }
}

NmState initial_simplex(const std::function<double(const RealVector&)>& fn,
                        const RealVector& x0, double rel, double abs_step) {
    const int n = static_cast<int>(x0.size());
    NmState s;
    s.x.push_back(x0);
    s.f.push_back(checked_eval(fn, x0));
    for (int i = 0; i < n; ++i) {
        RealVector xi = x0;
        double step = x0[i] != 0.0 ? rel * std::abs(x0[i]) : abs_step;
        xi[i] += step;
        s.x.push_back(xi);
        s.f.push_back(checked_eval(fn, xi));
    }
    return s;
}

} // namespace

SimplexResult minimize_simplex(const std::function<double(const RealVector&)>& objective,
                               const RealVector& x0, const SimplexOptions& opts) {
    if (x0.size() < 1)
        throw InputError("minimize_simplex: empty starting point");

    SimplexResult out;
    NmState s = initial_simplex(objective, x0, opts.relative_step, opts.absolute_step);
    nm_run(objective, s, opts, out);

    // deterministic restarts with a tighter simplex around the best vertex
    double step = opts.relative_step;
    for (int r = 0; r < opts.restarts; ++r) {
        step *= 0.1;
        NmState s2 = initial_simplex(objective, s.x[0], step, opts.absolute_step * std::pow(0.1, r + 1));
        nm_run(objective, s2, opts, out);
        if (s2.f[0] <= s.f[0])
            s = std::move(s2);
    }

    out.x = s.x[0];
    out.fval = s.f[0];
    return out;
}

double find_root_bisect(const std::function<double(double)>& f,
                        double a, double b, double target,
                        const BisectOptions& opts) {
    if (!(a < b))
        throw InputError("find_root_bisect: need a < b");
    double fa = f(a) - target;
    double fb = f(b) - target;
    if (fa == 0.0)
        return a;
    if (fb == 0.0)
        return b;
    if (fa * fb > 0.0) {
        std::ostringstream os;
        os << "find_root_bisect: target " << target << " not bracketed on ["
           << a << ", " << b << "] (f-target endpoints " << fa << ", " << fb << ")";
        throw InputError(os.str());
    }
    double lo = a, hi = b;
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < opts.max_iter; ++it) {
        mid = 0.5 * (lo + hi);
        double fm = f(mid) - target;
        if (fm == 0.0 || (opts.ftol > 0.0 && std::abs(fm) <= opts.ftol))
            return mid;
        if ((fm > 0.0) == (fa > 0.0)) {
            lo = mid;
            fa = fm;
        } else {
            hi = mid;
        }
        if (hi - lo <= opts.xtol)
            return 0.5 * (lo + hi);
    }
    return mid;
}

} // namespace fluxlattice
