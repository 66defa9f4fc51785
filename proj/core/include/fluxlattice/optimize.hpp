#pragma once

#include "fluxlattice/numerics.hpp"

#include <functional>
#include <vector>

namespace fluxlattice {

struct SimplexOptions {
    double xtol = 1e-9;         ///< terminate when simplex diameter drops below
    double ftol = 1e-12;        ///< terminate when |f_worst - f_best| drops below
    int max_iter = 4000;        ///< per restart
    double relative_step = 0.05; ///< initial vertex offset, fraction of |x0_i|
    double absolute_step = 0.1;  ///< used where x0_i == 0
    int restarts = 2;           ///< deterministic re-inits around the best point
};

struct SimplexResult {
    RealVector x;
    double fval = 0.0;
    int iterations = 0;
    bool converged = false;
    /// best objective value after each iteration; non-increasing by construction
    std::vector<double> best_history;
};

/// Derivative-free Nelder-Mead minimization. A NaN objective value aborts
/// with the offending parameter vector in the message.
SimplexResult minimize_simplex(const std::function<double(const RealVector&)>& objective,
                               const RealVector& x0,
                               const SimplexOptions& opts = {});

struct BisectOptions {
    double xtol = 1e-12; ///< terminate when the bracket shrinks below
    double ftol = 0.0;   ///< if > 0, terminate when |f(x) - target| <= ftol
    int max_iter = 200;
};

/// Bisection for f(x) = target on [a, b]. Requires the target to be
/// bracketed: (f(a) - target) * (f(b) - target) <= 0.
double find_root_bisect(const std::function<double(double)>& f,
                        double a, double b, double target = 0.0,
                        const BisectOptions& opts = {});

} // namespace fluxlattice
