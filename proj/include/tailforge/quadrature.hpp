#pragma once

#include <functional>
#include <limits>

namespace tailforge {

/// Settings for adaptive Gauss-Kronrod integration.
struct QuadConfig {
    double rel_tol = 1e-9;
    /// Also accept once the log of the absolute error estimate drops to this
    /// level; lets a negligible piece of a larger sum stop early.
    double log_abs_floor = -std::numeric_limits<double>::infinity();
    int max_subdivisions = 4000;
};

struct LogQuadResult {
    double log_value;      ///< log of the integral (-inf for an exact zero)
    double log_abs_error;  ///< log of the estimated absolute error
    int subdivisions;
};

/// Integrates exp(log_f(y)) over [a, b] with adaptive 21-point Gauss-Kronrod.
///
/// The integrand is supplied as a log-value so that integrals far below the
/// smallest normal double still carry full relative precision: each
/// subinterval is rescaled by its own largest sample before exponentiation.
/// `b` may be +infinity, in which case y = a + (1 - s) / s maps (0, 1] onto
/// [a, inf). Throws ToleranceError when `cfg.rel_tol` cannot be met.
LogQuadResult integrate_log(const std::function<double(double)>& log_f, double a, double b,
                            const QuadConfig& cfg = {});

}  // namespace tailforge
