#pragma once

#include "tailforge/distribution.hpp"
#include "tailforge/tail_curve.hpp"

namespace tailforge {

/// log of the integral of y^k e^(lambda y) F(y) over [a, b]; b may be +inf.
///
/// Pieces are integrated analytically when the form allows it and with
/// Gauss-Kronrod otherwise; segment boundaries are always subdivision points.
/// Throws DivergenceError when the integral is infinite. On a truncated curve
/// with b = +inf the part beyond the truncation point must be negligible.
double log_tail_integral(const TailCurve& tail, int k, double lambda, double a, double b,
                         double rel_tol = 1e-12);

/// Integral of y^k F(y) over [a, b].
double partial_moment(const Distribution& d, int k, double a, double b, double rel_tol = 1e-12);
double log_partial_moment(const Distribution& d, int k, double a, double b, double rel_tol = 1e-12);

/// Integral of e^(lambda y) F(y) over [a, b], in logs.
double log_tilted_tail_integral(const Distribution& d, double lambda, double a, double b,
                                double rel_tol = 1e-12);

/// E[e^(lambda X)] = 1 + lambda * integral of e^(lambda y) F(y) over [0, inf).
double exponential_moment(const Distribution& d, double lambda, double rel_tol = 1e-12);

}  // namespace tailforge
