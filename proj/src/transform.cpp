#include "tailforge/transform.hpp"

#include <cmath>
#include <cstdio>

#include "tailforge/errors.hpp"

namespace tailforge {

Distribution gamma_transform(const Distribution& d, TransformSpec spec) {
    if (!(spec.gamma > 0) || !std::isfinite(spec.gamma)) throw ParameterError("gamma must be > 0");
    DistSpec ds = d.spec();
    ds.steps.push_back({TransformStep::Kind::gamma, spec.gamma});
    return Distribution(d.tail().tilted(spec.gamma), ds, describe(ds), d.notices());
}

TailComparison compare_log_tails(const Distribution& a, const Distribution& b, std::span<const double> grid,
                                 double tol) {
    TailComparison out;
    for (double x : grid) {
        const double la = a.log_tail(x);
        const double lb = b.log_tail(x);
        double diff = 0.0;
        if (la != lb) diff = std::abs(la - lb);
        if (std::isnan(diff)) diff = INFINITY;
        out.max_abs_diff = std::max(out.max_abs_diff, diff);
        const double scale = std::max({1.0, std::isfinite(la) ? std::abs(la) : 0.0, std::isfinite(lb) ? std::abs(lb) : 0.0});
        if (diff > tol * scale && out.pass) {
            out.pass = false;
            out.first_failure_x = x;
            char buf[200];
            std::snprintf(buf, sizeof buf, "log-tails differ at x = %.17g: %.17g vs %.17g", x, la, lb);
            out.message = buf;
        }
    }
    if (out.pass) out.message = "log-tails agree on all grid points";
    return out;
}

TailComparison tilt_compose_check(const Distribution& d, double g1, double g2, std::span<const double> grid,
                                  double tol) {
    if (!(g1 > 0) || !(g2 > 0)) throw ParameterError("tilt_compose_check needs gamma1, gamma2 > 0");
    const Distribution twice = gamma_transform(gamma_transform(d, {g1}), {g2});
    const Distribution once = gamma_transform(d, {g1 + g2});
    return compare_log_tails(twice, once, grid, tol);
}

}  // namespace tailforge
