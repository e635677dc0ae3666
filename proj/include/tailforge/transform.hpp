#pragma once

#include <optional>
#include <span>
#include <string>

#include "tailforge/distribution.hpp"

namespace tailforge {

struct TransformSpec {
    double gamma;
};

/// G(x) = F(x) e^(-gamma x) on x >= 0. Segment structure is kept; each
/// segment gets the extra tilt, so log G - log F = -gamma x exactly.
Distribution gamma_transform(const Distribution& d, TransformSpec spec);

struct TailComparison {
    bool pass = true;
    double max_abs_diff = 0.0;
    std::optional<double> first_failure_x;
    std::string message;
};

/// Compares log-tails pointwise: |a - b| <= tol * max(1, |a|, |b|).
TailComparison compare_log_tails(const Distribution& a, const Distribution& b, std::span<const double> grid,
                                 double tol = 1e-12);

/// Transforming by g1 then g2 against transforming once by g1 + g2.
TailComparison tilt_compose_check(const Distribution& d, double g1, double g2, std::span<const double> grid,
                                  double tol = 1e-12);

}  // namespace tailforge
