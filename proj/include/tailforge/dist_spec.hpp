#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace tailforge {

/// F(x) = (1 + x)^-alpha.
struct ParetoSpec {
    double alpha = 3.0;
};

/// F(x) = exp(-rate x).
struct ExponentialSpec {
    double rate = 1.0;
};

/// F(x) = exp(-x^beta), 0 < beta < 1.
struct WeibullHeavySpec {
    double beta = 0.5;
};

/// F = 1 on [0, 2) and 4^-n on [2^n, 2^(n+1)); purely atomic, mean 3.
struct DyadicParetoSpec {};

/// a0 = 0, a1 = 1, a(n+1) = e^a(n) / a(n); exp-affine pieces on [a(n)^2, a(n+1)^2).
struct FkzExampleSpec {
    int max_segments = 64;
};

/// exp(-sqrt x) with flat stretches [x_i, y_i) where F(x_i) = a F(y_i).
///
/// Default placement: x_1 = max(y0, 1) + 1, x_(i+1) = growth_factor * y_i.
/// An explicit `x_points` list overrides the rule; the curve then continues
/// as exp(-sqrt x) past the last plateau.
struct PlateauExampleSpec {
    double a = 2.0;
    std::optional<double> y0;
    double growth_factor = 2.0;
    std::vector<double> x_points;
    int max_segments = 4096;
};

/// Piecewise affine/constant tail with x(n+1) = x(n)^(1 + 1/alpha), raised to the power m.
struct XuPiecewiseSpec {
    double alpha = 6.0;
    double x1 = 5000.0;
    int m = 1;
    int max_segments = 100000;
};

using BuiltinSpec = std::variant<ParetoSpec, ExponentialSpec, WeibullHeavySpec, DyadicParetoSpec,
                                 FkzExampleSpec, PlateauExampleSpec, XuPiecewiseSpec>;

/// A post-construction step recorded in a DistSpec: tail tilt or tail power.
struct TransformStep {
    enum class Kind { gamma, power };
    Kind kind;
    double value;
};

/// Everything needed to rebuild a distribution: a builtin plus transform steps.
struct DistSpec {
    BuiltinSpec base;
    std::vector<TransformStep> steps;
};

inline constexpr const char* dist_spec_schema = "tailforge/dist@1";

std::string kind_name(const BuiltinSpec& spec);
std::string describe(const DistSpec& spec);

nlohmann::json to_json(const DistSpec& spec);
/// Accepts the versioned schema; unknown keys are rejected.
DistSpec dist_spec_from_json(const nlohmann::json& j);

/// Parses `kind:key=value,key=value[+gamma=g][+power=m]`, e.g. `pareto:alpha=3+gamma=0.5`.
DistSpec parse_inline_spec(std::string_view text);

/// Inline string, or a path to a JSON spec file.
DistSpec load_dist_spec(const std::string& text_or_path);

}  // namespace tailforge
