#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace tailforge {

enum class TrendKind { increasing, decreasing, oscillating, converging, diverging };

std::string to_string(TrendKind k);

struct Trend {
    TrendKind kind = TrendKind::converging;
    std::optional<double> limit;  ///< set when converging
};

/// Thresholds of the trend classifier. Rules are checked in order:
///  1. oscillating: sign changes between successive nonzero differences
///     exceed `oscillation_fraction` of the steps (diverging instead when the
///     maximum over the last half exceeds `diverge_factor` times that of the first);
///  2. diverging: last > `diverge_factor` * first with positive slope, or the
///     last half strictly increasing with log-log elasticity >= `diverge_elasticity`;
///  3. converging: last quarter within a relative band `converge_band`, limit = last value;
///  4. otherwise increasing/decreasing by the least-squares slope of log value
///     against log parameter over the last half.
struct TrendRules {
    double oscillation_fraction = 0.25;
    double flat_tolerance = 1e-9;
    double diverge_factor = 10.0;
    double diverge_elasticity = 0.5;
    double converge_band = 0.02;

    nlohmann::json to_json() const;
    static TrendRules from_json(const nlohmann::json& j);
};

Trend classify_trend(std::span<const double> params, std::span<const double> values, const TrendRules& rules = {});

/// A parameter grid with one ratio per point plus its trend.
struct DiagSeries {
    std::string name;
    std::string param_name = "x";
    std::vector<double> params;
    std::vector<double> values;
    std::vector<std::string> windows;  ///< optional per-point annotation
    Trend trend;

    /// Checks values (finite, >= 0) and sets the trend.
    void finish(const TrendRules& rules = {});
    nlohmann::json to_json() const;
};

}  // namespace tailforge
