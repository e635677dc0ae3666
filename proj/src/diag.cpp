#include "tailforge/diag.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "tailforge/errors.hpp"

namespace tailforge {

std::string to_string(TrendKind k) {
    switch (k) {
        case TrendKind::increasing: return "increasing";
        case TrendKind::decreasing: return "decreasing";
        case TrendKind::oscillating: return "oscillating";
        case TrendKind::converging: return "converging";
        case TrendKind::diverging: return "diverging";
    }
    return "?";
}

nlohmann::json TrendRules::to_json() const {
    return {{"oscillation_fraction", oscillation_fraction},
            {"flat_tolerance", flat_tolerance},
            {"diverge_factor", diverge_factor},
            {"diverge_elasticity", diverge_elasticity},
            {"converge_band", converge_band}};
}

TrendRules TrendRules::from_json(const nlohmann::json& j) {
    TrendRules r;
    r.oscillation_fraction = j.value("oscillation_fraction", r.oscillation_fraction);
    r.flat_tolerance = j.value("flat_tolerance", r.flat_tolerance);
    r.diverge_factor = j.value("diverge_factor", r.diverge_factor);
    r.diverge_elasticity = j.value("diverge_elasticity", r.diverge_elasticity);
    r.converge_band = j.value("converge_band", r.converge_band);
    return r;
}

namespace {

double safe_log(double v) { return std::log(std::max(v, 1e-300)); }

// slope of log v against log p (plain p when some p <= 0)
double ls_slope(std::span<const double> p, std::span<const double> v) {
    const std::size_t n = p.size();
    if (n < 2) return 0.0;
    const bool logp = std::all_of(p.begin(), p.end(), [](double x) { return x > 0; });
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += logp ? std::log(p[i]) : p[i];
        my += safe_log(v[i]);
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = (logp ? std::log(p[i]) : p[i]) - mx;
        sxy += dx * (safe_log(v[i]) - my);
        sxx += dx * dx;
    }
    return sxx > 0 ? sxy / sxx : 0.0;
}

}  // namespace

Trend classify_trend(std::span<const double> params, std::span<const double> values, const TrendRules& rules) {
    const std::size_t n = values.size();
    if (params.size() != n) throw ParameterError("trend: parameter and value grids differ in length");
    if (n == 0) throw ParameterError("trend: empty series");
    if (n == 1) return {TrendKind::converging, values[0]};

    // 1. oscillation
    int changes = 0;
    int prev_sign = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double d = values[i + 1] - values[i];
        const double scale = std::max({1.0, std::abs(values[i]), std::abs(values[i + 1])});
        if (std::abs(d) <= rules.flat_tolerance * scale) continue;
        const int sign = d > 0 ? 1 : -1;
        if (prev_sign != 0 && sign != prev_sign) ++changes;
        prev_sign = sign;
    }
    const double steps = static_cast<double>(n - 1);
    const std::size_t half = n / 2;
    if (changes > rules.oscillation_fraction * steps) {
        // an oscillation whose upper envelope keeps growing is unbounded
        const double env_first = *std::max_element(values.begin(), values.begin() + half);
        const double env_last = *std::max_element(values.begin() + half, values.end());
        if (env_last > rules.diverge_factor * env_first) return {TrendKind::diverging, std::nullopt};
        return {TrendKind::oscillating, std::nullopt};
    }

    const auto p_half = params.subspan(half);
    const auto v_half = values.subspan(half);
    const double slope = ls_slope(p_half, v_half);

    // 2. divergence
    const double first = values.front();
    const double last = values.back();
    if (last > rules.diverge_factor * first && slope > 0) return {TrendKind::diverging, std::nullopt};
    bool strictly_up = v_half.size() >= 2;
    for (std::size_t i = 0; i + 1 < v_half.size(); ++i)
        if (!(v_half[i + 1] > v_half[i])) strictly_up = false;
    if (strictly_up && p_half.front() > 0 && p_half.back() > p_half.front() && v_half.front() > 0) {
        const double elasticity =
            std::log(v_half.back() / v_half.front()) / std::log(p_half.back() / p_half.front());
        if (elasticity >= rules.diverge_elasticity) return {TrendKind::diverging, std::nullopt};
    }

    // 3. convergence
    const std::size_t q = std::max<std::size_t>(2, n / 4);
    const auto tail = values.subspan(n - std::min(q, n));
    const auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
    if (*hi - *lo <= rules.converge_band * std::abs(last)) return {TrendKind::converging, last};

    // 4. direction
    return {slope > 0 ? TrendKind::increasing : TrendKind::decreasing, std::nullopt};
}

void DiagSeries::finish(const TrendRules& rules) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]) || values[i] < 0) {
            char buf[200];
            std::snprintf(buf, sizeof buf, "%s: value %.6g at %s = %.6g is not a finite nonnegative number",
                          name.c_str(), values[i], param_name.c_str(), params[i]);
            throw NumericalError(buf);
        }
    }
    trend = classify_trend(params, values, rules);
}

nlohmann::json DiagSeries::to_json() const {
    nlohmann::json j;
    j["name"] = name;
    j["param_name"] = param_name;
    j["params"] = params;
    j["values"] = values;
    if (!windows.empty()) j["windows"] = windows;
    j["trend"] = to_string(trend.kind);
    if (trend.limit) j["limit"] = *trend.limit;
    return j;
}

}  // namespace tailforge
