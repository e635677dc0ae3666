#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "tailforge/diag.hpp"
#include "tailforge/distribution.hpp"
#include "tailforge/functionals.hpp"

namespace tailforge {

inline constexpr const char* classify_schema = "tailforge/classify@1";
inline constexpr const char* evidence_disclaimer = "numerical evidence, not proof";

/// Grids and thresholds for classify(). All verdict rules are deterministic.
struct ClassifyConfig {
    /// x grid; when empty a geometric grid over [x_lo, x_hi] with `x_points`
    /// points is used, augmented by every tail breakpoint in that range.
    std::vector<double> xgrid;
    double x_lo = 4.0;
    double x_hi = 1024.0;
    int x_points = 24;
    double ol_t = 1.0;
    std::vector<double> gammas{0.25, 0.5, 1.0, 2.0};
    double lgamma_t = 1.0;
    /// K values for the B(x; K) profile behind the J verdict. When empty,
    /// K runs over the quantiles F(K) = level for each entry of `K_levels`.
    std::vector<double> Ks;
    std::vector<double> K_levels{0.5, 0.9, 0.99, 0.999};
    double j_for = 0.9;
    double j_against = 0.5;
    /// Also bracket P(X_(n,1) > x-K | S_n > x) for these n (empty: skip).
    std::vector<int> jump_ns;
    double jump_h = 0.0;  ///< 0: automatic step
    double rel_tol = 1e-9;
    TrendRules rules;

    nlohmann::json to_json() const;
    static ClassifyConfig from_json(const nlohmann::json& j);
};

enum class Verdict { evidence_for, evidence_against, inconclusive };
std::string to_string(Verdict v);

struct ClassEntry {
    std::string cls;
    Verdict verdict = Verdict::inconclusive;
    std::string reason;
    std::vector<DiagSeries> evidence;
};

struct ClassReport {
    std::string label;
    std::string disclaimer = evidence_disclaimer;
    std::vector<ClassEntry> entries;

    const ClassEntry& at(const std::string& cls) const;
    nlohmann::json to_json() const;
};

/// The x grid classify() would use for d under cfg.
std::vector<double> classify_grid(const Distribution& d, const ClassifyConfig& cfg);

ClassReport classify(const Distribution& d, const ClassifyConfig& cfg = {});

}  // namespace tailforge
