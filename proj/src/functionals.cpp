#include "tailforge/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "tailforge/builtins.hpp"
#include "tailforge/errors.hpp"
#include "tailforge/io.hpp"
#include "tailforge/logmath.hpp"

namespace tailforge {

using logmath::neg_inf;

double t_ratio(const Distribution& d, double x, double K, const QuadConfig& cfg) {
    if (!(K > 0) || !(K <= 0.5 * x)) throw DomainError("t_ratio needs 0 < K <= x/2");
    const double half = 0.5 * x;
    const double den = log_cross_ratio(d, 0.0, half, x, cfg);
    if (K == half) return 1.0;
    return std::min(1.0, std::exp(log_cross_ratio(d, 0.0, K, x, cfg) - den));
}

double b2_cond(const Distribution& d, double x, double K, const QuadConfig& cfg) {
    if (!(K > 0) || !(x > 2 * K)) throw DomainError("b2_cond needs x > 2K > 0");
    const double num = std::log(2.0) + log_stieltjes_ratio(d, 0.0, K, x, cfg);
    return std::min(1.0, std::exp(num - log_os_ratio(d, x, cfg)));
}

double os_ratio_transformed(const Distribution& d, double gamma, double x, const QuadConfig& cfg) {
    if (!(gamma > 0)) throw ParameterError("gamma must be > 0");
    const double os = log_os_ratio(d, x, cfg);
    const double star = x > 0 ? std::log(gamma) + log_cross_ratio(d, 0.0, x, x, cfg) : neg_inf;
    return std::exp(logmath::log_add(os, star));
}

double b2_cond_transformed(const Distribution& d, double gamma, double x, double K, const QuadConfig& cfg) {
    if (!(gamma > 0)) throw ParameterError("gamma must be > 0");
    if (!(K > 0) || !(x > 2 * K)) throw DomainError("b2_cond needs x > 2K > 0");
    const double l2 = std::log(2.0);
    const double num = logmath::log_add(l2 + log_stieltjes_ratio(d, 0.0, K, x, cfg),
                                        l2 + std::log(gamma) + log_cross_ratio(d, 0.0, K, x, cfg));
    const double den = logmath::log_add(log_os_ratio(d, x, cfg), std::log(gamma) + log_cross_ratio(d, 0.0, x, x, cfg));
    return std::min(1.0, std::exp(num - den));
}

Bracket jump_cond(const Distribution& d, int n, double x, double K, const JumpConfig& cfg) {
    if (n < 2) throw ParameterError("jump_cond needs n >= 2");
    if (!(K >= 0) || !(x >= 0)) throw DomainError("jump_cond needs x, K >= 0");
    if (K >= x) return {1.0, 1.0};
    const double h = cfg.h > 0 ? cfg.h : lattice_step(x / 4096.0);
    const BracketGrid all = io::cached_convn_tail_grid(d, n, x, h, cfg.limits);
    const BracketGrid capped = io::cached_trunc_convn_tail_grid(d, n, x - K, x, h, cfg.limits);
    const Bracket den = bracket_at(all, x);
    const Bracket num = bracket_at(capped, x);
    if (!(den.lo > 0)) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "P(S_%d > %.6g) has lower bound 0 on this grid; refine h", n, x);
        throw InconclusiveError(buf);
    }
    const double lo = std::clamp(1.0 - num.hi / den.lo, 0.0, 1.0);
    const double hi = std::clamp(1.0 - num.lo / den.hi, 0.0, 1.0);
    return {lo, std::max(lo, hi)};
}

std::string to_string(RatioKind k) {
    switch (k) {
        case RatioKind::OL: return "ol";
        case RatioKind::D: return "d";
        case RatioKind::Lgamma: return "lgamma";
        case RatioKind::OS: return "os";
        case RatioKind::OSstar: return "osstar";
    }
    return "?";
}

RatioKind ratio_kind_from_string(const std::string& s) {
    if (s == "ol") return RatioKind::OL;
    if (s == "d") return RatioKind::D;
    if (s == "lgamma") return RatioKind::Lgamma;
    if (s == "os") return RatioKind::OS;
    if (s == "osstar") return RatioKind::OSstar;
    throw ParameterError("unknown ratio kind '" + s + "'");
}

double ratio_value(const Distribution& d, const RatioSpec& spec, double x, const QuadConfig& cfg) {
    const TailCurve& t = d.tail();
    switch (spec.kind) {
        case RatioKind::OL:
            if (!(spec.t >= 0) || spec.t > x) throw DomainError("OL ratio needs 0 <= t <= x");
            return std::exp(t.log_tail_ratio(x, -spec.t));
        case RatioKind::D:
            return std::exp(t.log_tail_ratio(x, -0.5 * x));
        case RatioKind::Lgamma:
            if (!(spec.t >= 0)) throw DomainError("Lgamma ratio needs t >= 0");
            return std::exp(spec.gamma * spec.t + t.log_tail_ratio(x, spec.t));
        case RatioKind::OS:
            return std::exp(log_os_ratio(d, x, cfg));
        case RatioKind::OSstar:
            if (x == 0) return 0.0;
            return std::exp(log_cross_ratio(d, 0.0, x, x, cfg));
    }
    return NAN;
}

DiagSeries ratio_diagnostic(const Distribution& d, const RatioSpec& spec, std::span<const double> xgrid,
                            const TrendRules& rules, const QuadConfig& cfg) {
    if (xgrid.empty()) throw ParameterError("ratio_diagnostic needs a nonempty grid");
    DiagSeries s;
    s.name = to_string(spec.kind);
    if (spec.kind == RatioKind::OL || spec.kind == RatioKind::Lgamma) {
        char buf[80];
        if (spec.kind == RatioKind::OL)
            std::snprintf(buf, sizeof buf, "ol(t=%.6g)", spec.t);
        else
            std::snprintf(buf, sizeof buf, "lgamma(gamma=%.6g,t=%.6g)", spec.gamma, spec.t);
        s.name = buf;
    }
    s.params.assign(xgrid.begin(), xgrid.end());
    s.values.reserve(xgrid.size());
    for (double x : xgrid) s.values.push_back(ratio_value(d, spec, x, cfg));
    s.finish(rules);
    return s;
}

double log_exam300_lower_bound(int n) {
    if (n < 1) throw ParameterError("exam300_lower_bound needs n >= 1");
    const std::vector<double> a = fkz_sequence(n + 2);
    if (static_cast<int>(a.size()) < n + 2) {
        char buf[120];
        std::snprintf(buf, sizeof buf, "a_%d is not representable; the fkz sequence stops at a_%zu", n + 1,
                      a.size() - 1);
        throw TruncationError(buf);
    }
    const double an = a[n];
    const double an1 = a[n + 1];
    // a_(n+1)^2 / 2 - a_n^2 = (a_(n+1)/sqrt2 - a_n)(a_(n+1)/sqrt2 + a_n)
    const double r = an1 / std::sqrt(2.0);
    const double diff = (r - an) * (r + an);
    if (!(diff > 0)) throw DomainError("exam300 bound is not positive for this n");
    return std::log(diff) - an;
}

double exam300_lower_bound(int n) { return std::exp(log_exam300_lower_bound(n)); }

DiagSeries weak_equiv_diag(const Distribution& d, std::span<const double> tgrid, std::span<const double> xgrid,
                           const TrendRules& rules) {
    if (tgrid.empty() || xgrid.empty()) throw ParameterError("weak_equiv_diag needs nonempty grids");
    DiagSeries s;
    s.name = "weak_equiv";
    s.param_name = "t";
    for (double t : tgrid) {
        double best = neg_inf;
        for (double x : xgrid)
            if (x > t) best = std::max(best, d.tail().log_tail_ratio(x, -t));
        if (best == neg_inf) throw DomainError("weak_equiv_diag: no grid x exceeds t");
        s.params.push_back(t);
        s.values.push_back(std::exp(best));
    }
    s.finish(rules);
    return s;
}

nlohmann::json JumpProfile::to_json() const {
    nlohmann::json j;
    j["n"] = n;
    j["K"] = Ks;
    j["x"] = xs;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : probs) {
        nlohmann::json r = nlohmann::json::array();
        for (const auto& b : row) r.push_back({b.lo, b.hi});
        rows.push_back(r);
    }
    j["brackets"] = rows;
    return j;
}

JumpProfile jump_profile(const Distribution& d, int n, std::span<const double> xs, std::span<const double> Ks,
                         const JumpConfig& cfg) {
    JumpProfile p;
    p.n = n;
    p.xs.assign(xs.begin(), xs.end());
    p.Ks.assign(Ks.begin(), Ks.end());
    for (double x : xs) {
        std::vector<Bracket> row;
        for (double K : Ks) row.push_back(jump_cond(d, n, x, K, cfg));
        p.probs.push_back(std::move(row));
    }
    return p;
}

int xu_window(double x, std::span<const double> xs, double K) {
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    if (it == xs.begin() || it == xs.end()) return 0;
    const double xn = *(it - 1);
    if (x < xn + K) return 1;
    if (x < 1.5 * xn) return 2;
    if (x < 2 * xn) return 3;
    if (x < 2 * xn + K) return 4;
    return 5;
}

std::vector<double> geometric_grid(double lo, double hi, int count) {
    if (!(lo > 0) || !(hi >= lo) || count < 1) throw ParameterError("geometric grid needs 0 < lo <= hi, count >= 1");
    std::vector<double> g;
    if (count == 1) return {lo};
    const double r = std::log(hi / lo);
    for (int i = 0; i < count; ++i) g.push_back(i == count - 1 ? hi : lo * std::exp(r * i / (count - 1)));
    return g;
}

std::vector<double> linear_grid(double lo, double hi, int count) {
    if (!(hi >= lo) || count < 1) throw ParameterError("linear grid needs lo <= hi, count >= 1");
    if (count == 1) return {lo};
    std::vector<double> g;
    for (int i = 0; i < count; ++i) g.push_back(i == count - 1 ? hi : lo + (hi - lo) * i / (count - 1));
    return g;
}

}  // namespace tailforge
