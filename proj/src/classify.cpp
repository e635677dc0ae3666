#include "tailforge/classify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "tailforge/errors.hpp"
#include "tailforge/moments.hpp"
#include "tailforge/sampling.hpp"

namespace tailforge {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::evidence_for: return "evidence-for";
        case Verdict::evidence_against: return "evidence-against";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

nlohmann::json ClassifyConfig::to_json() const {
    nlohmann::json j;
    j["schema"] = classify_schema;
    j["xgrid"] = xgrid;
    j["x_lo"] = x_lo;
    j["x_hi"] = x_hi;
    j["x_points"] = x_points;
    j["ol_t"] = ol_t;
    j["gammas"] = gammas;
    j["lgamma_t"] = lgamma_t;
    j["Ks"] = Ks;
    j["K_levels"] = K_levels;
    j["j_for"] = j_for;
    j["j_against"] = j_against;
    j["jump_ns"] = jump_ns;
    j["jump_h"] = jump_h;
    j["rel_tol"] = rel_tol;
    j["rules"] = rules.to_json();
    return j;
}

ClassifyConfig ClassifyConfig::from_json(const nlohmann::json& j) {
    if (j.contains("schema") && j["schema"] != classify_schema)
        throw ParameterError("unsupported classify config schema " + j["schema"].dump());
    ClassifyConfig c;
    c.xgrid = j.value("xgrid", c.xgrid);
    c.x_lo = j.value("x_lo", c.x_lo);
    c.x_hi = j.value("x_hi", c.x_hi);
    c.x_points = j.value("x_points", c.x_points);
    c.ol_t = j.value("ol_t", c.ol_t);
    c.gammas = j.value("gammas", c.gammas);
    c.lgamma_t = j.value("lgamma_t", c.lgamma_t);
    c.Ks = j.value("Ks", c.Ks);
    c.K_levels = j.value("K_levels", c.K_levels);
    c.j_for = j.value("j_for", c.j_for);
    c.j_against = j.value("j_against", c.j_against);
    c.jump_ns = j.value("jump_ns", c.jump_ns);
    c.jump_h = j.value("jump_h", c.jump_h);
    c.rel_tol = j.value("rel_tol", c.rel_tol);
    if (j.contains("rules")) c.rules = TrendRules::from_json(j["rules"]);
    return c;
}

const ClassEntry& ClassReport::at(const std::string& cls) const {
    for (const auto& e : entries)
        if (e.cls == cls) return e;
    throw ParameterError("no class entry '" + cls + "'");
}

nlohmann::json ClassReport::to_json() const {
    nlohmann::json j;
    j["label"] = label;
    j["disclaimer"] = disclaimer;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : entries) {
        nlohmann::json ej{{"class", e.cls}, {"verdict", to_string(e.verdict)}, {"reason", e.reason}};
        nlohmann::json ev = nlohmann::json::array();
        for (const auto& s : e.evidence) ev.push_back(s.to_json());
        ej["evidence"] = ev;
        arr.push_back(ej);
    }
    j["classes"] = arr;
    return j;
}

std::vector<double> classify_grid(const Distribution& d, const ClassifyConfig& cfg) {
    std::vector<double> g = cfg.xgrid;
    if (g.empty()) {
        const double hi = std::min(cfg.x_hi, 0.5 * d.truncation_hi());
        g = geometric_grid(cfg.x_lo, hi, cfg.x_points);
        for (double b : d.tail().breakpoints_in(cfg.x_lo, hi)) g.push_back(b);
    }
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

namespace {

bool near(double v, double target, double band) { return std::abs(v - target) <= band * std::abs(target); }

// bounded-limsup classes: a finite limsup proxy is evidence for membership
Verdict bounded_verdict(const Trend& t) {
    switch (t.kind) {
        case TrendKind::converging:
        case TrendKind::oscillating:
        case TrendKind::decreasing: return Verdict::evidence_for;
        case TrendKind::diverging: return Verdict::evidence_against;
        case TrendKind::increasing: return Verdict::inconclusive;
    }
    return Verdict::inconclusive;
}

// limit classes: the series must converge to `target`
Verdict limit_verdict(const Trend& t, double target, double band) {
    if (t.kind == TrendKind::converging) return near(*t.limit, target, band) ? Verdict::evidence_for : Verdict::evidence_against;
    if (t.kind == TrendKind::oscillating || t.kind == TrendKind::diverging) return Verdict::evidence_against;
    return Verdict::inconclusive;
}

std::string describe_trend(const DiagSeries& s) {
    std::string out = s.name + " " + to_string(s.trend.kind);
    if (s.trend.limit) {
        char buf[48];
        std::snprintf(buf, sizeof buf, " to %.6g", *s.trend.limit);
        out += buf;
    }
    return out;
}

}  // namespace

ClassReport classify(const Distribution& d, const ClassifyConfig& cfg) {
    ClassReport rep;
    rep.label = d.label();
    QuadConfig qc;
    qc.rel_tol = cfg.rel_tol;
    const std::vector<double> grid = classify_grid(d, cfg);
    const double band = cfg.rules.converge_band;
    const double T = d.truncation_hi();

    std::vector<double> ol_grid;
    for (double x : grid)
        if (x > cfg.ol_t) ol_grid.push_back(x);
    std::vector<double> shift_grid;
    for (double x : grid)
        if (x + cfg.lgamma_t <= T) shift_grid.push_back(x);

    const DiagSeries ol = ratio_diagnostic(d, {RatioKind::OL, cfg.ol_t}, ol_grid, cfg.rules, qc);
    const DiagSeries dd = ratio_diagnostic(d, {RatioKind::D}, grid, cfg.rules, qc);
    const DiagSeries os = ratio_diagnostic(d, {RatioKind::OS}, grid, cfg.rules, qc);
    const DiagSeries oss = ratio_diagnostic(d, {RatioKind::OSstar}, grid, cfg.rules, qc);

    rep.entries.push_back({"L", limit_verdict(ol.trend, 1.0, band), describe_trend(ol), {ol}});
    rep.entries.push_back({"D", bounded_verdict(dd.trend), describe_trend(dd), {dd}});
    rep.entries.push_back({"S", limit_verdict(os.trend, 2.0, band), describe_trend(os), {os}});

    // L(gamma) scan
    ClassEntry lg{"L(gamma)", Verdict::evidence_against, "", {}};
    std::optional<double> passing;
    bool all_refuted = true;
    for (double g : cfg.gammas) {
        DiagSeries s = ratio_diagnostic(d, {RatioKind::Lgamma, cfg.lgamma_t, g}, shift_grid, cfg.rules, qc);
        const Verdict v = limit_verdict(s.trend, 1.0, band);
        if (v == Verdict::evidence_for && !passing) passing = g;
        if (v != Verdict::evidence_against) all_refuted = false;
        if (!lg.reason.empty()) lg.reason += "; ";
        lg.reason += describe_trend(s);
        lg.evidence.push_back(std::move(s));
    }
    lg.verdict = passing ? Verdict::evidence_for : all_refuted ? Verdict::evidence_against : Verdict::inconclusive;
    rep.entries.push_back(lg);

    // S(gamma) at the first gamma with L(gamma) evidence
    ClassEntry sg{"S(gamma)", Verdict::evidence_against, "", {}};
    if (!passing) {
        sg.verdict = lg.verdict == Verdict::evidence_against ? Verdict::evidence_against : Verdict::inconclusive;
        sg.reason = "no tested gamma shows L(gamma) evidence";
    } else {
        const double g = *passing;
        char buf[200];
        try {
            const double target = 2.0 * exponential_moment(d, g, 1e-10);
            sg.verdict = limit_verdict(os.trend, target, band);
            std::snprintf(buf, sizeof buf, "gamma=%.6g: %s, target 2E[e^(gamma X)] = %.6g", g,
                          describe_trend(os).c_str(), target);
        } catch (const DivergenceError&) {
            sg.verdict = Verdict::evidence_against;
            std::snprintf(buf, sizeof buf, "gamma=%.6g: E[e^(gamma X)] is infinite", g);
        }
        sg.reason = buf;
        sg.evidence.push_back(os);
    }
    rep.entries.push_back(sg);

    rep.entries.push_back({"OS", bounded_verdict(os.trend), describe_trend(os), {os}});
    rep.entries.push_back({"OS*", bounded_verdict(oss.trend), describe_trend(oss), {oss}});
    rep.entries.push_back({"OL", bounded_verdict(ol.trend), describe_trend(ol), {ol}});

    // J: B(x; K) profile over the last half of the grid
    ClassEntry j{"J", Verdict::inconclusive, "", {}};
    std::vector<double> jx(grid.begin() + grid.size() / 2, grid.end());
    std::vector<double> Ks = cfg.Ks;
    if (Ks.empty())
        for (double level : cfg.K_levels) Ks.push_back(quantile_from_tail(d, 1.0 - level));
    std::sort(Ks.begin(), Ks.end());
    Ks.erase(std::unique(Ks.begin(), Ks.end()), Ks.end());
    Ks.erase(std::remove_if(Ks.begin(), Ks.end(), [](double K) { return !(K > 0); }), Ks.end());
    std::vector<double> min_by_k;
    for (double K : Ks) {
        DiagSeries s;
        s.name = "b2(K=" + std::to_string(K).substr(0, 6) + ")";
        for (double x : jx) {
            if (!(x > 2 * K)) continue;
            s.params.push_back(x);
            s.values.push_back(b2_cond(d, x, K, qc));
        }
        if (s.params.empty()) continue;
        s.finish(cfg.rules);
        min_by_k.push_back(*std::min_element(s.values.begin(), s.values.end()));
        j.evidence.push_back(std::move(s));
    }
    if (min_by_k.empty()) {
        j.reason = "no (x, K) pair with x > 2K on the grid";
    } else {
        bool monotone = true;
        for (std::size_t i = 1; i < min_by_k.size(); ++i)
            if (min_by_k[i] < min_by_k[i - 1] - 1e-9) monotone = false;
        const DiagSeries& top = j.evidence.back();
        const double top_min = min_by_k.back();
        char buf[200];
        std::snprintf(buf, sizeof buf, "min over x of b2 at K=%.6g is %.6g; profile in K %s; %s", Ks.back(), top_min,
                      monotone ? "nondecreasing" : "not monotone", describe_trend(top).c_str());
        j.reason = buf;
        if (top_min >= cfg.j_for && monotone && top.trend.kind != TrendKind::decreasing)
            j.verdict = Verdict::evidence_for;
        else if (top_min <= cfg.j_against &&
                 (top.trend.kind == TrendKind::decreasing || top.trend.kind == TrendKind::converging))
            j.verdict = Verdict::evidence_against;
    }
    for (int n : cfg.jump_ns) {
        DiagSeries s;
        s.name = "jump_center(n=" + std::to_string(n) + ",K=" + std::to_string(Ks.back()).substr(0, 6) + ")";
        for (double x : jx) {
            if (!(x > Ks.back())) continue;
            try {
                JumpConfig jc;
                jc.h = cfg.jump_h;
                const Bracket b = jump_cond(d, n, x, Ks.back(), jc);
                s.params.push_back(x);
                s.values.push_back(b.center());
            } catch (const Error&) {
                // grid too large or inconclusive at this x; skipped
            }
        }
        if (!s.params.empty()) {
            s.finish(cfg.rules);
            j.evidence.push_back(std::move(s));
        }
    }
    rep.entries.push_back(j);
    return rep;
}

}  // namespace tailforge
