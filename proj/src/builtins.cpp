#include "tailforge/builtins.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>

#include "tailforge/errors.hpp"
#include "tailforge/transform.hpp"

namespace tailforge {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double inf = std::numeric_limits<double>::infinity();
const double ln4 = std::log(4.0);

std::string note(const char* f, double v) {
    char buf[200];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

struct Built {
    TailCurve tail;
    std::vector<std::string> notices;
};

Built make_pareto(const ParetoSpec& s) {
    if (!(s.alpha > 0)) throw ParameterError("pareto requires alpha > 0");
    return {TailCurve({Segment(0.0, inf, PowerForm{0.0, 1.0, s.alpha})}), {}};
}

Built make_exponential(const ExponentialSpec& s) {
    if (!(s.rate > 0)) throw ParameterError("exponential requires rate > 0");
    return {TailCurve({Segment(0.0, inf, ExpAffineForm{0.0, s.rate})}), {}};
}

Built make_weibull(const WeibullHeavySpec& s) {
    if (!(s.beta > 0 && s.beta < 1)) throw ParameterError("weibull_heavy requires 0 < beta < 1");
    return {TailCurve({Segment(0.0, inf, StretchedExpForm{1.0, s.beta})}), {}};
}

Built make_dyadic() {
    std::vector<Segment> segs;
    segs.emplace_back(0.0, 1.0, ConstantForm{0.0});
    int n = 0;
    for (; n <= 1022; ++n)
        segs.emplace_back(std::ldexp(1.0, n), std::ldexp(1.0, n + 1), ConstantForm{-n * ln4});
    const double T = std::ldexp(1.0, 1023);
    return {TailCurve(std::move(segs), -1023 * ln4),
            {note("dyadic staircase truncated at 2^1023 = %.6g; F there is 4^-1023", T)}};
}

Built make_fkz(const FkzExampleSpec& s) {
    if (s.max_segments < 1) throw ParameterError("fkz_example requires max_segments >= 1");
    const std::vector<double> a = fkz_sequence(s.max_segments + 1);
    std::vector<Segment> segs;
    for (std::size_t n = 0; n + 1 < a.size(); ++n)
        segs.emplace_back(a[n] * a[n], a[n + 1] * a[n + 1], ExpAffineForm{a[n], 1.0 / (a[n] + a[n + 1])});
    std::vector<std::string> notices;
    const std::size_t count = segs.size();
    const double T = segs.back().hi();
    if (static_cast<int>(count) < s.max_segments)
        notices.push_back(note("fkz construction truncated at a_n^2 = %.6g: the next a_n overflows", T));
    else
        notices.push_back(note("fkz construction cut at max_segments, truncation_hi = %.6g", T));
    return {TailCurve(std::move(segs)), notices};
}

Built make_plateau(const PlateauExampleSpec& s) {
    if (!(s.a > 1)) throw ParameterError("plateau_example requires a > 1");
    const double y0 = s.y0.value_or(std::log(s.a) * std::log(s.a));
    if (!(y0 >= 0)) throw ParameterError("plateau_example requires y0 >= 0");
    if (std::log(s.a) - std::sqrt(y0) > 1e-12 * std::max(1.0, std::log(s.a)))
        throw ParameterError("plateau_example requires a * F1(y0) <= 1");
    if (s.x_points.empty() && !(s.growth_factor > 1)) throw ParameterError("plateau_example requires growth_factor > 1");
    const auto pairs = plateau_pairs(s);
    const StretchedExpForm base{1.0, 0.5};
    std::vector<Segment> segs;
    segs.emplace_back(0.0, pairs.front().first, base);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto [x, y] = pairs[i];
        segs.emplace_back(x, y, ConstantForm{-std::sqrt(x)});
        const double next = i + 1 < pairs.size() ? pairs[i + 1].first : (s.x_points.empty() ? -1.0 : inf);
        if (next < 0) break;
        segs.emplace_back(y, next, base);
    }
    std::vector<std::string> notices;
    std::optional<double> terminal;
    if (s.x_points.empty()) {
        notices.push_back(note("plateau construction truncated at the last plateau end y = %.6g", segs.back().hi()));
        terminal = -std::sqrt(segs.back().hi());
    }
    return {TailCurve(std::move(segs), terminal), notices};
}

Built make_xu(const XuPiecewiseSpec& s) {
    if (s.m < 1) throw ParameterError("xu_piecewise requires integer m >= 1");
    if (!(s.alpha > 2.0 + 3.0 / s.m)) throw ParameterError("xu_piecewise requires alpha > 2 + 3/m");
    if (!(s.x1 > std::pow(4.0, s.alpha))) throw ParameterError("xu_piecewise requires x1 > 4^alpha");
    if (s.max_segments < 2) throw ParameterError("xu_piecewise requires max_segments >= 2");
    const double alpha = s.alpha;
    std::vector<Segment> segs;
    double lx = std::log(s.x1);
    double x = s.x1;
    segs.emplace_back(0.0, x, AffineForm{0.0, -alpha * lx});
    double start_log = -alpha * lx;
    std::vector<std::string> notices;
    while (true) {
        const double x2 = 2.0 * x;
        if (!std::isfinite(x2) || static_cast<int>(segs.size()) + 2 > s.max_segments) {
            notices.push_back(note("xu construction truncated at x = %.6g", segs.back().hi()));
            break;
        }
        const double plateau = -(alpha + 1.0) * lx;
        segs.emplace_back(x, x2, AffineForm{start_log, plateau});
        const double lnext = (1.0 + 1.0 / alpha) * lx;
        const double next = std::exp(lnext);
        if (!std::isfinite(next)) {
            notices.push_back(note("xu construction truncated at 2 x_n = %.6g: x_(n+1) overflows", x2));
            break;
        }
        segs.emplace_back(x2, next, ConstantForm{plateau});
        // x_(n+1)^-alpha equals x_n^-(alpha+1); carry the plateau log exactly.
        start_log = plateau;
        lx = lnext;
        x = next;
    }
    TailCurve tail(std::move(segs));
    if (s.m > 1) tail = tail.powered(s.m);
    return {std::move(tail), notices};
}

}  // namespace

std::vector<double> fkz_sequence(int max_terms) {
    std::vector<double> a{0.0, 1.0};
    while (static_cast<int>(a.size()) < max_terms) {
        const double an = a.back();
        const double next = std::exp(an - std::log(an));
        if (!std::isfinite(next) || !std::isfinite(next * next)) break;
        a.push_back(next);
    }
    if (static_cast<int>(a.size()) > max_terms) a.resize(max_terms);
    return a;
}

std::vector<double> xu_sequence(double alpha, double x1, int max_terms) {
    std::vector<double> xs{x1};
    double lx = std::log(x1);
    while (static_cast<int>(xs.size()) < max_terms) {
        lx *= 1.0 + 1.0 / alpha;
        const double v = std::exp(lx);
        if (!std::isfinite(v)) break;
        xs.push_back(v);
    }
    return xs;
}

std::vector<std::pair<double, double>> plateau_pairs(const PlateauExampleSpec& s) {
    const double la = std::log(s.a);
    const double y0 = s.y0.value_or(la * la);
    auto y_of = [&](double x) {
        const double r = std::sqrt(x) + la;
        return r * r;
    };
    std::vector<std::pair<double, double>> out;
    if (!s.x_points.empty()) {
        double prev_y = 0.0;
        for (double x : s.x_points) {
            if (!(x > prev_y) || !std::isfinite(x))
                throw ParameterError("plateau x_points must satisfy x_i > y_(i-1) and be finite");
            out.emplace_back(x, y_of(x));
            prev_y = out.back().second;
        }
        return out;
    }
    const int max_pairs = std::max(1, (s.max_segments - 1) / 2);
    // Past 2^40 the spacing of doubles near y is no longer small against
    // sqrt(y) - sqrt(x) = ln a, so the plateau ratio would stop being exact.
    const double limit = std::ldexp(1.0, 40);
    double x = std::max(y0, 1.0) + 1.0;
    while (static_cast<int>(out.size()) < max_pairs) {
        const double y = y_of(x);
        if (y > limit) break;
        out.emplace_back(x, y);
        x = s.growth_factor * y;
        if (x > limit) break;
    }
    if (out.empty()) throw ParameterError("plateau_example: first plateau lies beyond 2^40");
    return out;
}

Distribution builtin(const BuiltinSpec& spec) {
    Built b = std::visit(overloaded{
                             [](const ParetoSpec& s) { return make_pareto(s); },
                             [](const ExponentialSpec& s) { return make_exponential(s); },
                             [](const WeibullHeavySpec& s) { return make_weibull(s); },
                             [](const DyadicParetoSpec&) { return make_dyadic(); },
                             [](const FkzExampleSpec& s) { return make_fkz(s); },
                             [](const PlateauExampleSpec& s) { return make_plateau(s); },
                             [](const XuPiecewiseSpec& s) { return make_xu(s); },
                         },
                         spec);
    DistSpec ds{spec, {}};
    return Distribution(std::move(b.tail), ds, describe(ds), std::move(b.notices));
}

Distribution build(const DistSpec& spec) {
    Distribution d = builtin(spec.base);
    for (const auto& step : spec.steps) {
        if (step.kind == TransformStep::Kind::gamma)
            d = gamma_transform(d, TransformSpec{step.value});
        else
            d = power_tail(d, static_cast<int>(step.value));
    }
    return d;
}

}  // namespace tailforge
