#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "../support.hpp"
#include "tailforge/builtins.hpp"
#include "tailforge/errors.hpp"
#include "tailforge/functionals.hpp"
#include "tailforge/moments.hpp"
#include "tailforge/sampling.hpp"

using namespace tailforge;
using testsupport::rel_err;

namespace {

std::vector<Distribution> all_builtins() {
    std::vector<Distribution> v;
    v.push_back(builtin(ParetoSpec{3.0}));
    v.push_back(builtin(ParetoSpec{0.7}));
    v.push_back(builtin(ExponentialSpec{1.0}));
    v.push_back(builtin(ExponentialSpec{2.5}));
    v.push_back(builtin(WeibullHeavySpec{0.5}));
    v.push_back(builtin(DyadicParetoSpec{}));
    v.push_back(builtin(FkzExampleSpec{}));
    v.push_back(builtin(PlateauExampleSpec{}));
    v.push_back(builtin(XuPiecewiseSpec{5.5, 4096.0, 1, 4096}));
    v.push_back(builtin(XuPiecewiseSpec{5.5, 4096.0, 2, 4096}));
    return v;
}

// points inside and on both sides of every breakpoint up to `hi`
std::vector<double> probe_grid(const Distribution& d, double hi) {
    std::vector<double> g = geometric_grid(1e-3, hi, 200);
    g.insert(g.begin(), 0.0);
    for (double b : d.tail().breakpoints_in(0.0, hi)) {
        g.push_back(b);
        g.push_back(std::nextafter(b, 0.0));
        g.push_back(std::nextafter(b, hi));
    }
    std::sort(g.begin(), g.end());
    return g;
}

double probe_hi(const Distribution& d) {
    return std::min(d.truncation_hi(), 1e300);
}

}  // namespace

TEST_SUITE("dist-core") {

TEST_CASE("closed-form tails") {
    const auto p = builtin(ParetoSpec{3.0});
    const auto e = builtin(ExponentialSpec{2.0});
    const auto w = builtin(WeibullHeavySpec{0.5});
    for (double x : {0.0, 0.3, 1.0, 7.5, 100.0, 1e6}) {
        CHECK(rel_err(p.tail_value(x), std::pow(1 + x, -3.0)) < 1e-14);
        CHECK(std::abs(e.log_tail(x) + 2 * x) <= 1e-14 * std::max(1.0, 2 * x));
        CHECK(std::abs(w.log_tail(x) + std::sqrt(x)) <= 1e-14 * std::max(1.0, std::sqrt(x)));
    }
    // far below the smallest double
    CHECK(rel_err(p.log_tail(1e200), -3 * std::log1p(1e200)) < 1e-14);
    CHECK(rel_err(e.log_tail(1e300), -2e300) < 1e-14);
}

TEST_CASE("dyadic tail values and atoms") {
    const auto d = builtin(DyadicParetoSpec{});
    CHECK(d.tail_value(0.0) == 1.0);
    CHECK(d.tail_value(1.999) == 1.0);
    CHECK(d.tail_value(2.0) == 0.25);
    CHECK(d.tail_value(3.9) == 0.25);
    CHECK(d.tail_value(4.0) == 0.0625);
    CHECK(d.log_tail(std::ldexp(1.0, 30)) == doctest::Approx(-30 * std::log(4.0)).epsilon(1e-15));
    CHECK(d.log_tail_left(4.0) == doctest::Approx(std::log(0.25)).epsilon(1e-15));
    REQUIRE(d.mean());
    CHECK(*d.mean() == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(d.parts().ac_mass == 0.0);
    CHECK(d.parts().atoms.size() > 100);
    CHECK(d.parts().atoms.front().location == 2.0);
    CHECK(d.parts().atoms.front().mass == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("means") {
    CHECK(*builtin(ExponentialSpec{1.0}).mean() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(*builtin(ExponentialSpec{4.0}).mean() == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(*builtin(ParetoSpec{3.0}).mean() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(*builtin(WeibullHeavySpec{0.5}).mean() == doctest::Approx(2.0).epsilon(1e-10));
    CHECK_FALSE(builtin(ParetoSpec{0.7}).mean().has_value());
}

TEST_CASE("fkz sequence and tail") {
    const auto a = fkz_sequence();
    REQUIRE(a.size() >= 6);
    CHECK(a[0] == 0.0);
    CHECK(a[1] == 1.0);
    for (std::size_t n = 1; n + 1 < a.size(); ++n)
        CHECK(rel_err(a[n + 1], std::exp(a[n]) / a[n]) < 1e-14);
    const auto d = builtin(FkzExampleSpec{});
    // tail at a_n^2 is e^(-a_n)
    for (std::size_t n = 1; n + 1 < a.size(); ++n)
        CHECK(rel_err(d.log_tail(a[n] * a[n]), -a[n]) < 1e-13);
    CHECK(d.truncation_hi() == doctest::Approx(a[5] * a[5]).epsilon(1e-15));
}

TEST_CASE("queries past truncation are errors") {
    const auto d = builtin(FkzExampleSpec{});
    CHECK_THROWS_AS(d.log_tail(d.truncation_hi() * 2), DomainError);
    CHECK_NOTHROW(d.log_tail(d.truncation_hi()));
    CHECK_THROWS_AS(builtin(ExponentialSpec{1.0}).log_tail(std::nan("")), DomainError);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(builtin(ParetoSpec{-1.0}), ParameterError);
    CHECK_THROWS_AS(builtin(ExponentialSpec{0.0}), ParameterError);
    CHECK_THROWS_AS(builtin(WeibullHeavySpec{1.5}), ParameterError);
    PlateauExampleSpec flat;
    flat.a = 0.5;
    CHECK_THROWS_AS(builtin(flat), ParameterError);
    CHECK_THROWS_AS(builtin(XuPiecewiseSpec{-2.0}), ParameterError);
}

TEST_CASE("monotone with no upward jumps") {
    for (const auto& d : all_builtins()) {
        CAPTURE(d.label());
        const auto g = probe_grid(d, probe_hi(d));
        double prev = 0.0;
        for (double x : g) {
            const double l = d.log_tail(x);
            CHECK(l <= prev + 1e-12 * std::max(1.0, std::abs(prev)));
            CHECK(d.log_tail_left(x) >= l - 1e-12 * std::max(1.0, std::abs(l)));
            prev = l;
        }
        for (const auto& at : d.parts().atoms) {
            // deep atoms underflow in probability scale, never in log scale
            CHECK(std::isfinite(at.log_mass));
            CHECK(at.mass >= 0);
            CHECK(d.log_tail_left(at.location) > d.log_tail(at.location));
        }
        CHECK(d.parts().atom_mass + d.parts().ac_mass <= 1.0 + 1e-12);
    }
}

TEST_CASE("jumps only at atoms") {
    for (const auto& d : all_builtins()) {
        CAPTURE(d.label());
        std::vector<double> atoms;
        for (const auto& at : d.parts().atoms) atoms.push_back(at.location);
        for (double b : d.tail().breakpoints()) {
            if (b > probe_hi(d)) break;
            const double l = d.log_tail(b);
            const double left = d.log_tail_left(b);
            const bool is_atom = std::binary_search(atoms.begin(), atoms.end(), b);
            if (!is_atom) CHECK(std::abs(left - l) <= 1e-12 * std::max(1.0, std::abs(l)));
        }
    }
}

TEST_CASE("xu two-sided power bound over ten segments") {
    for (auto [alpha, x1] : {std::pair{5.5, 4096.0}, {5.9, 4096.0}, {7.0, 20000.0}}) {
        const XuPiecewiseSpec spec{alpha, x1, 1, 4096};
        const auto d = builtin(spec);
        const auto xs = xu_sequence(alpha, x1, 4096);
        REQUIRE(xs.size() >= 6);
        CAPTURE(alpha);
        // each [x_n, x_(n+1)) has two pieces; five intervals cover ten segments
        const auto g = geometric_grid(xs[0], std::nextafter(xs[5], 0.0), 400);
        for (double x : g) {
            const double l = d.log_tail(x);
            CHECK(l >= -(alpha + 1) * std::log(x));
            CHECK(l <= alpha * std::log(2.0) - alpha * std::log(x));
        }
        for (int n = 0; n + 1 < 6; ++n)
            CHECK(rel_err(xs[n + 1], std::pow(xs[n], 1 + 1 / alpha)) < 1e-12);
    }
}

TEST_CASE("plateau pairs satisfy the defining ratio") {
    const PlateauExampleSpec spec;
    const auto d = builtin(spec);
    const auto pairs = plateau_pairs(spec);
    REQUIRE(pairs.size() >= 5);
    double prev_y = 0;
    for (const auto& [x, y] : pairs) {
        CHECK(x > prev_y);
        CHECK(y > x);
        // e^(-sqrt x) = a e^(-sqrt y)
        CHECK(std::abs((std::sqrt(y) - std::sqrt(x)) - std::log(spec.a)) < 1e-9);
        if (y > d.truncation_hi()) break;
        CHECK(d.log_tail(x) == doctest::Approx(-std::sqrt(x)).epsilon(1e-13));
        CHECK(d.log_tail_left(y) == doctest::Approx(-std::sqrt(x)).epsilon(1e-13));
        CHECK(d.log_tail(y) == doctest::Approx(-std::sqrt(y)).epsilon(1e-13));
        prev_y = y;
    }
    const auto first = pairs.front();
    CHECK(first.first == doctest::Approx(std::max(std::pow(std::log(spec.a), 2), 1.0) + 1.0));
}

TEST_CASE("quantile round trip on continuous segments") {
    for (const auto& d : all_builtins()) {
        CAPTURE(d.label());
        int checked = 0;
        for (int i = 1; i < 400; ++i) {
            const double log_u = -0.05 * i * i / 40.0;
            const double x = quantile_from_log_tail(d, log_u);
            if (x >= d.truncation_hi()) continue;
            const double l = d.log_tail(x);
            const double left = d.log_tail_left(x);
            if (std::abs(left - l) > 1e-12 * std::max(1.0, std::abs(l))) {
                // landed on an atom
                CHECK(left >= log_u - 1e-12 * std::abs(log_u));
                CHECK(l <= log_u + 1e-12 * std::abs(log_u));
                continue;
            }
            const std::size_t s = d.tail().segment_index(x);
            if (d.tail().segments()[s].is_flat()) continue;
            // smallest representable x with F(x) <= u
            const double tol = 1e-12 * std::max(1.0, std::abs(log_u));
            const double before = x > 0 ? d.log_tail(std::nextafter(x, 0.0)) : 0.0;
            CHECK(l <= log_u + tol);
            CHECK(before >= log_u - tol);
            // equality wherever one ulp of x moves log F by well under the tolerance
            if (before - l < 1e-10 * std::max(1.0, std::abs(log_u))) {
                CHECK(std::abs(l - log_u) <= 1e-9 * std::max(1.0, std::abs(log_u)));
                ++checked;
            }
        }
        if (d.parts().ac_mass > 0) CHECK(checked > 0);
    }
}

TEST_CASE("sampling matches the tail in Kolmogorov-Smirnov distance") {
    const std::size_t n = 100000;
    // two-sided 0.999 critical value, sqrt(-ln(0.0005) / 2) / sqrt(n)
    const double bound = std::sqrt(-std::log(0.0005) / 2.0) / std::sqrt(static_cast<double>(n));
    std::uint64_t seed = 11;
    for (const auto& d : all_builtins()) {
        CAPTURE(d.label());
        auto xs = sample(d, seed++, n);
        REQUIRE(xs.size() == n);
        std::sort(xs.begin(), xs.end());
        double dmax = 0;
        for (std::size_t i = 0; i < n;) {
            std::size_t j = i;
            while (j < n && xs[j] == xs[i]) ++j;
            // empirical P(X >= v) and P(X > v) against F(v-) and F(v)
            const double emp_ge = static_cast<double>(n - i) / n;
            const double emp_gt = static_cast<double>(n - j) / n;
            dmax = std::max(dmax, std::abs(emp_ge - std::exp(d.log_tail_left(xs[i]))));
            dmax = std::max(dmax, std::abs(emp_gt - std::exp(d.log_tail(xs[i]))));
            i = j;
        }
        CHECK(dmax < bound);
    }
}

TEST_CASE("sample is pure in seed and count") {
    const auto d = builtin(DyadicParetoSpec{});
    const auto a = sample(d, 99, 1000);
    const auto b = sample(d, 99, 1000);
    const auto c = sample(d, 100, 1000);
    CHECK(a == b);
    CHECK(a != c);
    for (double x : a) CHECK(x >= 0);
}

TEST_CASE("partial moment additivity") {
    for (const auto& d : all_builtins()) {
        CAPTURE(d.label());
        const double top = std::min(d.truncation_hi(), 1e6);
        const std::vector<double> cuts{0.0, 0.37 * top / 1e3, 1.7, 0.01 * top, 0.4 * top, top};
        for (int k : {0, 1}) {
            for (std::size_t i = 0; i + 2 < cuts.size(); ++i) {
                const double A = cuts[i], B = cuts[i + 1], C = cuts[i + 2];
                if (!(A < B && B < C)) continue;
                const double whole = partial_moment(d, k, A, C);
                const double parts = partial_moment(d, k, A, B) + partial_moment(d, k, B, C);
                CHECK(rel_err(whole, parts) < 1e-12);
            }
        }
    }
}

TEST_CASE("tail integral closed forms") {
    const auto e = builtin(ExponentialSpec{1.0});
    CHECK(rel_err(partial_moment(e, 0, 0, 3), 1 - std::exp(-3.0)) < 1e-13);
    CHECK(rel_err(partial_moment(e, 1, 0, 2), 1 - 3 * std::exp(-2.0)) < 1e-13);
    const auto p = builtin(ParetoSpec{3.0});
    CHECK(rel_err(partial_moment(p, 0, 0, 9), 0.5 * (1 - 0.01)) < 1e-13);
    CHECK(rel_err(partial_moment(p, 0, 0, INFINITY), 0.5) < 1e-12);
    CHECK_THROWS_AS(partial_moment(builtin(ParetoSpec{0.7}), 0, 0, INFINITY), DivergenceError);
    CHECK(rel_err(exponential_moment(e, 0.5), 2.0) < 1e-12);
    CHECK_THROWS_AS(exponential_moment(p, 0.1), DivergenceError);
}

TEST_CASE("spec json and inline round trip") {
    const DistSpec s = parse_inline_spec("pareto:alpha=3+gamma=0.5+power=2");
    CHECK(kind_name(s.base) == "pareto");
    REQUIRE(s.steps.size() == 2);
    CHECK(s.steps[0].kind == TransformStep::Kind::gamma);
    CHECK(s.steps[1].kind == TransformStep::Kind::power);
    const DistSpec r = dist_spec_from_json(to_json(s));
    CHECK(to_json(r) == to_json(s));
    const auto d = build(s);
    for (double x : {0.5, 3.0, 40.0})
        CHECK(rel_err(d.log_tail(x), 2 * (-3 * std::log1p(x) - 0.5 * x)) < 1e-13);
    CHECK(to_json(d.spec()) == to_json(s));

    for (const char* text : {"exponential:rate=2", "weibull_heavy:beta=0.4", "dyadic_pareto", "fkz_example",
                             "plateau_example:a=3", "xu_piecewise:alpha=5.5,x1=4096,m=2"}) {
        CAPTURE(text);
        const DistSpec t = parse_inline_spec(text);
        CHECK(to_json(dist_spec_from_json(to_json(t))) == to_json(t));
    }
    CHECK_THROWS_AS(parse_inline_spec("nosuch"), ParameterError);
    CHECK_THROWS_AS(parse_inline_spec("pareto:beta=3"), ParameterError);
    auto j = to_json(s);
    j["unexpected"] = 1;
    CHECK_THROWS_AS(dist_spec_from_json(j), ParameterError);
}

TEST_CASE("power tail") {
    const auto p = builtin(ParetoSpec{3.0});
    const auto p2 = power_tail(p, 2);
    for (double x : {0.0, 1.0, 17.0, 1e8}) CHECK(rel_err(p2.log_tail(x), 2 * p.log_tail(x)) < 1e-14);
}

}  // TEST_SUITE
