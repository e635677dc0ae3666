#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "../support.hpp"
#include "oracle_values.hpp"
#include "tailforge/builtins.hpp"
#include "tailforge/convolve.hpp"
#include "tailforge/errors.hpp"
#include "tailforge/functionals.hpp"
#include "tailforge/transform.hpp"

using namespace tailforge;
using testsupport::rel_err;

namespace {

std::vector<Distribution> bases() {
    std::vector<Distribution> v;
    v.push_back(builtin(ParetoSpec{3.0}));
    v.push_back(builtin(ExponentialSpec{1.0}));
    v.push_back(builtin(WeibullHeavySpec{0.5}));
    v.push_back(builtin(DyadicParetoSpec{}));
    v.push_back(builtin(FkzExampleSpec{}));
    v.push_back(builtin(PlateauExampleSpec{}));
    v.push_back(builtin(XuPiecewiseSpec{5.5, 4096.0, 1, 4096}));
    return v;
}

}  // namespace

TEST_SUITE("functionals") {

TEST_CASE("t ratio lies in (0, 1] and is 1 at K = x/2") {
    for (const auto& d : bases()) {
        CAPTURE(d.label());
        for (double x : {2.0, 9.0, 50.0, 777.0, 1e5}) {
            if (x > d.truncation_hi()) continue;
            for (double frac : {1e-3, 0.01, 0.1, 0.3, 0.49}) {
                const double t = t_ratio(d, x, frac * x);
                CHECK(t > 0.0);
                CHECK(t <= 1.0 + 1e-12);
            }
            CHECK(t_ratio(d, x, 0.5 * x) == 1.0);
        }
    }
    CHECK_THROWS_AS(t_ratio(builtin(ParetoSpec{3.0}), 10.0, 6.0), DomainError);
}

TEST_CASE("dyadic t ratio against exact rational values") {
    const auto d = builtin(DyadicParetoSpec{});
    for (const auto& o : oracle::dyadic_t_ratio) {
        CAPTURE(o.m);
        CAPTURE(o.k);
        const double x = std::ldexp(1.0, o.m);
        const double K = std::ldexp(1.0, o.k);
        CHECK(rel_err(t_ratio(d, x, K), o.value) < 1e-10);
    }
}

TEST_CASE("dyadic D ratio is exactly four") {
    const auto d = builtin(DyadicParetoSpec{});
    for (int m = 1; m <= 60; ++m)
        CHECK(std::abs(ratio_value(d, {RatioKind::D}, std::ldexp(1.0, m)) - 4.0) <= 1e-12);
    const auto grid = geometric_grid(2.0, std::ldexp(1.0, 20), 20);
    const auto s = ratio_diagnostic(d, {RatioKind::D}, grid);
    CHECK(s.trend.kind == TrendKind::converging);
}

TEST_CASE("two-summand conditional probability, exponential closed form") {
    // 2 K e^-x / ((1 + x) e^-x)
    const auto e = builtin(ExponentialSpec{1.0});
    for (auto [x, K] : {std::pair{9.0, 1.0}, {19.0, 2.0}, {99.0, 5.0}, {3.0, 0.5}, {1000.0, 10.0}})
        CHECK(std::abs(b2_cond(e, x, K) - 2 * K / (1 + x)) < 1e-9);
    CHECK_THROWS_AS(b2_cond(e, 4.0, 2.0), DomainError);
}

TEST_CASE("two-summand conditional probability, pareto") {
    const auto p = builtin(ParetoSpec{3.0});
    CHECK(std::abs(b2_cond(p, 1e4, 9.0) - 0.999) < 1e-2);
    double prev = 0;
    for (double K : {0.5, 1.0, 2.0, 4.0, 9.0, 50.0}) {
        const double b = b2_cond(p, 1e4, K);
        CHECK(b >= prev);
        prev = b;
    }
    CHECK(b2_cond(p, 1e4, 9.0) > 0.99);
}

TEST_CASE("transformed two-summand probability matches direct computation") {
    for (const auto& d : bases()) {
        CAPTURE(d.label());
        for (double gamma : {0.5, 1.0}) {
            const auto g = gamma_transform(d, {gamma});
            for (auto [x, K] : {std::pair{10.0, 1.0}, {60.0, 4.0}, {500.0, 20.0}}) {
                if (x > d.truncation_hi()) continue;
                CHECK(rel_err(b2_cond_transformed(d, gamma, x, K), b2_cond(g, x, K)) < 1e-7);
            }
        }
    }
}

TEST_CASE("convolution ratio of the transform") {
    // G*2(x)/G(x) = F*2(x)/F(x) + gamma int_0^x F(x-y)F(y)dy / F(x)
    for (const auto& d : bases()) {
        CAPTURE(d.label());
        for (double gamma : {0.25, 1.0}) {
            const auto g = gamma_transform(d, {gamma});
            for (double x : {1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 300.0}) {
                if (x > d.truncation_hi()) continue;
                const double direct = std::exp(log_os_ratio(g, x));
                const double via = ratio_value(d, {RatioKind::OS}, x) + gamma * ratio_value(d, {RatioKind::OSstar}, x);
                CHECK(rel_err(direct, via) < 1e-6);
                CHECK(rel_err(os_ratio_transformed(d, gamma, x), direct) < 1e-6);
            }
        }
    }
}

TEST_CASE("jump probability bracket, exponential") {
    const auto e = builtin(ExponentialSpec{1.0});
    const Bracket b = jump_cond(e, 2, 9.0, 1.0);
    CHECK(b.contains(oracle::exponential_jump_9_1));
    CHECK(b.width() < 1e-2);
    const Bracket c = jump_cond(e, 2, 5.0, 1.0);
    CHECK(c.contains(oracle::exponential_jump_5_1));
    // K >= x: the event is certain
    const Bracket one = jump_cond(e, 2, 5.0, 5.0);
    CHECK(one.lo == 1.0);
    CHECK(one.hi == 1.0);
}

TEST_CASE("jump bracket bounds the two-summand probability") {
    for (const auto& d : {builtin(ExponentialSpec{1.0}), builtin(ParetoSpec{3.0}), builtin(DyadicParetoSpec{})}) {
        CAPTURE(d.label());
        for (auto [x, K] : {std::pair{6.0, 1.0}, {12.0, 2.0}, {30.0, 4.0}}) {
            const Bracket b = jump_cond(d, 2, x, K);
            CHECK(b.lo >= 0.0);
            CHECK(b.hi <= 1.0);
            CHECK(b2_cond(d, x, K) <= b.hi + 1e-12);
        }
    }
}

TEST_CASE("jump bracket nondecreasing in K") {
    for (const auto& d : {builtin(ExponentialSpec{1.0}), builtin(ParetoSpec{3.0}), builtin(DyadicParetoSpec{})}) {
        CAPTURE(d.label());
        for (int n : {2, 3}) {
            const double x = 16.0;
            Bracket prev{0.0, 0.0};
            for (double K : {0.5, 1.0, 2.0, 4.0, 8.0}) {
                const Bracket b = jump_cond(d, n, x, K);
                CHECK(b.hi >= prev.lo);
                prev = b;
            }
        }
    }
}

TEST_CASE("jump profile shape") {
    const auto p = builtin(ParetoSpec{3.0});
    const std::vector<double> xs{10.0, 40.0};
    const std::vector<double> Ks{1.0, 4.0};
    const auto prof = jump_profile(p, 2, xs, Ks);
    REQUIRE(prof.probs.size() == 2);
    REQUIRE(prof.probs[0].size() == 2);
    const auto j = prof.to_json();
    CHECK(j.at("n") == 2);
}

TEST_CASE("fkz lower bound against high-precision values") {
    for (int n = 1; n <= 4; ++n) {
        CAPTURE(n);
        CHECK(rel_err(exam300_lower_bound(n), oracle::fkz_lower_bound[n - 1]) < 1e-12);
    }
    CHECK(exam300_lower_bound(2) < exam300_lower_bound(3));
    CHECK(exam300_lower_bound(3) < exam300_lower_bound(4));
    CHECK(exam300_lower_bound(4) > 1e10);
}

TEST_CASE("fkz cross-integral ratio dominates the lower bound") {
    const auto d = builtin(FkzExampleSpec{});
    const auto a = fkz_sequence();
    for (int n = 1; n <= 3; ++n) {
        CAPTURE(n);
        const double x = a[n + 1] * a[n + 1];
        const double lo = log_exam300_lower_bound(n);
        const double os = std::log(ratio_value(d, {RatioKind::OSstar}, x));
        CHECK(os >= lo);
    }
}

TEST_CASE("xu shift ratio at twice a breakpoint") {
    const auto d = builtin(XuPiecewiseSpec{5.5, 4096.0, 1, 4096});
    const auto xs = xu_sequence(5.5, 4096.0, 4096);
    int checked = 0;
    for (double xn : xs) {
        if (2 * xn > d.truncation_hi()) break;
        for (double t : {1.0, 2.0, 4.0, 8.0, 16.0}) {
            const double expected = 1 + t - t / xn;
            const double v = ratio_value(d, {RatioKind::OL, t}, 2 * xn);
            CHECK(std::abs(v - expected) <= 1e-12 * std::max(1.0, expected));
            ++checked;
        }
    }
    CHECK(checked >= 100);
}

TEST_CASE("xu windows") {
    const std::vector<double> xs{100.0, 1000.0};
    const double K = 5.0;
    CHECK(xu_window(50.0, xs, K) == 0);
    CHECK(xu_window(100.0, xs, K) == 1);
    CHECK(xu_window(104.9, xs, K) == 1);
    CHECK(xu_window(105.0, xs, K) == 2);
    CHECK(xu_window(150.0, xs, K) == 3);
    CHECK(xu_window(200.0, xs, K) == 4);
    CHECK(xu_window(205.0, xs, K) == 5);
    CHECK(xu_window(999.0, xs, K) == 5);
    // no x_(n+1) after the last point
    CHECK(xu_window(1000.0, xs, K) == 0);
}

TEST_CASE("xu t ratio increases with K across windows") {
    const auto d = builtin(XuPiecewiseSpec{5.5, 4096.0, 1, 4096});
    const auto seq = xu_sequence(5.5, 4096.0, 4096);
    const double xn = seq[2];
    const std::vector<double> Ks{8.0, 64.0, 512.0, 4096.0, 16384.0};
    for (double x : {xn + 4.0, xn + 600.0, 1.7 * xn, 2 * xn + 4.0, 2 * xn + 600.0, 0.5 * (2 * xn + seq[3])}) {
        CAPTURE(x);
        double prev = 0.0;
        for (double K : Ks) {
            const double t = t_ratio(d, x, K);
            CHECK(t >= prev);
            prev = t;
        }
        CHECK(prev > 0.9);
    }
}

TEST_CASE("weak equivalence diagnostic") {
    const auto xu = builtin(XuPiecewiseSpec{5.5, 4096.0, 1, 4096});
    const auto seq = xu_sequence(5.5, 4096.0, 4096);
    std::vector<double> xg;
    for (double xn : seq)
        if (2 * xn <= xu.truncation_hi()) xg.push_back(2 * xn);
    const std::vector<double> ts{1, 2, 4, 8, 16};
    CHECK(weak_equiv_diag(xu, ts, xg).trend.kind == TrendKind::diverging);

    const auto p = builtin(ParetoSpec{3.0});
    const auto we = weak_equiv_diag(p, ts, geometric_grid(1e3, 1e8, 30));
    CHECK(we.trend.kind != TrendKind::diverging);
    for (double v : we.values) CHECK(v >= 1.0);
}

TEST_CASE("grids") {
    const auto g = geometric_grid(1.0, 1024.0, 11);
    REQUIRE(g.size() == 11);
    CHECK(g.front() == 1.0);
    CHECK(g.back() == 1024.0);
    CHECK(g[5] == doctest::Approx(32.0).epsilon(1e-14));
    const auto l = linear_grid(0.0, 1.0, 5);
    CHECK(l == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    CHECK(ratio_kind_from_string(to_string(RatioKind::OSstar)) == RatioKind::OSstar);
    CHECK_THROWS_AS(ratio_kind_from_string("nope"), ParameterError);
}

}  // TEST_SUITE
