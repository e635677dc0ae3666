#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "../support.hpp"
#include "tailforge/builtins.hpp"
#include "tailforge/convolve.hpp"
#include "tailforge/errors.hpp"
#include "tailforge/functionals.hpp"
#include "tailforge/moments.hpp"

using namespace tailforge;
using testsupport::rel_err;

namespace {

std::vector<Distribution> bases() {
    std::vector<Distribution> v;
    v.push_back(builtin(ParetoSpec{3.0}));
    v.push_back(builtin(ParetoSpec{0.7}));
    v.push_back(builtin(ExponentialSpec{1.0}));
    v.push_back(builtin(WeibullHeavySpec{0.5}));
    v.push_back(builtin(DyadicParetoSpec{}));
    v.push_back(builtin(FkzExampleSpec{}));
    v.push_back(builtin(PlateauExampleSpec{}));
    v.push_back(builtin(XuPiecewiseSpec{5.5, 4096.0, 1, 4096}));
    return v;
}

const std::vector<double> xs{0.3, 1.0, 2.5, 7.0, 20.0, 64.0, 300.0, 5000.0, 1e5};

// upper regularized gamma Q(n, x) = e^-x sum_{k<n} x^k / k!
double erlang_tail(int n, double x) {
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < n; ++k) {
        term *= x / k;
        sum += term;
    }
    return std::exp(-x) * sum;
}

}  // namespace

TEST_SUITE("convolve") {

TEST_CASE("two-fold exponential tail") {
    const auto e = builtin(ExponentialSpec{1.0});
    for (double x : {0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 100.0, 700.0})
        CHECK(rel_err(conv2_tail(e, x), (1 + x) * std::exp(-x)) < 1e-10);
    const auto e2 = builtin(ExponentialSpec{2.0});
    for (double x : {0.5, 3.0, 30.0}) CHECK(rel_err(conv2_tail(e2, x), (1 + 2 * x) * std::exp(-2 * x)) < 1e-10);
    // far below the double range
    CHECK(rel_err(log_conv2_tail(e, 1e4), std::log1p(1e4) - 1e4) < 1e-12);
}

TEST_CASE("two-fold dyadic tail against a direct atom sum") {
    const auto d = builtin(DyadicParetoSpec{});
    for (double x : {1.0, 3.0, 5.0, 17.0, 100.0, 1000.0, 4096.0}) {
        CAPTURE(x);
        // P(X1 + X2 > x) = sum over atoms a of P(X1 = a) F(x - a); mass 4^-k - 4^-(k+1) at 2^(k+1)
        double direct = 0.0;
        for (int k = 0; k < 60; ++k) {
            const double loc = std::ldexp(1.0, k + 1);
            const double mass = std::pow(4.0, -k) - std::pow(4.0, -(k + 1));
            direct += mass * d.tail_value(std::max(x - loc, -1.0));
        }
        CHECK(rel_err(conv2_tail(d, x), direct) < 1e-12);
    }
}

TEST_CASE("union and intersection bounds") {
    for (const auto& d : bases()) {
        CAPTURE(d.label());
        for (double x : xs) {
            if (x > d.truncation_hi()) continue;
            const double l2 = log_conv2_tail(d, x);
            const double slack = 1e-10 * std::max(1.0, std::abs(l2));
            CHECK(l2 >= d.log_tail(x) - slack);
            CHECK(l2 <= std::min(0.0, std::log(2.0) + d.log_tail(0.5 * x)) + slack);
        }
    }
}

TEST_CASE("cross integral dominates tail times truncated mean") {
    // int_[x/2, x] F(x-y) F(y) dy >= F(x) int_0^(x/2) F(y) dy
    for (const auto& d : bases()) {
        CAPTURE(d.label());
        for (double x : xs) {
            if (x > d.truncation_hi()) continue;
            const double lhs = log_cross_integral(d, 0.5 * x, x, x);
            const double rhs = d.log_tail(x) + log_partial_moment(d, 0, 0.0, 0.5 * x);
            CHECK(lhs >= rhs - 1e-10 * std::max(1.0, std::abs(rhs)));
        }
    }
}

TEST_CASE("cross integral symmetry and closed form") {
    const auto e = builtin(ExponentialSpec{1.0});
    for (double x : {0.5, 4.0, 50.0}) {
        CHECK(rel_err(cross_integral(e, 0, x, x), x * std::exp(-x)) < 1e-12);
        CHECK(rel_err(cross_integral(e, 0, 0.3 * x, x), cross_integral(e, 0.7 * x, x, x)) < 1e-12);
    }
    const auto p = builtin(ParetoSpec{3.0});
    for (double x : {3.0, 80.0}) {
        const double whole = cross_integral(p, 0, x, x);
        const double halves = cross_integral(p, 0, 0.5 * x, x) + cross_integral(p, 0.5 * x, x, x);
        CHECK(rel_err(whole, halves) < 1e-11);
    }
}

TEST_CASE("two routes to the transformed two-fold tail agree") {
    for (const auto& d : bases()) {
        CAPTURE(d.label());
        for (double gamma : {0.5, 1.0}) {
            for (double x : {1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 400.0}) {
                if (x > d.truncation_hi()) continue;
                CHECK(g_conv2_identity_residual(d, gamma, x) <= 1e-6);
            }
        }
    }
}

TEST_CASE("lattice step is a power of two") {
    CHECK(lattice_step(1.0) == 1.0);
    CHECK(lattice_step(3.0) == 2.0);
    CHECK(lattice_step(1e-3) == std::ldexp(1.0, -10));
    CHECK(lattice_step(0.25) == 0.25);
    CHECK_THROWS_AS(lattice_step(0.0), ParameterError);
}

TEST_CASE("staircase brackets contain the Erlang tail") {
    const auto e = builtin(ExponentialSpec{1.0});
    for (int n : {2, 3, 4}) {
        const auto g = convn_tail_grid(e, n, 12.0, 1e-3);
        CAPTURE(n);
        CHECK(g.n == n);
        for (double x : {0.5, 1.0, 2.0, 3.7, 8.0, 12.0}) {
            const Bracket b = bracket_at(g, x);
            CHECK(b.contains(erlang_tail(n, x)));
            CHECK(b.width() < 5e-3);
        }
        for (std::size_t k = 0; k < g.grid.size(); ++k) {
            CHECK(g.lower[k] <= g.upper[k]);
            if (k > 0) {
                CHECK(g.lower[k] <= g.lower[k - 1]);
                CHECK(g.upper[k] <= g.upper[k - 1]);
            }
        }
    }
    const auto fine = convn_tail_grid(e, 3, 4.0, 1e-3);
    const auto coarse = convn_tail_grid(e, 3, 4.0, 1e-2);
    CHECK(bracket_at(fine, 2.0).width() < bracket_at(coarse, 2.0).width());
    CHECK(bracket_at(fine, 2.0).width() < 1e-3);
    CHECK(bracket_at(fine, 2.0).contains(5 * std::exp(-2.0)));
}

TEST_CASE("staircase brackets contain the quadrature tail") {
    for (const auto& d : {builtin(ParetoSpec{3.0}), builtin(DyadicParetoSpec{}), builtin(WeibullHeavySpec{0.5})}) {
        CAPTURE(d.label());
        const auto g = convn_tail_grid(d, 2, 40.0, 1.0 / 64);
        for (double x : {0.5, 3.0, 9.5, 33.0}) {
            const Bracket b = bracket_at(g, x);
            const double v = conv2_tail(d, x);
            CHECK(b.lo <= v * (1 + 1e-9));
            CHECK(v <= b.hi * (1 + 1e-9));
        }
    }
}

TEST_CASE("truncated grid sits below the full grid") {
    const auto p = builtin(ParetoSpec{3.0});
    const auto full = convn_tail_grid(p, 2, 30.0, 1.0 / 32);
    const auto trunc = trunc_convn_tail_grid(p, 2, 20.0, 30.0, 1.0 / 32);
    CHECK(trunc.total < 1.0);
    CHECK(trunc.total == doctest::Approx(std::pow(1 - std::pow(21.0, -3.0), 2)).epsilon(1e-6));
    for (double x : {1.0, 10.0, 25.0}) CHECK(bracket_at(trunc, x).lo <= bracket_at(full, x).hi);
}

TEST_CASE("bracket grids are reproducible bit for bit") {
    const auto d = builtin(DyadicParetoSpec{});
    const auto a = convn_tail_grid(d, 3, 64.0, 1.0 / 16);
    const auto b = convn_tail_grid(d, 3, 64.0, 1.0 / 16);
    CHECK(a.lower == b.lower);
    CHECK(a.upper == b.upper);
    CHECK(a.grid == b.grid);
}

TEST_CASE("grid limits are enforced") {
    const auto e = builtin(ExponentialSpec{1.0});
    GridLimits lim;
    lim.max_cells = 100;
    CHECK_THROWS_AS(convn_tail_grid(e, 2, 10.0, 1e-3, lim), ParameterError);
    CHECK_THROWS_AS(convn_tail_grid(e, 1, 10.0, 0.5), ParameterError);
    CHECK_THROWS_AS(convn_tail_grid(e, 20, 10.0, 0.5), ParameterError);
}

}  // TEST_SUITE
