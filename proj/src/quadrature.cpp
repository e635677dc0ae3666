#include "tailforge/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "tailforge/errors.hpp"
#include "tailforge/logmath.hpp"

namespace tailforge {
namespace {

using logmath::neg_inf;

// QUADPACK qk21 abscissae/weights. Odd indices are the embedded 10-point Gauss nodes.
constexpr std::array<double, 11> xgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> wgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525886215, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> wg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Piece {
    double a, b;
    double log_value;
    double log_error;
    bool splittable;
};

Piece eval_piece(const std::function<double(double)>& g, double a, double b) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    std::array<double, 21> lv{};
    lv[0] = g(centre);
    for (int j = 0; j < 10; ++j) {
        const double dx = half * xgk[j];
        lv[1 + 2 * j] = g(centre - dx);
        lv[2 + 2 * j] = g(centre + dx);
    }
    double shift = neg_inf;
    for (double v : lv)
        if (!std::isnan(v)) shift = std::max(shift, v);
    if (std::isnan(lv[0])) throw NumericalError("integrand returned NaN");
    const bool splittable = centre > a && centre < b;
    if (shift == neg_inf) return {a, b, neg_inf, neg_inf, splittable};
    if (!std::isfinite(shift)) throw NumericalError("integrand overflowed to +inf");

    std::array<double, 21> f{};
    for (int i = 0; i < 21; ++i) {
        if (std::isnan(lv[i])) throw NumericalError("integrand returned NaN");
        f[i] = std::exp(lv[i] - shift);
    }
    double resk = wgk[10] * f[0];
    double resg = 0.0;
    double resabs = std::abs(resk);
    for (int j = 0; j < 10; ++j) {
        const double fsum = f[1 + 2 * j] + f[2 + 2 * j];
        resk += wgk[j] * fsum;
        resabs += wgk[j] * (std::abs(f[1 + 2 * j]) + std::abs(f[2 + 2 * j]));
        if (j % 2 == 1) resg += wg[j / 2] * fsum;
    }
    const double reskh = 0.5 * resk;
    double resasc = wgk[10] * std::abs(f[0] - reskh);
    for (int j = 0; j < 10; ++j)
        resasc += wgk[j] * (std::abs(f[1 + 2 * j] - reskh) + std::abs(f[2 + 2 * j] - reskh));

    double err = std::abs(resk - resg);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50 * eps)) err = std::max(50 * eps * resabs, err);

    const double scale = shift + std::log(half);
    return {a, b, resk > 0 ? scale + std::log(resk) : neg_inf,
            err > 0 ? scale + std::log(err) : neg_inf, splittable};
}

double total_of(const std::vector<Piece>& pieces, double Piece::*field) {
    std::vector<double> xs;
    xs.reserve(pieces.size());
    for (const auto& p : pieces) xs.push_back(p.*field);
    return logmath::log_sum_exp(xs);
}

LogQuadResult integrate_finite(const std::function<double(double)>& g, double a, double b,
                               const QuadConfig& cfg) {
    if (!(b > a)) return {neg_inf, neg_inf, 0};
    std::vector<Piece> pieces{eval_piece(g, a, b)};
    const double log_tol = std::log(cfg.rel_tol);
    int subdivisions = 0;
    for (;;) {
        const double total = total_of(pieces, &Piece::log_value);
        const double error = total_of(pieces, &Piece::log_error);
        if (error == neg_inf || error <= log_tol + total || error <= cfg.log_abs_floor) return {total, error, subdivisions};

        auto worst = pieces.end();
        for (auto it = pieces.begin(); it != pieces.end(); ++it)
            if (it->splittable && (worst == pieces.end() || it->log_error > worst->log_error))
                worst = it;
        if (worst == pieces.end() || worst->log_error == neg_inf ||
            subdivisions >= cfg.max_subdivisions) {
            const double achieved = std::exp(error - total);
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "quadrature on [%.17g, %.17g] reached relative error %.3g (target %.3g)", a,
                          b, achieved, cfg.rel_tol);
            throw ToleranceError(buf, achieved);
        }
        const double lo = worst->a;
        const double hi = worst->b;
        const double mid = 0.5 * (lo + hi);
        *worst = eval_piece(g, lo, mid);
        pieces.push_back(eval_piece(g, mid, hi));
        ++subdivisions;
    }
}

}  // namespace

LogQuadResult integrate_log(const std::function<double(double)>& log_f, double a, double b,
                            const QuadConfig& cfg) {
    if (!(cfg.rel_tol > 0)) throw ParameterError("QuadConfig.rel_tol must be > 0");
    if (std::isinf(b)) {
        auto mapped = [&](double s) {
            const double y = a + (1.0 - s) / s;
            if (std::isinf(y)) return neg_inf;
            return log_f(y) - 2.0 * std::log(s);
        };
        return integrate_finite(mapped, 0.0, 1.0, cfg);
    }
    return integrate_finite(log_f, a, b, cfg);
}

}  // namespace tailforge
