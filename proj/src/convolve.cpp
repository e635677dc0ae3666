#include "tailforge/convolve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "tailforge/errors.hpp"
#include "tailforge/logmath.hpp"
#include "tailforge/transform.hpp"

namespace tailforge {

using logmath::neg_inf;

namespace {

// power * rate of an exp-affine base; 0 for a constant base.
double base_rate(const Segment& s) {
    if (const auto* e = std::get_if<ExpAffineForm>(&s.base())) return s.power() * e->rate;
    return 0.0;
}

void require_range(const Distribution& d, double a, double b, double x) {
    if (std::isnan(a) || std::isnan(b) || std::isnan(x)) throw DomainError("NaN integration range");
    if (!(0 <= a && a <= b && b <= x)) throw DomainError("integration range needs 0 <= A <= B <= x");
    if (x > d.truncation_hi()) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "x = %.17g is beyond truncation_hi = %.17g", x, d.truncation_hi());
        throw DomainError(buf);
    }
}

std::vector<double> cut_points(const TailCurve& t, double p, double q, double x) {
    std::vector<double> pts{p, q};
    for (double b : t.breakpoints_in(p, q)) pts.push_back(b);
    for (double b : t.breakpoints_in(x - q, x - p)) {
        const double y = x - b;
        if (y > p && y < q) pts.push_back(y);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

// log F(x - y), minus log F(x) when `anchored`.
struct ShiftedTail {
    const TailCurve& t;
    double x;
    bool anchored;
    double log_x;
    std::size_t seg_x;
    bool x_formula;

    ShiftedTail(const TailCurve& tc, double xv, bool anchor) : t(tc), x(xv), anchored(anchor) {
        log_x = t.log_tail(x);
        if (log_x == neg_inf) anchored = false;
        seg_x = t.segment_index(x);
        x_formula = x < t.truncation_hi() || t.log_truncation_jump() == 0.0;
    }

    double operator()(const Segment& sj, std::size_t j, double y) const {
        if (!anchored) return sj.log_value_offset(x, -y);
        if (j == seg_x && x_formula) return sj.log_shift_ratio(x, -y);
        return sj.log_value_offset(x, -y) - log_x;
    }
};

// log of the integral over [p, q] of F(x-y) times F(y) (density = false) or f(y) (density = true).
double log_pieces(const TailCurve& t, double p, double q, const ShiftedTail& shifted, bool density,
                  const QuadConfig& cfg) {
    if (!(q > p)) return neg_inf;
    const double x = shifted.x;
    const auto segs = t.segments();
    const auto pts = cut_points(t, p, q, x);
    std::vector<double> terms;
    terms.reserve(pts.size());
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        const double u = pts[k];
        const double v = pts[k + 1];
        if (!(v > u)) continue;
        const double mid = u + 0.5 * (v - u);
        const std::size_t i = t.segment_index(mid);
        const std::size_t j = t.segment_index(x - mid);
        const Segment& si = segs[i];
        const Segment& sj = segs[j];
        if (density && si.is_flat()) continue;
        if (si.log_linear() && sj.log_linear()) {
            const double s = (base_rate(sj) - base_rate(si)) + (sj.tilt() - si.tilt());
            double head = si.log_value(u) + shifted(sj, j, u);
            if (density) head += std::log(base_rate(si) + si.tilt());
            if (head == neg_inf) continue;
            terms.push_back(head + std::log(v - u) + logmath::log_expm1_ratio(s * (v - u)));
            continue;
        }
        auto f = [&](double y) {
            const double fy = density ? si.log_density(y) : si.log_value(y);
            return fy + shifted(sj, j, y);
        };
        terms.push_back(integrate_log(f, u, v, cfg).log_value);
    }
    return logmath::log_sum_exp(terms);
}

double cross_impl(const Distribution& d, double a, double b, double x, const QuadConfig& cfg, bool anchored) {
    require_range(d, a, b, x);
    if (a == b) return neg_inf;
    const ShiftedTail shifted(d.tail(), x, anchored);
    const double half = 0.5 * x;
    double lower = neg_inf, upper = neg_inf;
    if (a < half) lower = log_pieces(d.tail(), a, std::min(b, half), shifted, false, cfg);
    if (b > half) upper = log_pieces(d.tail(), x - b, x - std::max(a, half), shifted, false, cfg);
    const double r = logmath::log_add(lower, upper);
    return anchored && !shifted.anchored ? r - shifted.log_x : r;
}

double stieltjes_impl(const Distribution& d, double a, double b, double x, const QuadConfig& cfg, bool anchored) {
    require_range(d, a, b, x);
    const ShiftedTail shifted(d.tail(), x, anchored);
    std::vector<double> terms;
    const auto& atoms = d.parts().atoms;
    auto it = std::lower_bound(atoms.begin(), atoms.end(), a,
                               [](const Atom& at, double v) { return at.location < v; });
    for (; it != atoms.end() && it->location <= b; ++it) {
        const double rel = shifted.anchored ? d.tail().log_tail_ratio(x, -it->location)
                                            : d.tail().log_tail_offset(x, -it->location);
        terms.push_back(it->log_mass + rel);
    }
    terms.push_back(log_pieces(d.tail(), a, b, shifted, true, cfg));
    const double r = logmath::log_sum_exp(terms);
    return anchored && !shifted.anchored ? r - shifted.log_x : r;
}

}  // namespace

double log_cross_ratio(const Distribution& d, double a, double b, double x, const QuadConfig& cfg) {
    return cross_impl(d, a, b, x, cfg, true);
}

double log_cross_integral(const Distribution& d, double a, double b, double x, const QuadConfig& cfg) {
    return cross_impl(d, a, b, x, cfg, false);
}

double cross_integral(const Distribution& d, double a, double b, double x, const QuadConfig& cfg) {
    return std::exp(log_cross_integral(d, a, b, x, cfg));
}

double log_stieltjes_ratio(const Distribution& d, double a, double b, double x, const QuadConfig& cfg) {
    return stieltjes_impl(d, a, b, x, cfg, true);
}

double log_stieltjes_cross(const Distribution& d, double a, double b, double x, const QuadConfig& cfg) {
    return stieltjes_impl(d, a, b, x, cfg, false);
}

double log_os_ratio(const Distribution& d, double x, const QuadConfig& cfg) {
    if (std::isnan(x)) throw DomainError("conv2 ratio at NaN");
    const TailCurve& t = d.tail();
    if (x < 0) return 0.0;
    const double half = 0.5 * x;
    const double cross = std::log(2.0) + log_stieltjes_ratio(d, 0.0, half, x, cfg);
    // F(x/2)^2 / F(x); for a log-linear piece holding both points this is exp(c0)
    double both;
    const std::size_t i = t.segment_index(half);
    const auto ll = t.segments()[i].log_linear();
    if (x > 0 && ll && t.segment_index(x) == i && x < t.truncation_hi())
        both = ll->c0;
    else
        both = t.log_tail(half) + t.log_tail_ratio(x, -half);
    return logmath::log_add(cross, both);
}

double log_conv2_tail(const Distribution& d, double x, const QuadConfig& cfg) {
    if (std::isnan(x)) throw DomainError("conv2_tail at NaN");
    if (x < 0) return 0.0;
    const double lx = d.log_tail(x);
    if (lx != neg_inf) return std::min(0.0, lx + log_os_ratio(d, x, cfg));
    const double half = 0.5 * x;
    const double cross = std::log(2.0) + log_stieltjes_cross(d, 0.0, half, x, cfg);
    return std::min(0.0, logmath::log_add(cross, 2.0 * d.log_tail(half)));
}

double conv2_tail(const Distribution& d, double x, const QuadConfig& cfg) {
    return std::exp(log_conv2_tail(d, x, cfg));
}

double g_conv2_identity_residual(const Distribution& d, double gamma, double x, const QuadConfig& cfg) {
    const Distribution g = gamma_transform(d, {gamma});
    const double direct = log_conv2_tail(g, x, cfg);
    const double f2 = log_conv2_tail(d, x, cfg);
    const double cross = x > 0 ? std::log(2.0 * gamma) + log_cross_integral(d, 0.5 * x, x, x, cfg) : neg_inf;
    const double via = logmath::log_add(f2, cross) - gamma * x;
    return std::abs(std::expm1(via - direct));
}

// ---------------------------------------------------------------------------
// Staircase brackets

double lattice_step(double h) {
    if (!(h > 0) || !std::isfinite(h)) throw ParameterError("grid step h must be > 0");
    int e = 0;
    const double m = std::frexp(h, &e);
    return m == 0.5 ? h : std::ldexp(1.0, e - 1);
}

namespace {

struct Staircase {
    std::vector<double> q;     // mass at c_j
    std::vector<double> tail;  // P(X_disc > c_k, X <= cap)
    double mass;               // P(X <= cap)
};

struct TailAccess {
    const TailCurve& t;
    double left(double x) const { return t.log_tail_left(x); }
    double right(double x) const { return t.log_tail(x); }
};

Staircase staircase(const TailCurve& t, std::size_t cells, double h, double cap, bool upper) {
    const TailAccess F{t};
    const bool capped = std::isfinite(cap);
    const double log_cap = capped ? F.right(cap) : neg_inf;
    Staircase s;
    s.q.assign(cells, 0.0);
    s.tail.assign(cells, 0.0);
    s.mass = capped ? -std::expm1(log_cap) : 1.0;
    auto c = [&](std::size_t j) { return static_cast<double>(j) * h; };
    for (std::size_t j = 0; j < cells; ++j) {
        if (!upper) {
            // floor: X in [c_j, c_(j+1)) -> c_j
            if (c(j) > cap) break;
            const double hi = c(j + 1) <= cap ? F.left(c(j + 1)) : log_cap;
            s.q[j] = logmath::exp_diff(F.left(c(j)), hi);
        } else {
            // ceil: X in (c_(j-1), c_j] -> c_j
            if (j == 0) {
                s.q[0] = cap >= 0 ? -std::expm1(F.right(0.0)) : 0.0;
                continue;
            }
            if (c(j - 1) >= cap) break;
            const double hi = c(j) <= cap ? F.right(c(j)) : log_cap;
            s.q[j] = logmath::exp_diff(F.right(c(j - 1)), hi);
        }
    }
    for (std::size_t k = 0; k < cells; ++k) {
        if (!upper) {
            if (c(k + 1) > cap) break;
            s.tail[k] = logmath::exp_diff(F.left(c(k + 1)), log_cap);
        } else {
            if (c(k) >= cap) break;
            s.tail[k] = logmath::exp_diff(F.right(c(k)), log_cap);
        }
    }
    return s;
}

std::vector<double> fold(const Staircase& s, int n) {
    const std::size_t cells = s.tail.size();
    std::vector<double> cur = s.tail;
    std::vector<double> next(cells);
    double mpow = 1.0;
    for (int m = 2; m <= n; ++m) {
        mpow *= s.mass;
        for (std::size_t k = 0; k < cells; ++k) {
            double acc = 0.0;
            for (std::size_t j = 0; j <= k; ++j) acc += s.q[j] * cur[k - j];
            next[k] = acc + s.tail[k] * mpow;
        }
        std::swap(cur, next);
    }
    return cur;
}

BracketGrid make_grid(const Distribution& d, int n, double cap, double x_max, double h_req, const GridLimits& lim) {
    if (n < 1) throw ParameterError("fold count n must be >= 1");
    if (n > lim.max_n) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "fold count n = %d exceeds the configured cap %d", n, lim.max_n);
        throw ParameterError(buf);
    }
    if (!(x_max >= 0) || !std::isfinite(x_max)) throw ParameterError("x_max must be finite and >= 0");
    const double h = lattice_step(h_req);
    const double cells_d = std::floor(x_max / h) + 3.0;
    if (cells_d > static_cast<double>(lim.max_cells)) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "grid needs %.0f cells (x_max / h) but the limit is %zu", cells_d,
                      lim.max_cells);
        throw ParameterError(buf);
    }
    const std::size_t cells = static_cast<std::size_t>(cells_d);
    const double reach = static_cast<double>(cells) * h;
    if (std::min(reach, cap) > d.truncation_hi()) throw DomainError("grid extends beyond truncation_hi");
    const Staircase lo = staircase(d.tail(), cells, h, cap, false);
    const Staircase up = staircase(d.tail(), cells, h, cap, true);
    const std::vector<double> tl = fold(lo, n);
    const std::vector<double> tu = fold(up, n);
    const double total = std::pow(lo.mass, n);
    const double slack = 1e-12 * n;
    BracketGrid g;
    g.n = n;
    g.h = h;
    g.cap = cap;
    g.total = total;
    g.grid.resize(cells);
    g.lower.resize(cells);
    g.upper.resize(cells);
    for (std::size_t k = 0; k < cells; ++k) {
        g.grid[k] = static_cast<double>(k) * h;
        g.lower[k] = std::log(std::max(0.0, tl[k] * (1.0 - slack)));
        g.upper[k] = std::log(std::min(total, tu[k] * (1.0 + slack)));
    }
    // enforce monotone columns against rounding
    for (std::size_t k = 1; k < cells; ++k) {
        g.lower[k] = std::min(g.lower[k], g.lower[k - 1]);
        g.upper[k] = std::min(g.upper[k], g.upper[k - 1]);
    }
    return g;
}

}  // namespace

BracketGrid convn_tail_grid(const Distribution& d, int n, double x_max, double h, const GridLimits& lim) {
    if (n < 2) throw ParameterError("convn_tail_grid needs n >= 2");
    return make_grid(d, n, std::numeric_limits<double>::infinity(), x_max, h, lim);
}

BracketGrid trunc_convn_tail_grid(const Distribution& d, int n, double cap, double x_max, double h,
                                  const GridLimits& lim) {
    if (n < 1) throw ParameterError("trunc_convn_tail_grid needs n >= 1");
    if (!(cap >= 0)) throw ParameterError("cap must be >= 0");
    return make_grid(d, n, cap, x_max, h, lim);
}

Bracket log_bracket_at(const BracketGrid& g, double x) {
    if (x < 0) return {std::log(g.total), std::log(g.total)};
    double kd = std::floor(x / g.h);
    while (kd * g.h > x) kd -= 1;
    while ((kd + 1) * g.h <= x) kd += 1;
    const std::size_t k = static_cast<std::size_t>(kd);
    const std::size_t k_lo = kd * g.h == x ? k : k + 1;
    if (k_lo >= g.grid.size()) throw DomainError("x is outside the bracket grid");
    return {g.lower[k_lo], g.upper[k]};
}

Bracket bracket_at(const BracketGrid& g, double x) {
    const Bracket b = log_bracket_at(g, x);
    return {std::exp(b.lo), std::exp(b.hi)};
}

}  // namespace tailforge
