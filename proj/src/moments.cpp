#include "tailforge/moments.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

#include "tailforge/errors.hpp"
#include "tailforge/logmath.hpp"
#include "tailforge/quadrature.hpp"

namespace tailforge {

using logmath::neg_inf;

namespace {

[[noreturn]] void diverge(const char* why) { throw DivergenceError(std::string("integral diverges: ") + why); }

// Tail-exponent analysis for an unbounded last segment.
void check_convergence(const Segment& s, int k, double lambda) {
    const double tau = s.tilt() - lambda;
    const double m = s.power();
    if (const auto* c = std::get_if<ConstantForm>(&s.base())) {
        if (c->log_value == neg_inf) return;
        if (!(tau > 0)) diverge("constant tail without enough decay");
        return;
    }
    if (const auto* p = std::get_if<PowerForm>(&s.base())) {
        if (tau > 0) return;
        if (tau < 0 || !(m * p->exponent > k + 1)) diverge("power tail exponent too small");
        return;
    }
    if (const auto* e = std::get_if<ExpAffineForm>(&s.base())) {
        if (!(m * e->rate + tau > 0)) diverge("exponential rate does not beat the weight");
        return;
    }
    if (const auto* w = std::get_if<StretchedExpForm>(&s.base())) {
        if (w->beta > 1 || tau >= 0) return;
        if (w->beta == 1 && m / w->scale + tau > 0) return;
        diverge("stretched-exponential tail does not beat the weight");
    }
    diverge("affine segment cannot be unbounded");
}

double log_piece(const Segment& s, int k, double lambda, double a, double b, double rel_tol, double log_floor) {
    if (!(b > a)) return neg_inf;
    const bool unbounded = !std::isfinite(b);
    if (unbounded) check_convergence(s, k, lambda);
    if (k == 0) {
        if (auto ll = s.log_linear()) {
            const double slope = ll->c1 + lambda;
            const double head = s.log_value(a) + lambda * a;
            if (head == neg_inf) return neg_inf;
            if (unbounded) return head - std::log(-slope);
            return head + std::log(b - a) + logmath::log_expm1_ratio(slope * (b - a));
        }
        if (const auto* p = std::get_if<PowerForm>(&s.base()); p && s.tilt() == 0.0 && lambda == 0.0) {
            const double q = s.power() * p->exponent;
            const double lc = s.power() * p->log_coef;
            const double la = std::log(a + p->shift);
            if (unbounded) return lc + (1 - q) * la - std::log(q - 1);
            const double lb = std::log(b + p->shift);
            if (q == 1.0) return lc + std::log(lb - la);
            if (q > 1) return lc + (1 - q) * la + std::log(-std::expm1((1 - q) * (lb - la))) - std::log(q - 1);
            return lc + (1 - q) * lb + std::log(-std::expm1((1 - q) * (la - lb))) - std::log(1 - q);
        }
    }
    if (s.is_flat() && lambda == 0.0 && !unbounded) {
        const double c = s.log_value(a);
        if (c == neg_inf) return neg_inf;
        // (b^(k+1) - a^(k+1)) / (k+1)
        const double kp = k + 1.0;
        const double lb = kp * std::log(b);
        const double la = a > 0 ? kp * std::log(a) : neg_inf;
        return c + logmath::log_sub(lb, la) - std::log(kp);
    }
    auto f = [&](double y) {
        double v = s.log_value(y) + lambda * y;
        if (k > 0) v += k * std::log(y);
        return v;
    };
    QuadConfig cfg;
    cfg.rel_tol = rel_tol;
    cfg.log_abs_floor = log_floor;
    return integrate_log(f, a, b, cfg).log_value;
}

}  // namespace

double log_tail_integral(const TailCurve& tail, int k, double lambda, double a, double b, double rel_tol) {
    if (k < 0) throw ParameterError("moment order must be >= 0");
    if (std::isnan(a) || std::isnan(b) || a < 0) throw DomainError("integration range must satisfy 0 <= A");
    if (a > b) throw DomainError("integration range needs A <= B");
    if (a == b) return neg_inf;
    const double T = tail.truncation_hi();
    if (a > T) throw DomainError("integration range starts beyond truncation_hi");
    const bool to_inf = !std::isfinite(b);
    if (!to_inf && b > T) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "integration bound %.17g is beyond truncation_hi = %.17g", b, T);
        throw DomainError(buf);
    }
    const double hi = to_inf ? T : b;
    std::vector<double> terms;
    const auto segs = tail.segments();
    for (std::size_t i = tail.segment_index(a); i < segs.size(); ++i) {
        const Segment& s = segs[i];
        const double lo = std::max(a, s.lo());
        const double up = std::min(hi, s.hi());
        // pieces far below the running total only need absolute accuracy
        const double floor = terms.empty() ? neg_inf : logmath::log_sum_exp(terms) + std::log(rel_tol) - std::log(4.0);
        if (lo < up) terms.push_back(log_piece(s, k, lambda, lo, up, rel_tol, floor));
        if (s.hi() >= hi) break;
    }
    double result = logmath::log_sum_exp(terms);
    if (to_inf && tail.truncated()) {
        // Remainder proxy past the truncation point.
        const double log_rem = tail.log_at_truncation() + lambda * T + (k + 1) * std::log(std::max(T, 1.0));
        if (log_rem > result + std::log(rel_tol * 1e-3)) {
            char buf[200];
            std::snprintf(buf, sizeof buf,
                          "integral to infinity cannot be closed: remainder beyond truncation_hi = %.6g "
                          "is not negligible (log remainder %.6g vs log value %.6g)",
                          T, log_rem, result);
            throw DivergenceError(buf);
        }
    }
    return result;
}

double log_partial_moment(const Distribution& d, int k, double a, double b, double rel_tol) {
    return log_tail_integral(d.tail(), k, 0.0, a, b, rel_tol);
}

double partial_moment(const Distribution& d, int k, double a, double b, double rel_tol) {
    return std::exp(log_partial_moment(d, k, a, b, rel_tol));
}

double log_tilted_tail_integral(const Distribution& d, double lambda, double a, double b, double rel_tol) {
    return log_tail_integral(d.tail(), 0, lambda, a, b, rel_tol);
}

double exponential_moment(const Distribution& d, double lambda, double rel_tol) {
    if (lambda == 0.0) return 1.0;
    return 1.0 + lambda * std::exp(log_tilted_tail_integral(d, lambda, 0.0, INFINITY, rel_tol));
}

}  // namespace tailforge
