#include "tailforge/tail_curve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "tailforge/errors.hpp"
#include "tailforge/logmath.hpp"

namespace tailforge {

double log_jump_tolerance(double a, double b) {
    double m = 1.0;
    if (std::isfinite(a)) m = std::max(m, std::abs(a));
    if (std::isfinite(b)) m = std::max(m, std::abs(b));
    return 1e-12 * m;
}

TailCurve::TailCurve(std::vector<Segment> segments, std::optional<double> log_at_truncation)
    : segments_(std::move(segments)) {
    if (segments_.empty()) throw ParameterError("tail curve needs at least one segment");
    if (segments_.front().lo() != 0.0) throw ParameterError("tail curve must start at 0");
    los_.reserve(segments_.size());
    log_lo_.reserve(segments_.size());
    log_hi_left_.reserve(segments_.size());
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const Segment& s = segments_[i];
        if (i > 0 && s.lo() != segments_[i - 1].hi()) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "segments not contiguous at %.17g / %.17g",
                          segments_[i - 1].hi(), s.lo());
            throw ParameterError(buf);
        }
        if (i + 1 < segments_.size() && !std::isfinite(s.hi()))
            throw ParameterError("only the last segment may be unbounded");
        los_.push_back(s.lo());
        log_lo_.push_back(s.log_value(s.lo()));
        log_hi_left_.push_back(s.log_value(s.hi()));
    }
    if (log_lo_.front() > log_jump_tolerance(log_lo_.front(), 0.0))
        throw ParameterError("tail exceeds 1 at the origin");
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        if (log_hi_left_[i] > log_lo_[i] + log_jump_tolerance(log_hi_left_[i], log_lo_[i]))
            throw ParameterError("tail increases inside a segment");
        if (i > 0 && log_lo_[i] > log_hi_left_[i - 1] + log_jump_tolerance(log_lo_[i], log_hi_left_[i - 1])) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "upward jump of the tail at x = %.17g", los_[i]);
            throw ParameterError(buf);
        }
    }
    truncation_hi_ = segments_.back().hi();
    if (std::isfinite(truncation_hi_)) {
        log_at_trunc_ = log_at_truncation.value_or(log_hi_left_.back());
        if (log_at_trunc_ > log_hi_left_.back() + log_jump_tolerance(log_at_trunc_, log_hi_left_.back()))
            throw ParameterError("upward jump at the truncation point");
        // judged on the untilted scale, where a tilt of 1e12 cannot hide the drop
        const double base = segments_.back().log_untilted_offset(truncation_hi_, 0.0);
        trunc_jump_ = std::min(0.0, log_at_trunc_ - log_hi_left_.back());
        if (-trunc_jump_ <= log_jump_tolerance(base, base + trunc_jump_)) trunc_jump_ = 0.0;
    } else {
        log_at_trunc_ = logmath::neg_inf;
        if (log_hi_left_.back() != logmath::neg_inf)
            throw ParameterError("tail does not vanish at infinity");
    }
}

void TailCurve::check_range(double x) const {
    if (std::isnan(x)) throw DomainError("tail evaluated at NaN");
    if (x > truncation_hi_) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "x = %.17g is beyond truncation_hi = %.17g", x, truncation_hi_);
        throw DomainError(buf);
    }
}

std::size_t TailCurve::segment_index(double x) const {
    auto it = std::upper_bound(los_.begin(), los_.end(), x);
    if (it == los_.begin()) return 0;
    return static_cast<std::size_t>(it - los_.begin()) - 1;
}

std::size_t TailCurve::offset_segment_index(double x, double delta) const {
    const double z = x + delta;
    std::size_t i = segment_index(z);
    // x + delta < lo_i although z rounded onto or past it
    if (i > 0 && delta < los_[i] - x) --i;
    else if (i + 1 < los_.size() && delta >= los_[i + 1] - x) ++i;
    return i;
}

double TailCurve::log_tail(double x) const {
    if (x < 0) return 0.0;
    check_range(x);
    if (x == truncation_hi_) return log_at_trunc_;
    return segments_[segment_index(x)].log_value(x);
}

double TailCurve::log_tail_left(double x) const {
    if (x <= 0) return 0.0;
    check_range(x);
    if (x == truncation_hi_) return log_hi_left_.back();
    const std::size_t i = segment_index(x);
    if (x == los_[i]) return log_hi_left_[i - 1];
    return segments_[i].log_value(x);
}

double TailCurve::log_tail_offset(double x, double delta) const {
    const double z = x + delta;
    if (z < 0) return 0.0;
    check_range(z);
    const std::size_t i = offset_segment_index(x, delta);
    if (z == truncation_hi_ && i + 1 == segments_.size() && !(delta < truncation_hi_ - x)) return log_at_trunc_;
    return segments_[i].log_value_offset(x, delta);
}

double TailCurve::log_tail_ratio(double x, double delta) const {
    const double z = x + delta;
    if (delta == 0.0) return 0.0;
    check_range(x);
    if (z < 0) return -log_tail(x);
    check_range(z);
    const std::size_t i = segment_index(x);
    const std::size_t j = offset_segment_index(x, delta);
    const bool x_end = x == truncation_hi_;
    const bool z_end = z == truncation_hi_ && j + 1 == segments_.size() && !(delta < truncation_hi_ - x);
    const double jx = x_end ? trunc_jump_ : 0.0;
    const double jz = z_end ? trunc_jump_ : 0.0;
    if (i == j) return segments_[i].log_shift_ratio(x, delta) + (jz - jx);
    const Segment& si = segments_[i];
    const Segment& sj = segments_[j];
    if (si.tilt() == sj.tilt() && si.tilt() != 0.0) {
        // common tilt cancels: only -tilt * delta remains
        return (sj.log_untilted_offset(x, delta) + jz - si.log_untilted_offset(x, 0.0) - jx) - si.tilt() * delta;
    }
    return log_tail_offset(x, delta) - log_tail(x);
}

void TailCurve::set_truncation_jump(double jump) {
    if (!truncated()) return;
    trunc_jump_ = jump;
    log_at_trunc_ = log_hi_left_.back() + jump;
}

std::vector<double> TailCurve::breakpoints() const {
    return std::vector<double>(los_.begin() + 1, los_.end());
}

std::vector<double> TailCurve::breakpoints_in(double a, double b) const {
    auto first = std::upper_bound(los_.begin() + 1, los_.end(), a);
    auto last = std::lower_bound(first, los_.end(), b);
    return std::vector<double>(first, last);
}

TailCurve TailCurve::powered(double m) const {
    std::vector<Segment> out;
    out.reserve(segments_.size());
    for (const auto& s : segments_) out.push_back(s.powered(m));
    TailCurve r(std::move(out));
    r.set_truncation_jump(m * trunc_jump_);
    return r;
}

TailCurve TailCurve::tilted(double gamma) const {
    std::vector<Segment> out;
    out.reserve(segments_.size());
    for (const auto& s : segments_) out.push_back(s.tilted(gamma));
    TailCurve r(std::move(out));
    r.set_truncation_jump(trunc_jump_);
    return r;
}

}  // namespace tailforge
