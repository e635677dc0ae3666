#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "tailforge/segment.hpp"

namespace tailforge {

/// Piecewise representation of a survival function on [0, inf), evaluated
/// in the log domain. Immutable once constructed.
class TailCurve {
public:
    /// `segments` must be contiguous from 0 with no upward jumps. When the
    /// last segment ends at a finite `hi`, the curve is truncated there and
    /// `log_at_truncation` gives F(hi) (defaults to the left limit).
    explicit TailCurve(std::vector<Segment> segments,
                       std::optional<double> log_at_truncation = std::nullopt);

    std::span<const Segment> segments() const noexcept { return segments_; }
    double truncation_hi() const noexcept { return truncation_hi_; }
    bool truncated() const noexcept { return std::isfinite(truncation_hi_); }

    /// log F(x), right-continuous; 0 for x < 0. DomainError beyond truncation_hi.
    double log_tail(double x) const;
    /// log F(x-).
    double log_tail_left(double x) const;
    /// log F(x + delta) with linear parts anchored at x (see Segment).
    double log_tail_offset(double x, double delta) const;

    /// log F(x + delta) - log F(x). When both points share a segment the
    /// segment formula is used directly (see Segment::log_shift_ratio).
    double log_tail_ratio(double x, double delta) const;

    /// Index of the segment containing x (x in [lo, hi)); last segment for x == truncation_hi.
    std::size_t segment_index(double x) const;
    /// Segment containing the exact point x + delta, even when the rounded
    /// sum lands on the other side of a boundary.
    std::size_t offset_segment_index(double x, double delta) const;

    /// Interior segment boundaries (excludes 0 and a truncation endpoint).
    std::vector<double> breakpoints() const;
    /// Boundaries strictly inside (a, b).
    std::vector<double> breakpoints_in(double a, double b) const;

    /// log F at each segment's lo.
    double log_at_lo(std::size_t i) const { return log_lo_[i]; }
    /// log F(hi-) of segment i.
    double log_at_hi_left(std::size_t i) const { return log_hi_left_[i]; }
    double log_at_truncation() const noexcept { return log_at_trunc_; }
    /// log F(hi) - log F(hi-) at the truncation point; 0 when continuous there.
    double log_truncation_jump() const noexcept { return trunc_jump_; }

    TailCurve powered(double m) const;
    TailCurve tilted(double gamma) const;

private:
    void check_range(double x) const;
    void set_truncation_jump(double jump);

    std::vector<Segment> segments_;
    std::vector<double> los_;
    std::vector<double> log_lo_;
    std::vector<double> log_hi_left_;
    double truncation_hi_;
    double log_at_trunc_;
    double trunc_jump_ = 0.0;
};

/// Relative slack used when deciding whether two adjacent log-values differ.
double log_jump_tolerance(double a, double b);

}  // namespace tailforge
