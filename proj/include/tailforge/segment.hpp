#pragma once

#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

namespace tailforge {

/// log F(x) = log_value on the whole segment.
struct ConstantForm {
    double log_value;
};

/// Value linear in x between F(lo) = exp(log_lo) and F(hi-) = exp(log_hi).
/// Endpoint logs are stored instead of intercept/slope so that values far
/// below the double range (x^-alpha for x ~ 1e250) remain exact.
struct AffineForm {
    double log_lo;
    double log_hi;
};

/// F(x) = exp(log_coef) * (x + shift)^(-exponent).
struct PowerForm {
    double log_coef;
    double shift;
    double exponent;
};

/// F(x) = exp(-(offset + rate * (x - lo))).
struct ExpAffineForm {
    double offset;
    double rate;
};

/// F(x) = exp(-(x / scale)^beta); beta = 1/2, scale = 1 is exp(-sqrt(x)).
struct StretchedExpForm {
    double scale;
    double beta;
};

using BaseForm = std::variant<ConstantForm, AffineForm, PowerForm, ExpAffineForm, StretchedExpForm>;

/// log F(x) = c0 + c1 * x on the segment.
struct LogLinear {
    double c0;
    double c1;
};

/// One piece of a tail curve on [lo, hi).
///
/// The log-tail is `power * base(x) - tilt * x`: `power` realizes F^m and
/// `tilt` the factor exp(-gamma x), so both wrappers compose without nesting.
class Segment {
public:
    Segment(double lo, double hi, BaseForm base, double power = 1.0, double tilt = 0.0);

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    const BaseForm& base() const noexcept { return base_; }
    double power() const noexcept { return power_; }
    double tilt() const noexcept { return tilt_; }

    double log_value(double x) const;

    /// log F(x + delta), with every part that is linear in x anchored at x so
    /// that delta survives even when x + delta rounds to x.
    double log_value_offset(double x, double delta) const;

    /// log_value_offset without the tilt term.
    double log_untilted_offset(double x, double delta) const;

    /// log F(x + delta) - log F(x) from the segment formula, without forming
    /// either log-value; stays accurate when both are of order 1e18.
    double log_shift_ratio(double x, double delta) const;

    /// d/dx log F(x); always <= 0.
    double dlog(double x) const;

    /// log of the density -dF/dx at x (-inf where the segment is flat).
    double log_density(double x) const;

    /// Set when log F is affine in x (constant or exp-affine base).
    std::optional<LogLinear> log_linear() const;

    /// True when the density vanishes on the segment.
    bool is_flat() const;

    /// Smallest x in [lo, hi] with log F(x) <= log_u, for log_u between the
    /// segment's end values. Closed form when untilted, bisection otherwise.
    double invert(double log_u) const;

    Segment powered(double m) const;
    Segment tilted(double gamma) const;

    /// Base-form value without power/tilt applied.
    double base_log(double x) const;

    std::string form_name() const;
    nlohmann::json to_json() const;

private:
    double base_dlog(double x) const;
    /// log of the affine base at x + delta, with weights formed before the sum is rounded
    double affine_log_offset(const AffineForm& a, double x, double delta) const;

    double lo_;
    double hi_;
    BaseForm base_;
    double power_;
    double tilt_;
};

}  // namespace tailforge
