#include "tailforge/segment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tailforge/errors.hpp"
#include "tailforge/logmath.hpp"

namespace tailforge {

using logmath::neg_inf;

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_form(const BaseForm& base, double hi) {
    std::visit(overloaded{
                   [](const ConstantForm& f) {
                       if (f.log_value > 0) throw ParameterError("constant segment above 1");
                   },
                   [&](const AffineForm& f) {
                       if (!std::isfinite(hi)) throw ParameterError("affine segment needs finite hi");
                       if (f.log_hi > f.log_lo) throw ParameterError("affine segment increases");
                   },
                   [](const PowerForm& f) {
                       if (f.exponent < 0) throw ParameterError("power segment exponent < 0");
                   },
                   [](const ExpAffineForm& f) {
                       if (f.rate < 0) throw ParameterError("exp-affine segment rate < 0");
                   },
                   [](const StretchedExpForm& f) {
                       if (!(f.beta > 0) || !(f.scale > 0))
                           throw ParameterError("stretched-exp segment needs beta, scale > 0");
                   },
               },
               base);
}

// log(x + shift), keeping the digits of x when x << shift
double log_shifted(double x, double shift) {
    if (shift > 0 && x < shift) return std::log(shift) + std::log1p(x / shift);
    return std::log(x + shift);
}

}  // namespace

Segment::Segment(double lo, double hi, BaseForm base, double power, double tilt)
    : lo_(lo), hi_(hi), base_(base), power_(power), tilt_(tilt) {
    if (!(hi > lo)) throw ParameterError("segment needs lo < hi");
    if (!(power > 0)) throw ParameterError("segment power must be > 0");
    if (!(tilt >= 0)) throw ParameterError("segment tilt must be >= 0");
    check_form(base_, hi_);
}

double Segment::base_log(double x) const {
    return std::visit(
        overloaded{
            [](const ConstantForm& f) { return f.log_value; },
            [&](const AffineForm& f) {
                if (x <= lo_) return f.log_lo;
                if (x >= hi_) return f.log_hi;
                const double width = hi_ - lo_;
                const double w_lo = (hi_ - x) / width;
                const double w_hi = (x - lo_) / width;
                return logmath::log_add(std::log(w_lo) + f.log_lo, std::log(w_hi) + f.log_hi);
            },
            [&](const PowerForm& f) { return f.log_coef - f.exponent * log_shifted(x, f.shift); },
            [&](const ExpAffineForm& f) { return -(f.offset + f.rate * (x - lo_)); },
            [&](const StretchedExpForm& f) { return -std::pow(x / f.scale, f.beta); },
        },
        base_);
}

double Segment::log_value(double x) const {
    const double b = base_log(x);
    return tilt_ == 0.0 ? power_ * b : power_ * b - tilt_ * x;
}

double Segment::affine_log_offset(const AffineForm& a, double x, double delta) const {
    const double width = hi_ - lo_;
    const double w_lo = std::clamp(((hi_ - x) - delta) / width, 0.0, 1.0);
    const double w_hi = std::clamp(((x - lo_) + delta) / width, 0.0, 1.0);
    return logmath::log_add(std::log(w_lo) + a.log_lo, std::log(w_hi) + a.log_hi);
}

double Segment::log_untilted_offset(double x, double delta) const {
    double b;
    if (const auto* e = std::get_if<ExpAffineForm>(&base_)) {
        b = -(e->offset + e->rate * ((x - lo_) + delta));
    } else if (const auto* a = std::get_if<AffineForm>(&base_)) {
        b = affine_log_offset(*a, x, delta);
    } else if (const auto* p = std::get_if<PowerForm>(&base_)) {
        b = p->log_coef - p->exponent * (log_shifted(x, p->shift) + std::log1p(delta / (x + p->shift)));
    } else {
        b = base_log(x + delta);
    }
    return power_ * b;
}

double Segment::log_value_offset(double x, double delta) const {
    const double b = log_untilted_offset(x, delta);
    return tilt_ == 0.0 ? b : b - tilt_ * x - tilt_ * delta;
}

double Segment::log_shift_ratio(double x, double delta) const {
    if (delta == 0.0) return 0.0;
    const double b = std::visit(
        overloaded{
            [](const ConstantForm&) { return 0.0; },
            [&](const AffineForm& f) { return affine_log_offset(f, x, delta) - affine_log_offset(f, x, 0.0); },
            [&](const PowerForm& f) { return -f.exponent * std::log1p(delta / (x + f.shift)); },
            [&](const ExpAffineForm& f) { return -f.rate * delta; },
            [&](const StretchedExpForm& f) {
                if (x == 0.0) return base_log(delta);
                // x^beta - (x+delta)^beta = -x^beta * expm1(beta * log1p(delta / x))
                return -std::pow(x / f.scale, f.beta) * std::expm1(f.beta * std::log1p(delta / x));
            },
        },
        base_);
    return tilt_ == 0.0 ? power_ * b : power_ * b - tilt_ * delta;
}

double Segment::base_dlog(double x) const {
    return std::visit(overloaded{
                          [](const ConstantForm&) { return 0.0; },
                          [&](const AffineForm& f) {
                              const double l = base_log(x);
                              return (std::exp(f.log_hi - l) - std::exp(f.log_lo - l)) / (hi_ - lo_);
                          },
                          [&](const PowerForm& f) { return -f.exponent / (x + f.shift); },
                          [](const ExpAffineForm& f) { return -f.rate; },
                          [&](const StretchedExpForm& f) {
                              return -f.beta / f.scale * std::pow(x / f.scale, f.beta - 1.0);
                          },
                      },
                      base_);
}

double Segment::dlog(double x) const { return power_ * base_dlog(x) - tilt_; }

double Segment::log_density(double x) const {
    const double d = dlog(x);
    if (!(d < 0)) return neg_inf;
    return log_value(x) + std::log(-d);
}

std::optional<LogLinear> Segment::log_linear() const {
    if (const auto* c = std::get_if<ConstantForm>(&base_))
        return LogLinear{power_ * c->log_value, -tilt_};
    if (const auto* e = std::get_if<ExpAffineForm>(&base_))
        return LogLinear{-power_ * (e->offset - e->rate * lo_), -power_ * e->rate - tilt_};
    return std::nullopt;
}

bool Segment::is_flat() const {
    return tilt_ == 0.0 && std::holds_alternative<ConstantForm>(base_);
}

double Segment::invert(double log_u) const {
    if (log_u >= log_value(lo_)) return lo_;
    if (std::isfinite(hi_) && log_u <= log_value(hi_)) return hi_;
    auto clamp = [&](double x) {
        if (!(x > lo_)) return lo_;
        if (x > hi_) return hi_;
        return x;
    };
    if (tilt_ == 0.0) {
        const double b = log_u / power_;
        const auto closed = std::visit(
            overloaded{
                [&](const ConstantForm&) -> std::optional<double> { return lo_; },
                [&](const AffineForm& f) -> std::optional<double> {
                    const double w = std::expm1(b - f.log_lo) / std::expm1(f.log_hi - f.log_lo);
                    return lo_ + w * (hi_ - lo_);
                },
                [&](const PowerForm& f) -> std::optional<double> {
                    if (f.exponent == 0) return std::nullopt;
                    const double c = (f.log_coef - b) / f.exponent;
                    if (f.shift > 0) return f.shift * std::expm1(c - std::log(f.shift));
                    return std::exp(c) - f.shift;
                },
                [&](const ExpAffineForm& f) -> std::optional<double> {
                    if (f.rate == 0) return std::nullopt;
                    return lo_ + (-b - f.offset) / f.rate;
                },
                [&](const StretchedExpForm& f) -> std::optional<double> {
                    return f.scale * std::pow(-b, 1.0 / f.beta);
                },
            },
            base_);
        if (closed) {
            // closed forms can land an ulp or two off the smallest x with F(x) <= u
            double x = clamp(*closed);
            for (int i = 0; i < 64 && x < hi_ && log_value(x) > log_u; ++i) x = std::nextafter(x, hi_);
            for (int i = 0; i < 64 && x > lo_; ++i) {
                const double prev = std::nextafter(x, lo_);
                if (log_value(prev) > log_u) break;
                x = prev;
            }
            if (log_value(x) <= log_u || x == hi_) return x;
        }
    }
    double a = lo_;
    double b = hi_;
    if (!std::isfinite(b)) {
        b = std::max(1.0, 2.0 * lo_);
        while (log_value(b) > log_u) {
            a = b;
            b *= 2.0;
            if (!std::isfinite(b)) throw NumericalError("segment inversion ran past double range");
        }
    }
    for (int it = 0; it < 2000 && b - a > 1e-12 * (1.0 + std::abs(a)); ++it) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        if (log_value(m) > log_u)
            a = m;
        else
            b = m;
    }
    return b;
}

Segment Segment::powered(double m) const { return Segment(lo_, hi_, base_, power_ * m, tilt_ * m); }

Segment Segment::tilted(double gamma) const {
    return Segment(lo_, hi_, base_, power_, tilt_ + gamma);
}

std::string Segment::form_name() const {
    return std::visit(overloaded{
                          [](const ConstantForm&) { return std::string("constant"); },
                          [](const AffineForm&) { return std::string("affine"); },
                          [](const PowerForm&) { return std::string("power"); },
                          [](const ExpAffineForm&) { return std::string("exp-affine"); },
                          [](const StretchedExpForm&) { return std::string("stretched-exp"); },
                      },
                      base_);
}

nlohmann::json Segment::to_json() const {
    nlohmann::json j;
    j["lo"] = lo_;
    j["hi"] = std::isfinite(hi_) ? nlohmann::json(hi_) : nlohmann::json("inf");
    j["form"] = form_name();
    std::visit(overloaded{
                   [&](const ConstantForm& f) { j["log_value"] = f.log_value; },
                   [&](const AffineForm& f) {
                       j["log_lo"] = f.log_lo;
                       j["log_hi"] = f.log_hi;
                   },
                   [&](const PowerForm& f) {
                       j["log_coef"] = f.log_coef;
                       j["shift"] = f.shift;
                       j["exponent"] = f.exponent;
                   },
                   [&](const ExpAffineForm& f) {
                       j["offset"] = f.offset;
                       j["rate"] = f.rate;
                   },
                   [&](const StretchedExpForm& f) {
                       j["scale"] = f.scale;
                       j["beta"] = f.beta;
                   },
               },
               base_);
    j["power"] = power_;
    j["tilt"] = tilt_;
    return j;
}

}  // namespace tailforge
