#include "tailforge/distribution.hpp"

#include <cmath>

#include "tailforge/errors.hpp"
#include "tailforge/logmath.hpp"
#include "tailforge/moments.hpp"

namespace tailforge {

using logmath::neg_inf;

MeasureParts derive_measure_parts(const TailCurve& tail) {
    MeasureParts parts;
    auto add_atom = [&](double at, double left, double right) {
        if (!(left - right > log_jump_tolerance(left, right))) return;
        const double lm = logmath::log_sub(left, right);
        if (lm == neg_inf) return;
        const double mass = std::exp(lm);
        parts.atoms.push_back({at, lm, mass});
        parts.atom_mass += mass;
    };
    const auto segs = tail.segments();
    add_atom(0.0, 0.0, tail.log_at_lo(0));
    for (std::size_t i = 0; i < segs.size(); ++i) {
        if (i > 0) add_atom(segs[i].lo(), tail.log_at_hi_left(i - 1), tail.log_at_lo(i));
        if (!segs[i].is_flat()) {
            parts.density.push_back({segs[i].lo(), segs[i].hi(), i});
            parts.ac_mass += logmath::exp_diff(tail.log_at_lo(i), tail.log_at_hi_left(i));
        }
    }
    if (tail.truncated())
        add_atom(tail.truncation_hi(), tail.log_at_hi_left(segs.size() - 1), tail.log_at_truncation());
    return parts;
}

Distribution::Distribution(TailCurve tail, DistSpec spec, std::string label, std::vector<std::string> notices)
    : tail_(std::move(tail)),
      parts_(derive_measure_parts(tail_)),
      spec_(std::move(spec)),
      label_(std::move(label)),
      notices_(std::move(notices)) {
    try {
        mean_ = std::exp(log_tail_integral(tail_, 0, 0.0, 0.0, INFINITY, 1e-12));
    } catch (const DivergenceError&) {
        mean_.reset();
    }
}

double Distribution::tail_value(double x) const { return std::exp(tail_.log_tail(x)); }

double Distribution::log_density(double x) const {
    if (x < 0) return neg_inf;
    if (x >= tail_.truncation_hi()) throw DomainError("density requested at or beyond truncation_hi");
    return tail_.segments()[tail_.segment_index(x)].log_density(x);
}

nlohmann::json Distribution::to_json() const {
    using nlohmann::json;
    json j;
    j["label"] = label_;
    j["spec"] = tailforge::to_json(spec_);
    json segs = json::array();
    for (const auto& s : tail_.segments()) segs.push_back(s.to_json());
    j["segments"] = segs;
    j["truncation_hi"] = tail_.truncated() ? json(tail_.truncation_hi()) : json("inf");
    if (tail_.truncated()) j["log_at_truncation"] = tail_.log_at_truncation();
    json atoms = json::array();
    for (const auto& a : parts_.atoms) atoms.push_back({{"location", a.location}, {"mass", a.mass}, {"log_mass", a.log_mass}});
    j["atoms"] = atoms;
    j["atom_mass"] = parts_.atom_mass;
    j["ac_mass"] = parts_.ac_mass;
    j["mean"] = mean_ ? json(*mean_) : json(nullptr);
    j["notices"] = notices_;
    return j;
}

Distribution power_tail(const Distribution& d, int m) {
    if (m < 1) throw ParameterError("power_tail needs m >= 1");
    if (m == 1) return d;
    DistSpec spec = d.spec();
    spec.steps.push_back({TransformStep::Kind::power, static_cast<double>(m)});
    return Distribution(d.tail().powered(m), spec, describe(spec), d.notices());
}

}  // namespace tailforge
