#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tailforge/dist_spec.hpp"
#include "tailforge/tail_curve.hpp"

namespace tailforge {

struct Atom {
    double location;
    double log_mass;
    double mass;
};

/// Segment on which the distribution has a density -dF/dx.
struct DensityPiece {
    double lo;
    double hi;
    std::size_t segment;
};

/// Decomposition of dF into atoms plus absolutely continuous pieces.
struct MeasureParts {
    std::vector<Atom> atoms;
    std::vector<DensityPiece> density;
    double atom_mass = 0.0;
    double ac_mass = 0.0;
};

MeasureParts derive_measure_parts(const TailCurve& tail);

/// A distribution on [0, inf) given by its exact piecewise tail.
class Distribution {
public:
    Distribution(TailCurve tail, DistSpec spec, std::string label,
                 std::vector<std::string> notices = {});

    const TailCurve& tail() const noexcept { return tail_; }
    const MeasureParts& parts() const noexcept { return parts_; }
    /// Mean, when the tail integral converges.
    std::optional<double> mean() const noexcept { return mean_; }
    const std::string& label() const noexcept { return label_; }
    const DistSpec& spec() const noexcept { return spec_; }
    /// Truncation and construction notes.
    const std::vector<std::string>& notices() const noexcept { return notices_; }

    double log_tail(double x) const { return tail_.log_tail(x); }
    double log_tail_left(double x) const { return tail_.log_tail_left(x); }
    double tail_value(double x) const;
    double log_density(double x) const;
    double truncation_hi() const noexcept { return tail_.truncation_hi(); }

    nlohmann::json to_json() const;

private:
    TailCurve tail_;
    MeasureParts parts_;
    std::optional<double> mean_;
    DistSpec spec_;
    std::string label_;
    std::vector<std::string> notices_;
};

/// Distribution with tail F^m.
Distribution power_tail(const Distribution& d, int m);

}  // namespace tailforge
