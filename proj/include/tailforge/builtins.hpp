#pragma once

#include <vector>

#include "tailforge/dist_spec.hpp"
#include "tailforge/distribution.hpp"

namespace tailforge {

/// Constructs a builtin distribution, validating its parameter constraints.
Distribution builtin(const BuiltinSpec& spec);

/// Builtin plus every recorded transform step.
Distribution build(const DistSpec& spec);

/// a_0, a_1, ... of the fkz construction, stopping before the first value
/// whose square overflows.
std::vector<double> fkz_sequence(int max_terms = 64);

/// x_1, x_2, ... for the xu construction (values that fit in a double).
std::vector<double> xu_sequence(double alpha, double x1, int max_terms = 100000);

/// (x_i, y_i) plateau pairs produced by a plateau spec.
std::vector<std::pair<double, double>> plateau_pairs(const PlateauExampleSpec& spec);

}  // namespace tailforge
