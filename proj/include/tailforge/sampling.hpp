#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "tailforge/distribution.hpp"

namespace tailforge {

/// Smallest x with F(x) <= u, for u in (0, 1].
double quantile_from_tail(const Distribution& d, double u);
/// Same, with u given as log u.
double quantile_from_log_tail(const Distribution& d, double log_u);

/// n draws by inverse transform; pure in (seed, n).
std::vector<double> sample(const Distribution& d, std::uint64_t seed, std::size_t n);

/// One draw from an existing engine.
double draw(const Distribution& d, std::mt19937_64& g);

}  // namespace tailforge
