#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "tailforge/convolve.hpp"
#include "tailforge/distribution.hpp"
#include "tailforge/functionals.hpp"

namespace tailforge {

struct McEstimate {
    double estimate = 0.0;
    double standard_error = 0.0;  ///< binomial SE over accepted tuples
    std::uint64_t accepted = 0;
    std::uint64_t total = 0;
    std::uint64_t seed = 0;
    nlohmann::json to_json() const;
};

struct McConfig {
    /// Pilot acceptance P(S_n > x) must reach this floor.
    double acceptance_floor = 1e-4;
    std::uint64_t chunk_size = 1 << 16;
    /// Worker threads; results do not depend on this.
    unsigned threads = 0;
};

/// Rejection estimate of P(X_(n,1) > x - K | S_n > x) from N n-tuples.
///
/// Chunk c of stream `stream` draws from MT19937-64 seeded with
/// derive_seed(seed, stream, c), so the result depends only on
/// (seed, stream, N, chunk_size).
McEstimate mc_jump_cond(const Distribution& d, int n, double x, double K, std::uint64_t N, std::uint64_t seed,
                        std::uint64_t stream = 0, const McConfig& cfg = {});

struct Scenario {
    int n;
    double x;
    double K;
};

struct ComparisonRow {
    std::size_t index = 0;
    Scenario scenario{};
    std::optional<McEstimate> mc;
    std::optional<Bracket> bracket;
    double z = 0.0;
    bool flagged = false;
    std::string error;
};

/// z = (estimate - bracket center) / sqrt(SE^2 + (bracket width / 2)^2); flags |z| > 4.
void score_row(ComparisonRow& row);

/// One row per scenario; scenario i uses stream i. Errors are recorded in the row.
std::vector<ComparisonRow> mc_vs_quadrature(const Distribution& d, std::span<const Scenario> scenarios,
                                            std::uint64_t N, std::uint64_t seed, const McConfig& cfg = {},
                                            const JumpConfig& jcfg = {});

}  // namespace tailforge
