#include "tailforge/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>

#include "tailforge/errors.hpp"
#include "tailforge/rng.hpp"
#include "tailforge/sampling.hpp"

namespace tailforge {

nlohmann::json McEstimate::to_json() const {
    return {{"estimate", estimate}, {"standard_error", standard_error}, {"accepted", accepted},
            {"total", total},       {"seed", seed}};
}

namespace {

constexpr std::uint64_t pilot_chunk = ~std::uint64_t{0};

struct Counts {
    std::uint64_t accepted = 0;
    std::uint64_t hits = 0;
};

Counts run_chunk(const Distribution& d, int n, double x, double K, std::uint64_t draws, std::uint64_t seed) {
    auto g = make_engine(seed);
    Counts c;
    for (std::uint64_t i = 0; i < draws; ++i) {
        double s = 0.0, mx = 0.0;
        for (int k = 0; k < n; ++k) {
            const double v = draw(d, g);
            s += v;
            mx = std::max(mx, v);
        }
        if (s > x) {
            ++c.accepted;
            if (mx > x - K) ++c.hits;
        }
    }
    return c;
}

unsigned worker_count(unsigned requested, std::size_t jobs) {
    unsigned t = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(jobs, 1)));
}

// Runs job(i) for i in [0, count) on a small pool.
template <class F>
void parallel_for(std::size_t count, unsigned threads, F job) {
    const unsigned w = worker_count(threads, count);
    if (w <= 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < w; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) job(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace

McEstimate mc_jump_cond(const Distribution& d, int n, double x, double K, std::uint64_t N, std::uint64_t seed,
                        std::uint64_t stream, const McConfig& cfg) {
    if (N < 1) throw ParameterError("mc_jump_cond needs N >= 1");
    if (n < 1) throw ParameterError("mc_jump_cond needs n >= 1");
    if (cfg.chunk_size < 1) throw ParameterError("chunk_size must be >= 1");
    const std::uint64_t pilot_n = static_cast<std::uint64_t>(std::ceil(10.0 / cfg.acceptance_floor));
    const Counts pilot = run_chunk(d, n, x, K, std::min(pilot_n, std::max<std::uint64_t>(N, 1000)),
                                   derive_seed(seed, stream, pilot_chunk));
    const double rate = static_cast<double>(pilot.accepted) / static_cast<double>(std::min(pilot_n, std::max<std::uint64_t>(N, 1000)));
    if (rate < cfg.acceptance_floor) {
        char buf[220];
        std::snprintf(buf, sizeof buf,
                      "pilot acceptance P(S_%d > %.6g) ~ %.3g is below the floor %.3g; use the quadrature route "
                      "(jump_cond) instead",
                      n, x, rate, cfg.acceptance_floor);
        throw LowAcceptanceError(buf);
    }
    const std::uint64_t chunks = (N + cfg.chunk_size - 1) / cfg.chunk_size;
    std::vector<Counts> parts(chunks);
    parallel_for(chunks, cfg.threads, [&](std::size_t c) {
        const std::uint64_t draws = std::min<std::uint64_t>(cfg.chunk_size, N - c * cfg.chunk_size);
        parts[c] = run_chunk(d, n, x, K, draws, derive_seed(seed, stream, c));
    });
    Counts tot;
    for (const auto& p : parts) {
        tot.accepted += p.accepted;
        tot.hits += p.hits;
    }
    if (tot.accepted == 0) throw LowAcceptanceError("no tuple with S_n > x was drawn");
    McEstimate e;
    e.accepted = tot.accepted;
    e.total = N;
    e.seed = seed;
    const double p = static_cast<double>(tot.hits) / static_cast<double>(tot.accepted);
    e.estimate = p;
    e.standard_error = std::sqrt(p * (1 - p) / static_cast<double>(tot.accepted));
    return e;
}

void score_row(ComparisonRow& row) {
    row.z = 0.0;
    row.flagged = false;
    if (!row.mc || !row.bracket) return;
    const double half = 0.5 * row.bracket->width();
    const double scale = std::sqrt(row.mc->standard_error * row.mc->standard_error + half * half);
    const double diff = row.mc->estimate - row.bracket->center();
    row.z = scale > 0 ? diff / scale : (diff == 0 ? 0.0 : std::copysign(INFINITY, diff));
    row.flagged = std::abs(row.z) > 4.0;
}

std::vector<ComparisonRow> mc_vs_quadrature(const Distribution& d, std::span<const Scenario> scenarios,
                                            std::uint64_t N, std::uint64_t seed, const McConfig& cfg,
                                            const JumpConfig& jcfg) {
    std::vector<ComparisonRow> rows(scenarios.size());
    McConfig inner = cfg;
    inner.threads = 1;
    parallel_for(scenarios.size(), cfg.threads, [&](std::size_t i) {
        ComparisonRow& r = rows[i];
        r.index = i;
        r.scenario = scenarios[i];
        try {
            r.bracket = jump_cond(d, r.scenario.n, r.scenario.x, r.scenario.K, jcfg);
            r.mc = mc_jump_cond(d, r.scenario.n, r.scenario.x, r.scenario.K, N, seed, i, inner);
        } catch (const Error& e) {
            r.error = e.what();
        }
        score_row(r);
    });
    return rows;
}

}  // namespace tailforge
