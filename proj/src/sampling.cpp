#include "tailforge/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "tailforge/errors.hpp"
#include "tailforge/rng.hpp"

namespace tailforge {

double quantile_from_log_tail(const Distribution& d, double log_u) {
    if (std::isnan(log_u) || log_u > 0) throw DomainError("quantile level must lie in (0, 1]");
    const TailCurve& t = d.tail();
    const std::size_t count = t.segments().size();
    // First segment whose left limit at hi is already <= u.
    std::size_t lo = 0, hi = count;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (t.log_at_hi_left(mid) <= log_u)
            hi = mid;
        else
            lo = mid + 1;
    }
    if (lo == count) {
        if (t.truncated() && t.log_at_truncation() <= log_u) return t.truncation_hi();
        char buf[200];
        std::snprintf(buf, sizeof buf, "quantile level exp(%.6g) is below the representable tail depth at %.6g",
                      log_u, t.truncation_hi());
        throw TruncationError(buf);
    }
    if (t.log_at_lo(lo) <= log_u) return t.segments()[lo].lo();
    return t.segments()[lo].invert(log_u);
}

double quantile_from_tail(const Distribution& d, double u) {
    if (!(u > 0) || u > 1) throw DomainError("quantile level must lie in (0, 1]");
    return quantile_from_log_tail(d, std::log(u));
}

double draw(const Distribution& d, std::mt19937_64& g) {
    return quantile_from_tail(d, uniform_open_closed(g));
}

std::vector<double> sample(const Distribution& d, std::uint64_t seed, std::size_t n) {
    if (n < 1) throw ParameterError("sample needs n >= 1");
    auto g = make_engine(seed);
    std::vector<double> out(n);
    for (auto& v : out) v = draw(d, g);
    return out;
}

}  // namespace tailforge
