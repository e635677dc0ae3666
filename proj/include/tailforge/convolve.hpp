#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "tailforge/distribution.hpp"
#include "tailforge/quadrature.hpp"

namespace tailforge {

/// log of the integral of F(x - y) F(y) dy over [a, b], 0 <= a <= b <= x.
///
/// The part above x/2 is reflected through y -> x - y, so every evaluation
/// has y <= x/2 and x - y is anchored at x. Breakpoints are the segment
/// boundaries of F(y) and of F(x - y).
double log_cross_integral(const Distribution& d, double a, double b, double x, const QuadConfig& cfg = {});
double cross_integral(const Distribution& d, double a, double b, double x, const QuadConfig& cfg = {});

/// log of cross_integral / F(x), accurate when log F(x) is huge (e.g. -1e18).
double log_cross_ratio(const Distribution& d, double a, double b, double x, const QuadConfig& cfg = {});

/// log of the Stieltjes integral of F(x - y) F(dy) over the closed range [a, b], b <= x.
double log_stieltjes_cross(const Distribution& d, double a, double b, double x, const QuadConfig& cfg = {});

/// log of log_stieltjes_cross / F(x).
double log_stieltjes_ratio(const Distribution& d, double a, double b, double x, const QuadConfig& cfg = {});

/// log of F*2(x) / F(x).
double log_os_ratio(const Distribution& d, double x, const QuadConfig& cfg = {});

/// Two-fold convolution tail, via F*2(x) = 2 int_[0,x/2] F(x-y) F(dy) + F(x/2)^2.
double log_conv2_tail(const Distribution& d, double x, const QuadConfig& cfg = {});
double conv2_tail(const Distribution& d, double x, const QuadConfig& cfg = {});

/// |G*2(x) - (F*2(x) + 2 gamma int_[x/2,x] F(x-y)F(y)dy) e^(-gamma x)| / G*2(x),
/// with G*2 computed directly on the transformed distribution.
double g_conv2_identity_residual(const Distribution& d, double gamma, double x, const QuadConfig& cfg = {});

/// Enclosure [lo, hi] of a probability.
struct Bracket {
    double lo;
    double hi;
    double center() const { return 0.5 * (lo + hi); }
    double width() const { return hi - lo; }
    bool contains(double v) const { return lo <= v && v <= hi; }
};

/// Log-tail bounds of an n-fold convolution on the lattice c_k = k h.
struct BracketGrid {
    std::vector<double> grid;
    std::vector<double> lower;
    std::vector<double> upper;
    int n = 0;
    double h = 0.0;
    double cap = std::numeric_limits<double>::infinity();
    double total = 1.0;  ///< P(every X_i <= cap)
};

struct GridLimits {
    std::size_t max_cells = 20000;
    int max_n = 8;
};

/// Lattice step actually used for a requested h: the largest power of two
/// not above h, so that every lattice point k * h is exact.
double lattice_step(double h);

/// Staircase brackets of P(S_n > c_k) for c_k <= x_max (plus one cell).
BracketGrid convn_tail_grid(const Distribution& d, int n, double x_max, double h, const GridLimits& lim = {});

/// Same for P(S_n > c_k, every X_i <= cap).
BracketGrid trunc_convn_tail_grid(const Distribution& d, int n, double cap, double x_max, double h,
                                  const GridLimits& lim = {});

/// Bracket of the (probability-scale) tail at any x covered by the lattice.
Bracket bracket_at(const BracketGrid& g, double x);
/// Same bracket with both ends as logs.
Bracket log_bracket_at(const BracketGrid& g, double x);

}  // namespace tailforge
