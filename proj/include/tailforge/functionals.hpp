#pragma once

#include <span>
#include <string>
#include <vector>

#include "tailforge/convolve.hpp"
#include "tailforge/diag.hpp"
#include "tailforge/distribution.hpp"

namespace tailforge {

/// T(x; K) = 2 int_0^K F(x-y)F(y)dy / int_0^x F(x-y)F(y)dy, for 0 < K <= x/2.
double t_ratio(const Distribution& d, double x, double K, const QuadConfig& cfg = {});

/// B(x; K) = 2 int_[0,K] F(x-y) F(dy) / F*2(x), for x > 2K > 0.
double b2_cond(const Distribution& d, double x, double K, const QuadConfig& cfg = {});

/// B(x; K) for the transform G = F e^(-gamma x), computed through F:
/// numerator 2 int_[0,K] F(x-y)F(dy) + 2 gamma int_0^K F(x-y)F(y)dy and
/// denominator F*2(x) + gamma int_0^x F(x-y)F(y)dy (common factor e^(-gamma x)).
double b2_cond_transformed(const Distribution& d, double gamma, double x, double K, const QuadConfig& cfg = {});

/// F*2_G(x) / G(x) for G = F e^(-gamma x), as OS_F(x) + gamma OS*_F(x).
double os_ratio_transformed(const Distribution& d, double gamma, double x, const QuadConfig& cfg = {});

struct JumpConfig {
    /// Lattice step; 0 picks the largest power of two <= x / 4096.
    double h = 0.0;
    GridLimits limits;
};

/// Bracket of P(X_(n,1) > x - K | S_n > x) from staircase convolutions.
/// Throws InconclusiveError when the denominator's lower bound is 0.
Bracket jump_cond(const Distribution& d, int n, double x, double K, const JumpConfig& cfg = {});

enum class RatioKind { OL, D, Lgamma, OS, OSstar };

std::string to_string(RatioKind k);
RatioKind ratio_kind_from_string(const std::string& s);

struct RatioSpec {
    RatioKind kind = RatioKind::D;
    double t = 1.0;      ///< shift for OL and Lgamma
    double gamma = 0.0;  ///< rate for Lgamma
};

/// Single ratio value at x:
///   OL: F(x-t)/F(x); D: F(x/2)/F(x); Lgamma: e^(gamma t) F(x+t)/F(x);
///   OS: F*2(x)/F(x); OS*: int_0^x F(x-y)F(y)dy / F(x).
double ratio_value(const Distribution& d, const RatioSpec& spec, double x, const QuadConfig& cfg = {});

DiagSeries ratio_diagnostic(const Distribution& d, const RatioSpec& spec, std::span<const double> xgrid,
                            const TrendRules& rules = {}, const QuadConfig& cfg = {});

/// (a_(n+1)^2 / 2 - a_n^2) e^(-a_n) for the fkz sequence, in logs.
double log_exam300_lower_bound(int n);
double exam300_lower_bound(int n);

/// For each t: max over xgrid (x > t) of F(x-t)/F(x); trend taken over t.
DiagSeries weak_equiv_diag(const Distribution& d, std::span<const double> tgrid, std::span<const double> xgrid,
                           const TrendRules& rules = {});

struct JumpProfile {
    int n = 2;
    std::vector<double> Ks;
    std::vector<double> xs;
    std::vector<std::vector<Bracket>> probs;  ///< probs[i][k] at xs[i], Ks[k]
    nlohmann::json to_json() const;
};

JumpProfile jump_profile(const Distribution& d, int n, std::span<const double> xs, std::span<const double> Ks,
                         const JumpConfig& cfg = {});

/// Window of x relative to the piecewise sequence x_n, for shift K:
/// 1 [x_n, x_n+K), 2 [x_n+K, 1.5x_n), 3 [1.5x_n, 2x_n), 4 [2x_n, 2x_n+K),
/// 5 [2x_n+K, x_(n+1)); 0 below x_1 or past the sequence.
int xu_window(double x, std::span<const double> xs, double K);

/// Geometric grid lo * (hi/lo)^(i/(count-1)).
std::vector<double> geometric_grid(double lo, double hi, int count);
std::vector<double> linear_grid(double lo, double hi, int count);

}  // namespace tailforge
