#pragma once

// Generated by tools/oracles/oracles.py; do not edit.

namespace oracle {

struct DyadicT {
    int m;
    int k;
    double value;
};

inline constexpr DyadicT dyadic_t_ratio[] = {
    {12, 10, 0.99967437316834907},
    {15, 10, 0.99938962360122075},
    {16, 10, 0.99936929055360013},
    {18, 10, 0.99935404131083837},
    {20, 10, 0.99935022907286208},
    {25, 10, 0.99934899804389469},
    {30, 10, 0.99934895957428833},
    {40, 10, 0.9993489583345452},
    {20, 0, 0.33333375718912403},
    {20, 3, 0.91666783227009108},
    {20, 6, 0.98958459165521196},
    {11, 10, 1.0},
};

inline constexpr double fkz_lower_bound[] = {
    0.9912614730580803,
    0.5378638876269897,
    4.1249849474395212,
    78400022775561340.0,
};

inline constexpr double exponential_jump_9_1 = 0.39990881180344455;
inline constexpr double exponential_jump_5_1 = 0.65836882193868934;

}  // namespace oracle
