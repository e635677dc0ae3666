#!/usr/bin/env python3
"""Reference values for the test suite, computed without the library.

dyadic t_ratio: exact rational arithmetic (the integrand is a step function).
fkz lower bound and the exponential jump probability: mpmath at 60 digits.

Usage: oracles.py [--check FILE | --write FILE]
"""
import sys
from fractions import Fraction

import mpmath as mp


def dyadic_tail(y):
    # 1 on [0, 2), 4^-n on [2^n, 2^(n+1))
    if y < 2:
        return Fraction(1)
    n = 1
    while y >= 2 ** (n + 1):
        n += 1
    return Fraction(1, 4 ** n)


def dyadic_cross(x, a, b):
    """Exact int_a^b F(x - y) F(y) dy for the dyadic tail."""
    cuts = {Fraction(a), Fraction(b)}
    j = 1
    while 2 ** j <= x:
        for c in (Fraction(2 ** j), x - 2 ** j):
            if a < c < b:
                cuts.add(c)
        j += 1
    pts = sorted(cuts)
    total = Fraction(0)
    for lo, hi in zip(pts, pts[1:]):
        mid = (lo + hi) / 2
        total += (hi - lo) * dyadic_tail(x - mid) * dyadic_tail(mid)
    return total


def dyadic_t_ratio(m, k):
    x = Fraction(2 ** m)
    K = Fraction(2 ** k)
    return 2 * dyadic_cross(x, 0, K) / dyadic_cross(x, 0, x)


def fkz_bound(n):
    mp.mp.dps = 60
    a = [mp.mpf(0), mp.mpf(1)]
    while len(a) < n + 2:
        a.append(mp.exp(a[-1]) / a[-1])
    return (a[n + 1] ** 2 / 2 - a[n] ** 2) * mp.exp(-a[n])


def exponential_jump(x, K):
    """P(X_(2,1) > x - K | S_2 > x) for two standard exponentials, by 1-D quadrature."""
    mp.mp.dps = 60
    c = x - K
    both = mp.quad(lambda y: mp.exp(-y) * (mp.exp(-(x - y)) - mp.exp(-c)), [x - c, c])
    tail = (1 + x) * mp.exp(-x)
    return 1 - both / tail


def header():
    lines = [
        "#pragma once",
        "",
        "// Generated by tools/oracles/oracles.py; do not edit.",
        "",
        "namespace oracle {",
        "",
        "struct DyadicT {",
        "    int m;",
        "    int k;",
        "    double value;",
        "};",
        "",
        "inline constexpr DyadicT dyadic_t_ratio[] = {",
    ]
    for m in (12, 15, 16, 18, 20, 25, 30, 40):
        v = dyadic_t_ratio(m, 10)
        lines.append("    {%d, 10, %s}," % (m, mp.nstr(mp.mpf(v.numerator) / v.denominator, 17)))
    for m, k in ((20, 0), (20, 3), (20, 6), (11, 10)):
        v = dyadic_t_ratio(m, k)
        lines.append("    {%d, %d, %s}," % (m, k, mp.nstr(mp.mpf(v.numerator) / v.denominator, 17)))
    lines.append("};")
    lines.append("")
    lines.append("inline constexpr double fkz_lower_bound[] = {")
    for n in (1, 2, 3, 4):
        lines.append("    %s," % mp.nstr(fkz_bound(n), 17))
    lines.append("};")
    lines.append("")
    lines.append("inline constexpr double exponential_jump_9_1 = %s;" % mp.nstr(exponential_jump(9, 1), 17))
    lines.append("inline constexpr double exponential_jump_5_1 = %s;" % mp.nstr(exponential_jump(5, 1), 17))
    lines.append("")
    lines.append("}  // namespace oracle")
    return "\n".join(lines) + "\n"


def main(argv):
    mp.mp.dps = 60
    text = header()
    if len(argv) == 3 and argv[1] == "--write":
        with open(argv[2], "w", newline="\n") as f:
            f.write(text)
        return 0
    if len(argv) == 3 and argv[1] == "--check":
        with open(argv[2]) as f:
            if f.read() != text:
                print("oracle header is stale: rerun oracles.py --write", file=sys.stderr)
                return 1
        print("oracle header matches a fresh computation")
        return 0
    sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
