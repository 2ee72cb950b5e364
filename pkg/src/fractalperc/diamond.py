"""Exact crossing recursion for the diamond family and its fixed points.

A level-1 diamond cell with m branches of n edges fails to cross with
probability (1-p^n)^m, so the single-cell crossing probability is
f(p) = 1 - (1-p^n)^m and the level-l crossing probability is the l-fold
composition of f.  The interior fixed point of f is repelling (0 and 1
attract), so composition near it amplifies error by |f'| > 1 per level;
iteration therefore runs in extended precision sized to the iteration
count, and accepts mpmath values or decimal strings when the caller needs
to start closer to the fixed point than a double can express.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath as mp

PC_RANGE = (2, 12)  # tabulation guard for the monotonicity table
MIN_TOL = 1e-14


def _validate_mn(m, n):
    if int(m) != m or int(n) != n or m < 2 or n < 2:
        raise ValueError("diamond crossing recursion requires integers m, n >= 2")
    return int(m), int(n)


def f_eval(m, n, p):
    """Single-cell crossing probability 1 - (1 - p**n)**m."""
    m, n = _validate_mn(m, n)
    if isinstance(p, (int, float)) and not (0.0 <= p <= 1.0):
        raise ValueError("p must lie in [0, 1]")
    return 1 - (1 - p**n) ** m


def _iteration_prec(m, n, iterations):
    # |f'| <= mn, so each level can lose at most log2(mn) bits near the
    # repelling point; size the working precision to the worst case
    return 64 + int(math.ceil(iterations * math.log2(m * n))) + 16


def f_iterate(m, n, p, iterations):
    """Crossing probability of the level-`iterations` diamond at parameter p.

    p may be a float, an mpmath value, or a decimal string; strings and
    mpmath values keep their full precision through the iteration.
    """
    m, n = _validate_mn(m, n)
    if iterations < 0:
        raise ValueError("iteration count must be nonnegative")
    with mp.workprec(_iteration_prec(m, n, max(1, iterations))):
        x = mp.mpf(p)
        if not (0 <= x <= 1):
            raise ValueError("p must lie in [0, 1]")
        for _ in range(iterations):
            x = 1 - (1 - x**n) ** m
        return float(x)


def f_trace(m, n, p, iterations):
    """Orbit [p, f(p), f∘2(p), ...] as floats, computed in one context."""
    m, n = _validate_mn(m, n)
    if iterations < 0:
        raise ValueError("iteration count must be nonnegative")
    with mp.workprec(_iteration_prec(m, n, max(1, iterations))):
        x = mp.mpf(p)
        if not (0 <= x <= 1):
            raise ValueError("p must lie in [0, 1]")
        orbit = [float(x)]
        for _ in range(iterations):
            x = 1 - (1 - x**n) ** m
            orbit.append(float(x))
        return orbit


def solve_pc(m, n, tol=1e-12):
    """Unique interior fixed point of the crossing recursion, by bisection.

    f(p) - p is negative on (0, pc) and positive on (pc, 1); bisection is
    unconditionally convergent there, unlike Newton on the flat tails of
    large (m, n).  The interval is shrunk to tol/(mn+1) so the residual
    |f(pc) - pc| stays below 10*tol even when |f'| is as large as mn.
    """
    m, n = _validate_mn(m, n)
    if tol < MIN_TOL:
        raise ValueError(f"tol must be >= {MIN_TOL}")
    lo, hi = 1e-9, 1.0 - 1e-9
    g_lo = f_eval(m, n, lo) - lo
    g_hi = f_eval(m, n, hi) - hi
    if not (g_lo < 0 < g_hi):
        raise AssertionError("fixed point bracket failed")
    width = tol / (m * n + 1)
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:  # double resolution floor
            break
        if f_eval(m, n, mid) - mid < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def exact_median(m, n, level, tol=1e-12):
    """The p where the level-`level` crossing probability equals 1/2."""
    m, n = _validate_mn(m, n)
    if level < 0:
        raise ValueError("level must be nonnegative")
    if tol < MIN_TOL:
        raise ValueError(f"tol must be >= {MIN_TOL}")
    with mp.workprec(_iteration_prec(m, n, max(1, level)) + 8):
        lo, hi = mp.mpf(0), mp.mpf(1)
        half = mp.mpf(1) / 2

        def composed(x):
            for _ in range(level):
                x = 1 - (1 - x**n) ** m
            return x

        while hi - lo > tol / 4:
            mid = (lo + hi) / 2
            if composed(mid) < half:
                lo = mid
            else:
                hi = mid
        return float((lo + hi) / 2)


@dataclass(frozen=True)
class PcTable:
    """Critical values per (m, n); rows decrease in m, columns increase in n."""

    m_values: tuple
    n_values: tuple
    values: tuple  # values[i][j] = pc(m_values[i], n_values[j])

    def row(self, m):
        return self.values[self.m_values.index(m)]

    def entry(self, m, n):
        return self.values[self.m_values.index(m)][self.n_values.index(n)]


def monotonicity_table(m_values, n_values, tol=1e-12) -> PcTable:
    """Tabulate pc over the ranges and assert strict monotonicity both ways."""
    m_values = tuple(sorted(set(int(m) for m in m_values)))
    n_values = tuple(sorted(set(int(n) for n in n_values)))
    lo, hi = PC_RANGE
    for v in m_values + n_values:
        if not (lo <= v <= hi):
            raise ValueError(f"table parameters must lie in [{lo}, {hi}]")
    values = tuple(
        tuple(solve_pc(m, n, tol) for n in n_values) for m in m_values
    )
    for j in range(len(n_values)):
        col = [values[i][j] for i in range(len(m_values))]
        if any(b >= a for a, b in zip(col, col[1:])):
            raise AssertionError(f"pc not strictly decreasing in m at n={n_values[j]}")
    for i in range(len(m_values)):
        row = values[i]
        if any(b <= a for a, b in zip(row, row[1:])):
            raise AssertionError(f"pc not strictly increasing in n at m={m_values[i]}")
    return PcTable(m_values, n_values, values)
