"""Exact rational linear feasibility via a small two-phase simplex.

Only what the balancedness classifier needs: given A x = b, x >= 0 over the
rationals, decide feasibility and return a feasible point.  Bland's rule
guarantees termination; Fractions keep everything tolerance-free.
"""

from __future__ import annotations

from fractions import Fraction


def _pivot(T, r, c):
    piv = T[r][c]
    T[r] = [v / piv for v in T[r]]
    for i, row in enumerate(T):
        if i != r and row[c] != 0:
            f = row[c]
            T[i] = [a - f * b for a, b in zip(row, T[r])]


def _simplex_phase(T, basis, ncols):
    """Minimize the objective in the last tableau row using Bland's rule."""
    while True:
        obj = T[-1]
        col = next((j for j in range(ncols) if obj[j] < 0), None)
        if col is None:
            return
        best = None
        for i in range(len(T) - 1):
            if T[i][col] > 0:
                ratio = T[i][-1] / T[i][col]
                if best is None or ratio < best[0] or (
                    ratio == best[0] and basis[i] < basis[best[1]]
                ):
                    best = (ratio, i)
        if best is None:
            raise ArithmeticError("unbounded feasibility phase")
        _pivot(T, best[1], col)
        basis[best[1]] = col


def solve_feasibility(A, b):
    """Find x >= 0 with A x = b (entries Fraction/int), or None if infeasible."""
    m = len(A)
    n = len(A[0]) if m else 0
    A = [[Fraction(v) for v in row] for row in A]
    b = [Fraction(v) for v in b]
    for i in range(m):
        if b[i] < 0:
            A[i] = [-v for v in A[i]]
            b[i] = -b[i]
    # tableau columns: n originals, m artificials, rhs
    T = []
    for i in range(m):
        row = A[i] + [Fraction(int(i == j)) for j in range(m)] + [b[i]]
        T.append(row)
    # phase-1 objective: minimize the sum of artificials; the reduced-cost
    # row starts as c minus the sum of the (artificial-basic) constraint rows
    obj = [Fraction(0)] * n + [Fraction(1)] * m + [Fraction(0)]
    for i in range(m):
        obj = [o - v for o, v in zip(obj, T[i])]
    T.append(obj)
    basis = [n + i for i in range(m)]
    _simplex_phase(T, basis, n + m)
    if T[-1][-1] != 0:
        return None
    # drive any artificial still basic (at zero level) out of the basis
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if T[i][j] != 0), None)
            if col is not None:
                _pivot(T, i, col)
                basis[i] = col
    x = [Fraction(0)] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = T[i][-1]
    return x
