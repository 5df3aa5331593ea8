"""Partial spin flips and c-/a-balancedness of product-basis supports."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import CollisionError
from .exactlp import solve_feasibility
from .statekit import PureState


@dataclass
class SupportPattern:
    bitvectors: list  # list of tuples of 0/1, one per term, in written order

    def __post_init__(self):
        if len(set(self.bitvectors)) != len(self.bitvectors):
            raise ValueError("support bitvectors must be pairwise distinct")

    @classmethod
    def from_state(cls, psi: PureState) -> "SupportPattern":
        order = psi.term_order
        if order is None:
            order = [
                int(i)
                for i in range(len(psi.amplitudes))
                if abs(psi.amplitudes[i]) > 1e-14
            ]
        n = psi.n_qubits
        bits = [
            tuple(int(b) for b in format(int(i), f"0{n}b")) for i in order
        ]
        return cls(bits)


@dataclass
class BalanceClass:
    label: str  # c_balanced | a_balanced_only | unbalanced
    witness: list | None  # list of Fractions, or None when unbalanced

    def witness_strings(self):
        if self.witness is None:
            return []
        return [str(w) for w in self.witness]


def partial_spin_flip(psi: PureState, components) -> PureState:
    """Complement every bit of the selected terms (1-based written order)."""
    order = psi.term_order
    if order is None:
        order = [
            int(i)
            for i in range(len(psi.amplitudes))
            if abs(psi.amplitudes[i]) > 1e-14
        ]
    mask = 2**psi.n_qubits - 1
    support = set(order)
    targets = {}
    for c in sorted(set(components)):
        if not 1 <= c <= len(order):
            raise IndexError(f"component index {c} out of range 1..{len(order)}")
        idx = order[c - 1]
        targets[idx] = idx ^ mask
    for src, dst in targets.items():
        if dst in support and dst not in targets:
            raise CollisionError(
                f"flipped bitstring {dst:0{psi.n_qubits}b} collides with support"
            )
    amps = psi.amplitudes.copy()
    for src, dst in targets.items():
        amps[dst] = psi.amplitudes[src]
        if src not in targets.values():
            amps[src] = 0.0
    new_order = [targets.get(i, i) for i in order]
    return PureState(psi.n_qubits, amps, term_order=new_order)


def _site_matrix(pattern: SupportPattern):
    """Rows: sites, columns: terms, entries 2b-1 in {-1,+1}."""
    n_terms = len(pattern.bitvectors)
    n_sites = len(pattern.bitvectors[0]) if n_terms else 0
    return [
        [2 * pattern.bitvectors[j][k] - 1 for j in range(n_terms)]
        for k in range(n_sites)
    ], n_terms


def classify_balance(pattern: SupportPattern) -> BalanceClass:
    """Decide c-/a-balancedness of the support by exact rational feasibility.

    The weighted +-1 spin sums must vanish at every site; c-balanced requires
    strictly positive weights (scaled to w_j >= 1), a-balanced allows mixed
    signs with nonzero total weight (scaled to sum 1).
    """
    A, n = _site_matrix(pattern)
    # c-balanced: w = 1 + u with u >= 0, so A u = -A 1
    b = [-sum(row) for row in A]
    u = solve_feasibility(A, b)
    if u is not None:
        return BalanceClass("c_balanced", [Fraction(1) + ui for ui in u])
    # a-balanced: w = u - v free-sign, A w = 0, sum(w) = 1
    A2 = [row + [-v for v in row] for row in A]
    A2.append([Fraction(1)] * n + [Fraction(-1)] * n)
    b2 = [Fraction(0)] * len(A) + [Fraction(1)]
    x = solve_feasibility(A2, b2)
    if x is not None:
        w = [x[j] - x[n + j] for j in range(n)]
        return BalanceClass("a_balanced_only", w)
    return BalanceClass("unbalanced", None)
