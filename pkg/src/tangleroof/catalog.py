"""Named four- and three-qubit states with parametrized constructors.

Every derived four-qubit state is produced from its parent by a partial spin
flip of the documented components, so the catalog doubles as a regression
fixture for the flip operation.  ``expected_quantities`` collects the closed
forms the test-suite and the ``verify`` command check against; all values use
the tau_3(GHZ) = 1 and concurrence(Bell) = 1 normalizations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ParamError, UnknownState
from .nullcone import partial_spin_flip
from .statekit import PureState

# written term order (bitstrings) and flip components per derived state
_PSI46_TERMS = ["1111", "1000", "0100", "0010", "0001"]
_PSI44_TERMS = ["1111", "1100", "0010", "0001"]

_FLIPS = {
    "Psi4_6_1": ("Psi4_6", {1}),
    "Psi4_6_2": ("Psi4_6", {2}),
    "Psi4_6_23": ("Psi4_6", {2, 3}),
    "Psi4_4_1": ("Psi4_4", {1}),
    "Psi4_4_2": ("Psi4_4", {2}),
    "Psi4_4_4": ("Psi4_4", {4}),
}

# canonical defaults: the six-term family at the weight vector whose rank-2
# reduction has its density matrix exactly above the simple zero of tau_3
# (q with 1 - q = (3 + sqrt(3))/6, giving p = (1/3, 1/6, 1/6, 1/6, 1/6));
# the four-term family at equal weights
_CANONICAL_Q = 1.0 - (3.0 + np.sqrt(3.0)) / 6.0
_PSI46_DEFAULT_P = [1.0 / 3] + [1.0 / 6] * 4
_PSI44_DEFAULT_P = [0.25] * 4

NAMES = [
    "Psi4_6",
    "Psi4_4",
    "W3",
    "W4",
    "GHZ3",
    "Psi4_6_1",
    "Psi4_6_2",
    "Psi4_6_23",
    "Psi4_4_1",
    "Psi4_4_2",
    "Psi4_4_4",
]


@dataclass
class CatalogEntry:
    name: str
    params: dict = field(default_factory=dict)
    state: PureState = None
    expected: dict = field(default_factory=dict)


def _state_from_terms(terms, coeffs) -> PureState:
    n = len(terms[0])
    amps = np.zeros(2**n, dtype=complex)
    for bits, c in zip(terms, coeffs):
        amps[int(bits, 2)] = c
    return PureState(n, amps, term_order=[int(b, 2) for b in terms])


def _check_probs(p, count):
    p = [float(v) for v in p]
    if len(p) != count:
        raise ParamError(f"expected {count} probabilities, got {len(p)}")
    if any(v < 0 for v in p):
        raise ParamError("probabilities must be nonnegative")
    if abs(sum(p) - 1.0) > 1e-12:
        raise ParamError(f"probabilities sum to {sum(p)}, expected 1")
    return p


def build(name: str, params: dict | None = None) -> CatalogEntry:
    """Construct a catalog state, optionally overriding weights/phases.

    ``params`` may carry ``p`` (probability list for the parent family) and
    ``eta`` (relative phase on the spin-flipped coefficient, default 0).
    """
    if name not in NAMES:
        raise UnknownState(f"unknown state {name!r}; known: {', '.join(NAMES)}")
    params = dict(params or {})
    eta = float(params.get("eta", 0.0))

    if name in ("W3", "W4", "GHZ3"):
        if name == "GHZ3":
            state = _state_from_terms(["000", "111"], [1 / np.sqrt(2)] * 2)
        else:
            n = 3 if name == "W3" else 4
            terms = [format(1 << k, f"0{n}b") for k in reversed(range(n))]
            state = _state_from_terms(terms, [1 / np.sqrt(n)] * n)
        entry = CatalogEntry(name, {}, state)
        entry.expected = expected_quantities(entry)
        return entry

    family = "Psi4_6" if name.startswith("Psi4_6") else "Psi4_4"
    terms = _PSI46_TERMS if family == "Psi4_6" else _PSI44_TERMS
    default_p = _PSI46_DEFAULT_P if family == "Psi4_6" else _PSI44_DEFAULT_P
    p = _check_probs(params.get("p", default_p), len(terms))
    coeffs = [np.sqrt(v) for v in p]

    entry_params = {"p": p, "eta": eta}
    state = _state_from_terms(terms, coeffs)
    if name in _FLIPS:
        _, components = _FLIPS[name]
        state = partial_spin_flip(state, components)
        if eta != 0.0:
            # the phase rides on the first flipped coefficient
            amps = state.amplitudes.copy()
            first = sorted(components)[0]
            idx = state.term_order[first - 1]
            amps[idx] *= np.exp(1j * eta)
            state = PureState(state.n_qubits, amps, term_order=state.term_order)
    entry = CatalogEntry(name, entry_params, state)
    entry.expected = expected_quantities(entry)
    return entry


def expected_quantities(entry: CatalogEntry) -> dict:
    """Closed-form predictions for the entry at its parameters.

    Concurrences and roofs follow the conventions concurrence(Bell) = 1 and
    tau_3(GHZ) = 1: the pairwise concurrence of the five-term family with
    components 2 and 3 flipped is C[rho_ij] = 2 sqrt(p_Ji p_Jj) with
    J = (3, 2, 5, 4), and every roof of sqrt(tau_3) over a rank-2 reduction
    listed here is of the form 2 sqrt(p_a p_b).
    """
    name = entry.name
    out = {
        "null_cone": name in _FLIPS or name in ("W3", "W4"),
        "balance": (
            "c_balanced"
            if name in ("Psi4_6", "Psi4_4")
            else "a_balanced_only"
            if name in _FLIPS
            else "unbalanced"
            if name in ("W3", "W4")
            else None
        ),
    }
    p = entry.params.get("p")
    if name == "Psi4_6_2" and p is not None:
        out["roof_sqrt_tau3"] = {2: 2 * np.sqrt(p[0] * p[2])}
        out["concurrence"] = {pair: 0.0 for pair in _pairs(4)}
        # tracing qubit 1: the exact roof curve evaluated at the reduction's
        # larger eigenvalue P1
        out["roof_curve_trace1"] = lambda P1: (2 / 3**0.75) * abs(2 * P1 - 1) ** 1.5
    if name == "Psi4_6_23" and p is not None:
        J = (3, 2, 5, 4)  # qubit -> weight index (1-based)
        out["concurrence"] = {
            (i, j): 2 * np.sqrt(p[J[i - 1] - 1] * p[J[j - 1] - 1])
            for (i, j) in _pairs(4)
        }
        out["roof_sqrt_tau3"] = {
            3: 2 * np.sqrt(p[0] * p[3]),
            4: 2 * np.sqrt(p[0] * p[4]),
        }
    if name == "Psi4_4_2" and p is not None:
        out["roof_sqrt_tau3"] = {4: 2 * np.sqrt(p[0] * p[3])}
    if name == "Psi4_4_4" and p is not None:
        out["concurrence"] = {
            pair: 0.0 for pair in _pairs(4)
        } | {
            (1, 2): 2 * np.sqrt(p[2] * p[3]),
            (3, 4): 2 * np.sqrt(p[0] * p[1]),
        }
        out["roof_sqrt_tau3"] = {3: 2 * np.sqrt(p[0] * p[2])}
    if name == "Psi4_4_1" and p is not None:
        # tracing qubit 1 or 2 leaves a tangle-free range; tracing 3 or 4
        # does not (the roof there is 2 sqrt(p2 p4) / 2 sqrt(p2 p3))
        out["tangle_free_traces"] = [1, 2]
    if name == "W4":
        out["roof_sqrt_tau3"] = {i: 0.0 for i in range(1, 5)}
        out["concurrence"] = {pair: 2.0 / 4 for pair in _pairs(4)}
        out["ckw_equality"] = True
    return out


def _pairs(n):
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
