"""Core state containers, partial trace and rank-2 eigendecomposition.

Qubit 1 is the leftmost bit of a basis bitstring, so basis index
``int(bits, 2)`` has qubit 1 as its most significant bit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DuplicateTerm, ParseError, RankError, ShapeError

HERMITICITY_TOL = 1e-12
RANK_TOL = 1e-10
STRUCTURE_TOL = 1e-8


def _fix_global_phase(vec):
    """Rotate so the largest-magnitude amplitude is real positive.

    Ties are broken by the lowest basis index.
    """
    v = np.asarray(vec, dtype=complex)
    mags = np.abs(v)
    i = int(np.argmax(mags > mags.max() - 1e-15))
    if mags[i] > 0:
        v = v * np.exp(-1j * np.angle(v[i]))
        # kill the residual imaginary dust on the anchor amplitude
        v[i] = v[i].real
    return v


@dataclass(eq=False)
class PureState:
    n_qubits: int
    amplitudes: np.ndarray
    # written term order (basis indices); defaults to ascending nonzero support
    term_order: list | None = field(default=None, compare=False)

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.n_qubits < 1:
            raise ShapeError("n_qubits must be positive")
        if self.amplitudes.shape != (2**self.n_qubits,):
            raise ShapeError(
                f"amplitude vector has length {self.amplitudes.size}, "
                f"expected {2**self.n_qubits}"
            )

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    @property
    def is_normalized(self) -> bool:
        return abs(self.norm**2 - 1.0) < 1e-12

    def normalize(self) -> "PureState":
        n = self.norm
        if n == 0:
            raise ShapeError("cannot normalize the zero vector")
        return PureState(self.n_qubits, self.amplitudes / n, self.term_order)

    def fix_phase(self) -> "PureState":
        return PureState(
            self.n_qubits, _fix_global_phase(self.amplitudes), self.term_order
        )

    def density_matrix(self) -> "DensityMatrix":
        a = self.amplitudes
        return DensityMatrix(self.n_qubits, np.outer(a, a.conj()))

    def to_json(self) -> str:
        terms = []
        support = self.term_order
        if support is None:
            support = np.flatnonzero(np.abs(self.amplitudes) > 1e-14)
        for idx in support:
            amp = self.amplitudes[idx]
            terms.append(
                {
                    "bits": format(int(idx), f"0{self.n_qubits}b"),
                    "re": float(amp.real),
                    "im": float(amp.imag),
                }
            )
        return json.dumps({"n": self.n_qubits, "terms": terms})


@dataclass(eq=False)
class DensityMatrix:
    n_qubits: int
    matrix: np.ndarray

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex)
        d = 2**self.n_qubits
        if self.matrix.shape != (d, d):
            raise ShapeError(
                f"matrix has shape {self.matrix.shape}, expected {(d, d)}"
            )

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def validate(self, tol: float = HERMITICITY_TOL):
        if np.abs(self.matrix - self.matrix.conj().T).max() > tol:
            raise ShapeError("matrix is not Hermitian")
        ev = np.linalg.eigvalsh(self.matrix)
        if ev.min() < -tol:
            raise ShapeError(f"matrix is not positive semidefinite ({ev.min()})")
        return self

    def to_json(self) -> str:
        rows = [
            [{"re": float(z.real), "im": float(z.imag)} for z in row]
            for row in self.matrix
        ]
        return json.dumps({"n": self.n_qubits, "rows": rows})


@dataclass(eq=False)
class RankTwoRange:
    """Subnormalized orthogonal eigenvectors spanning a rank-2 range.

    ``psi1``/``psi2`` carry the eigenvalue weights: ||psi1||^2 = P1 >= P2.
    ``alpha``/``chi`` are the mixing angle and phase of the two-term-plus-W
    family when the input matches that structure, else None.
    """

    psi1: PureState
    psi2: PureState
    P1: float
    P2: float
    alpha: float | None = None
    chi: float | None = None

    @property
    def n_qubits(self) -> int:
        return self.psi1.n_qubits

    def eigenvectors(self):
        """Normalized eigenvectors (phase-fixed); psi2 may be zero for rank 1."""
        v1 = self.psi1.amplitudes / np.sqrt(self.P1)
        if self.P2 > 1e-14:
            v2 = self.psi2.amplitudes / np.sqrt(self.P2)
        else:
            v2 = self.psi2.amplitudes
        return v1, v2

    def density_matrix(self) -> DensityMatrix:
        a1, a2 = self.psi1.amplitudes, self.psi2.amplitudes
        return DensityMatrix(
            self.n_qubits, np.outer(a1, a1.conj()) + np.outer(a2, a2.conj())
        )

    @classmethod
    def from_eigensystem(cls, v1, v2, p: float, alpha=None, chi=None):
        """Build a range from orthonormal eigenvectors and a mixing weight p."""
        v1 = _fix_global_phase(v1)
        v2 = _fix_global_phase(v2)
        n = int(np.log2(len(v1)))
        if p < 0.5:
            v1, v2, p = v2, v1, 1.0 - p
        return cls(
            PureState(n, np.sqrt(p) * v1),
            PureState(n, np.sqrt(1.0 - p) * v2),
            float(p),
            float(1.0 - p),
            alpha,
            chi,
        )


@dataclass
class DerivedFamilyParams:
    """(p_rem, q) parametrization of the two-term weights.

    The mixing weights are p1 = 4 p_rem q (1-q) and p2 = p_rem (2q-1)^2,
    with sin(beta) = 2q - 1.
    """

    p_rem: float
    q: float
    eta: float = 0.0

    @property
    def beta(self) -> float:
        return float(np.arcsin(2 * self.q - 1))

    @property
    def p1(self) -> float:
        return 4 * self.p_rem * self.q * (1 - self.q)

    @property
    def p2(self) -> float:
        return self.p_rem * (2 * self.q - 1) ** 2


def load_state(document: str | dict) -> PureState:
    """Parse the state JSON schema into a PureState.

    Unnormalized input is accepted; check ``is_normalized`` on the result.
    """
    if isinstance(document, str):
        try:
            doc = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
    else:
        doc = document
    try:
        n = int(doc["n"])
        terms = doc["terms"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"missing or malformed field: {exc}") from exc
    if n < 1:
        raise ShapeError("n must be positive")
    amps = np.zeros(2**n, dtype=complex)
    seen = set()
    for term in terms:
        bits = term.get("bits")
        if not isinstance(bits, str) or set(bits) - {"0", "1"}:
            raise ParseError(f"bad bitstring {bits!r}")
        if len(bits) != n:
            raise ShapeError(f"bitstring {bits!r} has length {len(bits)}, expected {n}")
        if bits in seen:
            raise DuplicateTerm(f"duplicate term for bitstring {bits!r}")
        seen.add(bits)
        try:
            re = float(term.get("re", 0.0))
            im = float(term.get("im", 0.0))
        except (TypeError, ValueError) as exc:
            raise ParseError(f"non-numeric amplitude in term {bits!r}") from exc
        amps[int(bits, 2)] = complex(re, im)
    order = [int(t["bits"], 2) for t in terms]
    return PureState(n, amps, term_order=order)


def load_density_matrix(document: str | dict) -> DensityMatrix:
    if isinstance(document, str):
        try:
            doc = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
    else:
        doc = document
    try:
        n = int(doc["n"])
        rows = doc["rows"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"missing or malformed field: {exc}") from exc
    d = 2**n
    if len(rows) != d or any(len(r) != d for r in rows):
        raise ShapeError(f"rows must form a {d}x{d} matrix")
    m = np.array(
        [[complex(e.get("re", 0.0), e.get("im", 0.0)) for e in row] for row in rows]
    )
    return DensityMatrix(n, m)


def partial_trace(state_or_dm, site: int) -> DensityMatrix:
    """Trace out one qubit (1-based, counted from the left)."""
    if isinstance(state_or_dm, PureState):
        n = state_or_dm.n_qubits
        if not 1 <= site <= n:
            raise IndexError(f"site {site} out of range for {n} qubits")
        t = np.moveaxis(state_or_dm.amplitudes.reshape([2] * n), site - 1, 0)
        rest = t.reshape(2, -1)
        # rho_ab = sum_i psi[i,a] conj(psi[i,b]) over the traced index i
        m = rest.T @ rest.conj()
        return DensityMatrix(n - 1, m)
    if isinstance(state_or_dm, DensityMatrix):
        n = state_or_dm.n_qubits
        if not 1 <= site <= n:
            raise IndexError(f"site {site} out of range for {n} qubits")
        t = state_or_dm.matrix.reshape([2] * (2 * n))
        m = np.trace(t, axis1=site - 1, axis2=n + site - 1)
        return DensityMatrix(n - 1, m.reshape(2 ** (n - 1), 2 ** (n - 1)))
    raise ShapeError(f"unsupported input type {type(state_or_dm)!r}")


def _extract_mixing_angle(rho: np.ndarray, tol: float = STRUCTURE_TOL):
    """Best-effort (alpha, chi) for the two-term-plus-W structure on 3 qubits.

    Matches rho = p1 |111><111| + |u><u| with
    u = sqrt(p2) e^{i eta} |111> + c3|100> + c4|010> + c5|001|.
    The branch sin(beta) <= 0 is chosen, so alpha = arctan(p_rem sin 2beta)/2
    comes out non-positive for real-positive coefficients.
    """
    if rho.shape != (8, 8):
        return None
    full = 7
    wsup = (4, 2, 1)
    support = set(int(i) for i in np.flatnonzero(np.diag(rho).real > tol))
    if not support <= {full, *wsup} or full not in support:
        return None
    # all off-diagonal weight outside the allowed blocks must vanish
    mask = np.zeros_like(rho, dtype=bool)
    for i in (full, *wsup):
        for j in (full, *wsup):
            mask[i, j] = True
    if np.abs(rho[~mask]).max() > tol:
        return None
    pw = np.array([rho[j, j].real for j in wsup])
    if pw.sum() < tol:
        return None
    p_rem = rho[full, full].real
    # W block must be rank 1: rho[j,k] = c_j conj(c_k)
    j0 = wsup[int(np.argmax(pw))]
    c = {}
    for j in wsup:
        c[j] = rho[j, j0] / np.sqrt(rho[j0, j0].real)
    for j in wsup:
        for k in wsup:
            if abs(rho[j, k] - c[j] * np.conj(c[k])) > tol:
                return None
    # cross block: rho[full, j] = sqrt(p2) e^{i eta} conj(c_j)
    ratios = [rho[full, j] / np.conj(c[j]) for j in wsup if abs(c[j]) > tol]
    if not ratios:
        return None
    r = np.mean(ratios)
    if max(abs(x - r) for x in ratios) > tol:
        return None
    p2 = abs(r) ** 2
    if p2 > p_rem + tol:
        return None
    eta = float(np.angle(r))
    sin_beta = -np.sqrt(min(1.0, p2 / p_rem))
    beta = float(np.arcsin(sin_beta))
    alpha = float(np.arctan(p_rem * np.sin(2 * beta)) / 2)
    return alpha, eta


def rank2_range(rho: DensityMatrix, rank_tol: float = RANK_TOL) -> RankTwoRange:
    """Diagonalize a rank-<=2 density matrix into a RankTwoRange.

    Raises RankError when the third eigenvalue exceeds ``rank_tol``.
    """
    w, v = np.linalg.eigh(rho.matrix)
    order = np.argsort(w)[::-1]
    w, v = w[order], v[:, order]
    if len(w) > 2 and w[2] > rank_tol:
        raise RankError(f"third eigenvalue {w[2]:.3e} exceeds rank tolerance")
    P1, P2 = float(max(w[0], 0.0)), float(max(w[1], 0.0)) if len(w) > 1 else 0.0
    v1 = _fix_global_phase(v[:, 0])
    v2 = _fix_global_phase(v[:, 1]) if len(w) > 1 else np.zeros_like(v1)
    if abs(P1 - P2) < 1e-12:
        # deterministic order for degenerate eigenvalues
        key1 = tuple(np.round(v1, 12).view(float))
        key2 = tuple(np.round(v2, 12).view(float))
        if key2 > key1:
            v1, v2 = v2, v1
    ac = _extract_mixing_angle(rho.matrix)
    alpha, chi = ac if ac is not None else (None, None)
    return RankTwoRange(
        PureState(rho.n_qubits, np.sqrt(P1) * v1),
        PureState(rho.n_qubits, np.sqrt(P2) * v2),
        P1,
        P2,
        alpha,
        chi,
    )
