"""Entanglement invariants: concurrence, threetangle, four-qubit SL generators.

Conventions: concurrence(Bell) = 1 and threetangle(GHZ) = 1.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import IncompleteInput, ShapeError
from .statekit import DensityMatrix, PureState

_SY = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_YY = np.kron(_SY, _SY)

NULL_CONE_TOL = 1e-10


def concurrence(rho: DensityMatrix) -> float:
    """Wootters concurrence of a 2-qubit density matrix.

    Computed from the singular values of the symmetric matrix
    tau_ij = x_i^T (sy x sy) x_j over subnormalized eigenvectors x_i of rho;
    this avoids the ill-conditioned non-Hermitian eigenproblem of
    rho rho-tilde near its zero eigenvalues.
    """
    if rho.n_qubits != 2:
        raise ShapeError("concurrence requires a 2-qubit density matrix")
    mu, u = np.linalg.eigh(rho.matrix)
    x = u * np.sqrt(np.clip(mu, 0.0, None))
    tau = x.T @ _YY @ x
    lam = np.sort(np.linalg.svd(tau, compute_uv=False))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def hyperdet3(amps: np.ndarray) -> complex:
    """Cayley hyperdeterminant of a 2x2x2 amplitude tensor (d1 - 2 d2 + 4 d3)."""
    a = np.asarray(amps, dtype=complex).reshape(2, 2, 2)
    d1 = (
        a[0, 0, 0] ** 2 * a[1, 1, 1] ** 2
        + a[0, 0, 1] ** 2 * a[1, 1, 0] ** 2
        + a[0, 1, 0] ** 2 * a[1, 0, 1] ** 2
        + a[1, 0, 0] ** 2 * a[0, 1, 1] ** 2
    )
    d2 = (
        a[0, 0, 0] * a[1, 1, 1] * a[0, 1, 1] * a[1, 0, 0]
        + a[0, 0, 0] * a[1, 1, 1] * a[1, 0, 1] * a[0, 1, 0]
        + a[0, 0, 0] * a[1, 1, 1] * a[1, 1, 0] * a[0, 0, 1]
        + a[0, 1, 1] * a[1, 0, 0] * a[1, 0, 1] * a[0, 1, 0]
        + a[0, 1, 1] * a[1, 0, 0] * a[1, 1, 0] * a[0, 0, 1]
        + a[1, 0, 1] * a[0, 1, 0] * a[1, 1, 0] * a[0, 0, 1]
    )
    d3 = (
        a[0, 0, 0] * a[1, 1, 0] * a[1, 0, 1] * a[0, 1, 1]
        + a[1, 1, 1] * a[0, 0, 1] * a[0, 1, 0] * a[1, 0, 0]
    )
    return d1 - 2 * d2 + 4 * d3


def threetangle(psi: PureState) -> float:
    """tau_3 of a 3-qubit pure state, normalized so tau_3(GHZ) = 1."""
    if psi.n_qubits != 3:
        raise ShapeError("threetangle requires a 3-qubit state")
    return float(4 * abs(hyperdet3(psi.amplitudes)))


def sqrt_threetangle(amps: np.ndarray) -> float:
    """2 sqrt|H| for a raw (possibly subnormalized) 8-amplitude vector."""
    return float(2 * np.sqrt(abs(hyperdet3(amps))))


def _sl_generator_values(amps: np.ndarray):
    a = np.asarray(amps, dtype=complex)
    A = a.reshape(2, 2, 2, 2)
    # degree 2: sigma_y^x4 bilinear
    signs = np.array([(-1) ** bin(i).count("1") for i in range(16)])
    h = complex(0.5 * np.sum(signs * a * a[::-1]))
    # degree 4: determinants of the two bipartite flattenings not generated by h
    det_l = complex(np.linalg.det(a.reshape(4, 4)))
    det_m = complex(np.linalg.det(A.transpose(0, 2, 1, 3).reshape(4, 4)))
    # degree 6: determinant of the biquadratic form obtained by taking the
    # 2x2 determinant over the middle pair of tensor slots
    C = np.zeros((3, 3), dtype=complex)
    for i in range(2):
        for i2 in range(2):
            for l in range(2):
                for l2 in range(2):
                    v = (
                        A[i, 0, 0, l] * A[i2, 1, 1, l2]
                        - A[i, 0, 1, l] * A[i2, 1, 0, l2]
                    )
                    C[i + i2, l + l2] += v
    C[1, :] /= 2
    C[:, 1] /= 2
    d6 = complex(np.linalg.det(C))
    return h, det_l, det_m, d6


def sl_invariants_4q(psi: PureState):
    """Generator values (degrees 2, 4, 4, 6) of the four-qubit SL-invariant ring."""
    if psi.n_qubits != 4:
        raise ShapeError("sl_invariants_4q requires a 4-qubit state")
    return _sl_generator_values(psi.amplitudes)


def in_null_cone(psi: PureState, tol: float = NULL_CONE_TOL) -> bool:
    """True when all generator magnitudes vanish on the normalized state."""
    gens = sl_invariants_4q(psi.normalize())
    return all(abs(g) < tol for g in gens)


def reduced_single_qubit(psi: PureState, site: int) -> np.ndarray:
    n = psi.n_qubits
    t = np.moveaxis(psi.amplitudes.reshape([2] * n), site - 1, 0).reshape(2, -1)
    return t @ t.conj().T


def one_tangle(psi: PureState, site: int) -> float:
    """4 det of the single-qubit reduction."""
    r = reduced_single_qubit(psi, site)
    return float(max(0.0, 4 * np.linalg.det(r).real))


def pair_density_matrix(psi: PureState, i: int, j: int) -> DensityMatrix:
    n = psi.n_qubits
    keep = [i - 1, j - 1]
    rest = [k for k in range(n) if k not in keep]
    t = np.transpose(psi.amplitudes.reshape([2] * n), keep + rest).reshape(4, -1)
    return DensityMatrix(2, t @ t.conj().T)


@dataclass
class MonogamyRow:
    one_tangle: float
    concurrence_sq_sum: float
    roof_sq_sum: float
    holds: bool


@dataclass
class MonogamyReport:
    rows: dict = field(default_factory=dict)

    @property
    def all_hold(self) -> bool:
        return all(r.holds for r in self.rows.values())

    def to_json(self) -> str:
        return json.dumps(
            {
                "one_tangles": {str(i): r.one_tangle for i, r in self.rows.items()},
                "concurrence_sq": {
                    str(i): r.concurrence_sq_sum for i, r in self.rows.items()
                },
                "threetangle_roof_sq": {
                    str(i): r.roof_sq_sum for i, r in self.rows.items()
                },
                "inequality_holds": {str(i): r.holds for i, r in self.rows.items()},
            }
        )


def monogamy_report(
    psi: PureState, roof_values: dict, slack: float = 1e-9
) -> MonogamyReport:
    """Extended monogamy check for a 4-qubit pure state.

    ``roof_values`` maps each sorted 3-site triple to the convex roof of
    sqrt(tau_3) on that reduction.  For each focus qubit the report compares
    the one-tangle against the sum of squared pairwise concurrences plus the
    sum of squared roof values over triples containing the qubit.
    """
    if psi.n_qubits != 4:
        raise ShapeError("monogamy_report requires a 4-qubit state")
    triples = [t for t in itertools.combinations(range(1, 5), 3)]
    for t in triples:
        if tuple(sorted(t)) not in roof_values:
            raise IncompleteInput(f"missing roof value for triple {t}")
    report = MonogamyReport()
    for i in range(1, 5):
        t1 = one_tangle(psi, i)
        csq = sum(
            concurrence(pair_density_matrix(psi, *sorted((i, j)))) ** 2
            for j in range(1, 5)
            if j != i
        )
        rsq = sum(
            roof_values[t] ** 2 for t in triples if i in t
        )
        report.rows[i] = MonogamyRow(t1, csq, rsq, t1 >= csq + rsq - slack)
    return report
