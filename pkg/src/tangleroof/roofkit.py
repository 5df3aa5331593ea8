"""Convex roof of sqrt(tau_3) on rank-2 three-qubit density matrices.

The range of a rank-2 density matrix is parametrized as a Bloch sphere of
pure states

    Psi(p, phi) = sqrt(p) psihat1 - sqrt(1-p) e^{i phi} psihat2

with the density matrix sitting on the eigenvector axis at height 2 P1 - 1.
Because the hyperdeterminant is a quartic polynomial in the superposition
ratio z (Psi proportional to psihat1 + z psihat2), every curve sample, zero
of tau_3 and oracle evaluation reduces to one precomputed set of five
polynomial coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .errors import DegenerateChord
from .invariants import hyperdet3
from .statekit import PureState, RankTwoRange

DEFAULT_PHI_GRID = 721
DEFAULT_P_GRID = 501
# multiple roots of a quartic split by roughly eps**(1/multiplicity) under
# floating-point solving (~6e-6 for a triple root), so the cluster radius
# must sit above that scale
ROOT_CLUSTER_RADIUS = 1e-4
EXACTNESS_TOL = 1e-6
CURVE_MATCH_TOL = 1e-4


@dataclass
class SphereParam:
    p: float
    phi: float


@dataclass
class CharacteristicCurve:
    phi: float  # nan for the convexified envelope
    ps: np.ndarray
    values: np.ndarray

    @property
    def samples(self):
        return list(zip(self.ps.tolist(), self.values.tolist()))

    def value_at(self, p: float) -> float:
        return float(np.interp(p, self.ps, self.values))


@dataclass
class ZeroPolytope:
    roots: list  # list of (p, phi) surface points
    multiplicities: list
    all_zero: bool = False

    @property
    def total_multiplicity(self) -> int:
        return sum(self.multiplicities)


@dataclass
class ChordSplit:
    p1: float
    p2: float
    l1: float
    l2: float
    q1: float
    q2: float


@dataclass
class RoofResult:
    value: float
    decomposition: list  # list of (weight, PureState)
    exact: bool
    lower_bound: float
    upper_bound: float
    zero_polytope: ZeroPolytope | None = field(default=None, repr=False)


def quartic_coefficients(v1: np.ndarray, v2: np.ndarray) -> np.ndarray:
    """Coefficients h_k of H(v1 + z v2) = sum_k h_k z^k, k = 0..4.

    Recovered exactly by an inverse DFT over the fifth roots of unity.
    """
    w = np.exp(2j * np.pi * np.arange(5) / 5)
    vals = np.array([hyperdet3(v1 + z * v2) for z in w])
    jk = np.outer(np.arange(5), np.arange(5))
    return np.exp(-2j * np.pi * jk / 5) @ vals / 5


def _range_coefficients(rng: RankTwoRange, normalized: bool = True) -> np.ndarray:
    v1, v2 = rng.eigenvectors() if normalized else (
        rng.psi1.amplitudes, rng.psi2.amplitudes
    )
    return quartic_coefficients(v1, v2)


def _eval_sqrt_tau3(h: np.ndarray, a, b):
    """2 sqrt|H(a psihat1 + b psihat2)| from the quartic coefficients."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    acc = np.zeros(np.broadcast(a, b).shape, dtype=complex)
    for k in range(5):
        acc += h[k] * a ** (4 - k) * b**k
    return 2.0 * np.sqrt(np.abs(acc))


def sqrt_tau3_at(rng: RankTwoRange, p, phi, _h=None) -> np.ndarray:
    """sqrt(tau_3) of the member state Psi(p, phi)."""
    h = _range_coefficients(rng) if _h is None else _h
    p = np.asarray(p, dtype=float)
    a = np.sqrt(p)
    b = -np.sqrt(1.0 - p) * np.exp(1j * np.asarray(phi))
    return _eval_sqrt_tau3(h, a, b)


def member_state(rng: RankTwoRange, param: SphereParam) -> PureState:
    v1, v2 = rng.eigenvectors()
    a = np.sqrt(param.p)
    b = -np.sqrt(1.0 - param.p) * np.exp(1j * param.phi)
    return PureState(rng.n_qubits, a * v1 + b * v2)


def characteristic_curve(
    rng: RankTwoRange, phi: float, grid_size: int = DEFAULT_P_GRID
) -> CharacteristicCurve:
    """Sample sqrt(tau_3)(Psi(p, phi)) on a uniform p-grid with endpoints."""
    ps = np.linspace(0.0, 1.0, grid_size)
    return CharacteristicCurve(float(phi), ps, sqrt_tau3_at(rng, ps, phi))


def _lower_convex_envelope(ps: np.ndarray, vals: np.ndarray) -> np.ndarray:
    """Lower convex hull of the sampled points, resampled on the same grid."""
    hull = []
    for x, y in zip(ps, vals):
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (y - y1) - (y2 - y1) * (x - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append((x, y))
    hx = np.array([h[0] for h in hull])
    hy = np.array([h[1] for h in hull])
    return np.interp(ps, hx, hy)


def minimal_convex_curve(
    rng: RankTwoRange,
    phi_grid: int = DEFAULT_PHI_GRID,
    p_grid: int = DEFAULT_P_GRID,
) -> CharacteristicCurve:
    """Pointwise phi-minimum of the characteristic curves, then convexified."""
    h = _range_coefficients(rng)
    ps = np.linspace(0.0, 1.0, p_grid)
    phis = np.linspace(0.0, 2 * np.pi, phi_grid)
    a = np.sqrt(ps)[None, :]
    b = -np.sqrt(1.0 - ps)[None, :] * np.exp(1j * phis)[:, None]
    vals = _eval_sqrt_tau3(h, a, b)
    pointwise = vals.min(axis=0)
    return CharacteristicCurve(float("nan"), ps, _lower_convex_envelope(ps, pointwise))


def zero_polytope(rng: RankTwoRange) -> ZeroPolytope:
    """Roots of tau_3 on the decomposition sphere, with multiplicities.

    The member state is proportional to psihat1 + z psihat2, so tau_3 = 0 is
    a quartic in z; z = infinity (trimmed leading coefficients) is the p = 0
    pole of the sphere.
    """
    h = _range_coefficients(rng)
    scale = np.abs(h).max()
    if scale < 1e-14:
        return ZeroPolytope([], [], all_zero=True)
    coeffs = h[::-1].copy()  # numpy order: leading first
    trimmed = 0
    while len(coeffs) > 1 and abs(coeffs[0]) < 1e-12 * scale:
        coeffs = coeffs[1:]
        trimmed += 1
    roots = np.roots(coeffs) if len(coeffs) > 1 else np.array([])
    clusters = []  # [center, count]
    for z in sorted(roots, key=lambda z: (z.real, z.imag)):
        for c in clusters:
            if abs(z - c[0]) <= ROOT_CLUSTER_RADIUS * max(1.0, abs(c[0])):
                c[0] = (c[0] * c[1] + z) / (c[1] + 1)
                c[1] += 1
                break
        else:
            clusters.append([z, 1])
    points, mults = [], []
    for z, m in clusters:
        p = 1.0 / (1.0 + abs(z) ** 2)
        phi = float(np.mod(np.angle(z) + np.pi, 2 * np.pi))
        points.append((float(p), phi))
        mults.append(int(m))
    if trimmed:
        points.append((0.0, 0.0))
        mults.append(trimmed)
    order = np.argsort([-m for m in mults], kind="stable")
    return ZeroPolytope(
        [points[i] for i in order], [mults[i] for i in order]
    )


def bloch_split(p: float, p1: float) -> ChordSplit:
    """Chord through the axis point at height 2p-1 hitting the surface at p1.

    Returns the second surface intersection p2 and the convex weights; the
    chord-power identity l1*l2 = 4p(1-p) replaces the printed l2 formula,
    which fails the axis-chord case (see README notes).
    """
    if not (0.0 <= p <= 1.0 and 0.0 <= p1 <= 1.0):
        raise ValueError("p and p1 must lie in [0, 1]")
    if p in (0.0, 1.0):
        raise DegenerateChord("density matrix is pure; no interior chord exists")
    x, x1 = 2 * p - 1, 2 * p1 - 1
    l1 = float(np.sqrt(max(0.0, 1 + x * x - 2 * x * x1)))
    p2 = p * p * (1 - p1) / (p * (p - p1) + p1 * (1 - p))
    l2 = 4 * p * (1 - p) / l1
    q1 = l2 / (l1 + l2)
    q2 = l1 / (l1 + l2)
    return ChordSplit(float(p1), float(p2), l1, l2, float(q1), float(q2))


def _chord_candidate(rng, h, p_rho, p_r, phi_r, zero_member=False):
    """Two-point decomposition of rho through the surface point (p_r, phi_r).

    ``zero_member`` marks (p_r, phi_r) as a zero-polytope root: its tangle is
    0 by construction, and evaluating it numerically would only return the
    square root of the root-finding residual (~1e-8).
    """
    split = bloch_split(p_rho, p_r)
    phi2 = float(np.mod(phi_r + np.pi, 2 * np.pi))
    v1 = 0.0 if zero_member else float(sqrt_tau3_at(rng, p_r, phi_r, _h=h))
    v2 = float(sqrt_tau3_at(rng, split.p2, phi2, _h=h))
    value = split.q1 * v1 + split.q2 * v2
    decomposition = [
        (split.q1, member_state(rng, SphereParam(p_r, phi_r))),
        (split.q2, member_state(rng, SphereParam(split.p2, phi2))),
    ]
    return value, decomposition, split, v2, phi2


def convex_roof_rank2(
    rng: RankTwoRange,
    phi_grid: int = DEFAULT_PHI_GRID,
    p_grid: int = DEFAULT_P_GRID,
) -> RoofResult:
    """Convex roof of sqrt(tau_3) at the rank-2 density matrix of ``rng``.

    The convexified minimal characteristic curve gives the lower bound.  Each
    zero of tau_3 on the sphere defines a chord decomposition of rho with one
    tangle-free member; a chord is certified exact when the zero is
    concave-or-linear (interior multiplicity <= 2, or a pole of the sphere)
    and its second endpoint lies on the convexified minimal curve.  Without a
    certified chord the result is the bracket [envelope, best scanned chord].
    """
    p_rho = rng.P1
    h = _range_coefficients(rng)
    if rng.P2 < 1e-14:
        v1, _ = rng.eigenvectors()
        value = float(2 * np.sqrt(abs(hyperdet3(v1))))
        state = PureState(rng.n_qubits, v1)
        return RoofResult(value, [(1.0, state)], True, value, value, None)

    zp = zero_polytope(rng)
    if zp.all_zero:
        v1, v2 = rng.eigenvectors()
        decomposition = [
            (rng.P1, PureState(rng.n_qubits, v1)),
            (rng.P2, PureState(rng.n_qubits, v2)),
        ]
        return RoofResult(0.0, decomposition, True, 0.0, 0.0, zp)

    envelope = minimal_convex_curve(rng, phi_grid, p_grid)
    lower = envelope.value_at(p_rho)

    certified = []
    fallback = []
    for (p_r, phi_r), mult in zip(zp.roots, zp.multiplicities):
        value, decomposition, split, v2, _ = _chord_candidate(
            rng, h, p_rho, p_r, phi_r, zero_member=True
        )
        is_pole = p_r < 1e-12 or p_r > 1 - 1e-12
        concave_or_linear = is_pole or mult <= 2
        # the true envelope lower-bounds every curve, so v2 below the
        # piecewise-linear interpolant just means interpolation error;
        # only a v2 clearly above it disqualifies the chord endpoint
        on_envelope = v2 - envelope.value_at(split.p2) < CURVE_MATCH_TOL
        if concave_or_linear and on_envelope:
            certified.append((value, decomposition))
        fallback.append((value, decomposition))

    if certified:
        value, decomposition = min(certified, key=lambda c: c[0])
        return RoofResult(float(value), decomposition, True, float(value),
                          float(value), zp)

    # no certified chord: bracket the roof between the envelope and the best
    # two-point decomposition found by scanning chords across the sphere
    best = min(fallback, key=lambda c: c[0]) if fallback else None
    for phi_r in np.linspace(0.0, 2 * np.pi, 73)[:-1]:
        for p_r in np.linspace(0.0, 1.0, 101):
            value, decomposition, _, _, _ = _chord_candidate(
                rng, h, p_rho, float(p_r), float(phi_r)
            )
            if best is None or value < best[0]:
                best = (value, decomposition)
    upper, decomposition = best
    exact = abs(upper - lower) < EXACTNESS_TOL
    return RoofResult(float(upper), decomposition, exact, float(lower),
                      float(upper), zp)


def brute_force_roof(
    rng: RankTwoRange,
    max_parts: int = 4,
    restarts: int = 400,
    seed: int = 0,
) -> float:
    """Direct minimization over decompositions; independent upper-bound oracle.

    Decompositions rho = sum_i |chi_i><chi_i| are generated by applying
    isometric m x 2 mixing matrices (QR of random complex matrices) to the
    subnormalized eigenvectors; sqrt(tau_3) is degree-2 homogeneous, so the
    weighted average is just the sum over subnormalized members.  Random
    restarts feed a Nelder-Mead polish of the best starts.
    """
    if max_parts < 2:
        raise ValueError("max_parts must be at least 2")
    h = _range_coefficients(rng, normalized=False)
    gen = np.random.default_rng(seed)
    best = np.inf
    # split the restart budget across the part counts; the low-dimensional
    # searches converge far more reliably and the optimum often needs only
    # two decomposition members
    part_counts = list(range(2, max_parts + 1))
    budget = max(1, restarts // len(part_counts))
    for m in part_counts:

        def objective(x, m=m):
            mat = x[: 2 * m].reshape(m, 2) + 1j * x[2 * m :].reshape(m, 2)
            q, _ = np.linalg.qr(mat)
            return float(np.sum(_eval_sqrt_tau3(h, q[:, 0], q[:, 1])))

        starts = gen.standard_normal((budget, 4 * m))
        scored = sorted(range(budget), key=lambda i: objective(starts[i]))
        best = min(best, objective(starts[scored[0]]))
        for i in scored[: min(6, budget)]:
            res = minimize(
                objective,
                starts[i],
                method="Nelder-Mead",
                options={"maxiter": 3000, "xatol": 1e-10, "fatol": 1e-12},
            )
            # one re-polish from the converged point escapes collapsed simplices
            res = minimize(
                objective,
                res.x,
                method="Nelder-Mead",
                options={"maxiter": 3000, "xatol": 1e-12, "fatol": 1e-14},
            )
            best = min(best, float(res.fun))
    return best
