"""Tests for state containers, JSON I/O, partial trace and rank-2 ranges."""

import json

import numpy as np
import pytest

from tangleroof import statekit
from tangleroof.errors import (
    DuplicateTerm,
    ParseError,
    RankError,
    ShapeError,
)


def random_state(rng, n):
    v = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
    return statekit.PureState(n, v / np.linalg.norm(v))


def test_load_state_roundtrip():
    doc = {
        "n": 2,
        "terms": [
            {"bits": "01", "re": 0.6},
            {"bits": "10", "re": 0.0, "im": 0.8},
        ],
    }
    psi = statekit.load_state(json.dumps(doc))
    assert psi.n_qubits == 2
    assert psi.amplitudes[1] == 0.6
    assert psi.amplitudes[2] == 0.8j
    assert psi.is_normalized
    again = statekit.load_state(psi.to_json())
    assert np.allclose(again.amplitudes, psi.amplitudes)
    assert again.term_order == [1, 2]


def test_load_state_errors():
    with pytest.raises(ParseError):
        statekit.load_state("{not json")
    with pytest.raises(ParseError):
        statekit.load_state({"n": 2, "terms": [{"bits": "02", "re": 1}]})
    with pytest.raises(ParseError):
        statekit.load_state({"n": 1, "terms": [{"bits": "0", "re": "x"}]})
    with pytest.raises(ShapeError):
        statekit.load_state({"n": 2, "terms": [{"bits": "011", "re": 1}]})
    with pytest.raises(DuplicateTerm):
        statekit.load_state(
            {"n": 1, "terms": [{"bits": "0", "re": 1}, {"bits": "0", "re": 1}]}
        )


def test_density_matrix_roundtrip_and_validate():
    rng = np.random.default_rng(7)
    psi = random_state(rng, 2)
    rho = psi.density_matrix()
    rho.validate()
    again = statekit.load_density_matrix(rho.to_json())
    assert np.allclose(again.matrix, rho.matrix)
    bad = statekit.DensityMatrix(1, np.array([[1.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ShapeError):
        bad.validate()


def test_fix_phase_anchor_real_positive():
    rng = np.random.default_rng(3)
    for _ in range(20):
        psi = random_state(rng, 3).fix_phase()
        i = np.argmax(np.abs(psi.amplitudes))
        assert psi.amplitudes[i].real > 0
        assert abs(psi.amplitudes[i].imag) < 1e-14


def test_partial_trace_pure_vs_density_matrix():
    rng = np.random.default_rng(11)
    for n in (3, 4):
        psi = random_state(rng, n)
        for site in range(1, n + 1):
            red_pure = statekit.partial_trace(psi, site)
            red_dm = statekit.partial_trace(psi.density_matrix(), site)
            assert red_pure.n_qubits == n - 1
            assert abs(red_pure.trace - 1.0) < 1e-12
            assert np.abs(red_pure.matrix - red_dm.matrix).max() < 1e-12


def test_partial_trace_product_state():
    # |0> x |+> traced over site 1 leaves |+><+|
    plus = np.array([1.0, 1.0]) / np.sqrt(2)
    amps = np.kron([1.0, 0.0], plus)
    psi = statekit.PureState(2, amps)
    red = statekit.partial_trace(psi, 1)
    assert np.allclose(red.matrix, np.outer(plus, plus))


def test_rank2_range_reconstruction():
    rng = np.random.default_rng(5)
    for _ in range(20):
        v = rng.standard_normal((8, 2)) + 1j * rng.standard_normal((8, 2))
        q, _ = np.linalg.qr(v)
        w = rng.uniform(0.2, 0.8)
        rho = w * np.outer(q[:, 0], q[:, 0].conj()) + (1 - w) * np.outer(
            q[:, 1], q[:, 1].conj()
        )
        r2 = statekit.rank2_range(statekit.DensityMatrix(3, rho))
        assert r2.P1 >= r2.P2 >= 0
        assert abs(r2.P1 + r2.P2 - 1.0) < 1e-12
        assert np.abs(r2.density_matrix().matrix - rho).max() < 1e-10
        v1, v2 = r2.eigenvectors()
        assert abs(np.vdot(v1, v2)) < 1e-10


def test_rank2_range_rejects_rank3():
    rng = np.random.default_rng(9)
    v = rng.standard_normal((8, 3))
    q, _ = np.linalg.qr(v)
    rho = (q * [0.5, 0.3, 0.2]) @ q.conj().T
    with pytest.raises(RankError):
        statekit.rank2_range(statekit.DensityMatrix(3, rho))


def test_mixing_angle_canonical():
    from tangleroof import catalog

    psi = catalog.build("Psi4_6_2").state
    r2 = statekit.rank2_range(statekit.partial_trace(psi, 1))
    assert r2.alpha is not None
    assert abs(r2.alpha - (-np.arctan(np.sqrt(2) / 3) / 2)) < 1e-10
    assert abs(r2.P1 - (3 + np.sqrt(3)) / 6) < 1e-12
