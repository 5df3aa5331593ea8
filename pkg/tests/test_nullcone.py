"""Tests for partial spin flips and balancedness classification."""

from fractions import Fraction

import numpy as np
import pytest

from tangleroof import catalog, nullcone, statekit
from tangleroof.errors import CollisionError

EXPECTED_CLASSES = {
    "Psi4_6": "c_balanced",
    "Psi4_4": "c_balanced",
    "GHZ3": "c_balanced",
    "W3": "unbalanced",
    "W4": "unbalanced",
    "Psi4_6_1": "a_balanced_only",
    "Psi4_6_2": "a_balanced_only",
    "Psi4_6_23": "a_balanced_only",
    "Psi4_4_1": "a_balanced_only",
    "Psi4_4_2": "a_balanced_only",
    "Psi4_4_4": "a_balanced_only",
}


def test_flip_involution_and_norm():
    psi = catalog.build("Psi4_6").state
    flipped = nullcone.partial_spin_flip(psi, {2, 3})
    assert abs(flipped.norm - psi.norm) < 1e-15
    back = nullcone.partial_spin_flip(flipped, {2, 3})
    assert np.abs(back.amplitudes - psi.amplitudes).max() < 1e-15


def test_flip_reproduces_catalog_states():
    for name, (parent, comps) in {
        "Psi4_6_1": ("Psi4_6", {1}),
        "Psi4_6_2": ("Psi4_6", {2}),
        "Psi4_6_23": ("Psi4_6", {2, 3}),
        "Psi4_4_1": ("Psi4_4", {1}),
        "Psi4_4_2": ("Psi4_4", {2}),
        "Psi4_4_4": ("Psi4_4", {4}),
    }.items():
        flipped = nullcone.partial_spin_flip(catalog.build(parent).state, comps)
        target = catalog.build(name).state
        assert np.abs(flipped.amplitudes - target.amplitudes).max() == 0.0, name


def test_flip_example_values():
    flipped = nullcone.partial_spin_flip(catalog.build("Psi4_4").state, {1})
    amps = flipped.amplitudes
    for bits in ("0000", "1100", "0010", "0001"):
        assert abs(amps[int(bits, 2)] - 0.5) < 1e-15
    assert abs(np.abs(amps).sum() - 2.0) < 1e-14


def test_flip_collision():
    # |00> + |11>: flipping one component lands on the other
    psi = statekit.PureState(
        2, np.array([1, 0, 0, 1]) / np.sqrt(2), term_order=[0, 3]
    )
    with pytest.raises(CollisionError):
        nullcone.partial_spin_flip(psi, {1})
    # flipping both components swaps them and is fine
    swapped = nullcone.partial_spin_flip(psi, {1, 2})
    assert np.abs(swapped.amplitudes - psi.amplitudes).max() < 1e-15


def test_flip_index_errors():
    psi = catalog.build("Psi4_4").state
    with pytest.raises(IndexError):
        nullcone.partial_spin_flip(psi, {5})
    with pytest.raises(IndexError):
        nullcone.partial_spin_flip(psi, {0})


def _check_witness(pattern, bc):
    n_terms = len(pattern.bitvectors)
    n_sites = len(pattern.bitvectors[0])
    w = bc.witness
    assert len(w) == n_terms
    for k in range(n_sites):
        s = sum(
            w[j] * (2 * pattern.bitvectors[j][k] - 1) for j in range(n_terms)
        )
        assert s == Fraction(0)
    if bc.label == "c_balanced":
        assert all(v > 0 for v in w)
    else:
        assert sum(w) != 0
        # not a strictly positive vector, else it would be c-balanced
        assert any(v <= 0 for v in w)


def test_balance_catalog_classification():
    for name, expected in EXPECTED_CLASSES.items():
        pattern = nullcone.SupportPattern.from_state(catalog.build(name).state)
        bc = nullcone.classify_balance(pattern)
        assert bc.label == expected, name
        if bc.label != "unbalanced":
            _check_witness(pattern, bc)
        else:
            assert bc.witness is None


def test_balance_known_witness():
    pattern = nullcone.SupportPattern(
        [tuple(int(b) for b in s) for s in ("1111", "1100", "0010", "0001")]
    )
    bc = nullcone.classify_balance(pattern)
    assert bc.label == "c_balanced"
    _check_witness(pattern, bc)


def test_balance_random_supports_c_implies_a():
    rng = np.random.default_rng(0)
    for _ in range(100):
        n_sites = rng.integers(2, 5)
        n_terms = min(int(rng.integers(2, 7)), 2**n_sites)
        seen = set()
        while len(seen) < n_terms:
            seen.add(tuple(rng.integers(0, 2, n_sites).tolist()))
        pattern = nullcone.SupportPattern(sorted(seen))
        bc = nullcone.classify_balance(pattern)
        assert bc.label in ("c_balanced", "a_balanced_only", "unbalanced")
        if bc.label != "unbalanced":
            _check_witness(pattern, bc)
        if bc.label == "c_balanced":
            # a positive zero-sum witness rescaled to unit sum solves the
            # affine system as well
            total = sum(bc.witness)
            assert total > 0
