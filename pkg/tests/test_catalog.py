"""Tests for catalog constructors and their documented expected values."""

import itertools

import numpy as np
import pytest

from tangleroof import catalog, invariants, roofkit, statekit
from tangleroof.errors import ParamError, UnknownState


def test_all_states_normalized():
    for name in catalog.NAMES:
        entry = catalog.build(name)
        assert abs(entry.state.norm - 1.0) < 1e-12, name


def test_amplitudes_square_to_probabilities():
    gen = np.random.default_rng(6)
    for name in ("Psi4_6", "Psi4_6_2", "Psi4_4", "Psi4_4_4"):
        k = 5 if name.startswith("Psi4_6") else 4
        p = gen.dirichlet(np.ones(k)).tolist()
        entry = catalog.build(name, {"p": p})
        mags = np.sort(np.abs(entry.state.amplitudes[np.abs(entry.state.amplitudes) > 1e-14]) ** 2)
        assert np.abs(mags - np.sort(p)).max() < 1e-12


def test_unknown_name_and_bad_params():
    with pytest.raises(UnknownState):
        catalog.build("Psi9")
    with pytest.raises(ParamError):
        catalog.build("Psi4_4", {"p": [0.5, 0.5, 0.5, -0.5]})
    with pytest.raises(ParamError):
        catalog.build("Psi4_4", {"p": [0.3, 0.3, 0.3]})


def test_parent_definitions():
    psi = catalog.build("Psi4_6").state
    amps = psi.amplitudes
    assert abs(amps[0b1111] - 1 / np.sqrt(3)) < 1e-12
    for bits in (0b1000, 0b0100, 0b0010, 0b0001):
        assert abs(amps[bits] - np.sqrt(1 / 6)) < 1e-12
    psi = catalog.build("Psi4_4_4").state
    for bits in ("1111", "1100", "0010", "1110"):
        assert abs(psi.amplitudes[int(bits, 2)] - 0.5) < 1e-12


def test_canonical_weights_follow_q_parametrization():
    q = 1 - (3 + np.sqrt(3)) / 6
    p = catalog.build("Psi4_6_2").params["p"]
    assert abs(p[0] - 2 * q * (1 - q)) < 1e-12
    assert abs(p[1] - (2 * q - 1) ** 2 / 2) < 1e-12


def test_eta_phase_lands_on_flipped_coefficient():
    entry = catalog.build("Psi4_6_2", {"eta": 0.7})
    amp = entry.state.amplitudes[0b0111]
    assert abs(np.angle(amp) - 0.7) < 1e-12


def test_expected_concurrences_random_draws():
    gen = np.random.default_rng(8)
    for _ in range(5):
        p = gen.dirichlet(np.ones(5)).tolist()
        entry = catalog.build("Psi4_6_23", {"p": p})
        for (i, j), expect in entry.expected["concurrence"].items():
            got = invariants.concurrence(
                invariants.pair_density_matrix(entry.state, i, j)
            )
            assert abs(got - expect) < 1e-9, (i, j)


def test_expected_roofs_random_draws():
    gen = np.random.default_rng(15)
    for _ in range(3):
        p = gen.dirichlet(np.ones(5)).tolist()
        entry = catalog.build("Psi4_6_23", {"p": p})
        for site, expect in entry.expected["roof_sqrt_tau3"].items():
            rng = statekit.rank2_range(statekit.partial_trace(entry.state, site))
            res = roofkit.convex_roof_rank2(rng)
            assert abs(res.value - expect) < 1e-6, site


def test_tangle_free_traces_of_single_flip():
    entry = catalog.build("Psi4_4_1")
    for site in entry.expected["tangle_free_traces"]:
        rng = statekit.rank2_range(statekit.partial_trace(entry.state, site))
        zp = roofkit.zero_polytope(rng)
        assert zp.all_zero, site
        assert roofkit.convex_roof_rank2(rng).value == 0.0


def test_w4_expected():
    entry = catalog.build("W4")
    assert entry.expected["balance"] == "unbalanced"
    for pair, expect in entry.expected["concurrence"].items():
        got = invariants.concurrence(
            invariants.pair_density_matrix(entry.state, *pair)
        )
        assert abs(got - expect) < 1e-12
    for site, expect in entry.expected["roof_sqrt_tau3"].items():
        rng = statekit.rank2_range(statekit.partial_trace(entry.state, site))
        assert roofkit.convex_roof_rank2(rng).value == expect == 0.0


def test_flip_components_documented():
    for name, (parent, comps) in {
        "Psi4_6_23": ("Psi4_6", {2, 3}),
        "Psi4_4_2": ("Psi4_4", {2}),
    }.items():
        from tangleroof import nullcone

        flipped = nullcone.partial_spin_flip(catalog.build(parent).state, comps)
        assert np.abs(
            flipped.amplitudes - catalog.build(name).state.amplitudes
        ).max() == 0.0
