"""Command-line interface: state inspection, invariants, roofs and the
self-verification suite."""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys

import numpy as np

from . import catalog, invariants, nullcone, roofkit, statekit
from .errors import TangleRoofError

CSV_FMT = "{:.12g}"


def _threads():
    # honored by downstream BLAS through the environment; also caps our own
    # (currently sequential) evaluation loops
    try:
        return max(1, int(os.environ.get("TANGLE_ROOF_THREADS", "0")))
    except ValueError:
        return 0


def _json_default(obj):
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    raise TypeError(f"not serializable: {type(obj)}")


def _emit_json(payload, out=None):
    text = json.dumps(payload, default=_json_default)
    if out and out != "-":
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _resolve_state(args) -> statekit.PureState:
    if getattr(args, "file", None):
        with open(args.file, encoding="utf-8") as fh:
            return statekit.load_state(fh.read())
    if getattr(args, "state", None):
        params = {}
        if getattr(args, "p", None):
            params["p"] = [float(v) for v in args.p.split(",")]
        if getattr(args, "eta", None) is not None:
            params["eta"] = args.eta
        return catalog.build(args.state, params).state
    raise TangleRoofError("no input state: pass --state NAME or --file PATH")


def _reduced_range(args):
    psi = _resolve_state(args)
    rho = statekit.partial_trace(psi, args.trace)
    return statekit.rank2_range(rho)


STATE_NOTES = {
    "Psi4_6": "six-term four-qubit state: sqrt(p1)|1111> plus a weighted W-part",
    "Psi4_4": "four-term state on |1111>,|1100>,|0010>,|0001>",
    "W3": "three-qubit W state",
    "W4": "four-qubit W state",
    "GHZ3": "three-qubit GHZ state",
    "Psi4_6_1": "six-term state with component 1 spin-flipped",
    "Psi4_6_2": "six-term state with component 2 spin-flipped",
    "Psi4_6_23": "six-term state with components 2 and 3 spin-flipped",
    "Psi4_4_1": "four-term state with component 1 spin-flipped",
    "Psi4_4_2": "four-term state with component 2 spin-flipped",
    "Psi4_4_4": "four-term state with component 4 spin-flipped",
}


def cmd_state(args):
    if args.action == "list":
        for name in catalog.NAMES:
            print(f"{name}\t{STATE_NOTES[name]}")
        return 0
    entry = catalog.build(args.name, _params_from(args))
    print(entry.state.to_json())
    return 0


def _params_from(args):
    params = {}
    if getattr(args, "p", None):
        params["p"] = [float(v) for v in args.p.split(",")]
    if getattr(args, "eta", None) is not None:
        params["eta"] = args.eta
    return params


def cmd_invariants(args):
    psi = _resolve_state(args).normalize()
    out = {"n": psi.n_qubits}
    n = psi.n_qubits
    out["one_tangles"] = {
        str(i): invariants.one_tangle(psi, i) for i in range(1, n + 1)
    }
    out["concurrence"] = {
        f"{i}{j}": invariants.concurrence(invariants.pair_density_matrix(psi, i, j))
        for i, j in itertools.combinations(range(1, n + 1), 2)
    }
    if n == 3:
        out["threetangle"] = invariants.threetangle(psi)
    if n == 4:
        gens = invariants.sl_invariants_4q(psi)
        out["sl_generators"] = {
            "degree2": gens[0],
            "degree4_a": gens[1],
            "degree4_b": gens[2],
            "degree6": gens[3],
        }
        out["in_null_cone"] = invariants.in_null_cone(psi, args.tol)
    _emit_json(out, args.out)
    return 0


def cmd_reduce(args):
    psi = _resolve_state(args)
    rho = statekit.partial_trace(psi, args.trace)
    _emit_json(json.loads(rho.to_json()), args.out)
    return 0


def cmd_balance(args):
    psi = _resolve_state(args)
    bc = nullcone.classify_balance(nullcone.SupportPattern.from_state(psi))
    _emit_json({"label": bc.label, "witness": bc.witness_strings()}, args.out)
    return 0


def cmd_flip(args):
    psi = _resolve_state(args)
    components = {int(v) for v in args.components.split(",")}
    print(nullcone.partial_spin_flip(psi, components).to_json())
    return 0


def _curve_rows(rng, phis, p_grid):
    for phi in phis:
        curve = roofkit.characteristic_curve(rng, phi, p_grid)
        for p, v in zip(curve.ps, curve.values):
            yield CSV_FMT.format(phi), p, v


def cmd_curves(args):
    rng = _reduced_range(args)
    if args.phi is not None:
        try:
            phis = [float(v) for v in args.phi.split(",") if v.strip()]
        except ValueError as exc:
            raise TangleRoofError(f"bad phi list: {exc}") from exc
        if not phis:
            raise TangleRoofError("empty phi list")
    else:
        phis = np.linspace(0.0, 2 * np.pi, args.phi_grid).tolist()
    lines = ["phi,p,sqrt_tau3"]
    for label, p, v in _curve_rows(rng, phis, args.p_grid):
        lines.append(f"{label},{CSV_FMT.format(p)},{CSV_FMT.format(v)}")
    if args.envelope:
        env = roofkit.minimal_convex_curve(rng, args.phi_grid, args.p_grid)
        for p, v in zip(env.ps, env.values):
            lines.append(f"envelope,{CSV_FMT.format(p)},{CSV_FMT.format(v)}")
    if args.roof:
        v1, v2 = rng.eigenvectors()
        for p in np.linspace(0.0, 1.0, args.p_grid):
            fam = statekit.RankTwoRange.from_eigensystem(v1, v2, float(p))
            res = roofkit.convex_roof_rank2(fam, args.phi_grid, args.p_grid)
            lines.append(f"roof,{CSV_FMT.format(p)},{CSV_FMT.format(res.value)}")
    text = "\n".join(lines) + "\n"
    if args.out and args.out != "-":
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_zeropolytope(args):
    rng = _reduced_range(args)
    zp = roofkit.zero_polytope(rng)
    _emit_json(
        {
            "roots": [{"p": p, "phi": phi} for p, phi in zp.roots],
            "multiplicities": zp.multiplicities,
            "all_zero": zp.all_zero,
        },
        args.out,
    )
    return 0


def cmd_roof(args):
    rng = _reduced_range(args)
    res = roofkit.convex_roof_rank2(rng, args.phi_grid, args.p_grid)
    _emit_json(
        {
            "value": res.value,
            "exact": res.exact,
            "lower_bound": res.lower_bound,
            "upper_bound": res.upper_bound,
            "decomposition": [
                {"weight": w, "state": json.loads(s.to_json())}
                for w, s in res.decomposition
            ],
        },
        args.out,
    )
    return 0


def cmd_oracle(args):
    rng = _reduced_range(args)
    value = roofkit.brute_force_roof(rng, args.max_parts, args.restarts, args.seed)
    _emit_json({"value": value}, args.out)
    return 0


def _verify_checks(args):
    """Yield (id, description, expected, computed, tolerance) tuples.

    Closed forms follow the tau_3(GHZ) = 1 / concurrence(Bell) = 1
    conventions used throughout the package (see README for how these relate
    to alternative normalizations).
    """
    tol = args.tol
    canonical = catalog.build("Psi4_6_2")
    p6 = canonical.params["p"]
    rng1 = statekit.rank2_range(statekit.partial_trace(canonical.state, 1))

    yield (
        "mixing-angle",
        "rank-2 reduction over qubit 1 recovers alpha = -arctan(sqrt(2)/3)/2",
        -np.arctan(np.sqrt(2) / 3) / 2,
        rng1.alpha,
        1e-5,
    )

    v1, v2 = rng1.eigenvectors()
    worst = 0.0
    all_exact = True
    for p in np.linspace(0.0, 1.0, 21):
        fam = statekit.RankTwoRange.from_eigensystem(v1, v2, float(p))
        res = roofkit.convex_roof_rank2(fam)
        worst = max(worst, abs(res.value - (2 / 3**0.75) * abs(2 * p - 1) ** 1.5))
        all_exact = all_exact and res.exact
    yield (
        "roof-curve",
        "roof along the eigenvector axis equals (2/3^(3/4))|2p-1|^(3/2), exact",
        0.0,
        worst if all_exact else float("inf"),
        1e-6,
    )

    roof1 = roofkit.convex_roof_rank2(rng1)
    yield (
        "roof-spot",
        "roof of the qubit-1 reduction at the canonical weights is 2/(3 sqrt(3))",
        2 / (3 * np.sqrt(3)),
        roof1.value,
        1e-6,
    )

    rng2 = statekit.rank2_range(statekit.partial_trace(canonical.state, 2))
    roof2 = roofkit.convex_roof_rank2(rng2)
    yield (
        "roof-linear",
        "roof of the qubit-2 reduction is 2 sqrt(p1 p3) (linear curve case)",
        2 * np.sqrt(p6[0] * p6[2]),
        roof2.value,
        1e-9,
    )

    gen = np.random.default_rng(args.seed)
    worst = 0.0
    for _ in range(3):
        p = gen.dirichlet(np.ones(5))
        entry = catalog.build("Psi4_6_23", {"p": p.tolist()})
        rng3 = statekit.rank2_range(statekit.partial_trace(entry.state, 3))
        res = roofkit.convex_roof_rank2(rng3)
        worst = max(worst, abs(res.value - 2 * np.sqrt(p[0] * p[3])))
    yield (
        "roof-fourfold",
        "roof after tracing qubit 3 of the doubly flipped six-term state is "
        "2 sqrt(p1 p4) (fourfold zero at the interval end), random draws",
        0.0,
        worst,
        1e-6,
    )

    st23 = catalog.build("Psi4_6_23").state
    J = (3, 2, 5, 4)
    worst = 0.0
    for i, j in itertools.combinations(range(1, 5), 2):
        c = invariants.concurrence(invariants.pair_density_matrix(st23, i, j))
        worst = max(worst, abs(c - 2 * np.sqrt(p6[J[i - 1] - 1] * p6[J[j - 1] - 1])))
    c2 = max(
        invariants.concurrence(invariants.pair_density_matrix(canonical.state, i, j))
        for i, j in itertools.combinations(range(1, 5), 2)
    )
    yield (
        "concurrence-pattern",
        "pairwise concurrences: 2 sqrt(p_Ji p_Jj) with J=(3,2,5,4) after the "
        "double flip; all vanishing after the single flip",
        0.0,
        max(worst, c2),
        1e-9,
    )

    worst = 0.0
    for name in catalog.NAMES:
        if name in ("W3", "GHZ3"):
            continue
        psi = catalog.build(name).state
        gens = invariants.sl_invariants_4q(psi.normalize())
        mag = max(abs(g) for g in gens)
        expected_null = catalog.build(name).expected["null_cone"]
        if expected_null:
            worst = max(worst, mag)
        else:
            # parents are outside the null cone: the four-term state through a
            # degree-4 generator, the six-term state through the (smaller)
            # degree-6 one
            floor = 0.01 if name == "Psi4_4" else 1e-3
            if mag < floor:
                worst = max(worst, 1.0)
    yield (
        "null-cone",
        "all flipped states have vanishing SL generators; parents do not",
        0.0,
        worst,
        1e-10,
    )

    bad = []
    for name in catalog.NAMES:
        entry = catalog.build(name)
        expected = entry.expected["balance"]
        got = nullcone.classify_balance(
            nullcone.SupportPattern.from_state(entry.state)
        ).label
        if expected is not None and got != expected:
            bad.append(name)
    yield (
        "balance",
        "support balancedness classes match across the catalog",
        0.0,
        float(len(bad)),
        0.5,
    )

    if not args.skip_oracle:
        bf = roofkit.brute_force_roof(rng2, 4, args.restarts, args.seed)
        yield (
            "oracle",
            "decomposition-search oracle brackets the linear-case roof",
            roof2.value,
            bf,
            1e-3,
        )

    gen = np.random.default_rng(args.seed)
    worst = 0.0
    for _ in range(100):
        p, p1 = gen.uniform(0.01, 0.99), gen.uniform(0.0, 1.0)
        split = roofkit.bloch_split(p, p1)
        Z1 = roofkit.member_state(rng1, roofkit.SphereParam(split.p1, 0.7))
        Z2 = roofkit.member_state(rng1, roofkit.SphereParam(split.p2, 0.7 + np.pi))
        rho = p * np.outer(v1, v1.conj()) + (1 - p) * np.outer(v2, v2.conj())
        rec = split.q1 * np.outer(Z1.amplitudes, Z1.amplitudes.conj()) + (
            split.q2 * np.outer(Z2.amplitudes, Z2.amplitudes.conj())
        )
        worst = max(worst, float(np.abs(rec - rho).max()))
    yield (
        "chord-geometry",
        "two-point chord decompositions reconstruct the density matrix",
        0.0,
        worst,
        1e-10,
    )

    curve = roofkit.characteristic_curve(rng1, np.pi, 201)
    second = np.diff(curve.values, 2)
    zp = roofkit.zero_polytope(rng1)
    mults = sorted(zp.multiplicities)
    zp_ok = mults == [1, 3]
    yield (
        "curve-shape",
        "phi=pi curve convex; zero multiplicities are {1, 3} for the "
        "canonical qubit-1 reduction",
        0.0,
        max(0.0, -float(second.min())) if zp_ok else 1.0,
        1e-9,
    )

    bad = 0.0
    for name in catalog.NAMES:
        psi = catalog.build(name).state
        if psi.n_qubits != 4:
            continue
        roofs = {}
        for t in itertools.combinations(range(1, 5), 3):
            site = ({1, 2, 3, 4} - set(t)).pop()
            rho = statekit.partial_trace(psi, site)
            roofs[t] = roofkit.convex_roof_rank2(statekit.rank2_range(rho)).value
        if not invariants.monogamy_report(psi, roofs).all_hold:
            bad += 1.0
    yield (
        "monogamy",
        "extended monogamy inequality holds for all catalog four-qubit states",
        0.0,
        bad,
        0.5,
    )
    _ = tol


def cmd_verify(args):
    failures = 0
    count = 0
    for check_id, desc, expected, computed, tolerance in _verify_checks(args):
        ok = abs(computed - expected) <= tolerance
        count += 1
        failures += 0 if ok else 1
        status = "PASS" if ok else "FAIL"
        print(
            f"[{status}] {check_id}: {desc} "
            f"(expected {expected:.9g}, got {computed:.9g}, tol {tolerance:g})"
        )
    print(f"{count - failures}/{count} checks passed")
    return 1 if failures else 0


def _add_state_args(p, with_trace=False):
    p.add_argument("--state", help="catalog state name")
    p.add_argument("--file", help="path to a state JSON document")
    p.add_argument("--p", help="comma-separated probability overrides")
    p.add_argument("--eta", type=float, default=None, help="phase override")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    if with_trace:
        p.add_argument("--trace", type=int, required=True, help="qubit to trace out")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="tangle-roof",
        description=(
            "four-qubit null-cone states and convex-roof construction of the "
            "square-root threetangle on rank-2 reductions"
        ),
    )
    parser.add_argument("--tol", type=float, default=1e-10)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--phi-grid", type=int, default=roofkit.DEFAULT_PHI_GRID)
    parser.add_argument("--p-grid", type=int, default=roofkit.DEFAULT_P_GRID)
    parser.add_argument("--restarts", type=int, default=400)
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("state", help="show or list catalog states")
    p.add_argument("action", choices=["show", "list"])
    p.add_argument("name", nargs="?")
    p.add_argument("--p", help="comma-separated probability overrides")
    p.add_argument("--eta", type=float, default=None)
    p.set_defaults(func=cmd_state)

    p = sub.add_parser("invariants", help="one-tangles, concurrences, generators")
    _add_state_args(p)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("reduce", help="partial trace to a density matrix")
    _add_state_args(p, with_trace=True)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("balance", help="c-/a-balancedness of the support")
    _add_state_args(p)
    p.set_defaults(func=cmd_balance)

    p = sub.add_parser("flip", help="partial spin flip of listed components")
    _add_state_args(p)
    p.add_argument("--components", required=True, help="e.g. 2,3 (1-based)")
    p.set_defaults(func=cmd_flip)

    p = sub.add_parser("curves", help="characteristic curves as CSV")
    _add_state_args(p, with_trace=True)
    p.add_argument("--phi", help="comma-separated phi values (default: grid)")
    p.add_argument("--envelope", action="store_true")
    p.add_argument("--roof", action="store_true")
    p.set_defaults(func=cmd_curves)

    p = sub.add_parser("zeropolytope", help="zeros of tau_3 on the sphere")
    _add_state_args(p, with_trace=True)
    p.set_defaults(func=cmd_zeropolytope)

    p = sub.add_parser("roof", help="convex roof of sqrt(tau_3)")
    _add_state_args(p, with_trace=True)
    p.set_defaults(func=cmd_roof)

    p = sub.add_parser("oracle", help="brute-force decomposition search")
    _add_state_args(p, with_trace=True)
    p.add_argument("--max-parts", type=int, default=4)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("verify", help="reproduce the documented results")
    p.add_argument("--skip-oracle", action="store_true")
    p.set_defaults(func=cmd_verify)

    args = parser.parse_args(argv)
    if not getattr(args, "func", None):
        parser.print_usage()
        return 2
    _threads()
    try:
        return args.func(args)
    except TangleRoofError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
