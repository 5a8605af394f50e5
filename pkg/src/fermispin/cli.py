"""Command-line front end.

Subcommands::

    fermispin check [suite ...] [--seed N] [--json]
    fermispin transport scenario.json [-o out.csv]
    fermispin frames scenario.json [-o out.csv]
    fermispin precession --radius R --omega W --steps N

Exit codes: 0 all invariants pass, 1 an invariant failed, 2 invalid input.
CSV outputs get a JSON sidecar (``out.csv.json``) with metadata and checks.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from .backgrounds import circular_period, minkowski, worldline
from .dirac_algebra import k_product
from .fermi_transport import fermi_data, precession_angle, richardson_error, transport
from .free_states import MassShellMomentum, frames_along_worldline, gamma_p
from .scenario import SCHEMA_VERSION, ScenarioError, alpha_callable, encode_complex, load_scenario
from .spinor_algebra import ETA, herm_to_pauli, outer
from .suites import DEFAULT_SEED, SUITES, Check, run_suites

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _fmt(x: float) -> str:
    return repr(float(x))


def _complex_cols(prefix: str, n: int):
    return [f"{prefix}{i}_{part}" for i in range(n) for part in ("re", "im")]


def _complex_vals(z):
    out = []
    for v in np.asarray(z).ravel():
        out += [_fmt(v.real), _fmt(v.imag)]
    return out


def _write_outputs(path, header, rows, meta):
    if path is None or path == "-":
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    with open(path + ".json", "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _report(checks: list[Check], stream) -> int:
    for c in checks:
        print(c.line(), file=stream)
    failed = [c.name for c in checks if not c.passed]
    if failed:
        print(f"FAILED: {', '.join(failed)}", file=stream)
        return EXIT_FAIL
    return EXIT_OK


def _check_dict(c: Check):
    d = {"name": c.name, "value": float(c.value), "tol": float(c.tol), "passed": c.passed}
    if c.mode == "band":
        d["target"] = float(c.target)
    return d


def cmd_check(args) -> int:
    try:
        checks = run_suites(args.suite, args.seed)
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_INPUT
    if args.json:
        json.dump({"schema_version": SCHEMA_VERSION, "seed": args.seed, "checks": [_check_dict(c) for c in checks]},
                  sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
        return EXIT_OK if all(c.passed for c in checks) else EXIT_FAIL
    return _report(checks, sys.stdout)


def _observables(kind, state, tau):
    """Derived columns and the vector whose rest-frame angle is tracked."""
    if kind == "vector":
        return [float(state @ ETA @ state), float(tau @ ETA @ state)], state
    if kind == "two-spinor":
        w = herm_to_pauli(outer(state))
        return [float(w @ ETA @ w)] + list(w), w
    return [float(k_product(state, state).real)], None


_OBS_COLS = {
    "vector": ["g_XX", "g_tau_X"],
    "two-spinor": ["g_ww", "w0", "w1", "w2", "w3"],
    "four-spinor": ["k_psi_psi"],
}


def cmd_transport(args) -> int:
    try:
        sc = load_scenario(args.scenario, need="transport")
    except ScenarioError as exc:
        print(f"error: invalid scenario: {exc}", file=sys.stderr)
        return EXIT_INPUT
    t = sc.transport
    kind = t["kind"]
    s0, s1 = t["s_range"]
    err, run, _ = richardson_error(
        sc.worldline, sc.background, t["initial"], s0, s1, t["steps"], kind, alpha_callable(t["alpha"])
    )
    circular = sc.worldline_spec["kind"] == "circular"
    taus = [fermi_data(sc.worldline, s, sc.background).tau for s in run.s]
    obs, tracked = zip(*[_observables(kind, y, tau) for y, tau in zip(run.states, taus)])
    obs = np.array(obs)
    angles = None
    if circular and kind != "four-spinor":
        angles = precession_angle(tracked, taus)

    header = ["s"] + ([f"X{i}" for i in range(4)] if kind == "vector" else _complex_cols("c", len(t["initial"])))
    header += _OBS_COLS[kind] + (["angle"] if angles is not None else [])
    rows = []
    for i, (s, y) in enumerate(zip(run.s, run.states)):
        comps = [_fmt(v) for v in y] if kind == "vector" else _complex_vals(y)
        row = [_fmt(s)] + comps + [_fmt(v) for v in obs[i]]
        if angles is not None:
            row.append(_fmt(angles[i]))
        rows.append(row)

    tol = t["tolerance"]
    checks = [Check("richardson_error", err, tol)]
    drift = float(np.max(np.abs(obs[:, 0] - obs[0, 0])))
    checks.append(Check({"vector": "isometry", "two-spinor": "null_cone", "four-spinor": "k_norm"}[kind], drift, tol))
    if kind == "vector":
        checks.append(Check("tau_orthogonality", float(np.max(np.abs(obs[:, 1] - obs[0, 1]))), tol))
    meta = {
        "schema_version": SCHEMA_VERSION,
        "command": "transport",
        "scenario": sc.raw,
        "steps": t["steps"],
        "s_range": [s0, s1],
        "richardson_error": err,
        "final_state": list(map(float, run.final)) if kind == "vector" else encode_complex(run.final),
        "checks": [_check_dict(c) for c in checks],
    }
    if angles is not None:
        meta["final_angle"] = float(angles[-1])
        if sc.background.name == "minkowski":
            R, w = float(sc.worldline_spec["radius"]), float(sc.worldline_spec["omega"])
            gam = 1.0 / np.sqrt(1.0 - (R * w) ** 2)
            orbits = (s1 - s0) * w * gam / (2.0 * np.pi)
            meta["expected_thomas_angle"] = -2.0 * np.pi * (gam - 1.0) * orbits
    _write_outputs(args.output, header, rows, meta)
    return _report(checks, sys.stderr if args.output in (None, "-") else sys.stdout)


def cmd_frames(args) -> int:
    try:
        sc = load_scenario(args.scenario, need="frames")
    except ScenarioError as exc:
        print(f"error: invalid scenario: {exc}", file=sys.stderr)
        return EXIT_INPUT
    f = sc.frames
    s0, s1 = f["s_range"]
    samples = frames_along_worldline(sc.worldline, sc.background, s0, s1, f["steps"], sc.momenta, sc.mass)
    header = ["s", "p_index", "p0", "p1", "p2", "p3"]
    header += [f"{name}_{c}_{part}" for name in ("u1", "u2", "v1", "v2") for c in range(4) for part in ("re", "im")]
    header += ["residual_u", "residual_v"]
    rows = []
    worst_boost, worst_rest = 0.0, 0.0
    for sample in samples[:: f["every"]] + ([] if f["steps"] % f["every"] == 0 else [samples[-1]]):
        tau = sample.tau / np.sqrt(sample.tau @ ETA @ sample.tau)
        rest_p = MassShellMomentum(sc.mass * (ETA @ tau), sc.mass)
        worst_rest = max(worst_rest, sample.rest.adaptedness(rest_p))
        for i, (p, fr) in enumerate(zip(sample.momenta, sample.frames)):
            g = gamma_p(p).matrix
            ru = float(np.max(np.abs((g - p.m * np.eye(4)) @ fr.u)))
            rv = float(np.max(np.abs((g + p.m * np.eye(4)) @ fr.v)))
            worst_boost = max(worst_boost, ru, rv)
            rows.append(
                [_fmt(sample.s), str(i)] + [_fmt(v) for v in p.p] + _complex_vals(fr.columns.T) + [_fmt(ru), _fmt(rv)]
            )
    checks = [Check("rest_adaptedness", worst_rest, 1e-8), Check("boost_adaptedness", worst_boost, 1e-10)]
    meta = {
        "schema_version": SCHEMA_VERSION,
        "command": "frames",
        "scenario": sc.raw,
        "n_momenta": len(sc.momenta),
        "checks": [_check_dict(c) for c in checks],
    }
    _write_outputs(args.output, header, rows, meta)
    return _report(checks, sys.stderr if args.output in (None, "-") else sys.stdout)


def cmd_precession(args) -> int:
    R, w = args.radius, args.omega
    if R <= 0 or w <= 0 or R * w >= 1.0 or args.steps <= 0 or args.orbits <= 0:
        print("error: need radius > 0, omega > 0, radius*omega < 1, steps > 0 and orbits > 0", file=sys.stderr)
        return EXIT_INPUT
    wl, mk = worldline("circular", radius=R, omega=w), minkowski()
    T = args.orbits * circular_period(R, w)
    tr = transport(wl, mk, np.array([0.0, 1.0, 0.0, 0.0]), 0.0, T, args.steps)
    taus = [fermi_data(wl, s, mk).tau for s in tr.s]
    ang = float(precession_angle(tr.states, taus)[-1])
    gam = 1.0 / np.sqrt(1.0 - (R * w) ** 2)
    expected = -2.0 * np.pi * (gam - 1.0) * args.orbits
    print(f"gamma={gam:.12g}")
    print(f"measured_angle={ang:.12e}")
    print(f"expected_angle={expected:.12e}")
    check = Check("thomas.angle", ang, args.tol, mode="band", target=expected)
    return _report([check], sys.stdout)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fermispin", description="Spinor geometry checks and Fermi transport runs.")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="run seeded invariant suites")
    c.add_argument("suite", nargs="*", help=f"suite names (default: all): {', '.join(SUITES)}")
    c.add_argument("--seed", type=int, default=DEFAULT_SEED)
    c.add_argument("--json", action="store_true", help="emit a JSON report")
    c.set_defaults(func=cmd_check)

    t = sub.add_parser("transport", help="Fermi-transport a state described by a scenario file")
    t.add_argument("scenario")
    t.add_argument("-o", "--output", default=None, help="CSV output path (default: stdout)")
    t.set_defaults(func=cmd_transport)

    f = sub.add_parser("frames", help="Dirac frames along a worldline for a list of momenta")
    f.add_argument("scenario")
    f.add_argument("-o", "--output", default=None, help="CSV output path (default: stdout)")
    f.set_defaults(func=cmd_frames)

    p = sub.add_parser("precession", help="Thomas precession on a circular orbit in flat spacetime")
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--omega", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--orbits", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(func=cmd_precession)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
