"""JSON scenario files for the command-line runs.

Schema (``schema_version`` 1)::

    {
      "schema_version": 1,
      "background": {"kind": "minkowski"} | {"kind": "schwarzschild_like", "M": 0.5},
      "worldline": {"kind": "static", "x0": [x, y, z]}
                 | {"kind": "circular", "radius": R, "omega": W}
                 | {"kind": "rindler", "a": A},
      "transport": {
        "kind": "vector" | "two-spinor" | "four-spinor",
        "initial": [c0, c1, ...],          # complex entries as [re, im]
        "s_range": [s0, s1] | "orbits": n, # orbits only for circular worldlines
        "steps": N,
        "alpha": 0.0 | {"table": [[s, alpha], ...]},
        "tolerance": 1e-8
      },
      "frames": {"s_range": [s0, s1] | "orbits": n, "steps": N, "every": k},
      "momenta": [{"p": [p0, p1, p2, p3], "m": 1.0} | {"velocity": [vx, vy, vz], "m": 1.0}],
      "mass": 1.0
    }

Momenta are covector components in the local orthonormal frame.

Complex numbers are ``[re, im]`` pairs throughout.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .backgrounds import circular_period, minkowski, schwarzschild_like, worldline
from .fermi_transport import KINDS, NonTimelikeError

SCHEMA_VERSION = 1
_DIMS = {"vector": 4, "two-spinor": 2, "four-spinor": 4}


class ScenarioError(ValueError):
    """Invalid scenario; ``path`` names the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def encode_complex(z):
    """Nested ``[re, im]`` lists for a complex array."""
    z = np.asarray(z)
    if z.ndim == 0:
        return [float(z.real), float(z.imag)]
    return [encode_complex(v) for v in z]


def decode_complex(v, path: str):
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    if isinstance(v, list) and len(v) == 2 and all(isinstance(t, (int, float)) for t in v):
        return complex(v[0], v[1])
    raise ScenarioError(path, f"expected a number or [re, im] pair, got {v!r}")


def _num(d: dict, key: str, path: str, default=None, positive: bool = False):
    if key not in d:
        if default is None:
            raise ScenarioError(f"{path}.{key}", "missing required field")
        return default
    v = d[key]
    if not isinstance(v, (int, float)) or isinstance(v, bool) or not np.isfinite(v):
        raise ScenarioError(f"{path}.{key}", f"expected a finite number, got {v!r}")
    if positive and v <= 0:
        raise ScenarioError(f"{path}.{key}", f"must be positive, got {v!r}")
    return float(v)


def _obj(d, key: str, path: str):
    if key not in d:
        raise ScenarioError(f"{path}.{key}", "missing required field")
    v = d[key]
    if not isinstance(v, dict):
        raise ScenarioError(f"{path}.{key}", "expected an object")
    return v


@dataclass
class Scenario:
    raw: dict
    background: object
    worldline: object
    worldline_spec: dict
    transport: dict | None
    frames: dict | None
    momenta: list
    mass: float


def parse_background(spec: dict, path: str = "background"):
    kind = spec.get("kind")
    if kind == "minkowski":
        return minkowski()
    if kind == "schwarzschild_like":
        M = _num(spec, "M", path)
        if M < 0:
            raise ScenarioError(f"{path}.M", "must be non-negative")
        return schwarzschild_like(M)
    raise ScenarioError(f"{path}.kind", f"unknown background kind {kind!r}")


def parse_worldline(spec: dict, background, path: str = "worldline"):
    kind = spec.get("kind")
    try:
        if kind == "static":
            x0 = spec.get("x0", [0.0, 0.0, 0.0])
            if not (isinstance(x0, list) and len(x0) == 3):
                raise ScenarioError(f"{path}.x0", "expected three spatial coordinates")
            return worldline("static", background, x0=[float(t) for t in x0])
        if kind == "circular":
            R = _num(spec, "radius", path, positive=True)
            w = _num(spec, "omega", path, positive=True)
            if background.name == "minkowski" and R * w >= 1.0:
                raise ScenarioError(f"{path}.omega", f"orbit speed omega*radius = {R * w} must be below 1")
            return worldline("circular", background, radius=R, omega=w)
        if kind == "rindler":
            if background.name != "minkowski":
                raise ScenarioError(f"{path}.kind", "rindler worldlines need the minkowski background")
            return worldline("rindler", background, a=_num(spec, "a", path, positive=True))
    except (NonTimelikeError, ValueError) as exc:
        if isinstance(exc, ScenarioError):
            raise
        raise ScenarioError(path, str(exc)) from exc
    raise ScenarioError(f"{path}.kind", f"unknown worldline kind {kind!r}")


def _parse_alpha(v, path):
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return float(v)
    if isinstance(v, dict) and "table" in v:
        tab = np.asarray(v["table"], dtype=float)
        if tab.ndim != 2 or tab.shape[1] != 2 or len(tab) < 2 or np.any(np.diff(tab[:, 0]) <= 0):
            raise ScenarioError(f"{path}.table", "expected at least two [s, alpha] rows with increasing s")
        return {"table": tab.tolist()}
    raise ScenarioError(path, "expected a number or {\"table\": [[s, alpha], ...]}")


def alpha_callable(alpha):
    if isinstance(alpha, dict):
        tab = np.asarray(alpha["table"], dtype=float)
        return lambda s: float(np.interp(s, tab[:, 0], tab[:, 1]))
    return float(alpha)


def _parse_schedule(spec: dict, wl_spec: dict, background, path: str):
    steps = spec.get("steps")
    if not isinstance(steps, int) or isinstance(steps, bool) or steps <= 0:
        raise ScenarioError(f"{path}.steps", f"expected a positive integer, got {steps!r}")
    if "orbits" in spec:
        if wl_spec.get("kind") != "circular":
            raise ScenarioError(f"{path}.orbits", "orbits needs a circular worldline")
        n = _num(spec, "orbits", path, positive=True)
        return [0.0, n * circular_period(float(wl_spec["radius"]), float(wl_spec["omega"]), background)], steps
    sr = spec.get("s_range")
    if not (isinstance(sr, list) and len(sr) == 2 and all(isinstance(t, (int, float)) for t in sr)):
        raise ScenarioError(f"{path}.s_range", "expected [s0, s1]")
    if not sr[1] > sr[0]:
        raise ScenarioError(f"{path}.s_range", "need s1 > s0")
    return [float(sr[0]), float(sr[1])], steps


def parse_frames(spec: dict, wl_spec: dict, background, path: str = "frames"):
    s_range, steps = _parse_schedule(spec, wl_spec, background, path)
    every = spec.get("every", 1)
    if not isinstance(every, int) or isinstance(every, bool) or every <= 0:
        raise ScenarioError(f"{path}.every", f"expected a positive integer, got {every!r}")
    return {"s_range": s_range, "steps": steps, "every": every}


def parse_transport(spec: dict, wl_spec: dict, background, path: str = "transport"):
    kind = spec.get("kind")
    if kind not in KINDS:
        raise ScenarioError(f"{path}.kind", f"unknown transport kind {kind!r}; expected one of {KINDS}")
    init = spec.get("initial")
    if not isinstance(init, list) or len(init) != _DIMS[kind]:
        raise ScenarioError(f"{path}.initial", f"expected {_DIMS[kind]} components for {kind}")
    comps = [decode_complex(c, f"{path}.initial[{i}]") for i, c in enumerate(init)]
    if kind == "vector":
        if any(c.imag != 0 for c in comps):
            raise ScenarioError(f"{path}.initial", "vector components must be real")
        initial = np.array([c.real for c in comps])
    else:
        initial = np.array(comps)
    s_range, steps = _parse_schedule(spec, wl_spec, background, path)
    return {
        "kind": kind,
        "initial": initial,
        "s_range": s_range,
        "steps": steps,
        "alpha": _parse_alpha(spec.get("alpha", 0.0), f"{path}.alpha"),
        "tolerance": _num(spec, "tolerance", path, default=1e-8, positive=True),
    }


def parse_momenta(items, mass: float, path: str = "momenta"):
    from .free_states import MassShellMomentum

    if not isinstance(items, list):
        raise ScenarioError(path, "expected a list")
    out = []
    for i, it in enumerate(items):
        p_path = f"{path}[{i}]"
        if not isinstance(it, dict):
            raise ScenarioError(p_path, "expected an object")
        m = _num(it, "m", p_path, default=mass, positive=True)
        try:
            if "p" in it:
                out.append(MassShellMomentum(np.asarray(it["p"], dtype=float), m))
            elif "velocity" in it:
                out.append(MassShellMomentum.from_velocity(m, it["velocity"]))
            else:
                raise ScenarioError(p_path, "needs 'p' or 'velocity'")
        except ScenarioError:
            raise
        except (ValueError, TypeError) as exc:
            raise ScenarioError(p_path, str(exc)) from exc
    return out


def load_scenario(path: str, need: str | None = None) -> Scenario:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ScenarioError("<file>", str(exc)) from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError("<file>", f"not valid JSON ({exc})") from exc
    return parse_scenario(raw, need)


def parse_scenario(raw, need: str | None = None) -> Scenario:
    """Validate ``raw``; ``need`` ("transport" or "frames") makes that section mandatory."""
    if not isinstance(raw, dict):
        raise ScenarioError("<root>", "expected a JSON object")
    ver = raw.get("schema_version")
    if ver != SCHEMA_VERSION:
        raise ScenarioError("schema_version", f"expected {SCHEMA_VERSION}, got {ver!r}")
    bg = parse_background(_obj(raw, "background", "<root>") if "background" in raw else {"kind": "minkowski"})
    wl_spec = _obj(raw, "worldline", "<root>")
    wl = parse_worldline(wl_spec, bg)
    tr = fr = None
    if "transport" in raw or need == "transport":
        tr = parse_transport(_obj(raw, "transport", "<root>"), wl_spec, bg)
    if "frames" in raw or need == "frames":
        fr = parse_frames(_obj(raw, "frames", "<root>"), wl_spec, bg)
    mass = _num(raw, "mass", "<root>", default=1.0, positive=True)
    momenta = parse_momenta(raw.get("momenta", []), mass)
    return Scenario(raw, bg, wl, wl_spec, tr, fr, momenta, mass)
