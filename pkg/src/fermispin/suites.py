"""Seeded invariant suites behind ``fermispin check``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backgrounds as bgs
from .connection_calculus import (
    curvature_relation_check,
    half_trace,
    induced_h_connection,
    induced_scalars,
    raise_index,
    reconstruct_spinor,
    torsion,
)
from .dirac_algebra import clifford_defect, hat_gamma
from .fermi_transport import fermi_data, precession_angle, transport
from .free_states import MassShellMomentum, dirac_frame, energy_splitting, lorentz_of
from .spinor_algebra import ETA, g_bilinear, herm_to_pauli, null_decompose, outer, pauli_gram, pauli_to_herm

DEFAULT_SEED = 20240611


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    tol: float
    mode: str = "max"  # "max": value <= tol; "band": |value - target| <= tol
    target: float = 0.0

    @property
    def passed(self) -> bool:
        if not np.isfinite(self.value):
            return False
        if self.mode == "band":
            return bool(abs(self.value - self.target) <= self.tol)
        return bool(self.value <= self.tol)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        if self.mode == "band":
            return f"{status} {self.name} value={self.value:.6e} target={self.target:g}+-{self.tol:g}"
        return f"{status} {self.name} value={self.value:.3e} tol={self.tol:g}"


def _rand_c(rng, *shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def suite_clifford(rng):
    x = rng.normal(size=(300, 4))
    y = rng.normal(size=(300, 4))
    worst = max(clifford_defect(pauli_to_herm(a), pauli_to_herm(b)).norm() for a, b in zip(x, y))
    return [Check("clifford.defect", worst, 1e-12)]


def suite_pauli(rng):
    return [Check("pauli.gram", float(np.max(np.abs(pauli_gram() - ETA))), 1e-14)]


def suite_null_cone(rng):
    worst, refused = 0.0, 0
    for _ in range(300):
        u = _rand_c(rng, 2)
        for sign in (1, -1):
            w = sign * outer(u)
            got = null_decompose(w)
            worst = max(worst, abs(g_bilinear(w, w)))
            if got is None:
                worst = np.inf
                continue
            worst = max(worst, float(np.max(np.abs(got[1] * outer(got[0]) - w))))
        x = rng.normal(size=4)
        if null_decompose(pauli_to_herm(x)) is None:
            refused += 1
    return [Check("null.recover", worst, 1e-10), Check("null.refuse_misses", float(300 - refused), 0.0)]


def suite_roundtrip(rng):
    lam = _rand_c(rng, 300, 2, 2)
    g, y = induced_scalars(lam)
    gt = induced_h_connection(lam)
    up = raise_index(gt)
    return [
        Check("roundtrip.lambda", float(np.max(np.abs(reconstruct_spinor(g, y, gt) - lam))), 1e-13),
        Check("roundtrip.antisymmetry", float(np.max(np.abs(up + np.swapaxes(up, -1, -2)))), 1e-13),
        Check("roundtrip.trace", float(np.max(np.abs(np.trace(gt, axis1=-2, axis2=-1)))), 1e-13),
    ]


def suite_curvature(rng):
    field = bgs.random_spinor_field(int(rng.integers(2**31)))
    x = rng.normal(size=4)
    r1 = curvature_relation_check(field, x, h=0.02, reduce="center")
    r2 = curvature_relation_check(field, x, h=0.01, reduce="center")
    return [Check("curvature.order_ratio", r1 / r2, 0.3, mode="band", target=4.0)]


def suite_gamma_hat(rng):
    worst, tr = 0.0, 0.0
    for _ in range(200):
        a = rng.normal(size=(4, 4))
        phi_up = a - a.T
        phi = half_trace(phi_up @ ETA)
        lhs = 0.25 * hat_gamma(phi_up).matrix
        block = np.zeros((4, 4), dtype=complex)
        block[:2, :2] = phi
        block[2:, 2:] = -phi.conj().T
        worst = max(worst, float(np.max(np.abs(lhs - block))))
        tr = max(tr, abs(np.trace(phi)))
    return [Check("gamma_hat.identity", worst, 1e-12), Check("gamma_hat.trace_phi", tr, 1e-14)]


def _orbit(steps=2000):
    wl = bgs.worldline("circular", radius=1.0, omega=0.6)
    return wl, bgs.minkowski(), bgs.circular_period(1.0, 0.6), steps


def suite_fermi_compat(rng):
    wl, mk, T, n = _orbit()
    u0 = _rand_c(rng, 2)
    vec = transport(wl, mk, herm_to_pauli(outer(u0)), 0.0, T, n)
    out = []
    for a in (0.0, 0.7):
        sp = transport(wl, mk, u0, 0.0, T, n, kind="two-spinor", alpha=a)
        w = np.array([herm_to_pauli(outer(u)) for u in sp.states])
        out.append(Check(f"fermi_compat.alpha={a}", float(np.max(np.abs(w - vec.states))), 1e-8))
    return out


def suite_gauge(rng):
    wl, mk, T, n = _orbit()
    u0 = _rand_c(rng, 2)
    a = 0.7
    base = transport(wl, mk, u0, 0.0, T, n, kind="two-spinor")
    gauged = transport(wl, mk, u0, 0.0, T, n, kind="two-spinor", alpha=a)
    phase = np.exp(1j * a * base.s)[:, None]
    return [Check("gauge.phase", float(np.max(np.abs(gauged.states - phase * base.states))), 1e-10)]


def suite_thomas(rng):
    wl, mk, T, _ = _orbit()
    n = 10000
    tr = transport(wl, mk, np.array([0.0, 1.0, 0.0, 0.0]), 0.0, T, n)
    taus = [fermi_data(wl, s, mk).tau for s in tr.s]
    ang = precession_angle(tr.states, taus)[-1]
    gam = 1.0 / np.sqrt(1.0 - 0.36)
    return [Check("thomas.angle", float(ang), 1e-6, mode="band", target=-2.0 * np.pi * (gam - 1.0))]


def suite_isometry(rng):
    wl, mk, T, _ = _orbit()
    X0 = np.linalg.qr(rng.normal(size=(4, 4)))[0]
    tr = transport(wl, mk, X0, 0.0, T, 10000)
    g = np.einsum("sli,lm,smj->sij", tr.states, ETA, tr.states)
    return [Check("isometry.drift", float(np.max(np.abs(g - g[0]))), 1e-8)]


def suite_free_states(rng):
    worst_p, worst_f, worst_l, worst_det = 0.0, 0.0, 0.0, 0.0
    for _ in range(100):
        v = rng.normal(size=3)
        v *= rng.uniform(0.0, 0.95) / np.linalg.norm(v)
        p = MassShellMomentum.from_velocity(1.0, v)
        P, M = energy_splitting(p)
        worst_p = max(worst_p, float(np.max(np.abs(P.matrix @ P.matrix - P.matrix))), abs(np.linalg.matrix_rank(P.matrix) - 2))
        fr, lift = dirac_frame(p)
        worst_f = max(worst_f, fr.adaptedness(p))
        worst_l = max(worst_l, float(np.max(np.abs(lorentz_of(lift.K) - lift.Lambda))))
        worst_det = max(worst_det, abs(np.linalg.det(lift.K) - 1.0))
    return [
        Check("free.projectors", worst_p, 1e-10),
        Check("free.adapted", worst_f, 1e-10),
        Check("free.lift_boost", worst_l, 1e-12),
        Check("free.det_K", worst_det, 1e-12),
    ]


def suite_torsion(rng):
    bg = bgs.schwarzschild_like(1.0)
    x = np.concatenate([[0.0], rng.uniform(1.5, 3.0, size=3)])
    r1 = np.max(np.abs(torsion(bg.tetrad, bg.h_connection, x, h=1e-2)))
    r2 = np.max(np.abs(torsion(bg.tetrad, bg.h_connection, x, h=5e-3)))
    return [Check("torsion.order_ratio", float(r1 / r2), 0.3, mode="band", target=4.0)]


SUITES = {
    "clifford": suite_clifford,
    "pauli": suite_pauli,
    "null-cone": suite_null_cone,
    "roundtrip": suite_roundtrip,
    "curvature": suite_curvature,
    "gamma-hat": suite_gamma_hat,
    "fermi-compat": suite_fermi_compat,
    "gauge": suite_gauge,
    "thomas": suite_thomas,
    "isometry": suite_isometry,
    "free-states": suite_free_states,
    "torsion": suite_torsion,
}


def run_suites(names=None, seed: int = DEFAULT_SEED) -> list[Check]:
    """Run the named suites (all when ``names`` is empty), each with its own seeded generator."""
    names = list(SUITES) if not names else list(names)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise KeyError(f"unknown suite(s): {', '.join(unknown)}; available: {', '.join(SUITES)}")
    out = []
    for name in names:
        rng = np.random.default_rng([seed, list(SUITES).index(name)])
        out.extend(SUITES[name](rng))
    return out
