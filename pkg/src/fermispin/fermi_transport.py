"""Fermi transport of vectors, 2-spinors and Dirac spinors along timelike worldlines.

Frame components along the curve are taken in the background's orthonormal
frame ``tau_lambda = Theta^a_lambda d_a``.  With ``a = nabla_tau tau`` and
``Phi^{lm} = a^l tau^m - tau^l a^m``, the transports integrate

    vector:       dX/ds   = (gt_v + Phi_flat) X
    two-spinor:   du/ds   = (lam_v + phi + i alpha) u
    four-spinor:  dpsi/ds = (lam4_v + gamma_hat(Phi)/4 + i alpha) psi

which is ``nabla s = 0`` for the Fermi connections under the package-wide
``nabla = d - lam`` sign.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline

from .connection_calculus import half_trace
from .dirac_algebra import hat_gamma
from .spinor_algebra import ETA, boost_matrix

KINDS = ("vector", "two-spinor", "four-spinor")
_DIMS = {"vector": 4, "two-spinor": 2, "four-spinor": 4}

#: Accelerations below this norm are treated as zero (plain parallel transport).
ACCEL_FLOOR = 1e-14
_UNIT_TOL = 1e-8


class NonTimelikeError(ValueError):
    """Raised when a worldline tangent is not timelike."""


@dataclass(frozen=True)
class Worldline:
    """Chart curve ``s -> x(s)`` with analytic velocity and optional acceleration.

    ``proper_time`` marks ``s`` as proper time. When ``acceleration`` is
    ``None`` it is obtained by centered differences of ``velocity``.
    """

    position: Callable
    velocity: Callable
    acceleration: Callable | None = None
    proper_time: bool = True
    name: str = "worldline"

    def accel(self, s: float, h: float = 1e-5):
        if self.acceleration is not None:
            return np.asarray(self.acceleration(s), dtype=float)
        return (np.asarray(self.velocity(s + h)) - np.asarray(self.velocity(s - h))) / (2.0 * h)

    def to_proper_time(self, background, lam0: float, lam1: float, rtol: float = 1e-10, max_level: int = 20):
        """Reparameterize by proper time measured from ``lam0``.

        Proper time is accumulated by the trapezoid rule on a grid that is
        doubled until the total changes by less than ``rtol``; the inverse map
        is a cubic spline.
        """

        def speed(lam):
            x = np.asarray(self.position(lam), dtype=float)
            v = np.asarray(self.velocity(lam), dtype=float)
            g2 = float(v @ background.metric(x) @ v)
            if g2 <= 0.0:
                raise NonTimelikeError(f"tangent is not timelike at parameter {lam}")
            return np.sqrt(g2)

        n = 64
        grid = np.linspace(lam0, lam1, n + 1)
        sp = np.array([speed(t) for t in grid])
        total = np.trapezoid(sp, grid)
        for _ in range(max_level):
            n *= 2
            grid = np.linspace(lam0, lam1, n + 1)
            new = np.array([speed(t) for t in grid[1::2]])
            full = np.empty(n + 1)
            full[0::2] = sp
            full[1::2] = new
            sp = full
            prev, total = total, np.trapezoid(sp, grid)
            if abs(total - prev) <= rtol * abs(total):
                break
        dl = np.diff(grid)
        s_grid = np.concatenate([[0.0], np.cumsum(0.5 * (sp[1:] + sp[:-1]) * dl)])
        inverse = CubicSpline(s_grid, grid)
        pos, vel = self.position, self.velocity

        def position(s):
            return pos(float(inverse(s)))

        def velocity(s):
            lam = float(inverse(s))
            return np.asarray(vel(lam), dtype=float) / speed(lam)

        return Worldline(position, velocity, None, True, self.name + "/proper")


@dataclass(frozen=True)
class FermiData:
    """Fermi quantities at one point of a worldline (frame components).

    Spinor pieces are computed on first access.
    """

    s: float
    x: np.ndarray
    xdot: np.ndarray
    tau: np.ndarray
    nabla_tau: np.ndarray
    Phi: np.ndarray
    Phi_flat: np.ndarray
    gt_v: np.ndarray
    background: object = field(repr=False, default=None)

    @cached_property
    def phi(self):
        """Half trace of ``Phi_flat``; traceless."""
        return half_trace(self.Phi_flat)

    @cached_property
    def lam_v(self):
        return np.einsum("a,aij->ij", self.xdot, self.background.spinor_connection(self.x))

    @cached_property
    def lam4_v(self):
        return np.einsum("a,aij->ij", self.xdot, self.background.four_spinor_connection(self.x).matrix)


def fermi_data(worldline: Worldline, s: float, background) -> FermiData:
    x = np.asarray(worldline.position(s), dtype=float)
    xd = np.asarray(worldline.velocity(s), dtype=float)
    xdd = worldline.accel(s)
    theta = background.tetrad(x)
    tau = theta.T @ xd
    norm2 = float(tau @ ETA @ tau)
    if norm2 <= 0.0:
        raise NonTimelikeError(f"worldline is not timelike at s = {s} (g(v, v) = {norm2})")
    if worldline.proper_time and abs(norm2 - 1.0) > _UNIT_TOL:
        raise ValueError(f"worldline is not proper-time parameterized at s = {s} (g(v, v) = {norm2})")
    dtheta = background.tetrad_jacobian(x)
    dtau = np.einsum("a,abl,b->l", xd, dtheta, xd) + theta.T @ xdd
    gt_v = np.einsum("a,alm->lm", xd, background.h_connection(x))
    acc = dtau - gt_v @ tau
    if np.sqrt(abs(acc @ ETA @ acc)) < ACCEL_FLOOR and np.max(np.abs(acc)) < ACCEL_FLOOR:
        acc = np.zeros(4)
    phi_up = np.outer(acc, tau) - np.outer(tau, acc)
    return FermiData(s, x, xd, tau, acc, phi_up, phi_up @ ETA, gt_v, background)


def vector_fermi_coefficients(fd: FermiData):
    """``Gamma_F`` along the tangent: ``gt_v + Phi_flat``."""
    return fd.gt_v + fd.Phi_flat


def spinor_fermi_coefficients(fd: FermiData, alpha: float = 0.0):
    """``lam_F' = lam_v + phi + i alpha 1``."""
    return fd.lam_v + fd.phi + 1j * alpha * np.eye(2)


def four_spinor_fermi_coefficients(fd: FermiData, alpha: float = 0.0):
    """``lam4_v + gamma_hat(Phi)/4 + i alpha 1`` in the Weyl basis."""
    return fd.lam4_v + 0.25 * hat_gamma(fd.Phi).matrix + 1j * alpha * np.eye(4)


def fermi_derivative(X, dX, fd: FermiData):
    """``D X = nabla X + g(a, X) tau - g(tau, X) a`` from ``X`` and ``dX/ds``."""
    X = np.asarray(X)
    nabla = np.asarray(dX) - fd.gt_v @ X
    return nabla + (fd.nabla_tau @ ETA @ X) * fd.tau - (fd.tau @ ETA @ X) * fd.nabla_tau


def _coefficients(kind: str, fd: FermiData, alpha: float):
    if kind == "vector":
        return vector_fermi_coefficients(fd)
    if kind == "two-spinor":
        return spinor_fermi_coefficients(fd, alpha)
    return four_spinor_fermi_coefficients(fd, alpha)


@dataclass(frozen=True)
class Trajectory:
    kind: str
    s: np.ndarray
    states: np.ndarray
    alpha: object = 0.0
    meta: dict = field(default_factory=dict)

    @property
    def final(self):
        return self.states[-1]


def _alpha_fn(alpha):
    if callable(alpha):
        return alpha
    a = float(alpha)
    return lambda s: a


def transport(
    worldline: Worldline,
    background,
    initial,
    s0: float,
    s1: float,
    steps: int,
    kind: str = "vector",
    alpha=0.0,
) -> Trajectory:
    """Fermi-transport ``initial`` from ``s0`` to ``s1`` with fixed-step RK4.

    ``initial`` has shape ``(dim,)`` or ``(dim, k)`` (``k`` columns moved at
    once, e.g. a whole frame). ``alpha`` is a constant or a function of ``s``.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown transport kind {kind!r}; expected one of {KINDS}")
    if int(steps) != steps or steps <= 0:
        raise ValueError(f"steps must be a positive integer, got {steps!r}")
    if not s1 > s0:
        raise ValueError(f"need s1 > s0, got s0 = {s0}, s1 = {s1}")
    if not worldline.proper_time:
        raise ValueError("worldline must be proper-time parameterized; use Worldline.to_proper_time")
    y = np.asarray(initial, dtype=float if kind == "vector" else complex)
    if y.shape[0] != _DIMS[kind]:
        raise ValueError(f"{kind} state needs leading dimension {_DIMS[kind]}, got shape {y.shape}")
    if kind == "vector" and np.iscomplexobj(initial):
        raise ValueError("vector transport takes real components")
    afn = _alpha_fn(alpha)
    steps = int(steps)
    h = (s1 - s0) / steps
    s_grid = s0 + h * np.arange(steps + 1)

    def coeff(s):
        return _coefficients(kind, fermi_data(worldline, s, background), afn(s))

    out = np.empty((steps + 1,) + y.shape, dtype=y.dtype)
    out[0] = y
    m0 = coeff(s_grid[0])
    for i in range(steps):
        s = s_grid[i]
        mh = coeff(s + 0.5 * h)
        m1 = coeff(s_grid[i + 1])
        k1 = m0 @ y
        k2 = mh @ (y + 0.5 * h * k1)
        k3 = mh @ (y + 0.5 * h * k2)
        k4 = m1 @ (y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[i + 1] = y
        m0 = m1
    return Trajectory(kind, s_grid, out, alpha)


def richardson_error(worldline, background, initial, s0, s1, steps, kind="vector", alpha=0.0):
    """Final-state error estimate ``|y_h - y_{h/2}| / 15`` for RK4, plus both runs."""
    coarse = transport(worldline, background, initial, s0, s1, steps, kind, alpha)
    fine = transport(worldline, background, initial, s0, s1, 2 * steps, kind, alpha)
    err = float(np.max(np.abs(coarse.final - fine.final))) / 15.0
    return err, coarse, fine


def product_rule_residual(worldline, background, X, Y, s: float, h: float = 1e-3) -> float:
    """``|d/ds g(X, Y) - g(D X, Y) - g(X, D Y)|`` with centered differences of step ``h``.

    ``X`` and ``Y`` are callables returning frame components along the curve.
    """
    fd = fermi_data(worldline, s, background)

    def g(a, b):
        return float(np.asarray(a) @ ETA @ np.asarray(b))

    xs, ys = np.asarray(X(s)), np.asarray(Y(s))
    dx = (np.asarray(X(s + h)) - np.asarray(X(s - h))) / (2.0 * h)
    dy = (np.asarray(Y(s + h)) - np.asarray(Y(s - h))) / (2.0 * h)
    dgs = (g(X(s + h), Y(s + h)) - g(X(s - h), Y(s - h))) / (2.0 * h)
    return abs(dgs - g(fermi_derivative(xs, dx, fd), ys) - g(xs, fermi_derivative(ys, dy, fd)))


def congruence_extension(Phi_flat, tau, v):
    """``v _| Phi_flat := g(v, tau) tau _| Phi_flat``, an element of End H."""
    return float(np.asarray(v) @ ETA @ np.asarray(tau)) * np.asarray(Phi_flat)


def adapted_frame(tau):
    """Orthonormal frame (columns) with first column ``tau``, by Gram-Schmidt from the chart frame."""
    tau = np.asarray(tau, dtype=float)
    n2 = tau @ ETA @ tau
    if n2 <= 0.0:
        raise NonTimelikeError("adapted frame needs a timelike vector")
    cols = [tau / np.sqrt(n2)]
    for k in range(1, 4):
        e = np.zeros(4)
        e[k] = 1.0
        for c in cols:
            e = e - (c @ ETA @ e) / (c @ ETA @ c) * c
        cols.append(e / np.sqrt(abs(e @ ETA @ e)))
    return np.stack(cols, axis=1)


def rest_angle(X, tau, plane=(1, 2)):
    """Angle of ``X`` in a spatial coordinate plane after boosting ``tau`` to rest."""
    rest = boost_matrix(tau, np.array([1.0, 0.0, 0.0, 0.0])) @ np.asarray(X, dtype=float)
    return float(np.arctan2(rest[plane[1]], rest[plane[0]]))


def precession_angle(states, taus, plane=(1, 2)):
    """Accumulated rest-frame rotation angle of transported vectors, unwrapped.

    ``states`` and ``taus`` are sequences of frame components; the result is
    relative to the first sample.
    """
    ang = np.array([rest_angle(X, t, plane) for X, t in zip(states, taus)])
    ang = np.unwrap(ang)
    return ang - ang[0]
