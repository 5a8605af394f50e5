"""Spacetime backgrounds (tetrad plus connections) and canonical worldlines."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable

import numpy as np
from scipy import ndimage

from .connection_calculus import (
    DegenerateTetradError,
    four_spinor_connection,
    reconstruct_spinor,
    tetrad_jacobian_fd,
)
from .fermi_transport import NonTimelikeError, Worldline
from .spinor_algebra import ETA

_PAIRS = list(combinations(range(4), 2))


def _zero4(x):
    return np.zeros(4)


def _zero_gt(x):
    return np.zeros((4, 4, 4))


@dataclass(frozen=True)
class Background:
    """Tetrad ``Theta[a, lambda]`` and connection fields as closures of a chart point.

    ``h_connection(x)[a]`` holds mixed components ``gt_a^lambda_mu``;
    ``em_potential`` is ``Y_a`` and ``dilaton`` is ``G_a``.
    """

    tetrad: Callable
    tetrad_jacobian: Callable
    h_connection: Callable
    em_potential: Callable = _zero4
    dilaton: Callable = _zero4
    name: str = "background"

    def metric(self, x):
        th = self.tetrad(np.asarray(x, dtype=float))
        return th @ ETA @ th.T

    def spinor_connection(self, x):
        x = np.asarray(x, dtype=float)
        return reconstruct_spinor(self.dilaton(x), self.em_potential(x), self.h_connection(x), validate=False)

    def four_spinor_connection(self, x):
        x = np.asarray(x, dtype=float)
        return four_spinor_connection(self.em_potential(x), self.h_connection(x))


def minkowski() -> Background:
    return Background(
        tetrad=lambda x: np.eye(4),
        tetrad_jacobian=lambda x: np.zeros((4, 4, 4)),
        h_connection=_zero_gt,
        name="minkowski",
    )


def _antisym_basis():
    # raised generators E^{lm} = e_l e_m - e_m e_l for l < m
    out = []
    for l, m in _PAIRS:
        e = np.zeros((4, 4))
        e[l, m], e[m, l] = 1.0, -1.0
        out.append(e)
    return np.array(out)


_ANTISYM = _antisym_basis()
# unknown k = 6 a + pair, mixed components gt[a] = E @ ETA
_UNKNOWNS = np.zeros((24, 4, 4, 4))
for _a in range(4):
    for _p in range(6):
        _UNKNOWNS[6 * _a + _p, _a] = _ANTISYM[_p] @ ETA


def levi_civita_at(theta, dtheta):
    """Torsion-free, metric ``gt`` at a point, from ``Theta`` and ``d_a Theta_b^lambda``.

    Solves the 24 equations ``d_[a Theta_b]^lambda + Theta_[a^mu gt_b]^lambda_mu = 0``
    for the 24 antisymmetric unknowns.
    """
    theta = np.asarray(theta, dtype=float)
    if abs(np.linalg.det(theta)) < 1e-12:
        raise DegenerateTetradError("tetrad is degenerate")
    # tg[k, l, a, b] = Theta_a^mu gt_k,b^l_mu
    tg = np.einsum("am,kblm->klab", theta, _UNKNOWNS)
    lin = 0.5 * (tg - np.swapaxes(tg, 2, 3))
    rhs = -0.5 * (np.einsum("abl->lab", dtheta) - np.einsum("bal->lab", dtheta))
    ia, ib = zip(*_PAIRS)
    mat = lin[:, :, ia, ib].reshape(24, 24).T
    sol = np.linalg.solve(mat, rhs[:, ia, ib].reshape(24))
    return np.einsum("k,kalm->alm", sol, _UNKNOWNS)


def levi_civita_h_connection(tetrad: Callable, jacobian: Callable | None = None, h: float = 1e-4) -> Callable:
    """Return ``x -> gt`` solving the zero-torsion equation for ``tetrad``.

    Without an analytic ``jacobian`` the tetrad is differenced with step ``h``.
    """

    def gt(x):
        x = np.asarray(x, dtype=float)
        d = jacobian(x) if jacobian is not None else tetrad_jacobian_fd(tetrad, x, h)
        return levi_civita_at(tetrad(x), d)

    return gt


def _isotropic_parts(M: float, x):
    x = np.asarray(x, dtype=float)
    rho = float(np.linalg.norm(x[1:]))
    if rho <= 0.5 * M:
        raise ValueError(f"point at isotropic radius {rho} is at or inside the horizon radius {0.5 * M}")
    q = M / (2.0 * rho)
    A = (1.0 - q) / (1.0 + q)
    B = (1.0 + q) ** 2
    dA = 2.0 * q / (rho * (1.0 + q) ** 2)
    dB = -2.0 * q * (1.0 + q) / rho
    return x, rho, A, B, dA, dB


def schwarzschild_like(M: float) -> Background:
    """Exterior Schwarzschild field in isotropic Cartesian coordinates.

    ``Theta = diag(A, B, B, B)`` with ``q = M / 2 rho``, ``A = (1 - q)/(1 + q)``
    and ``B = (1 + q)^2``; the horizon sits at ``rho = M / 2``. ``M = 0``
    returns :func:`minkowski`.
    """
    if M < 0:
        raise ValueError("mass parameter must be non-negative")
    if M == 0:
        return minkowski()

    def tetrad(x):
        _, _, A, B, _, _ = _isotropic_parts(M, x)
        return np.diag([A, B, B, B])

    def jacobian(x):
        x, rho, _, _, dA, dB = _isotropic_parts(M, x)
        out = np.zeros((4, 4, 4))
        for j in range(1, 4):
            n = x[j] / rho
            out[j, 0, 0] = dA * n
            for k in range(1, 4):
                out[j, k, k] = dB * n
        return out

    return Background(
        tetrad=tetrad,
        tetrad_jacobian=jacobian,
        h_connection=levi_civita_h_connection(tetrad, jacobian),
        name=f"schwarzschild_like(M={M})",
    )


def sampled_background(axes, samples, static: bool = False, h: float = 1e-4, name: str = "sampled") -> Background:
    """Background from tetrad samples on a uniform chart grid.

    ``axes`` holds one increasing, evenly spaced 1-D array per sampled
    coordinate: four of them, or three spatial ones when ``static`` (the
    tetrad then does not depend on ``x^0``). ``samples`` has shape
    ``(*grid, 4, 4)``. Off-grid points use cubic B-spline interpolation, whose
    error is ``O(dx^4)`` in the tetrad and ``O(dx^3)`` in its derivative.
    The Jacobian is a centered difference of the interpolant with step ``h``
    and the H-connection is the Levi-Civita solution of that Jacobian, so
    the connection inherits the ``O(dx^3)`` error. Queries outside the grid
    (less ``2 h`` at the edges) raise ``ValueError``.
    """
    axes = [np.asarray(a, dtype=float) for a in axes]
    nd = 3 if static else 4
    if len(axes) != nd:
        raise ValueError(f"expected {nd} axes, got {len(axes)}")
    samples = np.asarray(samples, dtype=float)
    grid = tuple(len(a) for a in axes)
    if samples.shape != grid + (4, 4):
        raise ValueError(f"samples must have shape {grid + (4, 4)}, got {samples.shape}")
    origin, step = [], []
    for i, a in enumerate(axes):
        d = np.diff(a)
        if len(a) < 4 or np.any(d <= 0) or np.ptp(d) > 1e-9 * d[0]:
            raise ValueError(f"axis {i} must be increasing, evenly spaced and have at least 4 points")
        origin.append(a[0])
        step.append(d[0])
    origin, step = np.array(origin), np.array(step)
    coeffs = [[ndimage.spline_filter(samples[..., i, j], order=3, mode="nearest") for j in range(4)] for i in range(4)]
    lo, hi = np.array([a[0] for a in axes]), np.array([a[-1] for a in axes])

    def tetrad(x):
        x = np.asarray(x, dtype=float)
        q = x[1:] if static else x
        if np.any(q < lo - 1e-12) or np.any(q > hi + 1e-12):
            raise ValueError(f"point {x.tolist()} lies outside the sampled grid")
        idx = ((q - origin) / step)[:, None]
        out = np.empty((4, 4))
        for i in range(4):
            for j in range(4):
                out[i, j] = ndimage.map_coordinates(coeffs[i][j], idx, order=3, mode="nearest", prefilter=False)[0]
        return out

    def jacobian(x):
        return tetrad_jacobian_fd(tetrad, x, h)

    return Background(
        tetrad=tetrad,
        tetrad_jacobian=jacobian,
        h_connection=levi_civita_h_connection(tetrad, jacobian),
        name=name,
    )


def static_acceleration(M: float, x):
    """Frame components of ``nabla_tau tau`` for the static observer at ``x``."""
    x, rho, A, B, dA, _ = _isotropic_parts(M, x)
    out = np.zeros(4)
    out[1:] = x[1:] / rho * dA / (A * B)
    return out


def random_spinor_field(seed: int = 0, amplitude: float = 0.5, modes: int = 3) -> Callable:
    """Smooth complex ``x -> lam`` (shape (4, 2, 2)) built from random plane waves."""
    rng = np.random.default_rng(seed)
    shape = (modes, 4, 2, 2)
    amp = amplitude * (rng.normal(size=shape) + 1j * rng.normal(size=shape)) / modes
    k = rng.normal(size=(modes, 4))
    ph = rng.uniform(0.0, 2.0 * np.pi, size=modes)
    const = amplitude * (rng.normal(size=(4, 2, 2)) + 1j * rng.normal(size=(4, 2, 2)))

    def lam(x):
        w = np.sin(k @ np.asarray(x, dtype=float) + ph)
        return const + np.einsum("m,maij->aij", w, amp)

    return lam


def _static_metric_parts(background, x):
    g = background.metric(x)
    if np.max(np.abs(g - np.diag(np.diag(g)))) > 1e-12:
        raise ValueError("canonical worldlines need a diagonal metric")
    return np.diag(g)


def worldline(kind: str, background: Background | None = None, **params) -> Worldline:
    """Canonical proper-time worldlines.

    * ``static``: at rest at spatial point ``x0`` (default ``(0, 0, 0)``);
    * ``circular``: radius ``radius``, coordinate angular velocity ``omega``
      in the (1, 2) plane about the spatial origin (diagonal metrics that
      depend only on the radius along the orbit);
    * ``rindler``: hyperbolic motion with proper acceleration ``a`` along
      axis 1 in a flat chart.
    """
    bg = background if background is not None else minkowski()
    if kind == "static":
        x0 = np.concatenate([[0.0], np.asarray(params.get("x0", (0.0, 0.0, 0.0)), dtype=float)])
        g00 = _static_metric_parts(bg, x0)[0]
        if g00 <= 0:
            raise NonTimelikeError("static observer is not timelike here")
        u0 = 1.0 / np.sqrt(g00)
        return Worldline(
            lambda s: x0 + np.array([u0 * s, 0.0, 0.0, 0.0]),
            lambda s: np.array([u0, 0.0, 0.0, 0.0]),
            lambda s: np.zeros(4),
            True,
            "static",
        )
    if kind == "circular":
        R = float(params["radius"])
        w = float(params["omega"])
        if R <= 0:
            raise ValueError("circular orbit needs a positive radius")
        d = _static_metric_parts(bg, np.array([0.0, R, 0.0, 0.0]))
        norm = d[0] + d[1] * (R * w) ** 2
        if norm <= 0:
            raise NonTimelikeError(f"circular orbit with radius {R}, omega {w} is not timelike")
        k = 1.0 / np.sqrt(norm)

        def pos(s):
            t = k * s
            return np.array([t, R * np.cos(w * t), R * np.sin(w * t), 0.0])

        def vel(s):
            t = k * s
            return k * np.array([1.0, -R * w * np.sin(w * t), R * w * np.cos(w * t), 0.0])

        def acc(s):
            t = k * s
            return k * k * np.array([0.0, -R * w * w * np.cos(w * t), -R * w * w * np.sin(w * t), 0.0])

        return Worldline(pos, vel, acc, True, "circular")
    if kind == "rindler":
        a = float(params["a"])
        if a <= 0:
            raise ValueError("rindler worldline needs a positive acceleration")
        return Worldline(
            lambda s: np.array([np.sinh(a * s) / a, np.cosh(a * s) / a, 0.0, 0.0]),
            lambda s: np.array([np.cosh(a * s), np.sinh(a * s), 0.0, 0.0]),
            lambda s: a * np.array([np.sinh(a * s), np.cosh(a * s), 0.0, 0.0]),
            True,
            "rindler",
        )
    raise ValueError(f"unknown worldline kind {kind!r}; expected static, circular or rindler")


def circular_period(radius: float, omega: float, background: Background | None = None) -> float:
    """Proper time for one coordinate revolution of the circular worldline."""
    bg = background if background is not None else minkowski()
    d = _static_metric_parts(bg, np.array([0.0, radius, 0.0, 0.0]))
    return 2.0 * np.pi / omega * np.sqrt(d[0] + d[1] * (radius * omega) ** 2)
