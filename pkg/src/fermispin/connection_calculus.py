"""Spinor connections and their induced pieces.

Conventions used throughout the package:

* a 2-spinor connection at a point is ``lam[a]``, a (4, 2, 2) complex array
  with ``nabla_a s = d_a s - lam[a] @ s``;
* ``G_a`` and ``Y_a`` are the real and imaginary halves of ``tr lam[a] / 2``;
* the induced H-connection ``gt[a]`` is real with mixed Pauli-frame components
  ``gt[a][lambda, mu]``; its raised form ``gt[a] @ ETA`` is antisymmetric;
* curvature is ``R_ab = [nabla_a, nabla_b] = -(d_a lam_b - d_b lam_a - [lam_a, lam_b])``
  and ``(dG)_ab = (d_a G_b - d_b G_a) / 2``.
"""

from __future__ import annotations

import numpy as np

from .dirac_algebra import GAMMA_PRODUCTS, EndW
from .spinor_algebra import ETA, SIGMA, pauli_basis, pauli_components

_TAU = pauli_basis()
# sigma_l @ sigma_m, shape (4, 4, 2, 2)
_SIGMA_PRODUCTS = np.einsum("lij,mjk->lmik", SIGMA, SIGMA)


class DegenerateTetradError(ValueError):
    """Raised when a tetrad is (numerically) singular."""


class InvalidConnectionError(ValueError):
    """Raised when H-connection coefficients are not real, antisymmetric and traceless."""


def induced_scalars(lam):
    """Return ``(G, Y)`` with ``tr lam = 2 (G + i Y)``."""
    t = np.trace(np.asarray(lam, dtype=complex), axis1=-2, axis2=-1)
    return 0.5 * t.real, 0.5 * t.imag


def induced_h_action(lam):
    """Components of ``X -> lam X + X lam^H`` on H, i.e. ``lam (x) 1 + 1 (x) conj(lam)``."""
    lam = np.asarray(lam, dtype=complex)
    lam_h = np.conj(np.swapaxes(lam, -1, -2))
    x = lam[..., None, :, :] @ _TAU + _TAU @ lam_h[..., None, :, :]
    return np.swapaxes(pauli_components(x).real, -1, -2)


def induced_h_connection(lam):
    """Real Lorentz part ``gt = lam (x) 1 + 1 (x) conj(lam) - 2 G`` (mixed components)."""
    g, _ = induced_scalars(lam)
    return induced_h_action(lam) - 2.0 * np.asarray(g)[..., None, None] * np.eye(4)


def half_trace(mixed):
    """Conjugate-index half trace of an element of End H, as a 2x2 complex matrix.

    With ``X^{A Adot}_{B Bdot}`` the spinor form of ``mixed``, returns
    ``X^{A Adot}_{B Adot} / 2``, which reduces to ``mixed[l, m] sigma_l sigma_m / 4``.
    """
    return 0.25 * np.einsum("...lm,lmik->...ik", np.asarray(mixed, dtype=complex), _SIGMA_PRODUCTS)


def raise_index(mixed):
    """``X^{lambda mu} = X^lambda_nu eta^{nu mu}``."""
    return np.asarray(mixed) @ ETA


def check_h_connection(gt, atol: float = 1e-10):
    """Raise :class:`InvalidConnectionError` unless ``gt`` is real, antisymmetric and traceless."""
    gt = np.asarray(gt)
    scale = max(1.0, float(np.max(np.abs(gt)))) if gt.size else 1.0
    if np.iscomplexobj(gt) and np.max(np.abs(gt.imag), initial=0.0) > atol * scale:
        raise InvalidConnectionError("H-connection coefficients must be real")
    up = raise_index(gt.real)
    if np.max(np.abs(up + np.swapaxes(up, -1, -2)), initial=0.0) > atol * scale:
        raise InvalidConnectionError("raised H-connection coefficients must be antisymmetric")
    if np.max(np.abs(np.trace(gt.real, axis1=-2, axis2=-1)), initial=0.0) > atol * scale:
        raise InvalidConnectionError("H-connection coefficients must be traceless")
    return gt.real


def reconstruct_spinor(G, Y, gt, validate: bool = True):
    """Invert the induced data: ``lam = (G + i Y) 1 + half_trace(gt)``."""
    if validate:
        gt = check_h_connection(gt)
    gy = np.asarray(G) + 1j * np.asarray(Y)
    return gy[..., None, None] * np.eye(2) + half_trace(gt)


def four_spinor_connection(Y, gt) -> EndW:
    """Dirac-spinor connection ``i Y 1 + gt^{lambda mu} gamma_lambda gamma_mu / 4`` (Weyl basis).

    On ``U`` it is ``reconstruct_spinor(0, Y, gt)``; on the dual-conjugate
    block it is minus the conjugate transpose of that.
    """
    gt = np.asarray(gt, dtype=float)
    y = np.asarray(Y, dtype=float)
    m = 0.25 * np.einsum("...lm,lmik->...ik", raise_index(gt), GAMMA_PRODUCTS)
    return EndW(m + 1j * y[..., None, None] * np.eye(4))


def _check_tetrad(theta, tol: float = 1e-12):
    theta = np.asarray(theta, dtype=float)
    d = np.linalg.det(theta)
    scale = max(1.0, float(np.max(np.abs(theta)))) ** 4
    if np.any(np.abs(d) <= tol * scale):
        raise DegenerateTetradError(f"tetrad is degenerate (det = {d})")
    return theta


def spacetime_connection(theta, gt, G=None):
    """Frame components ``Gamma_a^lambda_mu = gt_a^lambda_mu + 2 G_a delta``.

    ``theta[a, lambda]`` is only checked for non-degeneracy; the frame
    components do not depend on it otherwise.
    """
    _check_tetrad(theta)
    gt = np.asarray(gt, dtype=float)
    g = np.zeros(gt.shape[:-2]) if G is None else np.asarray(G, dtype=float)
    return gt + 2.0 * g[..., None, None] * np.eye(4)


def coordinate_connection(theta, dtheta, gt, G=None):
    """Chart coefficients ``C_a^c_b`` with ``nabla_a X^c = d_a X^c - C_a^c_b X^b``.

    Obtained from ``nabla Theta = 0``:
    ``C_a^c_b = Theta^c_lambda (Gamma_a^lambda_mu Theta_b^mu - d_a Theta_b^lambda)``.
    ``dtheta[a, b, lambda] = d_a Theta_b^lambda``. For a Levi-Civita
    connection this equals minus the Christoffel symbols ``Gamma^c_ab``.
    """
    theta = _check_tetrad(theta)
    gam = spacetime_connection(theta, gt, G)
    inv = np.linalg.inv(theta)  # inv[lambda, c] = Theta^c_lambda
    inner = np.einsum("alm,bm->alb", gam, theta) - np.einsum("abl->alb", np.asarray(dtheta))
    return np.einsum("lc,alb->acb", inv, inner)


def tetrad_jacobian_fd(theta_fn, x, h: float = 1e-4):
    """Centered-difference ``d_a Theta_b^lambda`` of a tetrad field."""
    x = np.asarray(x, dtype=float)
    out = np.empty((4, 4, 4))
    for a in range(4):
        e = np.zeros(4)
        e[a] = h
        out[a] = (np.asarray(theta_fn(x + e)) - np.asarray(theta_fn(x - e))) / (2.0 * h)
    return out


def torsion_from_parts(theta, dtheta, gt, G=None):
    """``T^c_ab`` from pointwise data, ``dtheta[a, b, lambda] = d_a Theta_b^lambda``.

    Solves ``Theta_c^lambda T^c_ab = d_[a Theta_b]^lambda
    + Theta_[a^mu gt_b]^lambda_mu + 2 Theta_[a^lambda G_b]``.
    """
    theta = _check_tetrad(theta)
    dtheta = np.asarray(dtheta, dtype=float)
    gt = np.asarray(gt, dtype=float)
    g = np.zeros(4) if G is None else np.asarray(G, dtype=float)
    s = 0.5 * (np.einsum("abl->lab", dtheta) - np.einsum("bal->lab", dtheta))
    tg = np.einsum("am,blm->lab", theta, gt)
    s += 0.5 * (tg - np.swapaxes(tg, 1, 2))
    s += np.einsum("al,b->lab", theta, g) - np.einsum("bl,a->lab", theta, g)
    # theta.T[lambda, c] T[c, a, b] = s[lambda, a, b]
    return np.linalg.solve(theta.T, s.reshape(4, 16)).reshape(4, 4, 4)


def torsion(theta_fn, gt_fn, x, G_fn=None, h: float = 1e-4, jacobian_fn=None):
    """Torsion ``T^c_ab`` at ``x`` of fields given as callables.

    The tetrad derivative is taken from ``jacobian_fn`` when supplied,
    otherwise by centered differences with step ``h`` (error ``O(h^2)``).
    """
    x = np.asarray(x, dtype=float)
    dtheta = jacobian_fn(x) if jacobian_fn is not None else tetrad_jacobian_fd(theta_fn, x, h)
    g = None if G_fn is None else G_fn(x)
    return torsion_from_parts(theta_fn(x), dtheta, gt_fn(x), g)


def _commutator(a, b):
    return a @ b - b @ a


def curvature(lam_a, lam_b, d_a_lam_b, d_b_lam_a):
    """``R_ab = -(d_a lam_b - d_b lam_a - [lam_a, lam_b])``; also used for H-connections."""
    return -(d_a_lam_b - d_b_lam_a - _commutator(lam_a, lam_b))


def _d2(f, axis, h):
    """Second-order centered first derivative on interior points (drops 1 per side)."""
    n = f.shape[axis]
    hi = np.take(f, range(2, n), axis=axis)
    lo = np.take(f, range(0, n - 2), axis=axis)
    return (hi - lo) / (2.0 * h)


def _d4(f, axis, h):
    """Fourth-order centered first derivative on interior points (drops 2 per side)."""
    n = f.shape[axis]

    def sl(k):
        return np.take(f, range(2 + k, n - 2 + k), axis=axis)

    return (-sl(2) + 8.0 * sl(1) - 8.0 * sl(-1) + sl(-2)) / (12.0 * h)


def _interior(f, width, axes=(0, 1)):
    idx = [slice(None)] * f.ndim
    for ax in axes:
        idx[ax] = slice(width, f.shape[ax] - width)
    return f[tuple(idx)]


def curvature_relation_check(lam_fn, x, plane=(0, 1), h: float = 0.01, n: int = 17, reduce: str = "max") -> float:
    """Residual of ``R = -2 (dG + i dY) 1 + half_trace(R~)`` on an ``n x n`` grid.

    ``lam_fn(x)`` returns the (4, 2, 2) coefficients at a chart point. The
    grid of spacing ``h`` is centered at ``x`` in the coordinate ``plane``.
    The left side uses second-order centered differences of ``lam``; the
    right side is assembled from the induced ``G, Y, gt`` with fourth-order
    stencils. The identity holds pointwise in the exact derivatives, so the
    residual is the ``O(h^2)`` truncation error of the left side.

    ``reduce="max"`` returns the max over interior points. The grid shrinks
    with ``h``, so that max also picks up an ``O(h^3)`` drift term and its
    step-halving ratio approaches 4 only slowly; ``reduce="center"``
    returns the residual at ``x`` alone, which is the clean order probe.
    """
    if reduce not in ("max", "center"):
        raise ValueError(f"reduce must be 'max' or 'center', got {reduce!r}")
    if n < 5:
        raise ValueError(f"grid needs at least 5 points per side for the stencils, got {n}")
    a, b = plane
    if a == b or not (0 <= a < 4 and 0 <= b < 4):
        raise ValueError(f"invalid coordinate plane {plane!r}")
    x = np.asarray(x, dtype=float)
    offs = (np.arange(n) - (n - 1) / 2) * h
    lam = np.empty((n, n, 4, 2, 2), dtype=complex)
    for i, oi in enumerate(offs):
        for j, oj in enumerate(offs):
            p = x.copy()
            p[a] += oi
            p[b] += oj
            lam[i, j] = lam_fn(p)

    # left side, 2nd order; trim to the 4th-order interior
    d_a_lam_b = _interior(_d2(lam[..., b, :, :], 0, h), 1, axes=(1,))
    d_b_lam_a = _interior(_d2(lam[..., a, :, :], 1, h), 1, axes=(0,))
    core = _interior(lam, 1)
    lhs = curvature(core[..., a, :, :], core[..., b, :, :], d_a_lam_b, d_b_lam_a)
    lhs = _interior(lhs, 1)

    g, y = induced_scalars(lam)
    gt = induced_h_connection(lam)

    def d4pair(f):
        fa = _interior(_d4(f[:, :, b], 0, h), 2, axes=(1,))
        fb = _interior(_d4(f[:, :, a], 1, h), 2, axes=(0,))
        return fa, fb

    ga_b, gb_a = d4pair(g)
    ya_b, yb_a = d4pair(y)
    dg = 0.5 * (ga_b - gb_a)
    dy = 0.5 * (ya_b - yb_a)
    gt_a_b, gt_b_a = d4pair(gt)
    gt_core = _interior(gt, 2)
    r_tilde = curvature(gt_core[:, :, a], gt_core[:, :, b], gt_a_b, gt_b_a)
    rhs = -2.0 * (dg + 1j * dy)[..., None, None] * np.eye(2) + half_trace(r_tilde)
    res = np.abs(lhs - rhs)
    if reduce == "center":
        m = res.shape[0] // 2
        return float(np.max(res[m, m]))
    return float(np.max(res))


def connection_difference_decompose(lam, lam2):
    """Split ``theta = lam - lam2`` as ``(g + i alpha) 1 + phi`` with ``tr phi = 0``.

    Returns ``(alpha, phi, real_trace, Phi_flat)``: ``real_trace`` is ``g``
    (nonzero only if the two connections induce different ``G``) and
    ``Phi_flat`` is the induced difference of H-connections.
    """
    theta = np.asarray(lam, dtype=complex) - np.asarray(lam2, dtype=complex)
    g, alpha = induced_scalars(theta)
    phi = theta - (g + 1j * alpha)[..., None, None] * np.eye(2)
    return alpha, phi, g, induced_h_action(phi)
