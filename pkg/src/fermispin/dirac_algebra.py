"""Dirac spinors ``W = U (+) conj(U)*`` and the Clifford map.

A Dirac spinor ``psi = (u, chi)`` is stored as four complex Weyl-basis
components.  The Weyl basis is ``(zeta_1, zeta_2, -zbar^1, -zbar^2)``, so
``psi = (u^1, u^2, -chi_1, -chi_2)``.  The Dirac basis is

    zeta'_1 = (zeta_1 - zeta_3)/sqrt 2     zeta'_3 = (zeta_1 + zeta_3)/sqrt 2
    zeta'_2 = (zeta_2 - zeta_4)/sqrt 2     zeta'_4 = (zeta_2 + zeta_4)/sqrt 2

In it ``gamma(tau_0) = diag(1, 1, -1, -1)`` and ``k`` has signature (+,+,-,-).
The Weyl-basis ``gamma(tau_0)`` is ``-[[0, 1], [1, 0]]``; the overall sign
comes from the minus signs in the Weyl basis vectors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spinor_algebra import (
    ETA,
    RICCI_FORM,
    SQRT2,
    SymplecticForm,
    eps_flat,
    eps_sharp,
    g_bilinear,
    pauli_basis,
    pauli_to_herm,
)

WEYL = "weyl"
DIRAC = "dirac"
BASES = (WEYL, DIRAC)

#: Columns are the Dirac basis vectors in Weyl components.
DIRAC_FROM_WEYL = np.array(
    [
        [1, 0, 1, 0],
        [0, 1, 0, 1],
        [-1, 0, 1, 0],
        [0, -1, 0, 1],
    ],
    dtype=complex,
) / SQRT2

#: ``gamma_hat(x ^ y) = HAT_GAMMA_SIGN * (gamma(x) gamma(y) - gamma(y) gamma(x)) / 2``,
#: fixed by requiring ``gamma_hat(Phi) / 4`` to equal ``(phi, -phi_bar*)``.
HAT_GAMMA_SIGN = +1

#: ``gamma_eta @ gamma_eta`` is this multiple of the identity.
GAMMA_ETA_SQUARE = -1

#: Applying time reversal twice multiplies by this sign.
TIME_REVERSAL_SQUARE = -1


def _check_basis(basis: str) -> str:
    if basis not in BASES:
        raise ValueError(f"unknown basis {basis!r}; expected one of {BASES}")
    return basis


@dataclass(frozen=True, eq=False)
class EndW:
    """Endomorphism of ``W``: a ``(..., 4, 4)`` complex matrix tagged with its basis."""

    matrix: np.ndarray
    basis: str = WEYL

    def __post_init__(self):
        _check_basis(self.basis)
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape[-2:] != (4, 4):
            raise ValueError(f"EndW needs trailing shape (4, 4), got {m.shape}")
        object.__setattr__(self, "matrix", m)

    def _same(self, other: EndW):
        if self.basis != other.basis:
            raise ValueError(f"cannot combine {self.basis!r} and {other.basis!r} operators")

    def __matmul__(self, other):
        if isinstance(other, EndW):
            self._same(other)
            return EndW(self.matrix @ other.matrix, self.basis)
        return self.matrix @ np.asarray(other)

    def __add__(self, other):
        if isinstance(other, EndW):
            self._same(other)
            return EndW(self.matrix + other.matrix, self.basis)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, EndW):
            self._same(other)
            return EndW(self.matrix - other.matrix, self.basis)
        return NotImplemented

    def __neg__(self):
        return EndW(-self.matrix, self.basis)

    def __mul__(self, c):
        c = np.asarray(c)
        return EndW(c[..., None, None] * self.matrix, self.basis)

    __rmul__ = __mul__

    def to(self, basis: str) -> EndW:
        return basis_change(self, self.basis, basis)

    def trace(self):
        return np.trace(self.matrix, axis1=-2, axis2=-1)

    def norm(self) -> float:
        """Largest absolute component."""
        return float(np.max(np.abs(self.matrix)))

    @classmethod
    def identity(cls, basis: str = WEYL) -> EndW:
        return cls(np.eye(4), basis)


def weyl_components(u, chi):
    """Weyl components of ``(u, chi)`` with ``chi`` given as ``(chi_1, chi_2)``."""
    u = np.asarray(u, dtype=complex)
    chi = np.asarray(chi, dtype=complex)
    return np.concatenate([u, -chi], axis=-1)


def split(psi):
    """Inverse of :func:`weyl_components`: returns ``(u, chi)``."""
    psi = np.asarray(psi, dtype=complex)
    return psi[..., :2], -psi[..., 2:]


def block_endw(upper, lower) -> EndW:
    """Block-diagonal operator acting as ``upper`` on ``u`` and ``lower`` on ``chi``.

    The Weyl sign flip on the ``chi`` slots cancels for block-diagonal maps.
    """
    upper = np.asarray(upper, dtype=complex)
    lower = np.asarray(lower, dtype=complex)
    shape = np.broadcast_shapes(upper.shape[:-2], lower.shape[:-2])
    m = np.zeros(shape + (4, 4), dtype=complex)
    m[..., :2, :2] = upper
    m[..., 2:, 2:] = lower
    return EndW(m)


def gamma(y, eps: SymplecticForm = RICCI_FORM) -> EndW:
    """Clifford map ``gamma(y)(u, chi) = sqrt2 (y _| chi, u _| y_flat)``.

    ``y`` is any element of ``U (x) conj(U)`` given as a (..., 2, 2) matrix.
    """
    y = np.asarray(y, dtype=complex)
    # y_flat[B, Bdot] = eps_AB conj(eps)_AdotBdot y^{A Adot}
    y_flat = np.einsum("ab,cd,...ac->...bd", eps.lower, np.conj(eps.lower), y)
    m = np.zeros(y.shape[:-2] + (4, 4), dtype=complex)
    m[..., :2, 2:] = -SQRT2 * y
    m[..., 2:, :2] = -SQRT2 * np.swapaxes(y_flat, -1, -2)
    return EndW(m)


def gamma_of_vector(x) -> EndW:
    """``gamma`` of the vector with Pauli components ``x``."""
    return gamma(pauli_to_herm(np.asarray(x, dtype=complex)))


#: ``gamma_lambda = gamma(tau_lambda)`` in the Weyl basis, shape (4, 4, 4).
GAMMAS = gamma(pauli_basis()).matrix

#: ``gamma_lambda @ gamma_mu``, shape (4, 4, 4, 4).
GAMMA_PRODUCTS = np.einsum("lij,mjk->lmik", GAMMAS, GAMMAS)


def gamma_matrices(basis: str = WEYL) -> list[EndW]:
    return [EndW(g).to(basis) for g in GAMMAS]


def clifford_defect(y, y2) -> EndW:
    """``gamma(y) gamma(y') + gamma(y') gamma(y) - 2 g(y, y') 1``; vanishes identically."""
    a, b = gamma(y), gamma(y2)
    return a @ b + b @ a - EndW.identity() * (2.0 * g_bilinear(y, y2))


#: Gram matrix of ``k`` in Weyl components: ``k(psi, phi) = psi^H K phi``.
K_GRAM = -np.array(
    [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]],
    dtype=complex,
)


def k_product(psi, phi) -> complex:
    """``k((u, chi), (u', chi')) = <conj(chi), u'> + <chi', conj(u)>``.

    Antilinear in the first slot.
    """
    u, chi = split(psi)
    u2, chi2 = split(phi)
    return np.sum(np.conj(chi) * u2, axis=-1) + np.sum(chi2 * np.conj(u), axis=-1)


def dirac_adjoint(psi):
    """Covector ``(conj(chi), conj(u))`` as a row acting on Weyl components.

    ``dirac_adjoint(psi) @ phi == k_product(psi, phi)``.
    """
    return np.conj(np.asarray(psi, dtype=complex)) @ K_GRAM


def basis_change(obj, src: str, dst: str):
    """Convert spinor components or an :class:`EndW` between bases."""
    _check_basis(src)
    _check_basis(dst)
    if isinstance(obj, EndW):
        if obj.basis != src:
            raise ValueError(f"operator is tagged {obj.basis!r}, not {src!r}")
        if src == dst:
            return obj
        s = DIRAC_FROM_WEYL
        if dst == DIRAC:
            return EndW(s.conj().T @ obj.matrix @ s, DIRAC)
        return EndW(s @ obj.matrix @ s.conj().T, WEYL)
    psi = np.asarray(obj, dtype=complex)
    if src == dst:
        return psi
    if dst == DIRAC:
        return np.einsum("ji,...j->...i", DIRAC_FROM_WEYL.conj(), psi)
    return np.einsum("ij,...j->...i", DIRAC_FROM_WEYL, psi)


def gamma_eta() -> EndW:
    """Volume element ``gamma_0 gamma_1 gamma_2 gamma_3``."""
    g = GAMMAS
    return EndW(g[0] @ g[1] @ g[2] @ g[3])


def charge_conjugation(psi, t: float = 0.0, eps: SymplecticForm = RICCI_FORM):
    """Antilinear involution ``C(u, chi) = e^{-it} (eps#(conj chi), -conj(eps)_flat(conj u))``."""
    u, chi = split(psi)
    conj_eps = SymplecticForm(np.conj(eps.phase))
    phase = np.exp(-1j * t)
    new_u = phase * eps_sharp(np.conj(chi), eps)
    new_chi = -phase * eps_flat(np.conj(u), conj_eps)
    return weyl_components(new_u, new_chi)


def _observer_tau(observer):
    if observer is None:
        return pauli_basis()[0]
    return np.asarray(observer, dtype=complex)


def parity(observer=None) -> EndW:
    """``gamma(tau_0)`` for the observer's unit timelike ``tau_0`` (Hermitian matrix)."""
    return gamma(_observer_tau(observer))


def time_reversal(psi, t: float = 0.0, observer=None):
    """Antilinear ``gamma_eta gamma_0 C``."""
    return gamma_eta() @ (parity(observer) @ charge_conjugation(psi, t))


def observer_h(psi, phi, observer=None) -> complex:
    """Observer Hermitian metric ``h(psi, phi) = k(gamma_0 psi, phi)``."""
    return k_product(parity(observer) @ np.asarray(psi, dtype=complex), phi)


def observer_gram(observer=None):
    """Gram matrix ``H`` of ``h`` in Weyl components (``h = psi^H H phi``)."""
    g0 = parity(observer).matrix
    return g0.conj().T @ K_GRAM


def observer_metric_2spinor(observer=None):
    """Restriction of ``h`` to the ``u`` block, as a 2x2 Hermitian matrix.

    For the Pauli frame's own ``tau_0`` this is the identity, i.e.
    ``sqrt2 conj(t^0) = zbar^1 (x) z^1 + zbar^2 (x) z^2``.
    """
    return observer_gram(observer)[:2, :2]


def wedge(x, y):
    """Bivector components of ``x ^ y = (x (x) y - y (x) x) / 2``."""
    x = np.asarray(x)
    y = np.asarray(y)
    return 0.5 * (np.einsum("...l,...m->...lm", x, y) - np.einsum("...l,...m->...lm", y, x))


def hat_gamma(phi_up) -> EndW:
    """Exterior extension of the Dirac map on bivectors.

    ``phi_up`` holds antisymmetric contravariant components ``Phi^{lambda mu}``
    in the Pauli frame, so that ``Phi = Phi^{lambda mu} tau_lambda ^ tau_mu``.
    """
    phi_up = np.asarray(phi_up)
    if not np.allclose(phi_up, -np.swapaxes(phi_up, -1, -2), rtol=0, atol=1e-12 * max(1.0, np.max(np.abs(phi_up)))):
        raise ValueError("bivector components must be antisymmetric")
    return EndW(HAT_GAMMA_SIGN * np.einsum("...lm,lmik->...ik", phi_up, GAMMA_PRODUCTS))


def lower_second(phi_up):
    """``(Phi_flat)^lambda_mu = Phi^{lambda nu} eta_{nu mu}``."""
    return np.asarray(phi_up) @ ETA


def raise_second(mixed):
    return np.asarray(mixed) @ ETA
