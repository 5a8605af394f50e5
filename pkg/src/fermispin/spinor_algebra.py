"""Two-spinor algebra.

Spinors are complex arrays of shape ``(2,)`` holding components ``u^A`` in a
normalized basis ``(zeta_A)``; co-spinors hold ``lambda_A`` in the dual basis.
Elements of ``U (x) conj(U)`` are ``(2, 2)`` complex matrices ``w[A, Adot]``.
Hermitian ones form Minkowski space ``H``; their real Pauli components are
``w^lambda`` with ``w = (1/sqrt 2) sigma_lambda w^lambda``.

Units are trivial (hbar = c = 1), so length-unit factors never appear.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SQRT2 = np.sqrt(2.0)

#: Antisymmetric Ricci matrix, ``eps_12 = eps^12 = +1``.
RICCI = np.array([[0.0, 1.0], [-1.0, 0.0]], dtype=complex)

#: ``sigma_0 = 1`` followed by the standard Pauli matrices; shape (4, 2, 2).
SIGMA = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)

#: Minkowski metric on Pauli components, signature (+,-,-,-).
ETA = np.diag([1.0, -1.0, -1.0, -1.0])

#: ``eps_sharp(eps_flat(u)) == FLAT_SHARP_SIGN * u`` for every ``u`` and phase.
FLAT_SHARP_SIGN = -1

_NULL_TOL = 1e-10


@dataclass(frozen=True)
class SymplecticForm:
    """Normalized 2-form on ``U``: ``phase`` times the Ricci matrix.

    The inverse element (``eps^{AB}``) carries the conjugate phase so that
    ``eps`` and ``eps^{-1}`` stay mutually dual.
    """

    phase: complex = 1.0

    def __post_init__(self):
        if not np.isclose(abs(self.phase), 1.0, rtol=0, atol=1e-12):
            raise ValueError(f"symplectic phase must have unit modulus, got {self.phase!r}")

    @property
    def lower(self) -> np.ndarray:
        """Components ``eps_AB``."""
        return self.phase * RICCI

    @property
    def upper(self) -> np.ndarray:
        """Components ``eps^{AB}``."""
        return np.conj(self.phase) * RICCI

    def __call__(self, u, v) -> complex:
        return complex(np.asarray(u) @ self.lower @ np.asarray(v))

    def inverse(self, lam, mu) -> complex:
        """``eps^{-1}(lam, mu) = eps^{AB} lam_A mu_B``."""
        return complex(np.asarray(lam) @ self.upper @ np.asarray(mu))


RICCI_FORM = SymplecticForm()


def herm_decompose(w):
    """Split ``w`` into Hermitian ``h`` and ``a`` with ``w = h + i a``."""
    w = np.asarray(w, dtype=complex)
    wd = np.conj(np.swapaxes(w, -1, -2))
    return 0.5 * (w + wd), (w - wd) / 2j


def is_hermitian(w, atol: float = 1e-12) -> bool:
    w = np.asarray(w)
    return bool(np.allclose(w, np.conj(np.swapaxes(w, -1, -2)), rtol=0, atol=atol))


def eps_flat(u, eps: SymplecticForm = RICCI_FORM):
    """Index lowering ``(u_flat)_B = eps_AB u^A``."""
    return np.einsum("ab,...a->...b", eps.lower, np.asarray(u, dtype=complex))


def eps_sharp(lam, eps: SymplecticForm = RICCI_FORM):
    """Index raising ``(lam_sharp)^B = eps^{AB} lam_A``."""
    return np.einsum("ab,...a->...b", eps.upper, np.asarray(lam, dtype=complex))


def outer(u, s=None):
    """Decomposable tensor ``u (x) conj(s)`` as the matrix ``u^A conj(s)^Adot``."""
    u = np.asarray(u, dtype=complex)
    s = u if s is None else np.asarray(s, dtype=complex)
    return np.einsum("...a,...b->...ab", u, np.conj(s))


def g_bilinear(w, w2, eps: SymplecticForm = RICCI_FORM) -> complex:
    """Lorentz form ``g(w, w') = eps_AB conj(eps)_AdotBdot w^{A Adot} w'^{B Bdot}``.

    Symmetric, phase independent, and ``g(w, w) = 2 det w``.
    """
    e = eps.lower
    return np.einsum("ab,cd,...ac,...bd->...", e, np.conj(e), np.asarray(w), np.asarray(w2))


def pauli_basis():
    """Pauli frame ``tau_lambda = sigma_lambda / sqrt 2``, shape (4, 2, 2)."""
    return SIGMA / SQRT2


def pauli_to_herm(x):
    """Hermitian matrix with Pauli components ``x`` (real or complex, shape (..., 4))."""
    return np.einsum("...l,lab->...ab", np.asarray(x), SIGMA) / SQRT2


def pauli_components(w):
    """Complex Pauli components of any ``w`` in ``U (x) conj(U)``."""
    # tr(sigma_l w) / sqrt 2, using sigma_l[Adot, A]
    return np.einsum("lba,...ab->...l", SIGMA, np.asarray(w, dtype=complex)) / SQRT2


def herm_to_pauli(w, atol: float = 1e-12):
    """Real Pauli components of a Hermitian ``w``; raises on non-Hermitian input."""
    if not is_hermitian(w, atol=atol * max(1.0, float(np.max(np.abs(w))))):
        raise ValueError("element is not Hermitian, so it is not in H")
    return pauli_components(w).real


def minkowski_dot(x, y):
    x = np.asarray(x)
    y = np.asarray(y)
    return x[..., 0] * y[..., 0] - x[..., 1] * y[..., 1] - x[..., 2] * y[..., 2] - x[..., 3] * y[..., 3]


def pauli_gram(eps: SymplecticForm = RICCI_FORM):
    """Matrix ``g(tau_lambda, tau_mu)``; equals ``diag(1, -1, -1, -1)``."""
    tau = pauli_basis()
    return np.array([[g_bilinear(t, s, eps) for s in tau] for t in tau]).real


def null_decompose(w, tol: float = _NULL_TOL):
    """Write a null Hermitian ``w`` as ``sign * u (x) conj(u)``.

    Returns ``(u, sign)`` with ``sign`` in ``{+1, -1}`` (future or past cone),
    or ``None`` when ``w`` is zero, non-null, or not Hermitian. ``u`` is fixed
    up to a phase; the returned one has a real non-negative component in the
    slot of the largest diagonal entry.
    """
    w = np.asarray(w, dtype=complex)
    scale = float(np.sum(np.abs(w) ** 2))
    if scale == 0.0 or not is_hermitian(w, atol=1e-12 * np.sqrt(scale)):
        return None
    if abs(np.linalg.det(w)) > tol * scale:
        return None
    diag = w.diagonal().real
    k = int(np.argmax(np.abs(diag)))
    sign = 1 if diag[k] > 0 else -1
    u = sign * w[:, k] / np.sqrt(abs(diag[k]))
    return u, sign


def boost_matrix(a, b):
    """Pure Lorentz boost in the plane of unit timelike ``a`` and ``b`` taking ``a`` to ``b``.

    Components act on Pauli components (``Lambda[lambda, mu]``). Vectors
    orthogonal to both are left fixed.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    s = a + b
    return (
        np.eye(4)
        - np.outer(s, ETA @ s) / (1.0 + minkowski_dot(a, b))
        + 2.0 * np.outer(b, ETA @ a)
    )
