"""Free electron/positron Dirac frames: mass shell, boosts and their spin lifts."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .connection_calculus import half_trace
from .dirac_algebra import EndW, block_endw, gamma_of_vector, k_product, weyl_components
from .fermi_transport import fermi_data, transport
from .spinor_algebra import ETA, SIGMA, boost_matrix, minkowski_dot, pauli_basis, pauli_components

_SHELL_RTOL = 1e-10
_REST = np.array([1.0, 0.0, 0.0, 0.0])


@dataclass(frozen=True)
class MassShellMomentum:
    """Covector ``p_lambda`` in an orthonormal frame with ``g#(p, p) = m^2`` and ``p_0 > 0``."""

    p: np.ndarray
    m: float

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        if p.shape != (4,):
            raise ValueError(f"momentum needs 4 components, got shape {p.shape}")
        if not self.m > 0:
            raise ValueError("the energy splitting needs a positive mass")
        if p[0] <= 0:
            raise ValueError("momentum must be future pointing (p_0 > 0)")
        if abs(minkowski_dot(p, p) - self.m**2) > _SHELL_RTOL * max(self.m**2, p @ p):
            raise ValueError(f"momentum is off the mass shell: g(p, p) = {minkowski_dot(p, p)}, m^2 = {self.m**2}")
        object.__setattr__(self, "p", p)

    @property
    def vector(self):
        """``g#(p)`` as Pauli components."""
        return ETA @ self.p

    @classmethod
    def from_velocity(cls, m: float, velocity) -> MassShellMomentum:
        """On-shell momentum of a particle with 3-velocity ``velocity`` (``|v| < 1``)."""
        v = np.asarray(velocity, dtype=float)
        if v @ v >= 1.0:
            raise ValueError("speed must be below 1")
        g = 1.0 / np.sqrt(1.0 - v @ v)
        return cls(m * g * np.concatenate([[1.0], -v]), m)

    @classmethod
    def from_rapidity(cls, m: float, rapidity: float, direction=(1.0, 0.0, 0.0)) -> MassShellMomentum:
        n = np.asarray(direction, dtype=float)
        n = n / np.linalg.norm(n)
        return cls(m * np.concatenate([[np.cosh(rapidity)], -np.sinh(rapidity) * n]), m)


def gamma_p(p: MassShellMomentum) -> EndW:
    """``gamma[p] = gamma(g#(p))``."""
    return gamma_of_vector(p.vector)


def energy_splitting(p: MassShellMomentum) -> tuple[EndW, EndW]:
    """Projectors ``P+- = (1 +- gamma[p]/m) / 2`` onto ``Ker(gamma[p] -+ m)``."""
    if not p.m > 0:
        raise ValueError("the energy splitting needs a positive mass")
    g = gamma_p(p).matrix / p.m
    one = np.eye(4)
    return EndW(0.5 * (one + g)), EndW(0.5 * (one - g))


@dataclass(frozen=True)
class DiracFrame:
    """Weyl-basis components of ``(u_1, u_2, v_1, v_2)`` as the columns of ``columns``."""

    columns: np.ndarray

    @property
    def u(self):
        return self.columns[:, :2]

    @property
    def v(self):
        return self.columns[:, 2:]

    def gram(self):
        """Matrix of ``k`` between the frame spinors."""
        c = self.columns
        return np.array([[k_product(c[:, i], c[:, j]) for j in range(4)] for i in range(4)])

    def adaptedness(self, p: MassShellMomentum) -> float:
        """Max of ``|(gamma[p] - m) u_A|`` and ``|(gamma[p] + m) v_A|``."""
        g = gamma_p(p).matrix
        ru = (g - p.m * np.eye(4)) @ self.u
        rv = (g + p.m * np.eye(4)) @ self.v
        return float(max(np.max(np.abs(ru)), np.max(np.abs(rv))))


def rest_dirac_basis() -> DiracFrame:
    """``u_A = (zeta_A, zbar^A)/sqrt 2`` and ``v_A = (zeta_A, -zbar^A)/sqrt 2``."""
    e = np.eye(2)
    cols = [weyl_components(e[a], e[a]) for a in range(2)]
    cols += [weyl_components(e[a], -e[a]) for a in range(2)]
    return DiracFrame(np.stack(cols, axis=1) / np.sqrt(2.0))


@dataclass(frozen=True)
class BoostLift:
    """Lorentz matrix ``Lambda`` and its lift ``K`` in ``Sl(U)``."""

    Lambda: np.ndarray
    K: np.ndarray
    sign_history: tuple = ()

    def spin_w(self) -> EndW:
        """Action on Dirac spinors: ``K`` on ``U`` and ``(K^H)^{-1}`` on the dual-conjugate block."""
        return block_endw(self.K, np.linalg.inv(self.K).conj().T)


def lorentz_of(K):
    """Lorentz matrix of ``K (x) conj(K)``, i.e. ``X -> K X K^H`` on Pauli components."""
    K = np.asarray(K, dtype=complex)
    return pauli_components(K @ pauli_basis() @ K.conj().T).real.T


def _expm2(b):
    """``exp(b)`` for a traceless 2x2 matrix, in closed form."""
    d = np.sqrt(complex(-np.linalg.det(b)))
    if abs(d) < 1e-8:
        sh = 1.0 + d * d / 6.0
    else:
        sh = np.sinh(d) / d
    return np.cosh(d) * np.eye(2) + sh * b


def _nearest_sign(K, previous):
    if previous is None:
        return K, 1
    if np.linalg.norm(K - previous) <= np.linalg.norm(K + previous):
        return K, 1
    return -K, -1


def boost_for(tau, p: MassShellMomentum, previous=None) -> BoostLift:
    """Boost taking unit timelike ``tau`` to ``g#(p)/m`` and its spin lift.

    ``K = exp(chi half_trace(B))`` with ``B`` the unit boost generator in the
    plane of ``tau`` and ``g#(p)/m``, so ``K = 1`` at ``p = m tau_flat``. If
    ``previous`` is given, the sign nearest to it is kept.
    """
    tau = np.asarray(tau, dtype=float)
    target = p.vector / p.m
    c = minkowski_dot(tau, target)
    if c < 1.0 - 1e-12:
        raise ValueError("momentum is not future pointing relative to the observer")
    chi = float(np.arccosh(max(c, 1.0)))
    if chi < 1e-12:
        Lam, K = np.eye(4), np.eye(2, dtype=complex)
    else:
        n = (target - c * tau) / np.sinh(chi)
        B = np.outer(n, ETA @ tau) - np.outer(tau, ETA @ n)
        Lam = boost_matrix(tau, target)
        K = _expm2(chi * half_trace(B))
    K, sgn = _nearest_sign(K, previous)
    return BoostLift(Lam, K, (sgn,))


def spin_lift(Lambda, previous=None) -> BoostLift:
    """Lift of a proper orthochronous Lorentz matrix to ``Sl(U)``.

    From ``K sigma_nu K^H = Lambda^mu_nu sigma_mu`` and the completeness
    relation ``sum_nu (sigma_nu)_ij (sigma_nu)_kl = 2 delta_il delta_jk``,
    ``M_E = sum_nu (K sigma_nu K^H) E sigma_nu = 2 tr(K^H E) K`` for any fixed
    ``E``. Some ``E`` in ``{1, sigma_1, sigma_2, sigma_3}`` gives a nonzero
    multiple of ``K`` (these traces are the Pauli components of ``K``); the
    one with the largest ``|det M_E|`` is used and ``K = M_E / sqrt(det M_E)``
    up to sign. The sign is taken nearest to ``previous`` or, without one,
    with ``Re tr K > 0``.
    """
    Lambda = np.asarray(Lambda, dtype=float)
    ls = np.einsum("mn,mij->nij", Lambda, SIGMA)
    Ms = np.einsum("nij,ejk,nkl->eil", ls, SIGMA, SIGMA)
    dets = np.linalg.det(Ms)
    best = int(np.argmax(np.abs(dets)))
    if abs(dets[best]) < 1e-12:
        raise ValueError("cannot lift this Lorentz matrix (degenerate spinor map)")
    K = Ms[best] / np.sqrt(complex(dets[best]))
    if previous is None:
        tr = np.trace(K).real
        if abs(tr) < 1e-12:
            raise ValueError("lift sign is ambiguous without a previous sample (tr K = 0)")
        sgn = 1 if tr > 0 else -1
        return BoostLift(Lambda, sgn * K, (sgn,))
    K, sgn = _nearest_sign(K, previous)
    return BoostLift(Lambda, K, (sgn,))


def dirac_frame(p: MassShellMomentum, rest: DiracFrame | None = None, tau=None, previous=None):
    """Boost a frame adapted to ``m tau_flat`` into one adapted to ``p``.

    Returns ``(frame, lift)``.
    """
    rest = rest if rest is not None else rest_dirac_basis()
    tau = _REST if tau is None else np.asarray(tau, dtype=float)
    lift = boost_for(tau, p, previous)
    return DiracFrame(lift.spin_w().matrix @ rest.columns), lift


@dataclass(frozen=True)
class FrameSample:
    s: float
    tau: np.ndarray
    rest: DiracFrame
    momenta: tuple
    frames: tuple
    lifts: tuple


def frames_along_worldline(worldline, background, s0, s1, steps, momenta, m: float = 1.0):
    """Fermi-transport a rest Dirac frame and boost it to the requested momenta.

    The frame at ``s0`` is the rest basis boosted to ``m tau(s0)_flat``; it is
    4-spinor Fermi-transported (``alpha = 0``). ``momenta`` is a sequence of
    :class:`MassShellMomentum` or a callable ``s -> sequence``. Lift signs are
    chained per momentum index.
    """
    tau0 = fermi_data(worldline, s0, background).tau
    tau0 = tau0 / np.sqrt(minkowski_dot(tau0, tau0))
    start, _ = dirac_frame(MassShellMomentum(m * (ETA @ tau0), m), rest_dirac_basis())
    traj = transport(worldline, background, start.columns, s0, s1, steps, kind="four-spinor")
    out = []
    prev = {}
    for s, cols in zip(traj.s, traj.states):
        tau = fermi_data(worldline, s, background).tau
        rest = DiracFrame(cols)
        ps = tuple(momenta(s) if callable(momenta) else momenta)
        frames, lifts = [], []
        for i, p in enumerate(ps):
            fr, lift = dirac_frame(p, rest, tau, prev.get(i))
            prev[i] = lift.K
            frames.append(fr)
            lifts.append(lift)
        out.append(FrameSample(float(s), tau, rest, ps, tuple(frames), tuple(lifts)))
    return out
