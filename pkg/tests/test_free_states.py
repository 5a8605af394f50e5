import numpy as np
import pytest
from scipy.linalg import expm

from fermispin.backgrounds import circular_period, minkowski, worldline
from fermispin.dirac_algebra import GAMMAS
from fermispin.fermi_transport import transport
from fermispin.free_states import (
    MassShellMomentum,
    boost_for,
    dirac_frame,
    energy_splitting,
    frames_along_worldline,
    gamma_p,
    lorentz_of,
    rest_dirac_basis,
    spin_lift,
)
from fermispin.spinor_algebra import ETA, boost_matrix, herm_to_pauli, outer

rng = np.random.default_rng(13)
PAULI = np.array([[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]])
TAU0 = np.array([1.0, 0.0, 0.0, 0.0])


def random_momentum(m=1.0, vmax=0.95):
    v = rng.normal(size=3)
    v *= rng.uniform(0.0, vmax) / np.linalg.norm(v)
    return MassShellMomentum.from_velocity(m, v)


def rotation(axis, angle):
    # active rotation of spatial components
    n = np.asarray(axis, dtype=float) / np.linalg.norm(axis)
    K = np.array([[0, -n[2], n[1]], [n[2], 0, -n[0]], [-n[1], n[0], 0]])
    out = np.eye(4)
    out[1:, 1:] = expm(angle * K)
    return out


def test_mass_shell_validation():
    p = MassShellMomentum(np.array([1.25, 0.75, 0.0, 0.0]), 1.0)
    assert np.allclose(p.vector, [1.25, -0.75, 0, 0])
    with pytest.raises(ValueError):
        MassShellMomentum(np.array([1.0, 0.0, 0.0, 0.0]), 0.0)
    with pytest.raises(ValueError):
        MassShellMomentum(np.array([1.0, 0.1, 0.0, 0.0]), 1.0)
    with pytest.raises(ValueError):
        MassShellMomentum(np.array([-1.0, 0.0, 0.0, 0.0]), 1.0)
    with pytest.raises(ValueError):
        MassShellMomentum(np.zeros(3), 1.0)
    with pytest.raises(ValueError):
        MassShellMomentum.from_velocity(1.0, [0.8, 0.7, 0.0])


def test_rest_projectors():
    P, M = energy_splitting(MassShellMomentum(TAU0.copy(), 1.0))
    assert np.allclose(P.matrix, 0.5 * (np.eye(4) + GAMMAS[0]))
    assert np.allclose(M.matrix, 0.5 * (np.eye(4) - GAMMAS[0]))


def test_projectors_random():
    for _ in range(500):
        p = random_momentum(m=rng.uniform(0.5, 2.0))
        P, M = energy_splitting(p)
        P, M = P.matrix, M.matrix
        assert np.max(np.abs(P + M - np.eye(4))) <= 1e-12
        assert np.max(np.abs(P @ M)) <= 1e-10
        assert np.max(np.abs(P @ P - P)) <= 1e-10
        assert np.linalg.matrix_rank(P, tol=1e-8) == 2 and np.linalg.matrix_rank(M, tol=1e-8) == 2
        assert np.allclose(gamma_p(p).matrix @ P, p.m * P, atol=1e-10)


def test_rest_dirac_basis():
    fr = rest_dirac_basis()
    g0 = GAMMAS[0]
    assert np.max(np.abs((g0 - np.eye(4)) @ fr.u)) == 0
    assert np.max(np.abs((g0 + np.eye(4)) @ fr.v)) == 0
    assert np.allclose(fr.gram(), np.diag([1, 1, -1, -1]))
    s = 1 / np.sqrt(2)
    # Weyl components store (u, -chi)
    assert np.allclose(fr.columns[:, 0], [s, 0, -s, 0])
    assert np.allclose(fr.columns[:, 3], [0, s, 0, s])


def test_boost_lift_matches_expm_oracle():
    for _ in range(50):
        p = random_momentum()
        lift = boost_for(TAU0, p)
        q = p.vector / p.m
        chi = np.arccosh(q[0])
        n = q[1:] / np.sinh(chi)
        oracle = expm(0.5 * chi * np.einsum("j,jab->ab", n, PAULI))
        assert np.allclose(lift.K, oracle, atol=1e-12)
        assert np.allclose(lift.Lambda, boost_matrix(TAU0, q), atol=1e-12)


def test_boost_lift_properties():
    lift = boost_for(TAU0, MassShellMomentum(2.0 * TAU0, 2.0))
    assert np.array_equal(lift.K, np.eye(2)) and np.array_equal(lift.Lambda, np.eye(4))
    for _ in range(200):
        p = random_momentum()
        lift = boost_for(TAU0, p)
        assert abs(np.linalg.det(lift.K) - 1) <= 1e-12
        assert np.max(np.abs(lorentz_of(lift.K) - lift.Lambda)) <= 1e-12
        assert np.allclose(lift.Lambda @ TAU0, p.vector / p.m, atol=1e-12)
    # boost from a moving observer
    tau = MassShellMomentum.from_velocity(1.0, [0.3, 0.1, -0.2]).vector
    p = random_momentum()
    lift = boost_for(tau, p)
    assert np.allclose(lift.Lambda @ tau, p.vector, atol=1e-12)
    assert np.allclose(lorentz_of(lift.K), lift.Lambda, atol=1e-12)
    with pytest.raises(ValueError):
        boost_for(-TAU0, p)


def test_spin_lift_agrees_with_boost_lift():
    for _ in range(50):
        b = boost_for(TAU0, random_momentum())
        assert np.allclose(spin_lift(b.Lambda).K, b.K, atol=1e-12)


def test_lift_homomorphism():
    n = rng.normal(size=3)
    for _ in range(20):
        c1, c2 = rng.uniform(-1.5, 1.5, size=2)
        L1 = boost_for(TAU0, MassShellMomentum.from_rapidity(1.0, c1, n)).Lambda
        L2 = boost_for(TAU0, MassShellMomentum.from_rapidity(1.0, c2, n)).Lambda
        # collinear boosts compose to a boost: sign +
        K12 = spin_lift(L1 @ L2).K
        assert np.allclose(spin_lift(L1).K @ spin_lift(L2).K, K12, atol=1e-12)
    for _ in range(20):
        L1 = boost_for(TAU0, random_momentum()).Lambda
        L2 = rotation(rng.normal(size=3), rng.uniform(0, 2 * np.pi))
        prod = spin_lift(L1).K @ spin_lift(L2).K
        K12 = spin_lift(L1 @ L2).K
        sign = 1 if np.allclose(prod, K12, atol=1e-10) else -1
        assert np.allclose(prod, sign * K12, atol=1e-10)


def test_lift_continuity_along_rapidity_ramp():
    n = np.array([0.2, -0.5, 0.8])
    prev, Ks, flips = None, [], []
    for chi in np.linspace(0.0, 3.0, 100):
        lift = boost_for(TAU0, MassShellMomentum.from_rapidity(1.0, chi, n), prev)
        flips.append(lift.sign_history[0])
        Ks.append(lift.K)
        prev = lift.K
    assert np.array_equal(Ks[0], np.eye(2))
    assert all(f == 1 for f in flips)
    steps = [np.linalg.norm(b - a) for a, b in zip(Ks, Ks[1:])]
    assert max(steps) < 0.2


def test_rotation_chain_is_double_cover():
    prev, Ks = None, []
    for th in np.linspace(0.0, 4 * np.pi, 201):
        lift = spin_lift(rotation([0, 0, 1], th), prev)
        Ks.append(lift.K)
        prev = lift.K
    assert np.allclose(Ks[0], np.eye(2))
    assert np.allclose(Ks[100], -np.eye(2), atol=1e-12)
    assert np.allclose(Ks[200], np.eye(2), atol=1e-12)
    with pytest.raises(ValueError):
        spin_lift(rotation([0, 0, 1], np.pi))


def test_dirac_frame_boosted():
    fr0 = rest_dirac_basis()
    same, _ = dirac_frame(MassShellMomentum(TAU0.copy(), 1.0))
    assert np.array_equal(same.columns, fr0.columns)
    for _ in range(200):
        p = random_momentum()
        fr, _ = dirac_frame(p)
        assert fr.adaptedness(p) <= 1e-10
        assert np.allclose(fr.gram(), np.diag([1, 1, -1, -1]), atol=1e-12)


def test_frames_static_constant():
    mk = minkowski()
    st = worldline("static", mk)
    p = MassShellMomentum.from_velocity(1.0, [0.4, 0.0, 0.2])
    samples = frames_along_worldline(st, mk, 0.0, 2.0, 10, [p])
    for smp in samples:
        assert np.array_equal(smp.rest.columns, samples[0].rest.columns)
        assert np.array_equal(smp.frames[0].columns, samples[0].frames[0].columns)


def test_frames_circular_adapted_and_thomas_consistent():
    mk = minkowski()
    wl = worldline("circular", mk, radius=1.0, omega=0.6)
    T = circular_period(1.0, 0.6)
    ps = [random_momentum() for _ in range(2)]
    samples = frames_along_worldline(wl, mk, 0.0, T, 2000, ps)
    worst_rest = worst_boost = 0.0
    for smp in samples[::50]:
        rest_p = MassShellMomentum(ETA @ smp.tau / np.sqrt(smp.tau @ ETA @ smp.tau), 1.0)
        worst_rest = max(worst_rest, smp.rest.adaptedness(rest_p))
        for p, fr in zip(smp.momenta, smp.frames):
            worst_boost = max(worst_boost, fr.adaptedness(p))
    assert worst_rest <= 1e-8 and worst_boost <= 1e-10
    # the U block of u_1 is a transported 2-spinor: its null flag follows vector transport
    u = np.sqrt(2) * np.array([smp.rest.columns[:2, 0] for smp in samples])
    vec = transport(wl, mk, herm_to_pauli(outer(u[0])), 0.0, T, 2000)
    w = np.array([herm_to_pauli(outer(x)) for x in u])
    assert np.max(np.abs(w - vec.states)) <= 1e-8


def test_frames_reject_zero_mass():
    with pytest.raises(ValueError):
        frames_along_worldline(worldline("static", minkowski()), minkowski(), 0.0, 1.0, 4, [], m=0.0)
