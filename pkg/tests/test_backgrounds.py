import numpy as np
import pytest

from fermispin.backgrounds import (
    circular_period,
    levi_civita_at,
    levi_civita_h_connection,
    minkowski,
    sampled_background,
    schwarzschild_like,
    static_acceleration,
    worldline,
)
from fermispin.connection_calculus import DegenerateTetradError, check_h_connection, torsion
from fermispin.fermi_transport import NonTimelikeError, fermi_data
from fermispin.spinor_algebra import ETA

rng = np.random.default_rng(5)


def test_minkowski():
    mk = minkowski()
    x = rng.normal(size=4)
    assert np.array_equal(mk.tetrad(x), np.eye(4))
    assert np.array_equal(mk.h_connection(x), np.zeros((4, 4, 4)))
    assert np.array_equal(mk.metric(x), ETA)
    assert np.max(np.abs(torsion(mk.tetrad, mk.h_connection, x))) == 0
    assert np.array_equal(mk.spinor_connection(x), np.zeros((4, 2, 2)))
    # straight lines have no Fermi bivector
    wl = worldline("static", mk, x0=[0.3, 0.1, -2.0])
    assert np.array_equal(fermi_data(wl, 1.7, mk).Phi, np.zeros((4, 4)))


def test_constant_tetrad_gives_zero_connection():
    th = np.eye(4) + 0.1 * rng.normal(size=(4, 4))
    gt = levi_civita_h_connection(lambda x: th)(rng.normal(size=4))
    assert np.max(np.abs(gt)) < 1e-12


def test_rindler_tetrad_fixture():
    # Theta = diag(f, 1, 1, 1), f = 1 + g x^1. By hand: the only nonzero
    # coefficients are gt_0^0_1 = gt_0^1_0 = -f'(x^1) = -g.
    g = 0.37
    gt = levi_civita_h_connection(lambda x: np.diag([1.0 + g * x[1], 1.0, 1.0, 1.0]))
    out = gt(np.array([0.2, 0.8, -0.4, 1.5]))
    expect = np.zeros((4, 4, 4))
    expect[0, 0, 1] = expect[0, 1, 0] = -g
    assert np.allclose(out, expect, atol=1e-9)
    # per unit of proper time the boost coefficient is f'/f, the Rindler acceleration
    x = np.array([0.0, 0.8, 0.0, 0.0])
    mk_like = type(minkowski())(
        tetrad=lambda y: np.diag([1.0 + g * y[1], 1.0, 1.0, 1.0]),
        tetrad_jacobian=lambda y: np.zeros((4, 4, 4)),
        h_connection=gt,
    )
    wl = worldline("static", mk_like, x0=x[1:])
    fd = fermi_data(wl, 0.0, mk_like)
    a = fd.nabla_tau
    assert np.allclose(a, [0.0, g / (1.0 + g * 0.8), 0.0, 0.0], atol=1e-8)


def test_levi_civita_invariants_on_grid():
    bg = schwarzschild_like(1.0)
    for _ in range(20):
        x = np.concatenate([[rng.normal()], rng.uniform(0.8, 3.0, size=3) * rng.choice([-1, 1], size=3)])
        check_h_connection(bg.h_connection(x), atol=1e-12)
    with pytest.raises(DegenerateTetradError):
        levi_civita_at(np.diag([1.0, 0.0, 1.0, 1.0]), np.zeros((4, 4, 4)))


def test_schwarzschild_torsion_second_order():
    bg = schwarzschild_like(1.0)
    x = np.array([0.0, 1.3, 1.0, 0.2])
    r1 = np.max(np.abs(torsion(bg.tetrad, bg.h_connection, x, h=1e-2)))
    r2 = np.max(np.abs(torsion(bg.tetrad, bg.h_connection, x, h=5e-3)))
    assert r1 / r2 == pytest.approx(4.0, abs=0.3)


def test_horizon_and_mass_errors():
    bg = schwarzschild_like(2.0)
    with pytest.raises(ValueError):
        bg.tetrad(np.array([0.0, 1.0, 0.0, 0.0]))
    with pytest.raises(ValueError):
        bg.h_connection(np.array([0.0, 0.5, 0.3, 0.0]))
    with pytest.raises(ValueError):
        schwarzschild_like(-1.0)


def test_zero_mass_is_minkowski():
    bg, mk = schwarzschild_like(0.0), minkowski()
    assert bg.name == mk.name
    for _ in range(5):
        x = rng.normal(size=4)
        assert np.array_equal(bg.tetrad(x), mk.tetrad(x))
        assert np.array_equal(bg.h_connection(x), mk.h_connection(x))
        assert np.array_equal(bg.spinor_connection(x), mk.spinor_connection(x))


def test_static_acceleration_closed_form():
    # areal radius r = rho (1 + M / 2 rho)^2, |a| = M / (r^2 sqrt(1 - 2M/r))
    M = 1.0
    for x0 in ([3.0, 0.0, 0.0], [1.0, -2.0, 0.5]):
        x = np.concatenate([[0.0], x0])
        rho = np.linalg.norm(x0)
        r = rho * (1 + M / (2 * rho)) ** 2
        mag = M / (r**2 * np.sqrt(1 - 2 * M / r))
        a = static_acceleration(M, x)
        assert np.linalg.norm(a) == pytest.approx(mag, rel=1e-12)
        assert np.allclose(a[1:] / np.linalg.norm(a), np.asarray(x0) / rho)
        bg = schwarzschild_like(M)
        wl = worldline("static", bg, x0=x0)
        fd = fermi_data(wl, 0.4, bg)
        assert np.allclose(fd.nabla_tau, a, atol=1e-7)


def test_worldline_norms():
    mk = minkowski()
    for wl in (
        worldline("static", mk),
        worldline("circular", mk, radius=2.0, omega=0.3),
        worldline("rindler", mk, a=0.8),
    ):
        for s in rng.uniform(-3, 3, size=10):
            v = wl.velocity(s)
            assert v @ ETA @ v == pytest.approx(1.0, abs=1e-13)
    st = worldline("static", mk)
    assert np.allclose(fermi_data(st, 2.0, mk).tau, [1, 0, 0, 0])
    a = 0.8
    rd = worldline("rindler", mk, a=a)
    x = rd.position(1.3)
    assert x[1] ** 2 - x[0] ** 2 == pytest.approx(1 / a**2)


def test_circular_period_time_dilation():
    R, w = 1.0, 0.6
    gam = 1 / np.sqrt(1 - (R * w) ** 2)
    T = circular_period(R, w)
    assert T == pytest.approx(2 * np.pi / (w * gam), rel=1e-14)
    wl = worldline("circular", radius=R, omega=w)
    assert np.allclose(wl.position(T)[1:], wl.position(0.0)[1:], atol=1e-12)
    assert wl.position(T)[0] == pytest.approx(2 * np.pi / w)


def test_circular_in_schwarzschild():
    bg = schwarzschild_like(0.5)
    wl = worldline("circular", bg, radius=4.0, omega=0.05)
    for s in (0.0, 3.0, 11.0):
        v = wl.velocity(s)
        assert v @ bg.metric(wl.position(s)) @ v == pytest.approx(1.0, abs=1e-12)


def test_worldline_errors():
    with pytest.raises(NonTimelikeError):
        worldline("circular", radius=1.0, omega=1.0)
    with pytest.raises(NonTimelikeError):
        worldline("circular", radius=2.0, omega=0.7)
    with pytest.raises(ValueError):
        worldline("helix")
    with pytest.raises(ValueError):
        worldline("rindler", a=0.0)


def _sample(bg, n):
    ax = [np.linspace(1.5, 2.7, n), np.linspace(0.1, 1.3, n), np.linspace(-1.0, 0.2, n)]
    grid = np.meshgrid(*ax, indexing="ij")
    S = np.empty((n, n, n, 4, 4))
    for i in np.ndindex(n, n, n):
        S[i] = bg.tetrad(np.array([0.0, grid[0][i], grid[1][i], grid[2][i]]))
    return ax, S


def test_sampled_background_converges():
    bg = schwarzschild_like(1.0)
    x = np.array([0.3, 2.1234, 0.7321, -0.4113])
    errs = []
    for n in (9, 17):
        sb = sampled_background(*_sample(bg, n), static=True)
        errs.append(np.max(np.abs(sb.h_connection(x) - bg.h_connection(x))))
        check_h_connection(sb.h_connection(x))
    assert errs[1] < 1e-5 and errs[0] / errs[1] > 16
    with pytest.raises(ValueError):
        sb.tetrad(np.array([0.0, 3.0, 0.5, 0.0]))


def test_sampled_background_validation():
    ax = [np.linspace(0, 1, 5)] * 3
    with pytest.raises(ValueError):
        sampled_background(ax, np.zeros((5, 5, 5, 4, 4)))  # four axes needed when not static
    with pytest.raises(ValueError):
        sampled_background(ax, np.zeros((5, 5, 4, 4, 4)), static=True)
    with pytest.raises(ValueError):
        sampled_background([np.array([0.0, 0.1, 0.3, 0.4])] * 3, np.zeros((4, 4, 4, 4, 4)), static=True)
