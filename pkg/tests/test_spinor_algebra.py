import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fermispin.spinor_algebra import (
    ETA,
    FLAT_SHARP_SIGN,
    RICCI_FORM,
    SymplecticForm,
    boost_matrix,
    eps_flat,
    eps_sharp,
    g_bilinear,
    herm_decompose,
    herm_to_pauli,
    is_hermitian,
    minkowski_dot,
    null_decompose,
    outer,
    pauli_basis,
    pauli_components,
    pauli_gram,
    pauli_to_herm,
)

rng = np.random.default_rng(7)


def crand(*shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


# -- brute-force oracles: explicit index loops, no matrix algebra ---------------

def ricci(a, b, phase=1.0):
    # eps_12 = +1, eps_21 = -1, zero otherwise
    return phase * {(0, 1): 1.0, (1, 0): -1.0}.get((a, b), 0.0)


def flat_oracle(u, phase=1.0):
    return np.array([sum(ricci(a, b, phase) * u[a] for a in range(2)) for b in range(2)])


def sharp_oracle(lam, phase=1.0):
    return np.array([sum(ricci(a, b, np.conj(phase)) * lam[a] for a in range(2)) for b in range(2)])


def g_oracle(w, w2, phase=1.0):
    tot = 0j
    for a in range(2):
        for b in range(2):
            for ad in range(2):
                for bd in range(2):
                    tot += ricci(a, b, phase) * np.conj(ricci(ad, bd, phase)) * w[a, ad] * w2[b, bd]
    return tot


def test_herm_decompose_examples():
    h, a = herm_decompose(np.diag([1.0, 2.0]))
    assert np.allclose(h, np.diag([1, 2])) and np.allclose(a, 0)
    h, a = herm_decompose(1j * np.diag([1.0, 0.0]))
    assert np.allclose(h, 0) and np.allclose(a, np.diag([1, 0]))
    h, a = herm_decompose(np.array([[1, 1j], [0, 0]]))
    assert np.allclose(h, [[1, 0.5j], [-0.5j, 0]], atol=1e-15)
    assert np.allclose(a, [[0, 0.5], [0.5, 0]], atol=1e-15)


def test_herm_decompose_random():
    w = crand(500, 2, 2)
    h, a = herm_decompose(w)
    assert np.max(np.abs(h + 1j * a - w)) <= 1e-14
    assert is_hermitian(h, 1e-14) and is_hermitian(a, 1e-14)


def test_eps_flat_examples():
    assert np.allclose(eps_flat([1, 0]), [0, 1])
    assert np.allclose(eps_flat([0, 1]), [-1, 0])
    u = crand(2)
    assert abs(eps_flat(u) @ u) < 1e-14


def test_flat_sharp_against_index_sums():
    for phase in (1.0, np.exp(0.3j), -1j):
        eps = SymplecticForm(phase)
        for _ in range(20):
            u, lam = crand(2), crand(2)
            assert np.allclose(eps_flat(u, eps), flat_oracle(u, phase), atol=1e-14)
            assert np.allclose(eps_sharp(lam, eps), sharp_oracle(lam, phase), atol=1e-14)


def test_flat_sharp_roundtrip_sign_frozen():
    # fixed by the 2x2 index-sum oracle
    assert FLAT_SHARP_SIGN == -1
    u = crand(2)
    assert np.allclose(sharp_oracle(flat_oracle(u)), -u)
    for phase in (1.0, np.exp(1.1j)):
        eps = SymplecticForm(phase)
        assert np.allclose(eps_sharp(eps_flat(u, eps), eps), FLAT_SHARP_SIGN * u, atol=1e-14)
    assert np.allclose(eps_sharp(np.zeros(2)), 0)


def test_sharp_is_isometry_to_inverse_form():
    for phase in (1.0, np.exp(0.7j)):
        eps = SymplecticForm(phase)
        lam, mu = crand(2), crand(2)
        assert abs(eps(eps_sharp(lam, eps), eps_sharp(mu, eps)) - eps.inverse(lam, mu)) < 1e-13


def test_symplectic_phase_must_be_unit():
    with pytest.raises(ValueError):
        SymplecticForm(2.0)


def test_g_bilinear_matches_index_sum_and_is_phase_free():
    for _ in range(50):
        w, w2 = crand(2, 2), crand(2, 2)
        ref = g_oracle(w, w2)
        assert abs(g_bilinear(w, w2) - ref) < 1e-12
        assert abs(g_bilinear(w, w2, SymplecticForm(np.exp(0.4j))) - ref) < 1e-12
        assert abs(g_bilinear(w, w2) - g_bilinear(w2, w)) < 1e-12


def test_g_bilinear_examples():
    assert g_bilinear(np.eye(2), np.eye(2)) == pytest.approx(2.0)
    u = crand(2)
    assert abs(g_bilinear(outer(u), outer(u))) < 1e-12
    x = rng.normal(size=4)
    w = pauli_to_herm(x)
    assert g_bilinear(w, w).real == pytest.approx(x[0] ** 2 - x[1] ** 2 - x[2] ** 2 - x[3] ** 2)


def test_g_is_twice_det():
    w = crand(1000, 2, 2)
    g = g_bilinear(w, w)
    d = 2 * np.linalg.det(w)
    assert np.max(np.abs(g - d) / np.maximum(1.0, np.abs(d))) <= 1e-12


def test_pauli_basis_and_gram():
    tau = pauli_basis()
    assert np.allclose(tau[0], np.eye(2) / np.sqrt(2))
    gram = pauli_gram()
    assert np.max(np.abs(gram - ETA)) <= 1e-14
    assert sorted(np.linalg.eigvalsh(gram)) == pytest.approx([-1, -1, -1, 1])
    assert pauli_gram(SymplecticForm(1j)) == pytest.approx(ETA)


def test_pauli_roundtrip():
    x = rng.normal(size=(100, 4))
    assert np.allclose(herm_to_pauli(pauli_to_herm(x)), x, atol=1e-14)
    w = crand(2, 2)
    assert np.allclose(pauli_to_herm(pauli_components(w)), w)
    with pytest.raises(ValueError):
        herm_to_pauli(np.array([[0, 1], [0, 0]]))


def test_null_decompose_examples():
    u, s = null_decompose(np.diag([1.0, 0.0]))
    assert s == 1 and np.allclose(u, [1, 0])
    u, s = null_decompose(-np.diag([0.0, 1.0]))
    assert s == -1 and np.allclose(u, [0, 1])
    assert null_decompose(np.eye(2) / np.sqrt(2)) is None
    assert null_decompose(np.zeros((2, 2))) is None
    assert null_decompose(np.array([[0, 1], [0, 0]])) is None


@settings(max_examples=60, deadline=None)
@given(
    st.complex_numbers(max_magnitude=1e3, allow_nan=False, allow_infinity=False),
    st.complex_numbers(max_magnitude=1e3, allow_nan=False, allow_infinity=False),
    st.sampled_from([1, -1]),
)
def test_null_decompose_reassembles(a, b, sign):
    u = np.array([a, b])
    if np.linalg.norm(u) < 1e-3:
        return
    w = sign * outer(u)
    u2, s2 = null_decompose(w)
    assert s2 == sign
    assert np.max(np.abs(s2 * outer(u2) - w)) <= 1e-10 * max(1.0, np.abs(w).max())


def test_boost_matrix_properties():
    a = np.array([1.0, 0, 0, 0])
    v = np.array([0.3, -0.4, 0.2])
    g = 1 / np.sqrt(1 - v @ v)
    b = g * np.concatenate([[1.0], v])
    L = boost_matrix(a, b)
    assert np.allclose(L @ a, b)
    assert np.allclose(L.T @ ETA @ L, ETA)
    # fixes vectors orthogonal to both
    n = np.array([0.0, 0.4, 0.3, 0.0])
    assert abs(minkowski_dot(n, b)) < 1e-15
    assert np.allclose(L @ n, n)
    # a pure boost seen from the rest frame of a is a symmetric matrix
    assert np.allclose(L, L.T)
    assert np.allclose(boost_matrix(a, a), np.eye(4))


def test_ricci_form_call():
    assert RICCI_FORM([1, 0], [0, 1]) == 1
    assert RICCI_FORM.inverse([1, 0], [0, 1]) == 1
