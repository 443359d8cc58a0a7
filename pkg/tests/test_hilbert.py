import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.linalg import expm

from qfpreadout.errors import DimMismatch, NotHermitian, TruncationTooSmall, TruncationWarning
from qfpreadout.hilbert import (
    SIGMA_MINUS,
    SIGMA_PLUS,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    FockSpace,
    assemble_photon_diagonal,
    basis,
    coherent_state,
    commutator,
    dagger,
    displacement,
    evolve,
    hermitian_eig,
    is_hermitian,
    is_unitary,
    kron,
    ladder_ops,
    partial_trace,
    photon_block,
    photon_offdiag_norm,
)


def random_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return a + dagger(a)


def test_fock_space_rejects_small_or_fractional():
    for bad in (0, 1, 2.5):
        with pytest.raises(ValueError):
            FockSpace(bad)
    assert FockSpace(2).dim == 2


def test_pauli_algebra():
    assert np.allclose(commutator(SIGMA_X, SIGMA_Y), 2j * SIGMA_Z)
    assert np.allclose(SIGMA_PLUS @ basis(2, 1), basis(2, 0))
    assert np.allclose(SIGMA_MINUS, dagger(SIGMA_PLUS))


def test_ladder_commutator_only_fails_in_last_level():
    a, ad, n = ladder_ops(FockSpace(6))
    c = commutator(a, ad)
    assert np.allclose(np.diag(c)[:-1], 1)
    assert np.isclose(c[-1, -1], -5)
    assert np.allclose(np.diag(n), np.arange(6))


def test_kron_ordering_qubit_first():
    n_max = 4
    op = kron(SIGMA_Z, np.eye(n_max))
    assert np.allclose(np.diag(op), [1] * n_max + [-1] * n_max)
    with pytest.raises(ValueError):
        kron()


def test_is_hermitian_and_unitary():
    assert is_hermitian(SIGMA_Y)
    assert not is_hermitian(SIGMA_PLUS)
    assert not is_hermitian(np.ones((2, 3)))
    assert is_unitary(SIGMA_X)
    assert not is_unitary(2 * SIGMA_X)


def test_coherent_state_matches_closed_form():
    psi = coherent_state(FockSpace(40), 1.3)
    n = np.arange(40)
    ref = np.exp(-1.3**2 / 2) * 1.3**n / np.sqrt([float(math.factorial(k)) for k in n])
    assert np.allclose(psi, ref, atol=1e-14)


def test_coherent_state_warns_then_raises():
    with pytest.warns(TruncationWarning):
        coherent_state(FockSpace(12), 1.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        with pytest.raises(TruncationTooSmall):
            coherent_state(FockSpace(5), 3.0)


def test_hermitian_eig_phase_convention():
    rng = np.random.default_rng(1)
    h = random_hermitian(rng, 6)
    w, v = hermitian_eig(h)
    assert np.all(np.diff(w) >= 0)
    assert np.allclose(h @ v, v * w)
    for j in range(6):
        k = np.argmax(np.abs(v[:, j]))
        assert abs(v[k, j].imag) < 1e-14 and v[k, j].real > 0
    with pytest.raises(NotHermitian):
        hermitian_eig(SIGMA_PLUS)


@given(st.integers(0, 10_000), st.floats(-3, 3))
def test_evolve_matches_expm(seed, t):
    h = random_hermitian(np.random.default_rng(seed), 4)
    u = evolve(h, t)
    assert is_unitary(u)
    assert np.allclose(u, expm(-1j * h * t), atol=1e-10)


def test_displacement_on_vacuum_gives_coherent_state():
    space = FockSpace(60)
    nu = 1.1 - 0.4j
    d = displacement(space, nu)
    assert np.allclose(d[:, 0], coherent_state(space, nu), atol=1e-10)
    assert space.displacement_rule_ok(nu)


@given(st.integers(0, 10_000))
def test_partial_trace_of_product(seed):
    rng = np.random.default_rng(seed)
    mats = []
    for d in (2, 3, 2):
        a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        r = a @ dagger(a)
        mats.append(r / np.trace(r))
    full = kron(*mats)
    assert np.allclose(partial_trace(full, [2, 3, 2], [1]), mats[1])
    assert np.allclose(partial_trace(full, [2, 3, 2], [0, 2]), kron(mats[0], mats[2]))
    assert np.isclose(partial_trace(full, [2, 3, 2], [])[0, 0], 1)


def test_partial_trace_errors():
    with pytest.raises(DimMismatch):
        partial_trace(np.eye(4), [2, 3], [0])
    with pytest.raises(DimMismatch):
        partial_trace(np.eye(4), [2, 2], [2])


def test_photon_blocks_roundtrip():
    rng = np.random.default_rng(3)
    blocks = [random_hermitian(rng, 2) for _ in range(5)]
    h = assemble_photon_diagonal(blocks)
    assert photon_offdiag_norm(h, 5) == 0
    for n, b in enumerate(blocks):
        assert np.array_equal(photon_block(h, 5, n, n), b)
    a, ad, _ = ladder_ops(FockSpace(5))
    assert photon_offdiag_norm(kron(SIGMA_X, a + ad), 5) == pytest.approx(2.0)
