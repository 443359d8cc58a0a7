"""Dense complex linear algebra on qubit and truncated Fock spaces.

Operators are plain ``numpy`` complex arrays. Composite spaces are ordered
qubit(s) first, resonator last, so ``kron(sigma_z, eye(n_max))`` acts on the
qubit of a qubit-resonator system.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .errors import DimMismatch, NotHermitian, TruncationTooSmall, TruncationWarning

HERMITIAN_TOL = 1e-10

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
# raises index 1 -> index 0
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)
SIGMA_MINUS = SIGMA_PLUS.T.copy()
IDENTITY_2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class FockSpace:
    """Truncated oscillator space spanned by |0>, ..., |n_max - 1>."""

    n_max: int

    def __post_init__(self):
        if int(self.n_max) != self.n_max or self.n_max < 2:
            raise ValueError(f"n_max must be an integer >= 2, got {self.n_max!r}")

    @property
    def dim(self) -> int:
        return self.n_max

    def coherent_rule_ok(self, alpha: float) -> bool:
        """Documented accuracy rule for coherent states: n_max >= |α|² + 8|α| + 10."""
        a = abs(alpha)
        return self.n_max >= a * a + 8 * a + 10

    def displacement_rule_ok(self, nu: complex) -> bool:
        """Documented accuracy rule for D(ν): |ν|² + 6|ν| + 8 <= n_max."""
        a = abs(nu)
        return a * a + 6 * a + 8 <= self.n_max


def basis(dim: int, k: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[k] = 1.0
    return v


def kron(*ops: np.ndarray) -> np.ndarray:
    """Tensor product of any number of operators (or vectors)."""
    if not ops:
        raise ValueError("kron needs at least one operand")
    return reduce(np.kron, (np.asarray(o, dtype=complex) for o in ops))


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.asarray(m).T)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    return bool(np.max(np.abs(m - dagger(m)), initial=0.0) <= tol * scale)


def is_unitary(m: np.ndarray, tol: float = 1e-9) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return bool(np.max(np.abs(m @ dagger(m) - np.eye(m.shape[0])), initial=0.0) <= tol)


def ladder_ops(space: FockSpace) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return (a, a_dag, n_op). The truncated [a, a_dag] deviates from I only
    in the last diagonal entry."""
    a = np.diag(np.sqrt(np.arange(1, space.n_max)), k=1).astype(complex)
    a_dag = dagger(a)
    return a, a_dag, a_dag @ a


def number_op(space: FockSpace) -> np.ndarray:
    return np.diag(np.arange(space.n_max)).astype(complex)


def coherent_state(space: FockSpace, alpha: complex) -> np.ndarray:
    """Normalized coherent state |α> on the truncated space.

    Emits ``TruncationWarning`` below the accuracy rule and raises
    ``TruncationTooSmall`` when the untruncated tail carries more than 1e-6
    of the norm.
    """
    if not space.coherent_rule_ok(alpha):
        warnings.warn(
            f"n_max={space.n_max} below |α|²+8|α|+10 for α={alpha}", TruncationWarning, stacklevel=2
        )
    c = np.empty(space.n_max, dtype=complex)
    c[0] = math.exp(-abs(alpha) ** 2 / 2)
    for n in range(1, space.n_max):
        c[n] = c[n - 1] * alpha / math.sqrt(n)
    norm = float(np.linalg.norm(c))
    if norm < 1 - 1e-6:
        raise TruncationTooSmall(
            f"coherent state α={alpha} keeps norm {norm:.3e} in n_max={space.n_max}"
        )
    return c / norm


def hermitian_eig(h: np.ndarray, tol: float = HERMITIAN_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix.

    Eigenvalues ascend. Each eigenvector is rotated so that its
    largest-magnitude component (first one on near-ties) is real and positive.
    """
    h = np.asarray(h, dtype=complex)
    if not is_hermitian(h, tol):
        raise NotHermitian("matrix is not Hermitian within tolerance")
    w, v = np.linalg.eigh(0.5 * (h + dagger(h)))
    mags = np.abs(v)
    top = mags.max(axis=0)
    for j in range(v.shape[1]):
        k = int(np.argmax(mags[:, j] >= top[j] * (1 - 1e-9)))
        v[:, j] *= np.conj(v[k, j]) / abs(v[k, j])
        v[k, j] = abs(v[k, j])
    return w, v


def evolve(h: np.ndarray, t: float) -> np.ndarray:
    """U = exp(-i h t) built from the eigen-decomposition (unitary by construction)."""
    w, v = hermitian_eig(h)
    return (v * np.exp(-1j * w * t)) @ dagger(v)


def displacement(space: FockSpace, nu: complex) -> np.ndarray:
    """Truncated D(ν) = exp(ν a† − ν* a).

    Accurate on the interior block while |ν|² + 6|ν| + 8 <= n_max; beyond that
    the truncation error grows smoothly (no exception).
    """
    a, a_dag, _ = ladder_ops(space)
    # D = exp(-i K) with K = i(ν a† − ν* a) Hermitian
    k = 1j * (nu * a_dag - np.conj(nu) * a)
    return evolve(k, 1.0)


def partial_trace(rho: np.ndarray, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Trace out every factor of ``dims`` not listed in ``keep``."""
    rho = np.asarray(rho, dtype=complex)
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims):
        raise DimMismatch(f"dims must be positive, got {dims}")
    total = int(np.prod(dims))
    if rho.shape != (total, total):
        raise DimMismatch(f"rho has shape {rho.shape}, dims {dims} imply {total}")
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= len(dims) for k in keep):
        raise DimMismatch(f"keep indices {keep} out of range for {len(dims)} factors")
    n = len(dims)
    t = rho.reshape(dims + dims)
    letters = "abcdefghijklmnopqrstuvwxyz"
    row = list(letters[:n])
    col = list(letters[n : 2 * n])
    for i in range(n):
        if i not in keep:
            col[i] = row[i]
    out = "".join(row[i] for i in keep) + "".join(col[i] for i in keep)
    res = np.einsum("".join(row) + "".join(col) + "->" + out, t)
    d = int(np.prod([dims[i] for i in keep])) if keep else 1
    return res.reshape(d, d)


# photon-number block helpers ------------------------------------------------


def photon_block(h: np.ndarray, n_max: int, m: int, n: int) -> np.ndarray:
    """Qubit-space block <m|h|n> of an operator ordered qubit(s) x Fock."""
    return np.asarray(h)[m::n_max, n::n_max]


def photon_offdiag_norm(h: np.ndarray, n_max: int) -> float:
    """Max-abs size of the couplings between different photon numbers."""
    h = np.asarray(h)
    dq = h.shape[0] // n_max
    t = h.reshape(dq, n_max, dq, n_max)
    off = t.transpose(1, 3, 0, 2)[~np.eye(n_max, dtype=bool)]
    return float(np.max(np.abs(off), initial=0.0))


def assemble_photon_diagonal(blocks: Sequence[np.ndarray]) -> np.ndarray:
    """Inverse of ``photon_block``: sum_n blocks[n] ⊗ |n><n|."""
    n_max = len(blocks)
    dq = blocks[0].shape[0]
    h = np.zeros((dq * n_max, dq * n_max), dtype=complex)
    for n, b in enumerate(blocks):
        h[n::n_max, n::n_max] = b
    return h
