"""Half-plane coherent-state POVM and the measurement superoperator.

The resonator starts in a real coherent state |α>, evolves jointly with the
qubit(s) for t_m, and is then sorted by the sign of Im β. For Hamiltonians
that conserve photon number the channel reduces to

    E_x(ρ) = Σ_{m,n} g_x(m, n) K_n ρ K_m†,   K_n = <n|U(t_m)|n>,

with g_x(m, n) = c_n c_m <m|E_x|n> and c_n = <n|α>.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import gammaln

from .errors import DimMismatch, NotAState, NotPhotonBlockDiagonal
from .hilbert import (
    FockSpace,
    coherent_state,
    dagger,
    evolve,
    is_hermitian,
    kron,
    partial_trace,
    photon_block,
    photon_offdiag_norm,
)

BLOCK_TOL = 1e-10
TRACE_TOL = 1e-8
LOG_GAMMA_THRESHOLD = 30


@dataclass(frozen=True)
class MeasurementConfig:
    """Coherent amplitude, measurement time and outcome convention.

    Outcome "+" integrates the half-plane selected by ``chi_sign``; with the
    closed form used here x = +1 is Im β < 0.
    """

    alpha: float
    t_m: float
    chi_sign: int
    space: FockSpace

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError("alpha must be >= 0")
        if self.t_m < 0:
            raise ValueError("t_m must be >= 0")
        if self.chi_sign not in (1, -1):
            raise ValueError("chi_sign must be +1 or -1")

    @classmethod
    def canonical(cls, alpha: float, chi: float, chi_sign: int, space: FockSpace, chi_t: float = math.pi / 2):
        """t_m = chi_t/|χ|; the default chi_t gives t_m = π/(2|χ|)."""
        if chi == 0:
            raise ValueError("χ = 0 has no canonical measurement time")
        return cls(alpha, chi_t / abs(chi), chi_sign, space)


@dataclass(frozen=True)
class ChannelResult:
    post_state_plus: np.ndarray
    post_state_minus: np.ndarray
    p_plus: float
    p_minus: float
    tail: float = 0.0

    @property
    def nonselective(self) -> np.ndarray:
        return self.post_state_plus + self.post_state_minus


def _odd(k: int) -> bool:
    return k % 2 != 0


def _povm_offdiag(m: int, n: int) -> float:
    """Γ((m+n)/2+1) / (sqrt(m! n!) (m−n)) for odd m−n, else 0."""
    if not _odd(m - n):
        return 0.0
    lg = gammaln((m + n) / 2 + 1) - 0.5 * (gammaln(m + 1) + gammaln(n + 1))
    return math.exp(lg) / (m - n)


def g_coeff(m: int, n: int, alpha: float, x: int) -> complex:
    """g_x(m, n) = c_m c_n <m|E_x|n> for a real coherent amplitude."""
    if m < 0 or n < 0:
        raise ValueError("m and n must be >= 0")
    if x not in (1, -1):
        raise ValueError("x must be +1 or -1")
    if m + n > LOG_GAMMA_THRESHOLD:
        if alpha == 0:
            return 0j
        la = math.log(alpha)
        diag = 0.0
        if m == n:
            diag = 0.5 * math.exp(-alpha * alpha + 2 * n * la - gammaln(n + 1))
        off = 0.0
        if _odd(m - n):
            lg = -alpha * alpha + (m + n) * la + gammaln((m + n) / 2 + 1) - gammaln(m + 1) - gammaln(n + 1)
            off = math.exp(lg) / (m - n)
        return complex(diag, -x * off / math.pi)
    pref = math.exp(-alpha * alpha)
    diag = 0.5 * alpha ** (2 * n) / math.factorial(n) if m == n else 0.0
    off = 0.0
    if _odd(m - n):
        off = alpha ** (m + n) * math.gamma((m + n) / 2 + 1) / (math.factorial(m) * math.factorial(n) * (m - n))
    return complex(pref * diag, -pref * x * off / math.pi)


def povm_element(space: FockSpace, x: int) -> np.ndarray:
    """<m|E_x|n> = δ_mn/2 − (i x/π) Γ((m+n)/2+1) odd(m−n) / (sqrt(m! n!) (m−n))."""
    if x not in (1, -1):
        raise ValueError("x must be +1 or -1")
    n_max = space.n_max
    e = 0.5 * np.eye(n_max, dtype=complex)
    for m in range(n_max):
        for n in range(n_max):
            if _odd(m - n):
                e[m, n] = -1j * x * _povm_offdiag(m, n) / math.pi
    return e


def g_matrix(n_max: int, alpha: float, x: int) -> np.ndarray:
    return np.array([[g_coeff(m, n, alpha, x) for n in range(n_max)] for m in range(n_max)])


def coherent_tail(n_max: int, alpha: float) -> float:
    """Probability weight of |α> beyond the truncation."""
    if alpha == 0:
        return 0.0
    lp = [-alpha * alpha + 2 * n * math.log(alpha) - gammaln(n + 1) for n in range(n_max)]
    return max(0.0, 1.0 - math.fsum(math.exp(v) for v in lp))


def _default_keep(dq: int) -> tuple[int, ...] | None:
    if dq == 2:
        return None
    if dq == 4:
        return (1,)
    raise DimMismatch(f"qubit dimension {dq} is neither 2 nor 4")


def _reduce(rho: np.ndarray, keep: Sequence[int] | None) -> np.ndarray:
    if keep is None:
        return rho
    return partial_trace(rho, [2] * int(round(math.log2(rho.shape[0]))), keep)


def _result(rp: np.ndarray, rm: np.ndarray, tail: float) -> ChannelResult:
    rp = 0.5 * (rp + dagger(rp))
    rm = 0.5 * (rm + dagger(rm))
    return ChannelResult(rp, rm, float(np.real(np.trace(rp))), float(np.real(np.trace(rm))), tail)


def _check_shapes(h: np.ndarray, rho0: np.ndarray, n_max: int) -> int:
    h = np.asarray(h)
    dq = rho0.shape[0]
    if rho0.shape != (dq, dq) or h.shape != (dq * n_max, dq * n_max):
        raise DimMismatch(f"h {h.shape} incompatible with rho {rho0.shape} and n_max={n_max}")
    return dq


def apply_channel_fast(
    h: np.ndarray, rho0: np.ndarray, cfg: MeasurementConfig, keep: Sequence[int] | None = ...
) -> ChannelResult:
    """Photon-number-block evaluation of E_±(ρ0).

    ``keep`` lists the qubit factors retained afterwards; by default a
    two-qubit state keeps the second (read) qubit.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    n_max = cfg.space.n_max
    dq = _check_shapes(h, rho0, n_max)
    if keep is ...:
        keep = _default_keep(dq)
    off = photon_offdiag_norm(h, n_max)
    if off > BLOCK_TOL:
        raise NotPhotonBlockDiagonal(
            f"photon-number coupling {off:.2e}; use apply_channel_oracle for this Hamiltonian"
        )
    ks = [evolve(photon_block(h, n_max, n, n), cfg.t_m) for n in range(n_max)]
    out = []
    for x in (cfg.chi_sign, -cfg.chi_sign):
        g = g_matrix(n_max, cfg.alpha, x)
        kr = [k @ rho0 for k in ks]
        acc = np.zeros_like(rho0)
        for m in range(n_max):
            row = g[m]
            if not np.any(row):
                continue
            s = sum((row[n] * kr[n] for n in range(n_max) if row[n] != 0), np.zeros_like(rho0))
            acc += s @ dagger(ks[m])
        out.append(_reduce(acc, keep))
    return _result(out[0], out[1], coherent_tail(n_max, cfg.alpha))


def apply_channel_oracle(
    h: np.ndarray, rho0: np.ndarray, cfg: MeasurementConfig, keep: Sequence[int] | None = ...
) -> ChannelResult:
    """Full joint evolution of ρ0 ⊗ |α><α| followed by the POVM and a partial trace."""
    rho0 = np.asarray(rho0, dtype=complex)
    n_max = cfg.space.n_max
    h = np.asarray(h, dtype=complex)
    dq = _check_shapes(h, rho0, n_max)
    if keep is ...:
        keep = _default_keep(dq)
    psi_r = coherent_state(cfg.space, cfg.alpha)
    full = kron(rho0, np.outer(psi_r, psi_r.conj()))
    u = evolve(h, cfg.t_m)
    full = u @ full @ dagger(u)
    out = []
    for x in (cfg.chi_sign, -cfg.chi_sign):
        e = kron(np.eye(dq), povm_element(cfg.space, x))
        red = partial_trace(e @ full, [dq, n_max], [0])
        out.append(_reduce(red, keep))
    return _result(out[0], out[1], 0.0)


def fidelity(psi0: np.ndarray, sigma: np.ndarray, normalized: bool = True) -> float:
    """<ψ0|σ|ψ0> for a pure reference state."""
    psi0 = np.asarray(psi0, dtype=complex).ravel()
    sigma = np.asarray(sigma, dtype=complex)
    if sigma.shape != (psi0.size, psi0.size):
        raise DimMismatch(f"state of size {psi0.size} vs σ {sigma.shape}")
    if abs(np.linalg.norm(psi0) - 1) > TRACE_TOL:
        raise NotAState("ψ0 is not normalized")
    if not is_hermitian(sigma):
        raise NotAState("σ is not Hermitian")
    if normalized and abs(np.trace(sigma) - 1) > TRACE_TOL:
        raise NotAState(f"trace {np.trace(sigma).real:.10f} differs from 1")
    f = float(np.real(np.vdot(psi0, sigma @ psi0)))
    if normalized:
        f = min(1.0, max(0.0, f))
    return f


CARDINAL_STATES = {
    "0": np.array([1, 0], dtype=complex),
    "1": np.array([0, 1], dtype=complex),
    "+": np.array([1, 1], dtype=complex) / math.sqrt(2),
    "-": np.array([1, -1], dtype=complex) / math.sqrt(2),
    "+i": np.array([1, 1j], dtype=complex) / math.sqrt(2),
    "-i": np.array([1, -1j], dtype=complex) / math.sqrt(2),
}


def outcome_fidelities(psi0: np.ndarray, res: ChannelResult) -> tuple[float, float]:
    """Fidelity of each normalized post-measurement state (NaN for a null outcome)."""
    vals = []
    for rho, p in ((res.post_state_plus, res.p_plus), (res.post_state_minus, res.p_minus)):
        vals.append(fidelity(psi0, rho / p) if p > 1e-14 else math.nan)
    return vals[0], vals[1]


@dataclass(frozen=True)
class ProtocolOutcome:
    fidelity: float
    channel: ChannelResult
    outcome_fidelities: tuple[float, float] = field(default=(math.nan, math.nan))


def run_protocol(model, psi0: np.ndarray | None, cfg: MeasurementConfig, oracle: bool = False):
    """Steps: prepare |ψ0> (⊗ |α>), evolve for t_m, apply E_±, compare.

    ``model`` is a ``models.ModelSpec``. Returns (non-selective fidelity,
    ChannelResult). ψ0 defaults to index 0 of the read qubit.
    """
    from .models import build_hamiltonian

    if psi0 is None:
        psi0 = CARDINAL_STATES["0"]
    h = build_hamiltonian(model)
    rho0 = model.initial_density(psi0)
    path = apply_channel_oracle if oracle else apply_channel_fast
    res = path(h, rho0, cfg, keep=model.keep)
    # the fast path keeps the truncated Poisson weights unnormalized
    return fidelity(psi0, res.nonselective / (1.0 - res.tail)), res


def readout_fidelity(model, cfg: MeasurementConfig, oracle: bool = False) -> float:
    """½[P(+ | |0>) + P(− | |1>)], the assignment fidelity of the read qubit."""
    _, r0 = run_protocol(model, CARDINAL_STATES["0"], cfg, oracle)
    _, r1 = run_protocol(model, CARDINAL_STATES["1"], cfg, oracle)
    return 0.5 * (r0.p_plus + r1.p_minus)


def cardinal_fidelities(model, cfg: MeasurementConfig) -> dict[str, float]:
    return {k: run_protocol(model, v, cfg)[0] for k, v in CARDINAL_STATES.items()}


__all__ = [name for name in dir() if not name.startswith("_")]
