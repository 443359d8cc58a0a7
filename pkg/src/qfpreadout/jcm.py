"""Rabi, Jaynes-Cummings and dispersive qubit-resonator Hamiltonians.

Two sign conventions coexist, as in the underlying physics literature:

* the bare-qubit models here (Rabi, JC, dispersive) use +ω_q σz/2, so index 0
  of the qubit is the excited state |e>;
* the flux-qubit readout models (``single_qubit_dispersive`` and everything in
  ``models``) use the flux-qubit convention -ω σz/2, so index 0 is the ground
  state.

All operators act on qubit ⊗ Fock with ħ = 1.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .bases import BasisTag, QubitParams, mixing_angle
from .errors import DegenerateSplitting, DispersiveRegimeViolated, ModelError, ZeroDetuning
from .hilbert import (
    IDENTITY_2,
    SIGMA_MINUS,
    SIGMA_PLUS,
    SIGMA_X,
    SIGMA_Z,
    FockSpace,
    commutator,
    dagger,
    evolve,
    hermitian_eig,
    kron,
    ladder_ops,
    photon_block,
)

DISPERSIVE_THRESHOLD = 0.2
DEFAULT_EPS_SCALE = 10.0


@dataclass(frozen=True)
class ResonatorParams:
    omega_r: float
    space: FockSpace

    def __post_init__(self):
        if not self.omega_r > 0:
            raise ValueError("omega_r must be positive")


@dataclass(frozen=True)
class EffectiveQubitParams:
    """Flux qubit after QFP annealing: Δ_eff = Δ e^{-η}, ε_eff = eps_scale·ε."""

    base: QubitParams
    eta: float = 0.0
    eps_scale: float = DEFAULT_EPS_SCALE

    def __post_init__(self):
        if self.eta < 0:
            raise ValueError("eta must be >= 0")
        if self.eps_scale < 1:
            raise ValueError("eps_scale must be >= 1")

    @property
    def delta_eff(self) -> float:
        return self.base.delta * math.exp(-self.eta)

    @property
    def eps_eff(self) -> float:
        return self.eps_scale * self.base.epsilon

    @property
    def omega_eff(self) -> float:
        return math.hypot(self.eps_eff, self.delta_eff)

    @property
    def theta_eff(self) -> float:
        return mixing_angle(self.as_qubit())

    def as_qubit(self) -> QubitParams:
        return QubitParams(self.eps_eff, self.delta_eff)


@dataclass(frozen=True)
class DispersiveParams:
    g: float
    delta_detuning: float
    chi: float
    sin_theta: float = 1.0

    @property
    def validity(self) -> float:
        """g |sin θ| / |δ|; the dispersive treatment wants this well below 0.2."""
        return abs(self.g * self.sin_theta / self.delta_detuning)

    @property
    def ok(self) -> bool:
        return self.validity <= DISPERSIVE_THRESHOLD


def effective_qubit(q: QubitParams, eta: float, eps_scale: float = DEFAULT_EPS_SCALE) -> EffectiveQubitParams:
    return EffectiveQubitParams(q, eta, eps_scale)


def _check_dispersive(p: DispersiveParams) -> None:
    if not p.ok:
        warnings.warn(
            f"g|sinθ|/|δ| = {p.validity:.3f} exceeds {DISPERSIVE_THRESHOLD}",
            DispersiveRegimeViolated,
            stacklevel=3,
        )


# bare qubit + resonator (index 0 = |e>) -------------------------------------


def _free_terms(q: QubitParams, r: ResonatorParams) -> np.ndarray:
    n = r.space.n_max
    _, _, n_op = ladder_ops(r.space)
    return 0.5 * q.omega_q * kron(SIGMA_Z, np.eye(n)) + r.omega_r * kron(IDENTITY_2, n_op + 0.5 * np.eye(n))


def rabi_hamiltonian(q: QubitParams, r: ResonatorParams, g: float) -> np.ndarray:
    a, a_dag, _ = ladder_ops(r.space)
    return _free_terms(q, r) + g * kron(SIGMA_X, a + a_dag)


def jc_interaction(r: ResonatorParams, g: float) -> np.ndarray:
    a, a_dag, _ = ladder_ops(r.space)
    return g * (kron(SIGMA_PLUS, a) + kron(SIGMA_MINUS, a_dag))


def jc_hamiltonian(q: QubitParams, r: ResonatorParams, g: float) -> np.ndarray:
    return _free_terms(q, r) + jc_interaction(r, g)


def excitation_number(r: ResonatorParams) -> np.ndarray:
    _, _, n_op = ladder_ops(r.space)
    return kron(SIGMA_PLUS @ SIGMA_MINUS, np.eye(r.space.n_max)) + kron(IDENTITY_2, n_op)


def jc_eigenvalues(omega_r: float, delta: float, omega0: float, n: int) -> tuple[float, float]:
    """(E_-, E_+) of the {|e,n>, |g,n+1>} block of ``jc_hamiltonian``.

    With the zero-point term ω_r/2 kept in the resonator energy the block is
    centred on ω_r (n + 1).
    """
    half = 0.5 * math.sqrt(delta * delta + omega0 * omega0 * (n + 1))
    centre = omega_r * (n + 1)
    return centre - half, centre + half


def jc_dressed_states(n: int, delta: float, omega0: float) -> tuple[float, np.ndarray, np.ndarray]:
    """θ_n and the dressed states |+,n>, |-,n> over {|e,n>, |g,n+1>}."""
    if delta == 0 and omega0 == 0:
        raise DegenerateSplitting("δ = Ω0 = 0")
    theta = math.atan2(omega0 * math.sqrt(n + 1), delta)
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return theta, np.array([c, s], dtype=complex), np.array([-s, c], dtype=complex)


def jc_block(h: np.ndarray, n_max: int, n: int) -> np.ndarray:
    """{|e,n>, |g,n+1>} block of a qubit ⊗ Fock operator."""
    idx = [n, n_max + n + 1]
    return np.asarray(h)[np.ix_(idx, idx)]


def jc_dispersive_params(q: QubitParams, r: ResonatorParams, g: float) -> DispersiveParams:
    delta = q.omega_q - r.omega_r
    if delta == 0:
        raise ZeroDetuning("ω_q = ω_r")
    return DispersiveParams(g, delta, g * g / delta)


def dispersive_hamiltonian(q: QubitParams, r: ResonatorParams, g: float) -> np.ndarray:
    """(ω_r + χ σz)(a†a + ½) + ω_q σz/2, diagonal in the bare basis.

    Same as (ω_r + χσz) a†a + (ω_q + χ) σz/2 up to the zero-point ω_r/2, kept
    so that it shares the energy origin of ``jc_hamiltonian``.
    """
    p = jc_dispersive_params(q, r, g)
    _check_dispersive(p)
    n = r.space.n_max
    occ = np.arange(n) + 0.5
    diag = np.concatenate([(r.omega_r + p.chi) * occ + q.omega_q / 2, (r.omega_r - p.chi) * occ - q.omega_q / 2])
    return np.diag(diag).astype(complex)


def dispersive_deviation(q: QubitParams, r: ResonatorParams, g: float, n_exc_max: int = 3) -> float:
    """Largest eigenvalue gap between the JC and dispersive Hamiltonians over
    excitation manifolds 0..n_exc_max (matched by ordering within a manifold)."""
    if n_exc_max + 1 >= r.space.n_max:
        raise ValueError("n_exc_max too large for the truncation")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DispersiveRegimeViolated)
        hd = np.real(np.diag(dispersive_hamiltonian(q, r, g)))
    hjc = jc_hamiltonian(q, r, g)
    n_max = r.space.n_max
    worst = abs(float(np.real(hjc[n_max, n_max])) - hd[n_max])  # |g,0>
    for n in range(n_exc_max):
        w, _ = hermitian_eig(jc_block(hjc, n_max, n))
        ref = np.sort([hd[n], hd[n_max + n + 1]])
        worst = max(worst, float(np.max(np.abs(w - ref))))
    return worst


def qnd_commutators(q: QubitParams, r: ResonatorParams, g: float) -> tuple[float, float]:
    """Max-abs norms of [σz⊗I, H_int,JC] and [σz⊗I, H_disp]."""
    sz = kron(SIGMA_Z, np.eye(r.space.n_max))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DispersiveRegimeViolated)
        hd = dispersive_hamiltonian(q, r, g)
    c1 = commutator(sz, jc_interaction(r, g))
    c2 = commutator(sz, hd)
    return float(np.max(np.abs(c1))), float(np.max(np.abs(c2)))


def rabi_interaction_picture(q: QubitParams, r: ResonatorParams, g: float, t: float) -> np.ndarray:
    """e^{i H0 t} H_int e^{-i H0 t} for the Rabi coupling, H0 the free terms."""
    a, a_dag, _ = ladder_ops(r.space)
    u = evolve(_free_terms(q, r), -t)
    return u @ (g * kron(SIGMA_X, a + a_dag)) @ dagger(u)


# flux-qubit dispersive readout (index 0 = ground) ---------------------------


def single_qubit_params(eq: EffectiveQubitParams, r: ResonatorParams, g: float) -> DispersiveParams:
    delta = eq.omega_eff - r.omega_r
    if delta == 0:
        raise ZeroDetuning("ω_q,eff = ω_r")
    s = math.sin(eq.theta_eff)
    return DispersiveParams(g, delta, g * g * s * s / delta, s)


def readout_axis(theta: float, basis: BasisTag) -> np.ndarray:
    """σ̃z expressed in the requested single-qubit basis."""
    if basis is BasisTag.FLUX:
        return math.cos(theta) * SIGMA_Z + math.sin(theta) * SIGMA_X
    if basis in (BasisTag.ENERGY_Q2, BasisTag.ENERGY_Q1Q2):
        return SIGMA_Z.copy()
    raise ModelError(f"single-qubit model has no {basis.value} representation")


def single_qubit_dispersive(
    eq: EffectiveQubitParams, r: ResonatorParams, g: float, basis: BasisTag
) -> np.ndarray:
    """-[δ/2 + χ(a†a + ½)] σ̃z, with σ̃z rotated back to σz, σx in the flux basis."""
    p = single_qubit_params(eq, r, g)
    _check_dispersive(p)
    axis = readout_axis(eq.theta_eff, basis)
    occ = np.arange(r.space.n_max) + 0.5
    return kron(axis, np.diag(-(p.delta_detuning / 2 + p.chi * occ)))


@dataclass(frozen=True)
class DriveReport:
    max_deviation: float
    delta_r: float
    delta_q: float
    swt_residual: float
    eps_d: float
    hamiltonian: np.ndarray


def drive_equivalence_check(
    eq: EffectiveQubitParams, r: ResonatorParams, g: float, eps_d: float, omega_d: float
) -> DriveReport:
    """Reduce the driven readout Hamiltonian in the frame rotating at ω_d and
    compare it with the undriven energy-basis form.

    The frame Hamiltonian is Δ_r a†a − Δ_q σ̃z/2 − g sinθ (a σ̃+ + a† σ̃-) with
    Δ_r = ω_r − ω_d, Δ_q = ω_q,eff − ω_d; the drive itself is removed by the
    resonator displacement and does not reach the reduced form. The
    Schrieffer-Wolff generator S = λ(a σ̃+ − a† σ̃-), λ = g sinθ/δ, is applied to
    first order, H0 + [S, H0] + V + ½[S, V], and the constant −χ/2 dropped. The
    top Fock level is excluded from the comparison (truncation artefact).
    """
    if not omega_d > 0:
        raise ValueError("omega_d must be positive")
    p = single_qubit_params(eq, r, g)
    n = r.space.n_max
    a, a_dag, n_op = ladder_ops(r.space)
    d_r = r.omega_r - omega_d
    d_q = eq.omega_eff - omega_d
    h0 = d_r * kron(IDENTITY_2, n_op) - 0.5 * d_q * kron(SIGMA_Z, np.eye(n))
    gs = g * p.sin_theta
    v = -gs * (kron(SIGMA_PLUS, a) + kron(SIGMA_MINUS, a_dag))
    lam = gs / p.delta_detuning
    s = lam * (kron(SIGMA_PLUS, a) - kron(SIGMA_MINUS, a_dag))
    first = commutator(s, h0) + v
    h_red = h0 + first + 0.5 * commutator(s, v) + 0.5 * p.chi * np.eye(2 * n)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DispersiveRegimeViolated)
        ref = single_qubit_dispersive(eq, r, g, BasisTag.ENERGY_Q2)
    keep = [k for k in range(2 * n) if k % n < n - 1]
    dev = float(np.max(np.abs((h_red - ref)[np.ix_(keep, keep)])))
    resid = float(np.max(np.abs(first[np.ix_(keep, keep)])))
    return DriveReport(dev, d_r, d_q, resid, eps_d, h_red)


__all__ = [name for name in dir() if not name.startswith("_")]
