"""QFP annealing: schedule, double-well minimum, storage fidelity and the
displaced-oscillator picture of the coupled flux qubit and QFP.

Dimensionless conventions: the QFP Hamiltonian is
E_L [4ξ² q²/2 + φ²/2 + β cos φ − λ φ σz], so the effective mass is
m = 1/(2ξ)² and the small-oscillation frequency at the well bottom is
Ω = 2ξ sqrt(1 − β cos φ_p).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import eval_laguerre

from .bases import BasisTag, QubitParams, mixing_angle
from .errors import DegenerateQubit, ModelError, NoStableMinimum
from .hilbert import SIGMA_X, SIGMA_Z, FockSpace, kron, ladder_ops

DEFAULT_LAMBDA = 0.1
PROJECTION_MODES = ("real-part", "magnitude")


@dataclass(frozen=True)
class QfpParams:
    xi: float = 0.4
    beta_max: float = 2.5
    lam: float = DEFAULT_LAMBDA
    omega: float = 1.0
    e_l: float = 1.0

    def __post_init__(self):
        if self.xi <= 0 or self.beta_max <= 0 or self.omega <= 0 or self.e_l <= 0:
            raise ValueError("xi, beta_max, omega and e_l must be positive")
        if self.lam < 0:
            raise ValueError("lambda must be >= 0")

    @property
    def t_qfp(self) -> float:
        return math.pi / (2 * self.omega)

    @property
    def mass(self) -> float:
        return 1.0 / (2 * self.xi) ** 2


@dataclass(frozen=True)
class WellSolution:
    phi_p: float
    curvature: float
    omega_eff: float
    sigma_hat: float


def beta_schedule(p: QfpParams, t: float) -> float:
    if t < 0:
        raise ValueError("t must be >= 0")
    if t >= p.t_qfp:
        return p.beta_max
    return p.beta_max * math.sin(p.omega * t)


def _well_root(beta: float, lam: float) -> float:
    f = lambda x: x - beta * math.sin(x) - lam
    df = lambda x: 1.0 - beta * math.cos(x)
    # f is increasing on [lo, π+λ]; f(lo) <= 0 < f(π+λ)
    lo = math.acos(1.0 / beta) if beta > 1 else 0.0
    hi = math.pi + lam
    if f(lo) > 0:
        raise NoStableMinimum(f"no sign change for β={beta}, λ={lam}")
    if f(lo) == 0:
        return lo
    x = 0.5 * (lo + hi)
    for _ in range(200):
        fx = f(x)
        if abs(fx) <= 1e-15:
            break
        if fx > 0:
            hi = x
        else:
            lo = x
        d = df(x)
        step = x - fx / d if d > 0 else None
        x = step if step is not None and lo < step < hi else 0.5 * (lo + hi)
        if hi - lo < 1e-16:
            break
    return x


def solve_phi_p(beta: float, lam: float = DEFAULT_LAMBDA, xi: float | None = None) -> WellSolution:
    """Minimum φ_p of the tilted double well: smallest root of
    φ − β sin φ − λ = 0 with positive curvature 1 − β cos φ.

    ``omega_eff`` and ``sigma_hat`` need ξ and are NaN when it is omitted.
    """
    if beta < 0 or lam < 0:
        raise ValueError("beta and lambda must be >= 0")
    if lam == 0 and beta < 1:
        phi = 0.0
    elif lam == 0 and beta == 1:
        raise NoStableMinimum("β = 1, λ = 0: flat well bottom")
    else:
        phi = _well_root(beta, lam)
    curv = 1.0 - beta * math.cos(phi)
    if not curv > 0:
        raise NoStableMinimum(f"curvature {curv} at φ_p={phi}")
    resid = abs(phi - beta * math.sin(phi) - lam)
    if resid > 1e-12:
        raise NoStableMinimum(f"root residual {resid:.2e} too large")
    if xi is None:
        return WellSolution(phi, curv, math.nan, math.nan)
    return WellSolution(phi, curv, 2 * xi * math.sqrt(curv), math.sqrt(xi / math.sqrt(curv)))


def potential(beta: float, lam: float, sigma_z: int, phi: float) -> float:
    return phi * phi / 2 + beta * math.cos(phi) - lam * phi * sigma_z


def potential_taylor(beta: float, lam: float, sigma_z: int, phi: float) -> float:
    """Second-order expansion of ``potential`` about the well minimum σz·φ_p."""
    sol = solve_phi_p(beta, lam)
    phi0 = sigma_z * sol.phi_p
    return potential(beta, lam, sigma_z, phi0) + 0.5 * sol.curvature * (phi - phi0) ** 2


def normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def _is_energy(basis: BasisTag) -> bool:
    if basis is BasisTag.FLUX:
        return False
    if basis in (BasisTag.ENERGY_Q2, BasisTag.ENERGY_Q1Q2):
        return True
    raise ModelError(f"storage fidelity is defined for flux/energy bases, not {basis.value}")


def storage_fidelity(
    p: QfpParams,
    q: QubitParams,
    t_m: float,
    basis: BasisTag,
    projection: str = "real-part",
) -> float:
    """Φ(φ_p/σ̂) at time t_m of the ramp.

    In the energy basis the stored position is rotated by the qubit mixing
    angle; ``projection`` picks its real part (cos θ · φ_p) or magnitude.
    """
    if t_m < 0:
        raise ValueError("t_m must be >= 0")
    if projection not in PROJECTION_MODES:
        raise ValueError(f"projection must be one of {PROJECTION_MODES}")
    sol = solve_phi_p(beta_schedule(p, t_m), p.lam, p.xi)
    x = sol.phi_p
    if _is_energy(basis) and projection == "real-part":
        x *= math.cos(mixing_angle(q))
    return normal_cdf(x / sol.sigma_hat)


def coupled_qfp_hamiltonian(
    p: QfpParams, t: float, space: FockSpace, qubit: QubitParams | None = None
) -> np.ndarray:
    """H/E_L = Ω a†a + Ω sqrt(mΩ/2) φ_p (a† + a) σz on qubit ⊗ Fock.

    With ``qubit`` given, -(ε σz + Δ σx)/(2 E_L) is added.
    """
    sol = solve_phi_p(beta_schedule(p, t), p.lam, p.xi)
    om = sol.omega_eff
    a, a_dag, n_op = ladder_ops(space)
    coupling = om * math.sqrt(p.mass * om / 2) * sol.phi_p
    h = om * kron(np.eye(2), n_op) + coupling * kron(SIGMA_Z, a + a_dag)
    if qubit is not None:
        h = h + kron(-0.5 * (qubit.epsilon * SIGMA_Z + qubit.delta * SIGMA_X), np.eye(space.n_max)) / p.e_l
    return h


def number_state_overlap(N: int, beta: float) -> float:
    """<N|D(β)|N> = exp(-β²/2) L_N(β²) for real β."""
    if N < 0:
        raise ValueError("N must be >= 0")
    b2 = beta * beta
    return float(math.exp(-b2 / 2) * eval_laguerre(N, b2))


def bare_dressed_overlap(N: int, g_over_wr: float, theta: float, theta_q: float) -> float:
    return math.cos((theta - theta_q) / 2) * number_state_overlap(N, g_over_wr)


def displaced_block_eigen(
    N: int, eps: float, delta: float, g: float, wr: float
) -> tuple[float, float, float]:
    """Adiabatic two-level block of the displaced oscillator at Fock level N.

    Returns (E_minus, E_plus, θ) for [[E_N − ε/2, −Δs/2], [−Δs/2, E_N + ε/2]],
    s = <N|D(−2g/ω_r)|N>, E_N = ω_r (N − g²/ω_r²).
    """
    s = number_state_overlap(N, 2 * g / wr)
    if eps == 0 and delta * s == 0:
        raise DegenerateQubit("ε = Δ·s = 0")
    e_n = wr * (N - (g / wr) ** 2)
    half = 0.5 * math.sqrt(eps * eps + (delta * s) ** 2)
    return e_n - half, e_n + half, math.atan2(delta * s, eps)
