"""Mixing angles and basis changes: flux <-> energy for a single flux qubit,
bare <-> dressed for coupled pairs.

Qubit Hamiltonians follow H_q = -(ε σz + Δ σx)/2 with tan θ = Δ/ε. The flux
basis is the σz eigenbasis; index 0 is the clockwise current state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegenerateQubit, DegenerateSplitting, SingularAngle
from .hilbert import SIGMA_X, SIGMA_Z


class BasisTag(str, Enum):
    FLUX = "flux"
    ENERGY_Q2 = "energy-q2"
    ENERGY_Q1Q2 = "energy-q1q2"
    DRESSED_Q2 = "dressed-q2"
    DRESSED_Q1Q2 = "dressed-q1q2"

    @classmethod
    def parse(cls, text: str) -> "BasisTag":
        key = text.strip().lower().replace("_", "-")
        for tag in cls:
            if key in (tag.value, tag.name.lower().replace("_", "-")):
                return tag
        raise ValueError(f"unknown basis '{text}'")


@dataclass(frozen=True)
class QubitParams:
    epsilon: float
    delta: float

    @property
    def omega_q(self) -> float:
        return math.hypot(self.epsilon, self.delta)

    @property
    def theta(self) -> float:
        return mixing_angle(self)


def mixing_angle(q: QubitParams) -> float:
    if q.epsilon == 0 and q.delta == 0:
        raise DegenerateQubit("ε = Δ = 0 has no mixing angle")
    return math.atan2(q.delta, q.epsilon)


def qubit_hamiltonian(q: QubitParams) -> np.ndarray:
    """-(ε σz + Δ σx)/2 in the flux basis."""
    return -0.5 * (q.epsilon * SIGMA_Z + q.delta * SIGMA_X)


def flux_energy_unitary(theta: float) -> np.ndarray:
    """U = [[cos θ/2, sin θ/2], [-sin θ/2, cos θ/2]]; U H_q U† = -ω_q σz / 2."""
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, s], [-s, c]], dtype=complex)


def ground_state_flux(q: QubitParams) -> np.ndarray:
    """Ground state of H_q written in the flux basis, (cos θ/2, sin θ/2).

    This is U† applied to the energy-basis |0>.
    """
    th = mixing_angle(q)
    return np.array([math.cos(th / 2), math.sin(th / 2)], dtype=complex)


def _sgn(x: float) -> float:
    return -1.0 if x < 0 else 1.0


def exchange_dressed_transform(delta0: float, J: float) -> tuple[float, np.ndarray]:
    """Dressed basis of the exchange-coupled pair.

    Returns (γ0, U4) where column k of U4 is the k-th dressed state in the bare
    basis {|00>, |01>, |10>, |11>}; sin γ0 = sgn(δ0) J / sqrt(δ0² + J²)
    (sgn(0) taken as +1).
    """
    if delta0 == 0 and J == 0:
        raise DegenerateSplitting("δ0 = J = 0")
    gamma0 = math.atan2(_sgn(delta0) * J, abs(delta0))
    c, s = math.cos(gamma0 / 2), math.sin(gamma0 / 2)
    u = np.zeros((4, 4), dtype=complex)
    u[0, 0] = 1.0
    u[1, 1], u[2, 1] = c, s
    u[1, 2], u[2, 2] = -s, c
    u[3, 3] = 1.0
    return gamma0, u


def pair_angle(a: float, k: float) -> float:
    """Label-preserving mixing angle of the 2x2 block a σz + k σx.

    Returns φ in (-π/2, π/2) with tan φ = k/a; (cos φ/2, sin φ/2) is then the
    eigenvector continuously connected to the first basis state. Computed as
    atan2(k·sgn a, |a|).
    """
    if a == 0:
        raise SingularAngle("mixing angle denominator is zero")
    return math.atan2(k * _sgn(a), abs(a))


def fq2_dressed_angles(delta_eff2_n: float, j_zz: float, j_zx: float) -> tuple[float, float]:
    """(θ_{n-}, θ_{n+}) with tan θ_{n±} = ∓J_zx / (δ/2 ± J_zz).

    θ_{n-} belongs to the σ1z = +1 sector, θ_{n+} to σ1z = -1.
    """
    theta_minus = pair_angle(-(delta_eff2_n / 2 - j_zz), -j_zx)
    theta_plus = pair_angle(-(delta_eff2_n / 2 + j_zz), j_zx)
    return theta_minus, theta_plus


def rotation_2x2(phi: float) -> np.ndarray:
    """Columns (cos φ/2, sin φ/2) and (-sin φ/2, cos φ/2)."""
    c, s = math.cos(phi / 2), math.sin(phi / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def block_pair_transform(phi_outer: float, phi_inner: float) -> np.ndarray:
    """4x4 dressed transform for a Hamiltonian with invariant pairs
    {|00>, |11>} (angle phi_outer) and {|01>, |10>} (angle phi_inner).

    Columns are the dressed states |00̄>, |01̄>, |10̄>, |11̄>.
    """
    co, so = math.cos(phi_outer / 2), math.sin(phi_outer / 2)
    ci, si = math.cos(phi_inner / 2), math.sin(phi_inner / 2)
    u = np.zeros((4, 4), dtype=complex)
    u[0, 0], u[3, 0] = co, so
    u[1, 1], u[2, 1] = ci, si
    u[1, 2], u[2, 2] = -si, ci
    u[0, 3], u[3, 3] = -so, co
    return u


def sector_pair_transform(phi_up: float, phi_down: float) -> np.ndarray:
    """4x4 dressed transform block-diagonal in the first qubit:
    rotation_2x2(phi_up) on σ1z = +1 and rotation_2x2(phi_down) on σ1z = -1."""
    u = np.zeros((4, 4), dtype=complex)
    u[:2, :2] = rotation_2x2(phi_up)
    u[2:, 2:] = rotation_2x2(phi_down)
    return u
