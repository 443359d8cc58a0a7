"""Catalog of dispersive-frame readout Hamiltonians and RWA crossover checks.

Every Hamiltonian is assembled photon sector by photon sector: within sector n
the resonator enters only through

    δ̂_n = δ_eff,2 + χ (2n + 1),

so the result commutes with I ⊗ a†a by construction. Qubit ordering is
FQ1 ⊗ FQ2 (the read qubit FQ2 last); the exchange reference model reads its
first qubit.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .bases import (
    BasisTag,
    QubitParams,
    block_pair_transform,
    exchange_dressed_transform,
    fq2_dressed_angles,
    mixing_angle,
    pair_angle,
    sector_pair_transform,
)
from .errors import (
    DispersiveRegimeViolated,
    InteractionRegimeWarning,
    ModelError,
    NoCrossoverInRange,
    ZeroDetuning,
)
from .hilbert import IDENTITY_2, SIGMA_X, SIGMA_Y, SIGMA_Z, FockSpace, assemble_photon_diagonal, dagger, kron
from .jcm import DISPERSIVE_THRESHOLD, EffectiveQubitParams


class ModelKind(str, Enum):
    SINGLE_QUBIT = "single"
    TWO_QUBIT_NO_ANNEAL = "two-qubit"
    TWO_QUBIT_WITH_ANNEAL = "two-qubit-anneal"
    EXCHANGE_REFERENCE = "exchange"

    @classmethod
    def parse(cls, text: str) -> "ModelKind":
        key = text.strip().lower().replace("_", "-")
        for k in cls:
            if key in (k.value, k.name.lower().replace("_", "-")):
                return k
        raise ValueError(f"unknown model kind '{text}'")


class InteractionMode(str, Enum):
    FULL = "full"
    ZZ = "zz"
    XX = "xx"

    @classmethod
    def parse(cls, text: str) -> "InteractionMode":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(f"unknown interaction mode '{text}'") from None


@dataclass(frozen=True)
class ModelParams:
    """Physical inputs. Frequencies share one arbitrary unit (ħ = 1).

    FQ2 is (eps2, eps2·delta2_over_eps2); FQ1 is the same pair scaled by
    ``q1_scale``. g defaults to |δ_eff,2| / delta_over_g and J to
    j_ratio·(ω2 − ω1).
    """

    eps2: float = 1.0
    delta2_over_eps2: float = 1.0
    q1_scale: float = 0.8
    eta1: float = 1.25
    eta2: float = 1.25
    eps_scale: float = 10.0
    omega_r: float = 5.0
    delta_over_g: float = 8.0
    g: float | None = None
    j_ratio: float = 0.05
    j: float | None = None
    n_max: int = 27
    lambda2_literal: bool = False
    theta1_literal: bool = False

    def __post_init__(self):
        if self.delta_over_g <= 0:
            raise ValueError("delta_over_g must be positive")
        if self.omega_r <= 0:
            raise ValueError("omega_r must be positive")
        FockSpace(self.n_max)

    @property
    def q2(self) -> QubitParams:
        return QubitParams(self.eps2, self.eps2 * self.delta2_over_eps2)

    @property
    def q1(self) -> QubitParams:
        q = self.q2
        return QubitParams(self.q1_scale * q.epsilon, self.q1_scale * q.delta)


@dataclass(frozen=True)
class Derived:
    """Frequencies, angles and couplings derived from ModelParams for one kind."""

    theta1: float
    theta2: float
    omega1: float
    omega2: float
    delta0: float  # δ_eff,2 = ω_eff,2 − ω_r
    delta1: float  # δ_eff,1 (0 unless FQ1's QFP anneals)
    g: float
    chi: float
    J: float
    validity: float

    @property
    def j_zz(self) -> float:
        return self.J * math.cos(self.theta1) * math.cos(self.theta2)

    @property
    def j_xx(self) -> float:
        return self.J * math.sin(self.theta1) * math.sin(self.theta2)


def derive(kind: "ModelKind", p: ModelParams) -> Derived:
    eq2 = EffectiveQubitParams(p.q2, p.eta2, p.eps_scale)
    omega2 = eq2.omega_eff
    theta2 = eq2.theta_eff
    delta0 = omega2 - p.omega_r
    if delta0 == 0:
        raise ZeroDetuning("ω_eff,2 = ω_r")
    g = p.g if p.g is not None else abs(delta0) / p.delta_over_g
    s2 = math.sin(theta2)
    denom = delta0
    if p.lambda2_literal and kind is ModelKind.TWO_QUBIT_WITH_ANNEAL:
        denom = eq2.delta_eff
    chi = g * g * s2 * s2 / denom
    delta1 = 0.0
    if kind is ModelKind.TWO_QUBIT_WITH_ANNEAL:
        eq1 = EffectiveQubitParams(p.q1, p.eta1, p.eps_scale)
        omega1, theta1 = eq1.omega_eff, eq1.theta_eff
        delta1 = omega1 - p.omega_r
    else:
        q1 = p.q1
        omega1 = q1.omega_q
        theta1 = math.atan2(q1.epsilon, q1.delta) if p.theta1_literal else mixing_angle(q1)
    J = p.j if p.j is not None else p.j_ratio * (omega2 - omega1)
    if kind is ModelKind.SINGLE_QUBIT:
        J = 0.0
    return Derived(theta1, theta2, omega1, omega2, delta0, delta1, g, chi, J, abs(g * s2 / delta0))


_ALLOWED = {
    ModelKind.SINGLE_QUBIT: {BasisTag.FLUX, BasisTag.ENERGY_Q2},
    ModelKind.TWO_QUBIT_NO_ANNEAL: set(BasisTag),
    ModelKind.TWO_QUBIT_WITH_ANNEAL: {BasisTag.FLUX, BasisTag.ENERGY_Q1Q2, BasisTag.DRESSED_Q1Q2},
    ModelKind.EXCHANGE_REFERENCE: {BasisTag.ENERGY_Q1Q2, BasisTag.DRESSED_Q1Q2},
}


@dataclass(frozen=True)
class ModelSpec:
    kind: ModelKind
    basis: BasisTag
    mode: InteractionMode = InteractionMode.FULL
    params: ModelParams = field(default_factory=ModelParams)

    def __post_init__(self):
        if self.basis not in _ALLOWED[self.kind]:
            raise ModelError(f"{self.kind.value} model has no {self.basis.value} representation")
        if self.mode is not InteractionMode.FULL:
            if self.kind in (ModelKind.SINGLE_QUBIT, ModelKind.EXCHANGE_REFERENCE):
                raise ModelError(f"interaction mode {self.mode.value} needs a two flux-qubit model")
            if self.basis not in (BasisTag.ENERGY_Q1Q2, BasisTag.DRESSED_Q1Q2):
                raise ModelError("zz/xx modes are defined in the FQ1-FQ2 energy basis")
        if self.basis is BasisTag.DRESSED_Q1Q2 and self.kind is not ModelKind.EXCHANGE_REFERENCE:
            if self.mode is InteractionMode.FULL:
                raise ModelError("dressed FQ1-FQ2 basis is available for the zz and xx modes only")
        if self.basis is BasisTag.DRESSED_Q2 and self.mode is not InteractionMode.FULL:
            raise ModelError("dressed FQ2 basis uses the full coupling")

    def with_params(self, **kw) -> "ModelSpec":
        return replace(self, params=replace(self.params, **kw))

    @property
    def derived(self) -> Derived:
        return derive(self.kind, self.params)

    @property
    def space(self) -> FockSpace:
        return FockSpace(self.params.n_max)

    @property
    def n_qubits(self) -> int:
        return 1 if self.kind is ModelKind.SINGLE_QUBIT else 2

    @property
    def keep(self) -> tuple[int, ...] | None:
        if self.kind is ModelKind.SINGLE_QUBIT:
            return None
        return (0,) if self.kind is ModelKind.EXCHANGE_REFERENCE else (1,)

    @property
    def chi(self) -> float:
        return self.derived.chi

    @property
    def chi_sign(self) -> int:
        """Sign of the σ̃z·a†a coefficient of the read qubit."""
        c = self.chi if self.kind is ModelKind.EXCHANGE_REFERENCE else -self.chi
        return -1 if c < 0 else 1

    def other_qubit_state(self) -> np.ndarray:
        """Initial state of the qubit that is not read out."""
        if self.kind is ModelKind.EXCHANGE_REFERENCE:
            return np.array([1, 0], dtype=complex)
        if self.basis in (BasisTag.ENERGY_Q1Q2, BasisTag.DRESSED_Q1Q2):
            return np.array([1, 0], dtype=complex)
        th = self.derived.theta1
        return np.array([math.cos(th / 2), math.sin(th / 2)], dtype=complex)

    def initial_density(self, psi0: np.ndarray) -> np.ndarray:
        psi0 = np.asarray(psi0, dtype=complex).ravel()
        r = np.outer(psi0, psi0.conj())
        if self.kind is ModelKind.SINGLE_QUBIT:
            return r
        o = self.other_qubit_state()
        ro = np.outer(o, o.conj())
        return kron(r, ro) if self.kind is ModelKind.EXCHANGE_REFERENCE else kron(ro, r)


def _axis(theta: float) -> np.ndarray:
    return math.cos(theta) * SIGMA_Z + math.sin(theta) * SIGMA_X


def _energy_coupler(theta: float) -> np.ndarray:
    """σz written in the energy basis of a qubit with mixing angle θ."""
    return math.cos(theta) * SIGMA_Z - math.sin(theta) * SIGMA_X


def _check_regime(spec: ModelSpec, d: Derived) -> None:
    if d.validity > DISPERSIVE_THRESHOLD:
        warnings.warn(f"g|sinθ|/|δ| = {d.validity:.3f}", DispersiveRegimeViolated, stacklevel=3)
    if spec.mode is InteractionMode.FULL:
        return
    c = min(abs(math.cos(d.theta1)), abs(math.cos(d.theta2)))
    s = max(abs(math.sin(d.theta1)), abs(math.sin(d.theta2)))
    if spec.mode is InteractionMode.ZZ and not c > s:
        warnings.warn("zz approximation outside the flux-dominated regime", InteractionRegimeWarning, stacklevel=3)
    if spec.mode is InteractionMode.XX and not s > c:
        warnings.warn("xx approximation outside the tunnel-dominated regime", InteractionRegimeWarning, stacklevel=3)


def delta_hat(d: Derived, n: float) -> float:
    return d.delta0 + d.chi * (2 * n + 1)


def _bare_block(spec: ModelSpec, d: Derived, n: int) -> np.ndarray:
    """Hamiltonian of photon sector n in the model's bare basis."""
    dn = delta_hat(d, n)
    kind, basis, mode = spec.kind, spec.basis, spec.mode
    if kind is ModelKind.SINGLE_QUBIT:
        ax = _axis(d.theta2) if basis is BasisTag.FLUX else SIGMA_Z
        return -0.5 * dn * ax
    if kind is ModelKind.EXCHANGE_REFERENCE:
        return exchange_reference_hamiltonian(d.omega2, d.omega1, d.J, d.chi, n)
    anneal = kind is ModelKind.TWO_QUBIT_WITH_ANNEAL
    if basis is BasisTag.FLUX:
        h = -0.5 * dn * kron(IDENTITY_2, _axis(d.theta2)) + d.J * kron(SIGMA_Z, SIGMA_Z)
        if anneal:
            h = h - 0.5 * d.delta1 * kron(_axis(d.theta1), IDENTITY_2)
        return h
    if basis in (BasisTag.ENERGY_Q2, BasisTag.DRESSED_Q2):
        return -0.5 * dn * kron(IDENTITY_2, SIGMA_Z) + d.J * kron(SIGMA_Z, _energy_coupler(d.theta2))
    h = -0.5 * dn * kron(IDENTITY_2, SIGMA_Z) - 0.5 * d.delta1 * kron(SIGMA_Z, IDENTITY_2)
    if mode is InteractionMode.FULL:
        # the λJ cos θ correction is small against ω_eff,2 and ω_r and is left out
        return h + d.J * kron(_energy_coupler(d.theta1), _energy_coupler(d.theta2))
    if mode is InteractionMode.ZZ:
        return h + d.j_zz * kron(SIGMA_Z, SIGMA_Z)
    return h + d.j_xx * kron(SIGMA_X, SIGMA_X)


def dressing_transform(spec: ModelSpec, n: float | None = None) -> np.ndarray:
    """Unitary whose columns are the dressed states in the bare basis.

    ``n=None`` uses the reference sector (δ_eff,2 without the χ shift), the
    fixed frame in which the dressed models are written; a number gives the
    transform that diagonalises photon sector n exactly.
    """
    d = spec.derived
    dn = d.delta0 if n is None else delta_hat(d, n)
    if spec.kind is ModelKind.EXCHANGE_REFERENCE:
        half = 0.5 * (d.omega1 - d.omega2)
        shift = 0.0 if n is None else d.chi * n
        return exchange_dressed_transform(half + shift, d.J)[1]
    if spec.basis is BasisTag.DRESSED_Q2:
        up, down = fq2_dressed_angles(dn, d.J * math.cos(d.theta2), d.J * math.sin(d.theta2))
        return sector_pair_transform(up, down)
    if spec.basis is BasisTag.DRESSED_Q1Q2:
        if spec.mode is InteractionMode.ZZ:
            return np.eye(4, dtype=complex)
        outer = pair_angle(-(dn + d.delta1) / 2, d.j_xx)
        inner = pair_angle((dn - d.delta1) / 2, d.j_xx)
        return block_pair_transform(outer, inner)
    raise ModelError(f"{spec.basis.value} is not a dressed basis")


def _bare_sector(spec: ModelSpec, d: Derived, n: int) -> np.ndarray:
    if spec.basis is BasisTag.DRESSED_Q2:
        return _bare_block(replace(spec, basis=BasisTag.ENERGY_Q2), d, n)
    if spec.basis is BasisTag.DRESSED_Q1Q2 and spec.kind is not ModelKind.EXCHANGE_REFERENCE:
        return _bare_block(replace(spec, basis=BasisTag.ENERGY_Q1Q2), d, n)
    return _bare_block(spec, d, n)


def sector_hamiltonian(spec: ModelSpec, n: int) -> np.ndarray:
    """Qubit-space Hamiltonian of photon sector n in the model's basis."""
    d = spec.derived
    h = _bare_sector(spec, d, n)
    if spec.basis in (BasisTag.DRESSED_Q2, BasisTag.DRESSED_Q1Q2):
        w = dressing_transform(spec)
        h = dagger(w) @ h @ w
    return h


def build_hamiltonian(spec: ModelSpec) -> np.ndarray:
    d = spec.derived
    _check_regime(spec, d)
    return assemble_photon_diagonal([sector_hamiltonian(spec, n) for n in range(spec.params.n_max)])


def dressed_model_hamiltonian(spec: ModelSpec, frame: str = "reference") -> np.ndarray:
    """Dressed-basis Hamiltonian, exact per-sector conjugation.

    frame="reference": one fixed dressed basis (angles at δ_eff,2); the
    residual sector-dependent rotation angle θ_n − θ_0 appears as off-diagonal
    terms. frame="sector": each sector rotated with its own angles, giving the
    diagonal eigenvalue form.
    """
    if spec.basis not in (BasisTag.DRESSED_Q2, BasisTag.DRESSED_Q1Q2):
        raise ModelError("dressed_model_hamiltonian needs a dressed basis tag")
    if frame == "reference":
        return build_hamiltonian(spec)
    if frame != "sector":
        raise ValueError("frame must be 'reference' or 'sector'")
    d = spec.derived
    blocks = []
    for n in range(spec.params.n_max):
        w = dressing_transform(spec, n)
        blocks.append(dagger(w) @ _bare_sector(spec, d, n) @ w)
    return assemble_photon_diagonal(blocks)


def exchange_reference_hamiltonian(w1: float, w2: float, J: float, chi: float, photon_n: float) -> np.ndarray:
    """−ω1σ1z/2 − ω2σ2z/2 + J(σ1xσ2x + σ1yσ2y)/2 + χσ1z n at fixed photon number."""
    return (
        -0.5 * w1 * kron(SIGMA_Z, IDENTITY_2)
        - 0.5 * w2 * kron(IDENTITY_2, SIGMA_Z)
        + 0.5 * J * (kron(SIGMA_X, SIGMA_X) + kron(SIGMA_Y, SIGMA_Y)).real.astype(complex)
        + chi * photon_n * kron(SIGMA_Z, IDENTITY_2)
    )


# RWA validity and basis crossover -------------------------------------------


@dataclass(frozen=True)
class CrossoverReport:
    """Bare/dressed tangent magnitudes at one photon number.

    ``crossover_value`` is the photon number n* where they coincide and
    ``crossover_shift`` the matching resonator shift x* (χ(n*+½), or χn* for
    the exchange model).
    """

    bare_ratio: float
    dressed_ratio: float
    crossover_value: float | None
    crossover_shift: float | None = None
    case: str = ""


def _tangents(a: float, k: float, x: float) -> tuple[float, float]:
    """|tan| of the bare and dressed mixing angles of the block (a + x)σz + kσx
    when the dressed frame is fixed at x = 0."""
    bare = abs(k / (a + x)) if a + x != 0 else math.inf
    den = a * (a + x) + k * k
    dressed = abs(k * x / den) if den != 0 else math.inf
    return bare, dressed


def _solve(a: float, k: float, chi: float, half: bool, case: str) -> float:
    """n* from |x*| = sqrt(a² + k²), the only real root of the tangent equality."""
    if chi == 0:
        raise NoCrossoverInRange(f"{case}: χ = 0")
    x_star = math.hypot(a, k)
    n_star = x_star / abs(chi) - (0.5 if half else 0.0)
    if n_star < 0:
        raise NoCrossoverInRange(f"{case}: crossover at n = {n_star:.3g} < 0")
    return n_star


def rwa_ratio(spec: ModelSpec, photon_n: float, branch: str = "-", literal: bool = False) -> CrossoverReport:
    """Bare versus dressed RWA ratios with a†a → photon_n.

    ``branch`` picks the pair: "-"/"+" for the FQ2 sectors (δ/2 ∓ J_zz), and
    "outer" ({00, 11}) / "inner" ({01, 10}) for the xx pairs. ``literal``
    solves the outer-pair crossover from |x + (δ_eff,2 + δ_eff,1)/2| = J_xx
    instead of the exact tangent equality.
    """
    if photon_n < 0 or photon_n > spec.params.n_max - 1:
        raise ValueError("photon_n outside the truncation")
    d = spec.derived
    if spec.kind is ModelKind.SINGLE_QUBIT:
        eq = EffectiveQubitParams(spec.params.q2, spec.params.eta2, spec.params.eps_scale)
        return CrossoverReport(abs(eq.delta_eff / eq.eps_eff), 0.0, None, None, "single")
    if spec.kind is ModelKind.EXCHANGE_REFERENCE:
        a, k, x, half, case = 0.5 * (d.omega1 - d.omega2), d.J, d.chi * photon_n, False, "exchange"
    elif spec.mode is InteractionMode.ZZ:
        return CrossoverReport(0.0, 0.0, None, None, "zz")
    elif spec.mode is InteractionMode.XX:
        x, half = d.chi * (photon_n + 0.5), True
        k = d.j_xx
        if branch in ("outer", "-", "+"):
            a, case = (d.delta0 + d.delta1) / 2, "xx-outer"
        elif branch == "inner":
            a, case = (d.delta0 - d.delta1) / 2, "xx-inner"
        else:
            raise ValueError("branch must be 'outer' or 'inner' for the xx mode")
    elif spec.kind is ModelKind.TWO_QUBIT_NO_ANNEAL:
        if branch not in ("-", "+"):
            raise ValueError("branch must be '-' or '+'")
        sgn = 1.0 if branch == "+" else -1.0
        a = d.delta0 / 2 + sgn * d.J * math.cos(d.theta2)
        k = d.J * math.sin(d.theta2)
        x, half, case = d.chi * (photon_n + 0.5), True, f"fq2{branch}"
    else:
        raise ModelError("no crossover predicate for the full coupling with FQ1 annealing")
    if k == 0:
        return CrossoverReport(0.0, 0.0, None, None, case)
    bare, dressed = _tangents(a, k, x)
    if literal and case == "xx-outer":
        n_star = _solve_literal(a, k, d.chi)
    else:
        n_star = _solve(a, k, d.chi, half, case)
    shift = d.chi * (n_star + (0.5 if half else 0.0))
    return CrossoverReport(bare, dressed, n_star, shift, case)


def _solve_literal(a: float, k: float, chi: float) -> float:
    if chi == 0:
        raise NoCrossoverInRange("χ = 0")
    cands = [(s * abs(k) - a) / chi - 0.5 for s in (1.0, -1.0)]
    ok = sorted(c for c in cands if c >= 0)
    if not ok:
        raise NoCrossoverInRange(f"printed xx condition has no solution with n >= 0 ({cands})")
    return ok[0]


def crossover_alpha(report: CrossoverReport) -> float:
    """Coherent amplitude whose mean photon number α² equals the crossover n*."""
    if report.crossover_value is None:
        raise NoCrossoverInRange("no crossover")
    return math.sqrt(report.crossover_value)


__all__ = [name for name in dir() if not name.startswith("_")]
