"""Explicit eigenvalue bounds, their constants, and the experiment drivers.

Two families of upper bounds for Steklov eigenvalues of an n-dimensional
submanifold M of R^m with boundary Sigma are evaluated exactly as displayed
in their derivations:

  volume bound        sigma_k <= Cv * i(Sigma)^(2/(n-1)) |M|
                                 / |Sigma|^((n+1)/(n-1)) * k^(2/(n-1))
  injectivity bound   sigma_k <= Ai * i(M)/r0
                                 + Bi * i(M) (i(Sigma) k / |Sigma|)^(1/(n-1))

with Cv = 4 * 4^(3/(n-1)) C^((n+3)/(n-1)) |S^(n-1)|^(2/(n-1)),
Bi = 4 * 2^(3/(n-1)) T C^((n+1)/(n-1)) |S^(n-1)|^(1/(n-1)) and
Ai = 4^(n/(n-1)) T C, where C is the ambient covering constant (32^m, or an
empirical surrogate), T = Cn / D with Cn = 2^(n-1) |S^n| the doubled-ball
concentration coefficient and D the small-ball volume floor of the boundary.
The isoperimetric form restates the volume bound through
I(M) = |Sigma| / |M|^((n-1)/n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .closed_forms import (
    annulus_sn_eigenvalue,
    blowup_constant,
    cylinder_steklov_spectrum,
    expand_multiplicities,
    separated_mode_sn_eigenvalue,
    sphere_laplace_spectrum,
)
from .errors import UsageError
from .euclidean import unit_ball_volume, unit_sphere_area
from .packing import ConstantsConfig, literal_covering_constant


@dataclass(frozen=True)
class BoundConstants:
    n: int
    m: int
    covering: float
    sphere_area: float
    concentration: float
    d_ball: float
    tube_coeff: float
    volume_coeff: float
    tail_coeff: float
    injectivity_coeff: float

    def to_payload(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "covering_constant": self.covering,
            "unit_sphere_area_n_minus_1": self.sphere_area,
            "doubled_ball_coeff": self.concentration,
            "d_ball": self.d_ball,
            "tube_coeff": self.tube_coeff,
            "volume_bound_coeff": self.volume_coeff,
            "index_tail_coeff": self.tail_coeff,
            "injectivity_coeff": self.injectivity_coeff,
        }


def constants(
    n: int,
    m: int,
    config: Optional[ConstantsConfig] = None,
    covering: Optional[float] = None,
) -> BoundConstants:
    """All bound constants for dimensions (n, m).

    `covering` overrides the covering constant (an empirical value measured
    on a mesh); otherwise config.c_cover, falling back to 32^m.
    """
    if not 2 <= n <= m:
        raise UsageError("need 2 <= n <= m")
    config = config or ConstantsConfig(use_empirical=False)
    if covering is None:
        if config.c_cover is not None:
            covering = float(config.c_cover)
        else:
            covering = float(literal_covering_constant(m))
    sphere = unit_sphere_area(n - 1)
    concentration = 2.0 ** (n - 1) * unit_sphere_area(n)
    tube = concentration / config.d_ball
    e = n - 1
    volume_coeff = 4.0 * 4.0 ** (3.0 / e) * covering ** ((n + 3.0) / e) * sphere ** (2.0 / e)
    tail_coeff = 4.0 * 2.0 ** (3.0 / e) * tube * covering ** ((n + 1.0) / e) * sphere ** (1.0 / e)
    injectivity_coeff = 4.0 ** (n / e) * tube * covering
    return BoundConstants(
        n=n,
        m=m,
        covering=covering,
        sphere_area=sphere,
        concentration=concentration,
        d_ball=config.d_ball,
        tube_coeff=tube,
        volume_coeff=volume_coeff,
        tail_coeff=tail_coeff,
        injectivity_coeff=injectivity_coeff,
    )


@dataclass(frozen=True)
class BoundInputs:
    """Geometric inputs shared by the bound evaluators."""

    n: int
    m: int
    volume_m: float
    volume_sigma: float
    i_m: int
    i_sigma: int
    k: int
    r_0: Optional[float] = None
    config: ConstantsConfig = field(default_factory=lambda: ConstantsConfig(use_empirical=False))
    covering: Optional[float] = None

    def __post_init__(self):
        if not 2 <= self.n <= self.m:
            raise UsageError("need 2 <= n <= m")
        if min(self.volume_m, self.volume_sigma) <= 0:
            raise UsageError("volumes must be positive")
        if min(self.i_m, self.i_sigma) < 1:
            raise UsageError("intersection indices must be positive integers")
        if self.k < 1:
            raise UsageError("k must be at least 1")
        if self.r_0 is not None and self.r_0 <= 0:
            raise UsageError("r_0 must be positive")

    def constants(self) -> BoundConstants:
        return constants(self.n, self.m, self.config, self.covering)


def volume_bound(inputs: BoundInputs) -> float:
    """Right-hand side of the volume-form bound at the given k."""
    c = inputs.constants()
    e = inputs.n - 1
    return (
        c.volume_coeff
        * inputs.i_sigma ** (2.0 / e)
        * inputs.volume_m
        / inputs.volume_sigma ** ((inputs.n + 1.0) / e)
        * inputs.k ** (2.0 / e)
    )


def injectivity_bound(inputs: BoundInputs) -> tuple[float, float]:
    """(right-hand side, threshold k0) of the injectivity-radius bound.

    k0 = |Sigma| / (2 C^2 |S^(n-1)| i(Sigma) r0^(n-1)) marks where the
    derivation switches branches; below it the first term dominates.
    """
    if inputs.r_0 is None:
        raise UsageError("the injectivity-radius bound needs r_0")
    c = inputs.constants()
    e = inputs.n - 1
    rhs = c.injectivity_coeff * inputs.i_m / inputs.r_0 + c.tail_coeff * inputs.i_m * (
        inputs.i_sigma * inputs.k / inputs.volume_sigma
    ) ** (1.0 / e)
    k0 = inputs.volume_sigma / (
        2.0 * c.covering**2 * c.sphere_area * inputs.i_sigma * inputs.r_0**e
    )
    return rhs, k0


def isoperimetric_bound(inputs: BoundInputs) -> tuple[float, float]:
    """(|Sigma|^(1/(n-1)), rhs) of the isoperimetric form of the volume bound.

    The inequality sigma_k |Sigma|^(1/(n-1)) <= rhs is an algebraic
    rewriting of the volume bound through I(M) = |Sigma|/|M|^((n-1)/n).
    """
    c = inputs.constants()
    n = inputs.n
    e = n - 1
    iso = inputs.volume_sigma / inputs.volume_m ** (e / n)
    lhs_factor = inputs.volume_sigma ** (1.0 / e)
    rhs = (
        c.volume_coeff
        * inputs.i_sigma ** (2.0 / e)
        / iso ** (n / e)
        * inputs.k ** (2.0 / e)
    )
    return lhs_factor, rhs


@dataclass
class BoundReport:
    inputs: BoundInputs
    constants_used: BoundConstants
    volume_bound_rhs: float
    injectivity_bound_rhs: Optional[float]
    k_threshold: Optional[float]
    isoperimetric_lhs_factor: float
    isoperimetric_rhs: float
    computed_sigma_k: Optional[float]
    satisfied: dict

    def to_payload(self) -> dict:
        return {
            "inputs": {
                "n": self.inputs.n,
                "m": self.inputs.m,
                "volume_m": self.inputs.volume_m,
                "volume_sigma": self.inputs.volume_sigma,
                "i_m": self.inputs.i_m,
                "i_sigma": self.inputs.i_sigma,
                "k": self.inputs.k,
                "r_0": self.inputs.r_0,
            },
            "constants": self.constants_used.to_payload(),
            "volume_bound_rhs": self.volume_bound_rhs,
            "injectivity_bound_rhs": self.injectivity_bound_rhs,
            "k_threshold": self.k_threshold,
            "isoperimetric_lhs_factor": self.isoperimetric_lhs_factor,
            "isoperimetric_rhs": self.isoperimetric_rhs,
            "computed_sigma_k": self.computed_sigma_k,
            "satisfied": self.satisfied,
        }


def evaluate_bounds(
    inputs: BoundInputs, sigma_k: Optional[float] = None, tolerance: float = 1e-9
) -> BoundReport:
    """Evaluate every applicable bound; compare against sigma_k when given."""
    vol_rhs = volume_bound(inputs)
    inj_rhs, k0 = (None, None)
    if inputs.r_0 is not None:
        inj_rhs, k0 = injectivity_bound(inputs)
    lhs_factor, iso_rhs = isoperimetric_bound(inputs)
    satisfied = {}
    if sigma_k is not None:
        slack = tolerance * (1.0 + abs(sigma_k))
        satisfied["volume"] = bool(sigma_k <= vol_rhs + slack)
        satisfied["isoperimetric"] = bool(sigma_k * lhs_factor <= iso_rhs + slack)
        if inj_rhs is not None:
            satisfied["injectivity"] = bool(sigma_k <= inj_rhs + slack)
    return BoundReport(
        inputs=inputs,
        constants_used=inputs.constants(),
        volume_bound_rhs=vol_rhs,
        injectivity_bound_rhs=inj_rhs,
        k_threshold=k0,
        isoperimetric_lhs_factor=lhs_factor,
        isoperimetric_rhs=iso_rhs,
        computed_sigma_k=sigma_k,
        satisfied=satisfied,
    )


# ---------------------------------------------------------------------------
# asymptotics fit


@dataclass(frozen=True)
class AsymptoticsFit:
    exponent: float
    coefficient: float
    reference_exponent: float
    reference_coefficient: float
    k_lo: int
    k_hi: int

    def to_payload(self) -> dict:
        return {
            "fitted_exponent": self.exponent,
            "fitted_coefficient": self.coefficient,
            "reference_exponent": self.reference_exponent,
            "reference_coefficient": self.reference_coefficient,
            "k_lo": self.k_lo,
            "k_hi": self.k_hi,
        }


def fit_asymptotics(
    eigenvalues: Sequence[float],
    n: int,
    volume_sigma: float,
    k_lo: int = 20,
    k_hi: Optional[int] = None,
) -> AsymptoticsFit:
    """Log-log least-squares fit of sigma_k ~ a k^e over k in [k_lo, k_hi].

    The reference is the eigenvalue growth law
    sigma_k ~ 2 pi (k / (omega_(n-1) |Sigma|))^(1/(n-1)): exponent 1/(n-1)
    and coefficient 2 pi / (omega_(n-1) |Sigma|)^(1/(n-1)).
    """
    values = np.asarray(eigenvalues, dtype=float)
    if k_hi is None:
        k_hi = len(values) - 1
    if k_lo < 5:
        raise UsageError("k_lo must be at least 5 (small k are dominated by the O(1) term)")
    if k_hi >= len(values):
        raise UsageError(f"k_hi = {k_hi} exceeds the available eigenvalue count")
    if k_hi <= k_lo:
        raise UsageError("need k_hi > k_lo")
    ks = np.arange(k_lo, k_hi + 1)
    sig = values[k_lo : k_hi + 1]
    if np.any(sig <= 0):
        raise UsageError("nonpositive eigenvalues inside the fit window")
    slope, intercept = np.polyfit(np.log(ks), np.log(sig), 1)
    e = n - 1
    ref_coeff = 2.0 * math.pi / (unit_ball_volume(n - 1) * volume_sigma) ** (1.0 / e)
    return AsymptoticsFit(
        exponent=float(slope),
        coefficient=float(math.exp(intercept)),
        reference_exponent=1.0 / e,
        reference_coefficient=ref_coeff,
        k_lo=int(k_lo),
        k_hi=int(k_hi),
    )


# ---------------------------------------------------------------------------
# experiment drivers


@dataclass(frozen=True)
class BlowupRow:
    eps: float
    delta: float
    circle_radius: float
    mode_min: float
    argmin_mode: tuple
    reference: float
    satisfied: bool
    annulus_mode1: float
    annulus_mode1_floor: float

    def to_payload(self) -> dict:
        return {
            "eps": self.eps,
            "delta": self.delta,
            "circle_radius": self.circle_radius,
            "mode_min": self.mode_min,
            "argmin_mode": list(self.argmin_mode),
            "reference": self.reference,
            "satisfied": self.satisfied,
            "annulus_mode1": self.annulus_mode1,
            "annulus_mode1_floor": self.annulus_mode1_floor,
        }


def blowup_experiment(
    n: int,
    epsilons: Sequence[float],
    max_sphere_degree: int = 12,
    max_circle_mode: int = 12,
    resolution: int = 1024,
) -> list[BlowupRow]:
    """Per-mode eigenvalue floor of the thin-boundary product family.

    For each eps: delta = 2/eps, R = eps^(1-n)/(2 pi n omega_n) (unit
    boundary volume), and the separated modes (sphere degree a, circle mode
    b) != (0, 0) are swept.  The per-mode value is nondecreasing in both
    mode eigenvalues, so sweeping degrees up to max_sphere_degree + 1 and
    circle modes up to max_circle_mode + 1 certifies the tail: every
    unswept mode dominates a swept boundary mode.  The row records the
    minimum, the reference floor C/eps, and the closed-form degree-1 radial
    value with its explicit lower bound (n-1)(2^n - 1)/((n-1+2^n) eps).
    """
    if n < 3:
        raise UsageError("the blow-up family needs n >= 3")
    chat = blowup_constant(n)
    omega = unit_ball_volume(n)
    rows = []
    for eps in epsilons:
        if not 0 < eps < 1:
            raise UsageError("each eps must lie in (0, 1)")
        delta = 2.0 / eps
        circle_r = eps ** (1 - n) / (2.0 * math.pi * n * omega)
        best = math.inf
        argmin = (-1, -1)
        for a in range(max_sphere_degree + 2):
            mu = a * (a + n - 2)
            for b in range(max_circle_mode + 2):
                if a == 0 and b == 0:
                    continue
                lam = (b / circle_r) ** 2
                value = separated_mode_sn_eigenvalue(
                    n, eps, delta, mu, lam, resolution=resolution
                )
                if value < best:
                    best = value
                    argmin = (a, b)
        reference = chat / eps
        mode1 = annulus_sn_eigenvalue(n, eps, delta, 1)
        floor = (n - 1) * (2**n - 1) / ((n - 1 + 2**n) * eps)
        rows.append(
            BlowupRow(
                eps=eps,
                delta=delta,
                circle_radius=circle_r,
                mode_min=best,
                argmin_mode=argmin,
                reference=reference,
                satisfied=bool(best >= reference),
                annulus_mode1=mode1,
                annulus_mode1_floor=floor,
            )
        )
    return rows


@dataclass(frozen=True)
class ObstructionRow:
    k: int
    length: float
    sigma_2k: float
    volume_m: float
    value: float

    def to_payload(self) -> dict:
        return {
            "k": self.k,
            "length": self.length,
            "sigma_2k": self.sigma_2k,
            "volume_m": self.volume_m,
            "value": self.value,
        }


@dataclass
class ObstructionResult:
    beta: float
    rows: list
    fitted_exponent: float
    required_exponent: float
    consistent: bool

    def to_payload(self) -> dict:
        return {
            "beta": self.beta,
            "fitted_exponent": self.fitted_exponent,
            "required_exponent": self.required_exponent,
            "consistent": self.consistent,
            "rows": [r.to_payload() for r in self.rows],
        }


def obstruction_experiment(
    n: int,
    beta: float,
    k_values: Sequence[int],
    fit_tolerance: float = 0.05,
) -> ObstructionResult:
    """Growth-rate obstruction for volume-weighted eigenvalue bounds.

    On the cylinder over the unit sphere S^(n-1), set L = 1/sqrt(lambda_k)
    with lambda_k the degree-k Laplace eigenvalue; the 2k-th Steklov
    eigenvalue then grows like sqrt(lambda_k), so any bound of the shape
    const * |M|^beta * k^alpha forces alpha >= (1 + beta)/(n - 1).  The
    experiment evaluates sigma_2k exactly, fits the empirical exponent of
    sigma_2k |M|^(-beta) in k, and checks it against (1 + beta)/(n - 1).
    """
    if n < 2:
        raise UsageError("need n >= 2")
    if beta < 0:
        raise UsageError("beta must be nonnegative")
    ks = sorted(set(int(k) for k in k_values))
    if not ks or ks[0] < 1:
        raise UsageError("k values must be positive")
    cross_section = unit_sphere_area(n - 1)
    rows = []
    for k in ks:
        lam_k = float(k * (k + n - 2))
        length = 1.0 / math.sqrt(lam_k)
        lams = expand_multiplicities(sphere_laplace_spectrum(n, 1.0, k + 6))
        spectrum = cylinder_steklov_spectrum(lams, length, 2 * k + 1)
        sigma = spectrum[2 * k]
        vol_m = cross_section * length
        rows.append(
            ObstructionRow(
                k=k,
                length=length,
                sigma_2k=sigma,
                volume_m=vol_m,
                value=sigma * vol_m ** (-beta),
            )
        )
    logs = np.log([r.value for r in rows])
    slope, _ = np.polyfit(np.log(ks), logs, 1)
    required = (1.0 + beta) / (n - 1)
    return ObstructionResult(
        beta=beta,
        rows=rows,
        fitted_exponent=float(slope),
        required_exponent=required,
        consistent=bool(slope >= required - fit_tolerance),
    )
