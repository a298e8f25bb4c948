"""Material constants for micropolar (Cosserat) elasticity.

Holds the six moduli (lambda, mu, alpha, beta, gamma, epsilon) plus density,
conversions from the engineering parameterization (E, nu, characteristic
lengths, coupling number), the reciprocal ("primed") moduli of the reverse
constitutive form, positivity checks on the strain energy, and the rotated
micro-inertia tensor.

Units are SI throughout: Pa for lambda/mu/alpha, Pa*m^2 for beta/gamma/
epsilon (these are moduli times length squared; the characteristic-length
identities l_t^2 = (beta+gamma)/(2 mu), l_b^2 = (gamma+epsilon)/(4 mu) force
this), kg/m^3 for density and kg/m for the rotatory inertia entries.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

__all__ = [
    "TechnicalParams",
    "MaterialParams",
    "ReciprocalModuli",
    "MicroInertia",
    "RotationConvention",
    "convert_technical",
    "recover_technical",
    "reciprocal_moduli",
    "validate_energy_positivity",
    "rotate_inertia",
]


class MaterialError(ValueError):
    """Raised for non-physical material input."""


@dataclass(frozen=True)
class TechnicalParams:
    """Engineering constants: E, nu plus the four Cosserat technical numbers."""

    E: float                 # Young's modulus, Pa
    nu: float                # Poisson ratio
    l_t: float               # characteristic length for torsion, m
    l_b: float               # characteristic length for bending, m
    N2: float                # coupling number squared
    beta_gamma_ratio: float  # beta / gamma

    def __post_init__(self):
        if not self.E > 0:
            raise MaterialError("E > 0 required")
        if not -1.0 < self.nu < 0.5:
            raise MaterialError("-1 < nu < 0.5 required")
        if self.l_t < 0 or self.l_b < 0:
            raise MaterialError("characteristic lengths must be >= 0")
        if not 0.0 <= self.N2 < 1.0:
            raise MaterialError("0 <= N^2 < 1 required")
        if not self.beta_gamma_ratio > -2.0 / 3.0:
            raise MaterialError("beta/gamma > -2/3 required")


@dataclass(frozen=True)
class MaterialParams:
    """Lame + Cosserat moduli and mass density."""

    lam: float      # Pa
    mu: float       # Pa
    alpha: float    # Pa
    beta: float     # Pa*m^2
    gamma: float    # Pa*m^2
    epsilon: float  # Pa*m^2
    rho: float      # kg/m^3

    @property
    def characteristic_lengths(self) -> tuple[float, float]:
        """(l_t, l_b) recovered from the moduli."""
        return (
            math.sqrt((self.beta + self.gamma) / (2.0 * self.mu)),
            math.sqrt((self.gamma + self.epsilon) / (4.0 * self.mu)),
        )

    @property
    def coupling_number_sq(self) -> float:
        return self.alpha / (self.alpha + self.mu)


@dataclass(frozen=True)
class ReciprocalModuli:
    """Primed moduli of the reverse constitutive form."""

    mu_p: float
    alpha_p: float
    gamma_p: float
    epsilon_p: float
    lambda_p: float
    beta_p: float


class RotationConvention(Enum):
    """How the off-diagonal entry of the rotated inertia tensor is formed.

    PAPER_SIN2THETA uses J12 = (Jx - Jy) sin(2 theta) exactly as printed in
    the source table; TENSOR is the standard similarity transform
    J12 = (Jx - Jy) sin(2 theta) / 2.  The tensor form is what a rotation
    R J R^T produces and is the one whose 2x2 eigenvalues stay {Jx, Jy}.
    """

    PAPER_SIN2THETA = "paper"
    TENSOR = "tensor"


@dataclass(frozen=True)
class MicroInertia:
    """Rotatory inertia of the micro-elements, rotated about the z-axis."""

    Jx: float
    Jy: float
    Jz: float
    theta: float
    convention: RotationConvention
    J: np.ndarray = field(compare=False, default=None)

    def __post_init__(self):
        if min(self.Jx, self.Jy, self.Jz) < 0:
            raise MaterialError("principal inertia moments must be >= 0")
        c2, s2 = math.cos(self.theta) ** 2, math.sin(self.theta) ** 2
        j12 = (self.Jx - self.Jy) * math.sin(2.0 * self.theta)
        if self.convention is RotationConvention.TENSOR:
            j12 *= 0.5
        J = np.array([
            [self.Jx * c2 + self.Jy * s2, j12, 0.0],
            [j12, self.Jx * s2 + self.Jy * c2, 0.0],
            [0.0, 0.0, self.Jz],
        ])
        object.__setattr__(self, "J", J)

    @property
    def is_diagonal(self) -> bool:
        return self.J[0, 1] == 0.0


def rotate_inertia(Jx: float, Jy: float, Jz: float, theta: float = 0.0,
                   convention: RotationConvention = RotationConvention.PAPER_SIN2THETA,
                   ) -> MicroInertia:
    """Micro-inertia tensor for principal moments rotated by theta about z."""
    return MicroInertia(Jx, Jy, Jz, theta, convention)


def convert_technical(tp: TechnicalParams, rho: float) -> MaterialParams:
    """Engineering constants -> Lame/Cosserat moduli.

    Inverts the identities N^2 = alpha/(alpha+mu), l_t^2 = (beta+gamma)/(2 mu)
    and l_b^2 = (gamma+epsilon)/(4 mu) at fixed beta/gamma.
    """
    mu = tp.E / (2.0 * (1.0 + tp.nu))
    lam = tp.E * tp.nu / ((1.0 + tp.nu) * (1.0 - 2.0 * tp.nu))
    alpha = mu * tp.N2 / (1.0 - tp.N2)
    gamma = 2.0 * mu * tp.l_t**2 / (1.0 + tp.beta_gamma_ratio)
    beta = tp.beta_gamma_ratio * gamma
    epsilon = 4.0 * mu * tp.l_b**2 - gamma
    mp = MaterialParams(lam, mu, alpha, beta, gamma, epsilon, rho)
    bad = validate_energy_positivity(mp)
    # alpha = 0 (classical limit) stays admissible; anything else is rejected
    bad = [b for b in bad if not (b == "alpha >= 0" and alpha == 0.0)]
    if bad:
        raise MaterialError("technical constants map to non-physical moduli: "
                            + "; ".join(bad))
    return mp


def recover_technical(mp: MaterialParams) -> TechnicalParams:
    """Inverse of convert_technical (round-trip identity)."""
    nu = mp.lam / (2.0 * (mp.lam + mp.mu))
    E = 2.0 * mp.mu * (1.0 + nu)
    l_t, l_b = mp.characteristic_lengths
    return TechnicalParams(E, nu, l_t, l_b, mp.coupling_number_sq,
                           mp.beta / mp.gamma)


def reciprocal_moduli(mp: MaterialParams) -> ReciprocalModuli:
    """Primed moduli of the reverse constitutive law.

    The reverse form reads the strain/torsion tensors off the stress/couple
    stress; it is singular at alpha = 0 (the antisymmetric stress carries no
    information there).
    """
    if mp.alpha <= 0:
        raise MaterialError("reverse constitutive form requires alpha > 0")
    if mp.epsilon <= 0:
        raise MaterialError("reverse constitutive form requires epsilon > 0")
    return ReciprocalModuli(
        mu_p=1.0 / (4.0 * mp.mu),
        alpha_p=1.0 / (4.0 * mp.alpha),
        gamma_p=1.0 / (4.0 * mp.gamma),
        epsilon_p=1.0 / (4.0 * mp.epsilon),
        lambda_p=-mp.lam / (6.0 * mp.mu * (mp.lam + 2.0 * mp.mu / 3.0)),
        beta_p=-mp.beta / (6.0 * mp.mu * (mp.beta + 2.0 * mp.gamma / 3.0)),
    )


def validate_energy_positivity(mp: MaterialParams) -> list[str]:
    """Names of the violated strain-energy positivity inequalities (empty if OK)."""
    checks = [
        (mp.mu > 0, "mu > 0"),
        (mp.alpha >= 0, "alpha >= 0"),
        (mp.gamma > 0, "gamma > 0"),
        (mp.epsilon > 0, "epsilon > 0"),
        (3.0 * mp.lam + 2.0 * mp.mu > 0, "3*lambda + 2*mu > 0"),
        (3.0 * mp.beta + 2.0 * mp.gamma > 0, "3*beta + 2*gamma > 0"),
        (mp.rho > 0, "rho > 0"),
    ]
    return [name for ok, name in checks if not ok]
