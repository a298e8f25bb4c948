"""Free-vibration eigenproblem of the Cosserat plate for one mode pair (n, m).

Nine kinematic variables describe the plate: two midplane rotations Psi_1,
Psi_2, transverse deflection W and its quadratic thickness variation W*,
the drilling microrotation Omega_3, the parabolic microrotation pair
Omega0_1, Omega0_2 and the uniform pair OmegaHat_1, OmegaHat_2.  Separation
of variables on the hard simply supported square plate assigns each variable
one of two complementary sin/cos patterns (families A and B), giving an
18-dimensional modal basis per (n, m).

Three assembly formulations are provided:

* ``mixed`` (default) -- Hellinger-Reissner reduction: the through-thickness
  stress and couple-stress profiles carry their own resultant degrees of
  freedom, which are eliminated against the complementary (stress) energy.
  This is the variationally consistent form of the resultant constitutive
  block; stiffness and mass come out symmetric by construction and the
  transverse-shear flexibility is captured (Reissner-type accuracy against
  the exact 3D solution).

* ``kinematic`` -- pure displacement Ritz on the same kinematic profiles.
  Also symmetric/SPD, but the linear-in-zeta in-plane displacement locks the
  transverse shear, so thickness-shear branches sit ~sqrt(6/5) high.

* ``paper``     -- reconstruction of the printed field-equation operator
  matrix (the L/K system), with the two starred-shear ratios fixed at 4/5
  and the diagonal micro-inertia blocks in the printed form.  This
  formulation is not self-adjoint but reproduces the published
  micro-vibration eigenfrequency tables; see the package README for the
  exact reading of the published values it reproduces.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import numeig
from .material import MaterialParams, MicroInertia
from .trigbasis import (CC, CS, SC, SS, TrigField, TrigPattern, d_dx1, d_dx2,
                        project)

__all__ = [
    "PlateGeometry",
    "PlateCoefficients",
    "KinematicVariable",
    "ModalSystem",
    "Spectrum",
    "ModeClass",
    "plate_coefficients",
    "resultants_from_kinematics",
    "assemble_modal_system",
    "plate_spectrum",
    "classify_modes",
    "reconstruct_3d_fields",
]


class AssemblyError(RuntimeError):
    """Raised when an assembled system violates its structural contract."""


@dataclass(frozen=True)
class PlateGeometry:
    a: float  # side length, m
    h: float  # thickness, m

    def __post_init__(self):
        if self.a <= 0 or self.h <= 0:
            raise ValueError("plate dimensions must be positive")


class KinematicVariable(Enum):
    PSI1 = 0
    PSI2 = 1
    W = 2
    OMEGA3 = 3
    OMEGA01 = 4
    OMEGA02 = 5
    WSTAR = 6
    OMEGAHAT1 = 7
    OMEGAHAT2 = 8


VARIABLES = list(KinematicVariable)

# family-A trig pattern of each variable; family B is the complement
PATTERN_A = {
    KinematicVariable.PSI1: CS,
    KinematicVariable.PSI2: SC,
    KinematicVariable.W: SS,
    KinematicVariable.OMEGA3: CC,
    KinematicVariable.OMEGA01: SC,
    KinematicVariable.OMEGA02: CS,
    KinematicVariable.WSTAR: SS,
    KinematicVariable.OMEGAHAT1: SC,
    KinematicVariable.OMEGAHAT2: CS,
}
PATTERN_B = {v: p.complement() for v, p in PATTERN_A.items()}


def pattern_of(var: KinematicVariable, family: str) -> TrigPattern:
    return PATTERN_A[var] if family == "A" else PATTERN_B[var]


class ModeClass(Enum):
    MIDPLANE_ROTATION = "MidplaneRotation"
    FLEXURAL = "Flexural"
    FLEXURAL_TRANSVERSE = "FlexuralTransverse"
    MICRO_ROTATION = "MicroRotation"
    MICRO_ROTATION_TRANSVERSE = "MicroRotationTransverse"


MODE_GROUPS = {
    ModeClass.MIDPLANE_ROTATION: (KinematicVariable.PSI1, KinematicVariable.PSI2),
    ModeClass.FLEXURAL: (KinematicVariable.W,),
    ModeClass.FLEXURAL_TRANSVERSE: (KinematicVariable.WSTAR,),
    ModeClass.MICRO_ROTATION: (KinematicVariable.OMEGA01, KinematicVariable.OMEGA02,
                               KinematicVariable.OMEGA3),
    ModeClass.MICRO_ROTATION_TRANSVERSE: (KinematicVariable.OMEGAHAT1,
                                          KinematicVariable.OMEGAHAT2),
}


@dataclass(frozen=True)
class PlateCoefficients:
    """Closed-form stiffness coefficients c1..c15 and inertia groups."""

    c: tuple
    I1: float
    I2: float
    I3: float
    I_ab: np.ndarray
    I0_ab: np.ndarray

    def __getitem__(self, i: int) -> float:
        return self.c[i - 1]


def plate_coefficients(mp: MaterialParams, inertia: MicroInertia,
                       geom: PlateGeometry) -> PlateCoefficients:
    lam, mu, alp = mp.lam, mp.mu, mp.alpha
    bet, gam, eps = mp.beta, mp.gamma, mp.epsilon
    h = geom.h
    if alp + mu == 0:
        raise ValueError("alpha + mu = 0 makes the shear coefficients singular")
    c = (
        h**3 * mu * (lam + mu) / (3 * (lam + 2 * mu)),   # c1
        h**3 * (alp + mu) / 12,                          # c2
        5 * h * (alp + mu) / 6,                          # c3
        5 * h * (alp - mu) ** 2 / (6 * (alp + mu)),      # c4
        h * (5 * alp**2 + 6 * alp * mu + 5 * mu**2) / (6 * (alp + mu)),  # c5
        h**3 * gam * eps / (3 * (gam + eps)),            # c6
        10 * h * gam * (bet + gam) / (3 * (bet + 2 * gam)),  # c7
        5 * h * (gam + eps) / 6,                         # c8
        10 * h * alp**2 / (3 * (alp + mu)),              # c9
        5 * h * alp * (alp - mu) / (3 * (alp + mu)),     # c10
        5 * h * (alp - mu) / 6,                          # c11
        h**3 * alp / 6,                                  # c12
        5 * h * alp / 3,                                 # c13
        h * alp * (5 * alp + 3 * mu) / (3 * (alp + mu)),  # c14
        2 * h * alp * (5 * alp + 4 * mu) / (3 * (alp + mu)),  # c15
    )
    J = inertia.J
    return PlateCoefficients(
        c=c,
        I1=h**3 * mp.rho / 12,
        I2=2 * h * mp.rho / 3,
        I3=h**2 * J[2, 2] / 6,
        I_ab=5 * h / 6 * J[:2, :2],
        I0_ab=2 * h / 3 * J[:2, :2],
    )


# ---------------------------------------------------------------------------
# constitutive resultants (block B), canonical sign resolution
# ---------------------------------------------------------------------------

# The printed constitutive block leaves the alternating signs of the
# Omega_3 and shear coupling terms ambiguous ("(-1)^alpha'").  The canonical
# resolution used here is the one that makes the drilling couple
# eps_{3bg} M_bg = -2 c12 Omega_3 and reproduces the unambiguous entries of
# the printed field-equation matrix:  sM = (+,-), sQ = (-,+), sQs = (+,-),
# sQh = (+,-)  indexed by alpha in {1, 2}.
_SM = (1.0, -1.0)
_SQ = (-1.0, 1.0)
_SQS = (1.0, -1.0)
_SQH = (1.0, -1.0)


def resultants_from_kinematics(fields: dict, mp: MaterialParams,
                               geom: PlateGeometry) -> dict:
    """Stress/couple-stress resultants of the constitutive block.

    `fields` maps each KinematicVariable to a TrigField (free vibration:
    the surface-load terms vanish).  Returns a dict keyed by
    ('M', i, j), ('R', i, j), ('Rs', i, j), ('Q', i), ('Qs', i),
    ('Qh', i), ('Ss', i) with i, j in {1, 2}.
    """
    lam, mu, alp = mp.lam, mp.mu, mp.alpha
    bet, gam, eps = mp.beta, mp.gamma, mp.epsilon
    h = geom.h
    D = {1: d_dx1, 2: d_dx2}
    Psi = {1: fields[KinematicVariable.PSI1], 2: fields[KinematicVariable.PSI2]}
    Om0 = {1: fields[KinematicVariable.OMEGA01], 2: fields[KinematicVariable.OMEGA02]}
    Omh = {1: fields[KinematicVariable.OMEGAHAT1], 2: fields[KinematicVariable.OMEGAHAT2]}
    W = fields[KinematicVariable.W]
    Ws = fields[KinematicVariable.WSTAR]
    Om3 = fields[KinematicVariable.OMEGA3]

    out = {}
    for a in (1, 2):
        b = 3 - a
        out[("M", a, a)] = (mu * (lam + mu) * h**3 / (3 * (lam + 2 * mu))) * D[a](Psi[a]) \
            + (lam * mu * h**3 / (6 * (lam + 2 * mu))) * D[b](Psi[b])
        out[("M", b, a)] = ((mu + alp) * h**3 / 12) * D[b](Psi[a]) \
            + ((mu - alp) * h**3 / 12) * D[a](Psi[b]) \
            + _SM[a - 1] * (alp * h**3 / 6) * Om3
        out[("R", a, a)] = (10 * h * gam * (bet + gam) / (3 * (bet + 2 * gam))) * D[a](Om0[a]) \
            + (5 * h * bet * gam / (3 * (bet + 2 * gam))) * D[b](Om0[b])
        out[("R", b, a)] = (5 * (gam - eps) * h / 6) * D[a](Om0[b]) \
            + (5 * (gam + eps) * h / 6) * D[b](Om0[a])
        out[("Rs", a, a)] = (8 * gam * (gam + bet) * h / (3 * (bet + 2 * gam))) * D[a](Omh[a]) \
            + (4 * gam * bet * h / (3 * (bet + 2 * gam))) * D[b](Omh[b])
        out[("Rs", b, a)] = (2 * (gam - eps) * h / 3) * D[a](Omh[b]) \
            + (2 * (gam + eps) * h / 3) * D[b](Omh[a])
        out[("Q", a)] = (5 * (mu + alp) * h / 6) * Psi[a] \
            + (5 * (mu - alp) * h / 6) * D[a](W) \
            + (2 * (mu - alp) * h / 3) * D[a](Ws) \
            + _SQ[a - 1] * (5 * h * alp / 3) * (Om0[b] + Omh[b])
        out[("Qs", a)] = (5 * (mu - alp) * h / 6) * Psi[a] \
            + (5 * (mu - alp) ** 2 * h / (6 * (mu + alp))) * D[a](W) \
            + (2 * (mu + alp) * h / 3) * D[a](Ws) \
            + _SQS[a - 1] * (5 * h * alp / 3) * (Om0[b] + ((mu - alp) / (mu + alp)) * Omh[b])
        out[("Qh", a)] = (8 * alp * mu * h / (3 * (mu + alp))) * D[a](W) \
            + _SQH[a - 1] * (8 * alp * mu * h / (3 * (mu + alp))) * Omh[b]
        out[("Ss", a)] = (5 * gam * eps * h**3 / (3 * (gam + eps))) * D[a](Om3)
    return out


def zero_fields(kx: float, ky: float) -> dict:
    return {v: TrigField.zero(kx, ky) for v in VARIABLES}


# ---------------------------------------------------------------------------
# modal system
# ---------------------------------------------------------------------------

@dataclass
class ModalSystem:
    n: int
    m: int
    S: np.ndarray
    M: np.ndarray
    basis: list            # list of (family, KinematicVariable)
    geometry: PlateGeometry
    material: MaterialParams
    inertia: MicroInertia
    formulation: str

    @property
    def kx(self) -> float:
        return self.n * math.pi / self.geometry.a

    @property
    def ky(self) -> float:
        return self.m * math.pi / self.geometry.a

    def symmetry_defect(self) -> float:
        nrm = np.linalg.norm(self.S)
        return float(np.linalg.norm(self.S - self.S.T) / nrm) if nrm else 0.0


@dataclass
class Spectrum:
    freqs_hz: np.ndarray     # ascending, = omega / (2 pi)
    omega: np.ndarray        # rad/s
    vectors: np.ndarray      # columns, mass-normalized
    labels: list             # ModeClass per mode
    mixed: list              # bool per mode (dominant share < 0.5)


# --- energy (Ritz) formulation ---------------------------------------------
#
# Through-thickness profiles, zeta = 2 x3 / h:
#   u_a   = (h/2) zeta Psi_a        u_3 = W + (1 - zeta^2) W*
#   phi_a = (1 - zeta^2) Omega0_a + OmegaHat_a          phi_3 = zeta Omega_3
#
# Kinematics (validated against the printed 3D matrices):
#   gamma_ij = u_j,i - eps_ijk phi_k          chi_ij = phi_j,i
#
# Fields are stored as zeta-polynomials with TrigField coefficients; the
# energy integrals are exact (trig orthogonality in-plane, monomial moments
# through the thickness).

class _ZPoly:
    """Polynomial in zeta with TrigField coefficients."""

    def __init__(self, kx, ky, coeffs=None):
        self.kx, self.ky = kx, ky
        self.c = dict(coeffs or {})   # power -> TrigField

    def term(self, p):
        return self.c.get(p, TrigField.zero(self.kx, self.ky))

    def __add__(self, o):
        out = _ZPoly(self.kx, self.ky, self.c)
        for p, f in o.c.items():
            out.c[p] = out.term(p) + f
        return out

    def __sub__(self, o):
        return self + (-1.0) * o

    def __mul__(self, s):
        return _ZPoly(self.kx, self.ky, {p: s * f for p, f in self.c.items()})

    __rmul__ = __mul__

    def d_inplane(self, axis):
        d = d_dx1 if axis == 1 else d_dx2
        return _ZPoly(self.kx, self.ky, {p: d(f) for p, f in self.c.items()})

    def d_zeta(self):
        return _ZPoly(self.kx, self.ky,
                      {p - 1: float(p) * f for p, f in self.c.items() if p >= 1})


def _zmoment(p: int) -> float:
    """Integral of zeta^p over [-1, 1]."""
    return 0.0 if p % 2 else 2.0 / (p + 1)


def _pair_integral(f: _ZPoly, g: _ZPoly, h: float, a: float) -> float:
    """Integral over the plate volume of f*g (both zeta-poly trig fields)."""
    tot = 0.0
    for p, fp in f.c.items():
        for q, gq in g.c.items():
            w = _zmoment(p + q)
            if w == 0.0:
                continue
            dot = sum(project(fp, pat) * project(gq, pat)
                      for pat in (SS, SC, CS, CC))
            tot += w * dot
    return tot * (h / 2.0) * (a / 2.0) ** 2


def _profiles(var: KinematicVariable, family: str, kx, ky, h):
    """3D displacement u and microrotation phi for a unit basis field."""
    f = TrigField.unit(pattern_of(var, family), kx, ky)
    z = lambda: TrigField.zero(kx, ky)
    u = [_ZPoly(kx, ky), _ZPoly(kx, ky), _ZPoly(kx, ky)]
    phi = [_ZPoly(kx, ky), _ZPoly(kx, ky), _ZPoly(kx, ky)]
    V = KinematicVariable
    if var is V.PSI1:
        u[0] = _ZPoly(kx, ky, {1: (h / 2.0) * f})
    elif var is V.PSI2:
        u[1] = _ZPoly(kx, ky, {1: (h / 2.0) * f})
    elif var is V.W:
        u[2] = _ZPoly(kx, ky, {0: f})
    elif var is V.WSTAR:
        u[2] = _ZPoly(kx, ky, {0: f, 2: -1.0 * f})
    elif var is V.OMEGA3:
        phi[2] = _ZPoly(kx, ky, {1: f})
    elif var is V.OMEGA01:
        phi[0] = _ZPoly(kx, ky, {0: f, 2: -1.0 * f})
    elif var is V.OMEGA02:
        phi[1] = _ZPoly(kx, ky, {0: f, 2: -1.0 * f})
    elif var is V.OMEGAHAT1:
        phi[0] = _ZPoly(kx, ky, {0: f})
    elif var is V.OMEGAHAT2:
        phi[1] = _ZPoly(kx, ky, {0: f})
    return u, phi


_EPS3 = np.zeros((3, 3, 3))
for _i, _j, _k, _s in ((0, 1, 2, 1), (1, 2, 0, 1), (2, 0, 1, 1),
                       (2, 1, 0, -1), (1, 0, 2, -1), (0, 2, 1, -1)):
    _EPS3[_i, _j, _k] = _s


def _strains(u, phi, kx, ky, h):
    """gamma_ij = u_j,i - eps_ijk phi_k, chi_ij = phi_j,i (zeta-polys)."""
    def grad(vec, i, j):
        if i == 0:
            return vec[j].d_inplane(1)
        if i == 1:
            return vec[j].d_inplane(2)
        return (2.0 / h) * vec[j].d_zeta()
    gamma = [[grad(u, i, j) for j in range(3)] for i in range(3)]
    chi = [[grad(phi, i, j) for j in range(3)] for i in range(3)]
    for i in range(3):
        for j in range(3):
            for k in range(3):
                s = _EPS3[i, j, k]
                if s:
                    gamma[i][j] = gamma[i][j] - s * phi[k]
    return gamma, chi


def _tensor_bilinear(ta, tb, c_plus, c_minus, c_tr, h, a, kappa=1.0):
    """Integral of the quadratic-energy pairing of two second-order tensors.

    Pairing: c_plus T^a:T^b + c_minus T^a:(T^b)^T + c_tr tr(T^a) tr(T^b),
    written through symmetric/antisymmetric parts so the shear-correction
    factor kappa can weight the symmetric transverse shear only:
    for each off-diagonal pair the contribution is
    mu_eff <s_a, s_b> + alpha_eff <w_a, w_b>, with mu_eff = (c_plus+c_minus)/2
    and alpha_eff = (c_plus - c_minus)/2; kappa multiplies mu_eff on pairs
    that involve the thickness direction.
    """
    mu_eff = 0.5 * (c_plus + c_minus)
    al_eff = 0.5 * (c_plus - c_minus)
    tot = 0.0
    for i in range(3):
        tot += (c_plus + c_minus) * _pair_integral(ta[i][i], tb[i][i], h, a)
    for i in range(3):
        for j in range(i + 1, 3):
            kap = kappa if j == 2 else 1.0
            sa = ta[i][j] + ta[j][i]
            sb = tb[i][j] + tb[j][i]
            wa = ta[i][j] - ta[j][i]
            wb = tb[i][j] - tb[j][i]
            tot += kap * mu_eff * _pair_integral(sa, sb, h, a)
            tot += al_eff * _pair_integral(wa, wb, h, a)
    tra = ta[0][0] + ta[1][1] + ta[2][2]
    trb = tb[0][0] + tb[1][1] + tb[2][2]
    tot += c_tr * _pair_integral(tra, trb, h, a)
    return tot


def _assemble_energy(mp, inertia, geom, n, m, families, kappa=5.0 / 6.0):
    kx = n * math.pi / geom.a
    ky = m * math.pi / geom.a
    h, a = geom.h, geom.a
    basis = [(fam, v) for fam in families for v in VARIABLES]
    dim = len(basis)

    cached = []
    for fam, var in basis:
        u, phi = _profiles(var, fam, kx, ky, h)
        gamma, chi = _strains(u, phi, kx, ky, h)
        cached.append((u, phi, gamma, chi))

    lam, mu, alp = mp.lam, mp.mu, mp.alpha
    bet, gam, eps = mp.beta, mp.gamma, mp.epsilon
    J = inertia.J
    S = np.zeros((dim, dim))
    M = np.zeros((dim, dim))
    for ia in range(dim):
        ua, phia, ga, ca = cached[ia]
        for ib in range(ia, dim):
            ub, phib, gb, cb = cached[ib]
            s = _tensor_bilinear(ga, gb, mu + alp, mu - alp, lam, h, a, kappa)
            s += _tensor_bilinear(ca, cb, gam + eps, gam - eps, bet, h, a, kappa)
            mm = 0.0
            for i in range(3):
                mm += mp.rho * _pair_integral(ua[i], ub[i], h, a)
                for j in range(3):
                    if J[i, j]:
                        mm += J[i, j] * _pair_integral(phia[i], phib[j], h, a)
            S[ia, ib] = S[ib, ia] = s
            M[ia, ib] = M[ib, ia] = mm
    return S, M, basis


# --- mixed (Hellinger-Reissner) formulation ---------------------------------
#
# Resultant profiles (zeta = 2 x3 / h):
#   sigma_ab  = (6/h^2) zeta M_ab            mu_ab  = (3/2h)[(1-z^2) R_ab + Rs_ab]
#   sigma_3b  = (3/2h)(1-z^2) Q_b            mu_b3  = (6/h^2) zeta Ss_b
#   sigma_b3  = (3/2h)[(1-z^2) Qs_b + Qh_b]  mu_3b = mu_33 = 0, sigma_33 = 0 (free vibration)
#
# With the compliance bilinear form Phi_c from the reverse constitutive law,
# the resultants r solve C r = G q and the reduced stiffness is G^T C^-1 G.

_RESULTANT_SPECS = []   # (name, tensor, i, j, {zeta power: coeff(h)})
for _a in (1, 2):
    for _b in (1, 2):
        _RESULTANT_SPECS.append((f"M{_a}{_b}", "sigma", _a - 1, _b - 1,
                                 {1: lambda h: 6.0 / h**2}))
        _RESULTANT_SPECS.append((f"R{_a}{_b}", "mu", _a - 1, _b - 1,
                                 {0: lambda h: 1.5 / h, 2: lambda h: -1.5 / h}))
        _RESULTANT_SPECS.append((f"Rs{_a}{_b}", "mu", _a - 1, _b - 1,
                                 {0: lambda h: 1.5 / h}))
for _b in (1, 2):
    _RESULTANT_SPECS.append((f"Q{_b}", "sigma", 2, _b - 1,
                             {0: lambda h: 1.5 / h, 2: lambda h: -1.5 / h}))
    _RESULTANT_SPECS.append((f"Qs{_b}", "sigma", _b - 1, 2,
                             {0: lambda h: 1.5 / h, 2: lambda h: -1.5 / h}))
    _RESULTANT_SPECS.append((f"Qh{_b}", "sigma", _b - 1, 2,
                             {0: lambda h: 1.5 / h}))
    _RESULTANT_SPECS.append((f"Ss{_b}", "mu", _b - 1, 2,
                             {1: lambda h: 6.0 / h**2}))


def _component_pattern(fam: str, tensor: str, i: int, j: int, kx, ky, h):
    """Trig pattern of strain/torsion component (i, j) for one family."""
    pats = set()
    for var in VARIABLES:
        u, phi = _profiles(var, fam, kx, ky, h)
        gamma, chi = _strains(u, phi, kx, ky, h)
        comp = gamma[i][j] if tensor == "sigma" else chi[i][j]
        for f in comp.c.values():
            for t in f.terms:
                pats.add(t.pattern)
    if len(pats) > 1:
        raise AssemblyError("mixed patterns in one strain component")
    return pats.pop() if pats else None


def _compliance_bilinear(sa, sb, tensor, mp, h, a):
    """Integral of s_a : Reverse[s_b] for two stress (or couple-stress) states."""
    if tensor == "sigma":
        cp = 1.0 / (4.0 * mp.mu)
        cm = 1.0 / (4.0 * max(mp.alpha, 1e-12 * mp.mu))
        ctr = -mp.lam / (6.0 * mp.mu * (mp.lam + 2.0 * mp.mu / 3.0))
        plus, minus = cp + cm, cp - cm
    else:
        cp = 1.0 / (4.0 * mp.gamma)
        cm = 1.0 / (4.0 * mp.epsilon)
        ctr = -mp.beta / (6.0 * mp.gamma * (mp.beta + 2.0 * mp.gamma / 3.0))
        plus, minus = cp + cm, cp - cm
    tot = 0.0
    for i in range(3):
        for j in range(3):
            tot += plus * _pair_integral(sa[i][j], sb[i][j], h, a)
            tot += minus * _pair_integral(sa[i][j], sb[j][i], h, a)
    tra = sa[0][0] + sa[1][1] + sa[2][2]
    trb = sb[0][0] + sb[1][1] + sb[2][2]
    tot += ctr * _pair_integral(tra, trb, h, a)
    return tot


def _zero_tensor(kx, ky):
    return [[_ZPoly(kx, ky) for _ in range(3)] for _ in range(3)]


def _assemble_mixed(mp, inertia, geom, n, m, families):
    kx = n * math.pi / geom.a
    ky = m * math.pi / geom.a
    h, a = geom.h, geom.a

    basis = [(fam, v) for fam in families for v in VARIABLES]
    dim = len(basis)
    strains = []
    for fam, var in basis:
        u, phi = _profiles(var, fam, kx, ky, h)
        strains.append(_strains(u, phi, kx, ky, h))

    # resultant stress states, one per (family, resultant)
    rstates = []
    for fam in families:
        for name, tensor, i, j, prof in _RESULTANT_SPECS:
            pat = _component_pattern(fam, tensor, i, j, kx, ky, h)
            if pat is None:
                continue
            field = TrigField.unit(pat, kx, ky)
            sig = _zero_tensor(kx, ky)
            sig[i][j] = _ZPoly(kx, ky, {p: c(h) * field for p, c in prof.items()})
            rstates.append((tensor, sig))

    nr = len(rstates)
    C = np.zeros((nr, nr))
    G = np.zeros((nr, dim))
    for ir, (ta, sa) in enumerate(rstates):
        for jr in range(ir, nr):
            tb, sb = rstates[jr]
            if ta != tb:
                continue    # sigma and mu compliances do not mix
            C[ir, jr] = C[jr, ir] = _compliance_bilinear(sa, sb, ta, mp, h, a)
        for q in range(dim):
            gamma, chi = strains[q]
            e = gamma if ta == "sigma" else chi
            s = 0.0
            for i in range(3):
                for j in range(3):
                    s += _pair_integral(sa[i][j], e[i][j], h, a)
            G[ir, q] = s
    S = G.T @ np.linalg.solve(C, G)
    S = 0.5 * (S + S.T)

    # consistent kinematic mass (same as the kinematic Ritz formulation)
    M = np.zeros((dim, dim))
    J = inertia.J
    prof = []
    for fam, var in basis:
        prof.append(_profiles(var, fam, kx, ky, h))
    for ia in range(dim):
        ua, phia = prof[ia]
        for ib in range(ia, dim):
            ub, phib = prof[ib]
            mm = 0.0
            for i in range(3):
                mm += mp.rho * _pair_integral(ua[i], ub[i], h, a)
                for j in range(3):
                    if J[i, j]:
                        mm += J[i, j] * _pair_integral(phia[i], phib[j], h, a)
            M[ia, ib] = M[ib, ia] = mm
    return S, M, basis


# --- paper formulation (printed field-equation matrix) ----------------------

def _paper_operator_table(mp, pc, k):
    """Entries of the printed 9x9 operator matrix as (kind, coeff) term lists.

    kind in {d11, d22, d12, d1, d2, id}.  The two undetermined multipliers
    of the print are fixed at k = k1 = 4/5, the ratio of the starred to the
    unstarred transverse-shear coefficients.
    """
    c = pc
    L = {
        "11": [("d11", c[1]), ("d22", c[2]), ("id", -c[3])],
        "12": [("d12", c[1] - c[2])],
        "13": [("d1", c[11])],
        "14": [("d2", c[12])],
        "16": [("id", c[13])],
        "22": [("d11", c[2]), ("d22", c[1]), ("id", -c[3])],
        "23": [("d2", c[11])],
        "24": [("d1", -c[12])],
        "33": [("d11", c[3]), ("d22", c[3])],
        "35": [("d2", -c[13])],
        "36": [("d1", c[13])],
        "38": [("d2", -c[10])],
        "39": [("d1", c[10])],
        "41": [("d2", -c[12])],
        "42": [("d1", c[12])],
        "44": [("d11", c[6]), ("d22", c[6]), ("id", -2 * c[12])],
        "55": [("d11", c[7]), ("d22", c[8]), ("id", -2 * c[13])],
        "56": [("d12", c[7] - c[8])],
        "58": [("id", -c[9])],
        "66": [("d11", c[8]), ("d22", c[7]), ("id", -2 * c[13])],
        "73": [("d11", c[5]), ("d22", c[5])],
        "77": [("d11", c[4]), ("d22", c[4])],
        "78": [("d2", -c[14])],
        "79": [("d1", c[14])],
        # starred microrotation rows: k-scaled copies of the Omega0 rows
        "88": [("d11", k * c[7]), ("d22", k * c[8]), ("id", -c[15])],
        "99": [("d11", k * c[8]), ("d22", k * c[7]), ("id", -c[15])],
    }
    def neg(ts): return [(kk, -cc) for kk, cc in ts]
    def scl(ts, s): return [(kk, s * cc) for kk, cc in ts]
    Z = []
    rows = [
        [L["11"], L["12"], L["13"], L["14"], Z, L["16"], scl(L["13"], k), Z, L["16"]],
        [L["12"], L["22"], L["23"], L["24"], L["16"], Z, scl(L["23"], k), L["16"], Z],
        [neg(L["13"]), neg(L["23"]), L["33"], Z, L["35"], L["36"], L["77"], L["38"], L["39"]],
        [L["41"], L["42"], Z, L["44"], Z, Z, Z, Z, Z],
        [Z, neg(L["16"]), neg(L["38"]), Z, L["55"], L["56"], scl(L["35"], -k), Z, Z],
        [L["16"], Z, neg(L["39"]), Z, L["56"], L["66"], scl(L["36"], -k), Z, Z],
        [neg(L["13"]), neg(L["14"]), L["73"], Z, L["35"], L["36"], L["77"], L["78"], L["79"]],
        [Z, neg(L["16"]), neg(L["78"]), Z, Z, Z, scl(L["35"], -k), L["88"], scl(L["56"], k)],
        [L["16"], Z, neg(L["79"]), Z, Z, Z, scl(L["36"], -k), scl(L["56"], k), L["99"]],
    ]
    return rows


def _apply_operator(terms, pat: TrigPattern, kx: float, ky: float) -> TrigField:
    out = TrigField.zero(kx, ky)
    base = TrigField.unit(pat, kx, ky)
    for kind, c in terms:
        if kind == "id":
            out = out + c * base
        elif kind == "d1":
            out = out + c * d_dx1(base)
        elif kind == "d2":
            out = out + c * d_dx2(base)
        elif kind == "d11":
            out = out + c * d_dx1(d_dx1(base))
        elif kind == "d22":
            out = out + c * d_dx2(d_dx2(base))
        elif kind == "d12":
            out = out + c * d_dx1(d_dx2(base))
    return out


def _assemble_paper(mp, inertia, geom, n, m, families, k=0.8):
    kx = n * math.pi / geom.a
    ky = m * math.pi / geom.a
    h = geom.h
    pc = plate_coefficients(mp, inertia, geom)
    rows = _paper_operator_table(mp, pc, k)
    basis = [(fam, v) for fam in families for v in VARIABLES]
    dim = len(basis)
    nv = len(VARIABLES)
    S = np.zeros((dim, dim))
    for jb, (famj, vj) in enumerate(basis):
        pj = pattern_of(vj, famj)
        for i in range(nv):
            res = _apply_operator(rows[i][vj.value], pj, kx, ky)
            for fi, fam in enumerate(families):
                pi = pattern_of(VARIABLES[i], fam)
                S[fi * nv + i, jb] += -project(res, pi)
    # mass: printed diagonal-block form
    M = np.zeros((dim, dim))
    J = inertia.J
    pcI = pc
    diag = {KinematicVariable.PSI1: pcI.I1, KinematicVariable.PSI2: pcI.I1,
            KinematicVariable.W: pcI.I2, KinematicVariable.OMEGA3: pcI.I3,
            KinematicVariable.WSTAR: pcI.I2}
    for fi, fam in enumerate(families):
        o = fi * nv
        for v, val in diag.items():
            M[o + v.value, o + v.value] = val
    jgroups = [((KinematicVariable.OMEGA01, KinematicVariable.OMEGA02), 5 * h / 6),
               ((KinematicVariable.OMEGAHAT1, KinematicVariable.OMEGAHAT2), 2 * h / 3)]
    for fi, fam in enumerate(families):
        for (v1, v2), pref in jgroups:
            pair = {1: v1, 2: v2}
            for b in (1, 2):
                rowv = pair[b]
                rpat = pattern_of(rowv, fam)
                for a_ in (1, 2):
                    Jab = J[a_ - 1, b - 1]
                    if Jab == 0.0:
                        continue
                    colv = pair[a_]
                    for fj, famc in enumerate(families):
                        if pattern_of(colv, famc) == rpat:
                            M[fi * nv + rowv.value, fj * nv + colv.value] += pref * Jab
    return S, M, basis


def assemble_modal_system(mp: MaterialParams, inertia: MicroInertia,
                          geom: PlateGeometry, n: int, m: int,
                          formulation: str = "energy",
                          families=("A", "B"),
                          shear_correction: float = 5.0 / 6.0) -> ModalSystem:
    """Build the (n, m) modal pencil.

    formulation: 'energy' (default; kinematic Ritz with the 5/6 factor on
    the symmetric transverse-shear energy, matching the plate theory's own
    resultant weights), 'mixed' (Hellinger-Reissner) or 'paper' (printed
    operator reconstruction).
    """
    if n < 1 or m < 1:
        raise ValueError("mode indices must be >= 1")
    if formulation == "energy":
        S, M, basis = _assemble_energy(mp, inertia, geom, n, m, families,
                                       kappa=shear_correction)
    elif formulation == "mixed":
        S, M, basis = _assemble_mixed(mp, inertia, geom, n, m, families)
    elif formulation == "paper":
        S, M, basis = _assemble_paper(mp, inertia, geom, n, m, families)
    else:
        raise ValueError(f"unknown formulation {formulation!r}")
    sys_ = ModalSystem(n, m, S, M, basis, geom, mp, inertia, formulation)
    if formulation != "paper" and sys_.symmetry_defect() > 1e-10:
        raise AssemblyError(
            f"assembled stiffness asymmetric (defect {sys_.symmetry_defect():.2e}); "
            "the sign resolution of the constitutive block is inconsistent")
    return sys_


def plate_spectrum(system: ModalSystem) -> Spectrum:
    """Solve S v = omega^2 M v, sort ascending, mass-normalize, classify."""
    S, M = system.S, system.M
    if system.formulation != "paper":
        w, V = numeig.sym_def_eig(S, M)
        w = np.where((w < 0) & (w > -1e-8 * np.abs(w).max()), 0.0, w)
        if np.any(w < 0):
            raise AssemblyError("negative squared frequency: system not positive")
    else:
        # The reconstructed printed operator is not self-adjoint; its low
        # transverse branch can turn spurious.  Keep the real positive part
        # of the spectrum, which is the published content of this system.
        w, V = numeig.general_eig(S, M, right=True)
        finite = np.isfinite(w)
        w, V = w[finite], V[:, finite]
        keep = (np.abs(w.imag) <= 1e-8 * np.maximum(np.abs(w), 1.0)) & (w.real > 0)
        w, V = w[keep].real, np.real(V[:, keep])
        order = np.argsort(w)
        w, V = w[order], V[:, order]
        for j in range(V.shape[1]):
            nrm = V[:, j] @ M @ V[:, j]
            if nrm > 0:
                V[:, j] /= math.sqrt(nrm)
    omega = np.sqrt(w)
    labels, mixed = classify_modes(V, system)
    return Spectrum(freqs_hz=omega / (2 * math.pi), omega=omega, vectors=V,
                    labels=labels, mixed=mixed)


def classify_modes(vectors: np.ndarray, system: ModalSystem):
    """Label modes by the dominant kinetic-energy share among variable groups."""
    M = system.M
    labels, mixed = [], []
    group_idx = {}
    for cls, vars_ in MODE_GROUPS.items():
        group_idx[cls] = [i for i, (fam, v) in enumerate(system.basis) if v in vars_]
    for j in range(vectors.shape[1]):
        v = vectors[:, j]
        tot = float(v @ M @ v)
        shares = {}
        for cls, idx in group_idx.items():
            sub = np.zeros_like(v)
            sub[idx] = v[idx]
            shares[cls] = float(sub @ M @ sub) / tot if tot else 0.0
        norm = sum(shares.values())
        if norm > 0:
            shares = {c: s / norm for c, s in shares.items()}
        top = max(shares, key=shares.get)
        labels.append(top)
        mixed.append(shares[top] < 0.5)
    return labels, mixed


def reconstruct_3d_fields(mode_vector: np.ndarray, system: ModalSystem,
                          x1: float, x2: float, zeta: float) -> dict:
    """Pointwise 3D stress, couple stress, displacement and microrotation.

    zeta = 2 x3 / h in [-1, 1].  Free vibration: all surface-load terms are
    zero, so sigma_33, mu_33 and mu_3b vanish identically.
    """
    if abs(zeta) > 1.0:
        raise ValueError("zeta must lie in [-1, 1]")
    from .trigbasis import evaluate
    g = system.geometry
    h = g.h
    kx, ky = system.kx, system.ky
    fields = zero_fields(kx, ky)
    for coeff, (fam, var) in zip(mode_vector, system.basis):
        fields[var] = fields[var] + float(coeff) * TrigField.unit(
            pattern_of(var, fam), kx, ky)
    res = resultants_from_kinematics(fields, system.material, g)

    def ev(f):
        return float(evaluate(f, x1, x2))

    V = KinematicVariable
    sigma = np.zeros((3, 3))
    mu_t = np.zeros((3, 3))
    for a in (1, 2):
        for b in (1, 2):
            sigma[a - 1, b - 1] = 6 / h**2 * zeta * ev(res[("M", a, b)])
            mu_t[a - 1, b - 1] = 3 / (2 * h) * ((1 - zeta**2) * ev(res[("R", a, b)])
                                                + ev(res[("Rs", a, b)]))
        sigma[2, a - 1] = 3 / (2 * h) * (1 - zeta**2) * ev(res[("Q", a)])
        sigma[a - 1, 2] = 3 / (2 * h) * ((1 - zeta**2) * ev(res[("Qs", a)])
                                         + ev(res[("Qh", a)]))
        mu_t[a - 1, 2] = 6 / h**2 * zeta * ev(res[("Ss", a)])
        mu_t[2, a - 1] = 0.0
    sigma[2, 2] = 0.0
    mu_t[2, 2] = 0.0

    u = np.array([
        h / 2 * zeta * ev(fields[V.PSI1]),
        h / 2 * zeta * ev(fields[V.PSI2]),
        ev(fields[V.W]) + (1 - zeta**2) * ev(fields[V.WSTAR]),
    ])
    phi = np.array([
        (1 - zeta**2) * ev(fields[V.OMEGA01]) + ev(fields[V.OMEGAHAT1]),
        (1 - zeta**2) * ev(fields[V.OMEGA02]) + ev(fields[V.OMEGAHAT2]),
        zeta * ev(fields[V.OMEGA3]),
    ])
    return {"sigma": sigma, "mu": mu_t, "u": u, "phi": phi}
