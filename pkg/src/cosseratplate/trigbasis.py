"""Exact algebra on separable trigonometric fields.

Every in-plane field handled by the plate solver is a finite sum of terms

    c * T1(kx*x1) * T2(ky*x2),   T1, T2 in {sin, cos},

closed under differentiation.  With both wavenumbers fixed by the mode
indices (n, m), at most four patterns (SS, SC, CS, CC) can appear, so a
field is just a coefficient per pattern and projection is a dictionary
lookup instead of quadrature.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable

import numpy as np

__all__ = ["Trig", "TrigPattern", "TrigTerm", "TrigField"]


class Trig(Enum):
    SIN = "S"
    COS = "C"


@dataclass(frozen=True)
class TrigPattern:
    """Factor pair (fx, fy): which trig function multiplies x1 and x2."""

    fx: Trig
    fy: Trig

    def complement(self) -> "TrigPattern":
        sw = {Trig.SIN: Trig.COS, Trig.COS: Trig.SIN}
        return TrigPattern(sw[self.fx], sw[self.fy])

    def __repr__(self) -> str:
        return self.fx.value + self.fy.value


SS = TrigPattern(Trig.SIN, Trig.SIN)
SC = TrigPattern(Trig.SIN, Trig.COS)
CS = TrigPattern(Trig.COS, Trig.SIN)
CC = TrigPattern(Trig.COS, Trig.COS)


@dataclass(frozen=True)
class TrigTerm:
    coeff: float
    pattern: TrigPattern
    kx: float
    ky: float


class TrigField:
    """Normalized sum of trig terms sharing one (kx, ky).

    Terms with equal pattern merge; zero terms are dropped.
    """

    __slots__ = ("kx", "ky", "_c")

    def __init__(self, kx: float, ky: float, terms: Iterable[TrigTerm] = ()):
        self.kx = kx
        self.ky = ky
        self._c: dict[TrigPattern, float] = {}
        for t in terms:
            if t.kx != kx or t.ky != ky:
                raise ValueError("all terms must share the field wavenumbers")
            self._add(t.pattern, t.coeff)

    def _add(self, pattern: TrigPattern, coeff: float) -> None:
        c = self._c.get(pattern, 0.0) + coeff
        if c == 0.0:
            self._c.pop(pattern, None)
        else:
            self._c[pattern] = c

    @classmethod
    def unit(cls, pattern: TrigPattern, kx: float, ky: float) -> "TrigField":
        return cls(kx, ky, [TrigTerm(1.0, pattern, kx, ky)])

    @classmethod
    def zero(cls, kx: float, ky: float) -> "TrigField":
        return cls(kx, ky)

    @property
    def terms(self) -> list[TrigTerm]:
        return [TrigTerm(c, p, self.kx, self.ky) for p, c in sorted(
            self._c.items(), key=lambda kv: repr(kv[0]))]

    def __add__(self, other: "TrigField") -> "TrigField":
        if (other.kx, other.ky) != (self.kx, self.ky):
            raise ValueError("wavenumber mismatch")
        out = TrigField(self.kx, self.ky)
        out._c = dict(self._c)
        for p, c in other._c.items():
            out._add(p, c)
        return out

    def __sub__(self, other: "TrigField") -> "TrigField":
        return self + (-1.0) * other

    def __mul__(self, s: float) -> "TrigField":
        out = TrigField(self.kx, self.ky)
        if s != 0.0:
            out._c = {p: s * c for p, c in self._c.items()}
        return out

    __rmul__ = __mul__

    def __repr__(self) -> str:
        if not self._c:
            return "TrigField(0)"
        return "TrigField(" + " + ".join(
            f"{c:g}*{p!r}" for p, c in sorted(self._c.items(), key=lambda kv: repr(kv[0]))) + ")"


def _dx(f: TrigField, axis: int) -> TrigField:
    k = f.kx if axis == 0 else f.ky
    out = TrigField(f.kx, f.ky)
    for p, c in f._c.items():
        fac = p.fx if axis == 0 else p.fy
        if fac is Trig.SIN:
            q = TrigPattern(Trig.COS, p.fy) if axis == 0 else TrigPattern(p.fx, Trig.COS)
            out._add(q, k * c)
        else:
            q = TrigPattern(Trig.SIN, p.fy) if axis == 0 else TrigPattern(p.fx, Trig.SIN)
            out._add(q, -k * c)
    return out


def d_dx1(f: TrigField) -> TrigField:
    """Exact partial derivative along x1: sin -> +k cos, cos -> -k sin."""
    return _dx(f, 0)


def d_dx2(f: TrigField) -> TrigField:
    """Exact partial derivative along x2."""
    return _dx(f, 1)


def project(f: TrigField, pattern: TrigPattern) -> float:
    """Coefficient of `pattern` in the normalized field (exact, no quadrature)."""
    return f._c.get(pattern, 0.0)


def evaluate(f: TrigField, x1, x2):
    """Pointwise numerical evaluation (oracle for the symbolic calculus)."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    tot = np.zeros(np.broadcast(x1, x2).shape)
    for p, c in f._c.items():
        f1 = np.sin(f.kx * x1) if p.fx is Trig.SIN else np.cos(f.kx * x1)
        f2 = np.sin(f.ky * x2) if p.fy is Trig.SIN else np.cos(f.ky * x2)
        tot = tot + c * f1 * f2
    return tot
