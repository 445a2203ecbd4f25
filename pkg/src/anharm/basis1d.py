"""Closed-form 1D operator matrices in the even-parity sector.

Two parameterized bases are supported:

* Trigonometric: phi_n(x) = cos((n + 1/2) pi x / L) / sqrt(L) on [-L, L],
  n = 0..M-1, all even about x = 0.  L is the well half-width.
* Harmonic oscillator: the even eigenfunctions of a unit-mass oscillator of
  frequency Omega, quantum numbers n = 0, 2, ..., 2(M-1).

Matrix elements of -d^2/dx^2, x^2 and x^4 are evaluated from closed forms.
The trigonometric ones come from the elementary antiderivatives of
x^{2k} cos(ax); writing a_n = (n + 1/2) pi / L and using
cos(a_n x) cos(a_m x) = [cos((a_n - a_m)x) + cos((a_n + a_m)x)] / 2, every
entry reduces to rationals in (n, m) divided by powers of pi, times the
appropriate power of L.  The oscillator ones follow from the ladder
representation x = (a + a^dag)/sqrt(2 Omega):

    <n|x^2|n>     = (n + 1/2) / Omega
    <n|x^2|n+2>   = sqrt((n+1)(n+2)) / (2 Omega)
    <n|x^4|n>     = 3 (2n^2 + 2n + 1) / (4 Omega^2)
    <n|x^4|n+2>   = (2n + 3) sqrt((n+1)(n+2)) / (2 Omega^2)
    <n|x^4|n+4>   = sqrt((n+1)(n+2)(n+3)(n+4)) / (4 Omega^2)
    <n|p^2|n>     = Omega (n + 1/2)
    <n|p^2|n+2>   = -Omega sqrt((n+1)(n+2)) / 2

Rational parts are accumulated exactly (``fractions.Fraction``) and converted
to working-precision floats only when combined with powers of pi, L or Omega.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

import gmpy2
import numpy as np
from gmpy2 import mpfr

from .numerics import PrecisionContext, SymmetricMatrix

__all__ = ["BasisKind", "Basis1DSpec", "kinetic_matrix", "x2_matrix", "x4_matrix"]


class BasisKind(enum.Enum):
    TRIGONOMETRIC = "trig"
    HARMONIC_OSCILLATOR = "ho"

    @property
    def parameter_name(self) -> str:
        return "L" if self is BasisKind.TRIGONOMETRIC else "Omega"


@dataclass(frozen=True)
class Basis1DSpec:
    kind: BasisKind
    size: int
    alpha: object  # positive scalar, converted via the context

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("basis size must be >= 1")
        if not self.alpha > 0:
            raise ValueError(f"{self.kind.parameter_name} must be positive")


def kinetic_matrix(spec: Basis1DSpec, ctx: PrecisionContext) -> SymmetricMatrix:
    """M x M matrix of <phi_i| -d^2/dx^2 |phi_j>."""
    with ctx.local():
        if spec.kind is BasisKind.TRIGONOMETRIC:
            # phi_n'' = -a_n^2 phi_n exactly, so the matrix is diagonal.
            L = ctx.to_scalar(spec.alpha)
            pi2 = ctx.pi() ** 2
            fac = pi2 / (L * L)
            out = _zeros(spec.size)
            for n in range(spec.size):
                out[n, n] = _rat(Fraction((2 * n + 1) ** 2, 4)) * fac
            return SymmetricMatrix(out)
        w = ctx.to_scalar(spec.alpha)
        out = _zeros(spec.size)
        for i in range(spec.size):
            n = 2 * i
            out[i, i] = w * _rat(Fraction(2 * n + 1, 2))
            if i + 1 < spec.size:
                out[i, i + 1] = -w / 2 * _isqrt((n + 1) * (n + 2))
        return SymmetricMatrix(out)


def x2_matrix(spec: Basis1DSpec, ctx: PrecisionContext) -> SymmetricMatrix:
    """M x M matrix of <phi_i| x^2 |phi_j>."""
    with ctx.local():
        if spec.kind is BasisKind.TRIGONOMETRIC:
            L = ctx.to_scalar(spec.alpha)
            L2 = L * L
            inv_pi2 = 1 / ctx.pi() ** 2
            out = _zeros(spec.size)
            for n in range(spec.size):
                out[n, n] = (
                    _rat(Fraction(1, 3)) - _rat(Fraction(2, (2 * n + 1) ** 2)) * inv_pi2
                ) * L2
                for m in range(n):
                    d = n - m
                    s = n + m + 1
                    f = 2 * (-1) ** d * (Fraction(1, d * d) - Fraction(1, s * s))
                    out[m, n] = _rat(f) * inv_pi2 * L2
            return SymmetricMatrix(out)
        w = ctx.to_scalar(spec.alpha)
        out = _zeros(spec.size)
        for i in range(spec.size):
            n = 2 * i
            out[i, i] = _rat(Fraction(2 * n + 1, 2)) / w
            if i + 1 < spec.size:
                out[i, i + 1] = _isqrt((n + 1) * (n + 2)) / (2 * w)
        return SymmetricMatrix(out)


def x4_matrix(spec: Basis1DSpec, ctx: PrecisionContext) -> SymmetricMatrix:
    """M x M matrix of <phi_i| x^4 |phi_j>."""
    with ctx.local():
        if spec.kind is BasisKind.TRIGONOMETRIC:
            L = ctx.to_scalar(spec.alpha)
            L4 = L**4
            inv_pi2 = 1 / ctx.pi() ** 2
            inv_pi4 = inv_pi2 * inv_pi2
            out = _zeros(spec.size)
            for n in range(spec.size):
                k = 2 * n + 1
                out[n, n] = (
                    _rat(Fraction(1, 5))
                    - _rat(Fraction(4, k * k)) * inv_pi2
                    + _rat(Fraction(24, k**4)) * inv_pi4
                ) * L4
                for m in range(n):
                    d = n - m
                    s = n + m + 1
                    sgn = (-1) ** d
                    f2 = 4 * sgn * (Fraction(1, d * d) - Fraction(1, s * s))
                    f4 = -24 * sgn * (Fraction(1, d**4) - Fraction(1, s**4))
                    out[m, n] = (_rat(f2) * inv_pi2 + _rat(f4) * inv_pi4) * L4
            return SymmetricMatrix(out)
        w = ctx.to_scalar(spec.alpha)
        w2 = w * w
        out = _zeros(spec.size)
        for i in range(spec.size):
            n = 2 * i
            out[i, i] = _rat(Fraction(3 * (2 * n * n + 2 * n + 1), 4)) / w2
            if i + 1 < spec.size:
                out[i, i + 1] = (
                    _rat(Fraction(2 * n + 3, 2)) * _isqrt((n + 1) * (n + 2)) / w2
                )
            if i + 2 < spec.size:
                out[i, i + 2] = _isqrt((n + 1) * (n + 2) * (n + 3) * (n + 4)) / (4 * w2)
        return SymmetricMatrix(out)


def _zeros(n: int) -> np.ndarray:
    return np.full((n, n), mpfr(0), dtype=object)


def _rat(f: Fraction):
    return mpfr(f.numerator) / mpfr(f.denominator)


def _isqrt(k: int):
    return gmpy2.sqrt(mpfr(k))
