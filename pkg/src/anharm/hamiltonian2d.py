"""Tensor-product assembly of the coupled-oscillator matrix and its trace.

Two isospectral operators are supported, on basis products
phi_n(x) phi_m(y) with a shared nonlinear parameter alpha:

* Original:  -dxx - dyy + x^2 + y^2 + lambda x^2 y^2
* Rotated:   -dxx - dyy + x^2 + y^2 + (lambda/4) (x^2 - y^2)^2

The rotated quartic is assembled from its expansion x^4 - 2 x^2 y^2 + y^4, so
every entry stays in closed form.  Flat index convention: basis pair (n, m)
maps to n * M + m.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import TextIO

import numpy as np
from gmpy2 import mpfr

from .basis1d import Basis1DSpec, BasisKind, kinetic_matrix, x2_matrix, x4_matrix
from .numerics import PrecisionContext, SymmetricMatrix, TraceForm, format_scientific

__all__ = ["HamiltonianForm", "HamiltonianSpec", "assemble", "trace_form", "dump_matrix"]


class HamiltonianForm(enum.Enum):
    ORIGINAL = "original"
    ROTATED = "rotated"


@dataclass(frozen=True)
class HamiltonianSpec:
    """Problem definition: coupling, operator form, basis kind and size."""

    coupling: Fraction
    form: HamiltonianForm
    basis: BasisKind
    size: int  # M: number of even-parity 1D functions per axis

    def __post_init__(self):
        object.__setattr__(self, "coupling", Fraction(self.coupling))
        if self.coupling < 0:
            raise ValueError("coupling must be >= 0")
        if self.size < 1:
            raise ValueError("basis size must be >= 1")

    @property
    def dim(self) -> int:
        return self.size * self.size

    def basis1d(self, alpha) -> Basis1DSpec:
        return Basis1DSpec(self.basis, self.size, alpha)


def assemble(spec: HamiltonianSpec, alpha, ctx: PrecisionContext) -> SymmetricMatrix:
    """The M^2 x M^2 matrix of the chosen operator at basis parameter alpha."""
    with ctx.local():
        b1 = spec.basis1d(alpha)
        T = kinetic_matrix(b1, ctx).data
        X2 = x2_matrix(b1, ctx).data
        lam = ctx.to_scalar(spec.coupling)
        M = spec.size
        H = np.full((M * M, M * M), mpfr(0), dtype=object)
        Hv = H.reshape(M, M, M, M)  # [n, m, n', m'], shares memory with H
        S = T + X2
        if spec.form is HamiltonianForm.ROTATED:
            X4 = x4_matrix(b1, ctx).data
            S = S + (lam / 4) * X4
        for k in range(M):
            Hv[:, k, :, k] += S
            Hv[k, :, k, :] += S
        cross = lam if spec.form is HamiltonianForm.ORIGINAL else -lam / 2
        if cross != 0:
            H += cross * np.kron(X2, X2)
        return SymmetricMatrix(H)


def trace_form(spec: HamiltonianSpec, ctx: PrecisionContext) -> TraceForm:
    """Trace of the assembled matrix as an explicit power series in alpha.

    Computed from exact 1D diagonal sums: with the per-axis sums
    t = sum of kinetic diagonals, s2 = sum of x^2 diagonals, s4 = sum of x^4
    diagonals (each taken at alpha = 1), the 2D trace is

        2 M t a^k + 2 M s2 a^p + lambda s2^2 a^{2p}            (Original)
        2 M t a^k + 2 M s2 a^p + (lambda/4)(2 M s4 - 2 s2^2) a^{2p}  (Rotated)

    where (k, p) = (-2, +2) for the trigonometric basis and (+1, -1) for the
    oscillator one.  Everything is rational except a factor pi^2 in the
    trigonometric kinetic sum and 1/pi^2, 1/pi^4 pieces in s2, s4.
    """
    M = spec.size
    lam = spec.coupling
    with ctx.local():
        if spec.basis is BasisKind.TRIGONOMETRIC:
            pi2 = ctx.pi() ** 2
            inv_pi2 = 1 / pi2
            t = _frac(sum(Fraction((2 * n + 1) ** 2, 4) for n in range(M))) * pi2
            b2 = sum(Fraction(2, (2 * n + 1) ** 2) for n in range(M))
            b4 = sum(Fraction(24, (2 * n + 1) ** 4) for n in range(M))
            s2 = _frac(Fraction(M, 3)) - _frac(b2) * inv_pi2
            s4 = (
                _frac(Fraction(M, 5))
                - _frac(2 * b2) * inv_pi2
                + _frac(b4) * inv_pi2 * inv_pi2
            )
            e_kin, e_x2 = -2, 2
        else:
            t = _frac(Fraction(2 * M * M - M, 2))
            s2 = t
            s4 = _frac(
                Fraction(3, 4) * sum(8 * k * k + 4 * k + 1 for k in range(M))
            )
            e_kin, e_x2 = 1, -1
        lam_s = ctx.to_scalar(lam)
        terms = {e_kin: 2 * M * t, e_x2: 2 * M * s2}
        if spec.form is HamiltonianForm.ORIGINAL:
            quartic = lam_s * s2 * s2
        else:
            quartic = (lam_s / 4) * (2 * M * s4 - 2 * s2 * s2)
        if quartic != 0:
            terms[2 * e_x2] = terms.get(2 * e_x2, mpfr(0)) + quartic
        return TraceForm(tuple(sorted(terms.items())))


def dump_matrix(matrix: SymmetricMatrix, stream: TextIO, ctx: PrecisionContext) -> None:
    """Write one ``i j value`` line per entry for cross-implementation diffs."""
    digits = ctx.working_digits
    for i in range(matrix.dim):
        for j in range(matrix.dim):
            stream.write(f"{i} {j} {format_scientific(matrix.data[i, j], digits)}\n")


def _frac(f: Fraction):
    return mpfr(f.numerator) / mpfr(f.denominator)
