"""Arbitrary-precision scalar arithmetic, symmetric eigensolvers and
stationary-point finding for signed-power trace expansions.

All heavy numeric work in this package runs on ``gmpy2.mpfr`` scalars held in
``numpy`` object arrays.  A :class:`PrecisionContext` fixes the working
precision (requested digits plus guard digits); every public operation opens a
local gmpy2 context so results are reproducible regardless of global state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import gmpy2
import numpy as np
from gmpy2 import mpfr

__all__ = [
    "PrecisionContext",
    "SymmetricMatrix",
    "TraceForm",
    "JacobiConvergenceError",
    "NoStationaryPointError",
    "DegenerateFormError",
    "eigenvalues_symmetric",
    "smallest_eigenvalue",
    "stationary_points_signed_power_form",
]

MIN_TARGET_DIGITS = 16
MIN_GUARD_DIGITS = 10

# Geometric bracketing grid for stationary-point scans; wide enough to cover
# every optimal basis parameter that occurs for couplings up to 10^4.
_SCAN_LO = Fraction(1, 1000)
_SCAN_HI = Fraction(1000)
_SCAN_POINTS = 240

_LOG2_10 = math.log2(10)


class JacobiConvergenceError(RuntimeError):
    """Jacobi sweeps exhausted without reaching the off-diagonal threshold."""

    def __init__(self, message: str, residual):
        super().__init__(message)
        self.residual = residual


class NoStationaryPointError(ValueError):
    """The trace form has no stationary point at positive parameter values."""


class DegenerateFormError(ValueError):
    """All coefficients of the trace form vanish."""


@dataclass(frozen=True)
class PrecisionContext:
    """Working-precision configuration: requested digits plus guard digits."""

    target_digits: int
    guard_digits: int

    def __post_init__(self):
        if self.target_digits < MIN_TARGET_DIGITS:
            raise ValueError(
                f"target_digits must be >= {MIN_TARGET_DIGITS}, got {self.target_digits}"
            )
        if self.guard_digits < MIN_GUARD_DIGITS:
            raise ValueError(
                f"guard_digits must be >= {MIN_GUARD_DIGITS}, got {self.guard_digits}"
            )

    @property
    def working_digits(self) -> int:
        return self.target_digits + self.guard_digits

    @property
    def precision_bits(self) -> int:
        # A few extra bits so that `working_digits` decimal digits survive
        # binary-to-decimal round trips.
        return int(math.ceil(self.working_digits * _LOG2_10)) + 8

    def local(self):
        """Context manager activating this precision for gmpy2 arithmetic."""
        return gmpy2.context(gmpy2.context(), precision=self.precision_bits)

    def to_scalar(self, value):
        """Convert ints, Fractions, floats, strings or mpfr to working precision."""
        with self.local():
            if isinstance(value, Fraction):
                return mpfr(value.numerator) / mpfr(value.denominator)
            return mpfr(value)

    def pi(self):
        with self.local():
            return gmpy2.const_pi()


def make_precision_context(target_digits: int, guard_digits: int) -> PrecisionContext:
    return PrecisionContext(target_digits, guard_digits)


class SymmetricMatrix:
    """Dense symmetric matrix of high-precision scalars.

    Only the upper triangle is authoritative: the constructor mirrors it onto
    the lower triangle, so symmetry holds structurally.
    """

    __slots__ = ("dim", "data")

    def __init__(self, data: np.ndarray):
        data = np.asarray(data, dtype=object)
        if data.ndim != 2 or data.shape[0] != data.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {data.shape}")
        n = data.shape[0]
        iu = np.triu_indices(n, k=1)
        mirrored = data.copy()
        mirrored[iu[1], iu[0]] = data[iu]
        for x in mirrored.flat:
            if not gmpy2.is_finite(mpfr(x)):
                raise ValueError("matrix entries must be finite")
        self.dim = n
        self.data = mirrored

    def trace(self, ctx: "PrecisionContext | None" = None):
        if ctx is not None:
            with ctx.local():
                return self.trace()
        t = mpfr(0)
        for i in range(self.dim):
            t += self.data[i, i]
        return t

    def bandwidth(self) -> int:
        """Largest |i - j| with a nonzero entry (0 for diagonal matrices)."""
        bw = 0
        for i in range(self.dim):
            row = self.data[i]
            for j in range(self.dim - 1, i + bw, -1):
                if row[j] != 0:
                    bw = j - i
                    break
        return bw

    def to_float64(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.data], dtype=float)


def eigenvalues_symmetric(A: SymmetricMatrix, ctx: PrecisionContext) -> list:
    """All eigenvalues of ``A`` in ascending order, by cyclic Jacobi sweeps.

    Sweeps stop once the largest off-diagonal magnitude drops below
    10^(-working_digits) times the largest diagonal magnitude.
    """
    with ctx.local():
        n = A.dim
        a = np.array([[mpfr(x) for x in row] for row in A.data], dtype=object)
        if n == 1:
            return [a[0, 0]]
        iu = np.triu_indices(n, k=1)
        tol = mpfr(10) ** (-ctx.working_digits)
        max_sweeps = 100 * n
        for _ in range(max_sweeps):
            off = max(abs(x) for x in a[iu])
            diag_scale = max(abs(a[i, i]) for i in range(n))
            if off <= tol * diag_scale or off == 0:
                return sorted(a[i, i] for i in range(n))
            # off-diagonal entries far below the sweep maximum contribute
            # nothing; skip them to keep late sweeps cheap
            cutoff = off * tol
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p, q]
                    if abs(apq) <= cutoff:
                        continue
                    _jacobi_rotate(a, p, q)
        off = max(abs(x) for x in a[iu])
        raise JacobiConvergenceError(
            f"Jacobi failed to converge in {max_sweeps} sweeps "
            f"(residual off-diagonal max {off})",
            residual=off,
        )


def _jacobi_rotate(a: np.ndarray, p: int, q: int) -> None:
    apq = a[p, q]
    theta = (a[q, q] - a[p, p]) / (2 * apq)
    sign = mpfr(1) if theta >= 0 else mpfr(-1)
    t = sign / (abs(theta) + gmpy2.sqrt(1 + theta * theta))
    c = 1 / gmpy2.sqrt(1 + t * t)
    s = t * c
    rp = a[p, :].copy()
    rq = a[q, :].copy()
    a[p, :] = c * rp - s * rq
    a[q, :] = s * rp + c * rq
    cp = a[:, p].copy()
    cq = a[:, q].copy()
    a[:, p] = c * cp - s * cq
    a[:, q] = s * cp + c * cq
    a[p, q] = mpfr(0)
    a[q, p] = mpfr(0)


# Above this dimension smallest_eigenvalue switches from full Jacobi to
# shifted inverse iteration seeded by a double-precision estimate.
_JACOBI_DIM_LIMIT = 64


def smallest_eigenvalue(A: SymmetricMatrix, ctx: PrecisionContext):
    """Lowest eigenvalue of ``A`` to the context's target accuracy."""
    if A.dim <= _JACOBI_DIM_LIMIT:
        return eigenvalues_symmetric(A, ctx)[0]
    return _smallest_by_inverse_iteration(A, ctx)


def _smallest_by_inverse_iteration(A: SymmetricMatrix, ctx: PrecisionContext):
    with ctx.local():
        n = A.dim
        Ad = A.to_float64()
        w, v = np.linalg.eigh(Ad)
        e0 = w[0]
        scale = max(abs(e0), 1.0)
        # Shift strictly below the spectrum: keeps H - sigma*I positive
        # definite (LDL^T needs no pivoting) while the gap ratio stays tiny.
        sigma = mpfr(e0) - mpfr(scale) * mpfr(10) ** -6
        B = np.array([[mpfr(x) for x in row] for row in A.data], dtype=object)
        for i in range(n):
            B[i, i] -= sigma
        bw = A.bandwidth()
        L, d = _ldlt_banded(B, bw)
        x = np.array([mpfr(t) for t in v[:, 0]], dtype=object)
        for _ in range(5):
            x = _ldlt_solve(L, d, bw, x)
            x = x / gmpy2.sqrt(x @ x)
        Hx = A.data @ x
        return (x @ Hx) / (x @ x)


def _ldlt_banded(B: np.ndarray, bw: int):
    """In-place LDL^T of a symmetric positive-definite band matrix.

    ``bw`` is the half bandwidth; passing ``dim - 1`` gives the dense case.
    The band structure is preserved by the factorization (no fill-in).
    """
    n = B.shape[0]
    L = B
    d = np.empty(n, dtype=object)
    for j in range(n):
        k0 = max(0, j - bw)
        if j > k0:
            wv = L[j, k0:j] * d[k0:j]
            dj = L[j, j] - L[j, k0:j] @ wv
        else:
            wv = None
            dj = L[j, j]
        if dj <= 0:
            raise ArithmeticError(
                "LDL^T pivot not positive; shift is not below the spectrum"
            )
        d[j] = dj
        i1 = min(n, j + bw + 1)
        if j + 1 < i1:
            col = L[j + 1 : i1, j]
            if wv is not None:
                col = col - L[j + 1 : i1, k0:j] @ wv
            L[j + 1 : i1, j] = col / dj
    return L, d


def _ldlt_solve(L: np.ndarray, d: np.ndarray, bw: int, b: np.ndarray) -> np.ndarray:
    n = L.shape[0]
    y = b.copy()
    for i in range(1, n):
        k0 = max(0, i - bw)
        y[i] = y[i] - L[i, k0:i] @ y[k0:i]
    y = y / d
    for i in range(n - 2, -1, -1):
        i1 = min(n, i + bw + 1)
        y[i] = y[i] - L[i + 1 : i1, i] @ y[i + 1 : i1]
    return y


@dataclass(frozen=True)
class TraceForm:
    """Signed-power expansion sum_k c_k * alpha^k of an RR-matrix trace."""

    terms: tuple = field(default_factory=tuple)  # of (exponent, coefficient)

    def value(self, alpha, ctx: "PrecisionContext | None" = None):
        if ctx is not None:
            with ctx.local():
                return self.value(ctx.to_scalar(alpha))
        return sum((c * alpha**k for k, c in self.terms), mpfr(0))

    def derivative_value(self, alpha, ctx: "PrecisionContext | None" = None):
        if ctx is not None:
            with ctx.local():
                return self.derivative_value(ctx.to_scalar(alpha))
        return sum((k * c * alpha ** (k - 1) for k, c in self.terms), mpfr(0))


def stationary_points_signed_power_form(
    form: TraceForm, ctx: PrecisionContext
) -> list:
    """All positive roots of d(form)/d(alpha) = 0, sorted ascending.

    The derivative is cleared of negative powers to a plain polynomial, roots
    are bracketed on a geometric scan, isolated by bisection and polished by
    Newton iteration to working precision.
    """
    with ctx.local():
        active = [(k, mpfr(c)) for k, c in form.terms if c != 0]
        if not active:
            raise DegenerateFormError("all trace-form coefficients are zero")
        if not any(k < 0 for k, _ in active) or not any(k > 0 for k, _ in active):
            raise NoStationaryPointError(
                "form needs both negative- and positive-exponent terms"
            )
        # derivative terms (k*c, k-1), shifted so exponents are >= 0
        dterms = [(k - 1, k * c) for k, c in active if k != 0]
        shift = min(k for k, _ in dterms)
        degree = max(k for k, _ in dterms) - shift
        coeffs = [mpfr(0)] * (degree + 1)
        for k, c in dterms:
            coeffs[k - shift] += c

        def poly(x):
            acc = mpfr(0)
            for c in reversed(coeffs):
                acc = acc * x + c
            return acc

        def dpoly(x):
            acc = mpfr(0)
            for j in range(degree, 0, -1):
                acc = acc * x + j * coeffs[j]
            return acc

        lo = ctx.to_scalar(_SCAN_LO)
        hi = ctx.to_scalar(_SCAN_HI)
        ratio = (hi / lo) ** (mpfr(1) / (_SCAN_POINTS - 1))
        grid = [lo * ratio**i for i in range(_SCAN_POINTS)]
        vals = [poly(x) for x in grid]
        roots = []
        for i in range(_SCAN_POINTS - 1):
            if vals[i] == 0:
                roots.append(grid[i])
            elif vals[i] * vals[i + 1] < 0:
                roots.append(_refine_root(poly, dpoly, grid[i], grid[i + 1], ctx))
        if vals[-1] == 0:
            roots.append(grid[-1])
        if not roots:
            raise NoStationaryPointError("no stationary point at positive alpha")
        return sorted(roots)


def _refine_root(poly, dpoly, a, b, ctx: PrecisionContext):
    fa = poly(a)
    # bisection until the bracket is tight enough for Newton to take over
    for _ in range(40):
        m = (a + b) / 2
        fm = poly(m)
        if fm == 0:
            return m
        if fa * fm < 0:
            b = m
        else:
            a, fa = m, fm
    x = (a + b) / 2
    tol = abs(x) * mpfr(10) ** (-ctx.working_digits)
    for _ in range(200):
        step = poly(x) / dpoly(x)
        x = x - step
        if abs(step) <= tol:
            break
    return x


def format_scientific(x, sig_digits: int) -> str:
    """Decimal scientific notation with ``sig_digits`` significant digits.

    gmpy2's mpfr only implements the f/g format conversions, so the e-style
    string is assembled from ``mpfr.digits``.
    """
    if not isinstance(x, mpfr):
        # enough bits for the requested digits; never the ambient context
        x = mpfr(x, int(math.ceil(sig_digits * _LOG2_10)) + 8)
    if not gmpy2.is_finite(x):
        raise ValueError("cannot format a non-finite scalar")
    if x == 0:
        mant = "0." + "0" * (sig_digits - 1) if sig_digits > 1 else "0"
        return mant + "e+00"
    digs, exp, _ = x.digits(10, sig_digits)
    sign = ""
    if digs.startswith("-"):
        sign, digs = "-", digs[1:]
    mant = digs[0] + ("." + digs[1:] if len(digs) > 1 else "")
    return f"{sign}{mant}e{exp - 1:+03d}"


def rayleigh_quotient(A: SymmetricMatrix, v: Sequence) -> mpfr:
    """v^T A v / v^T v, used by property tests against smallest_eigenvalue."""
    x = np.array([mpfr(t) for t in v], dtype=object)
    return (x @ (A.data @ x)) / (x @ x)
