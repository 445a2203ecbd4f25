"""Pseudospectral collocation baseline for the same coupled oscillators.

The eigenvalue equation is enforced at tensor products of M uniform nodes,
the zeros of the next even cosine mode: x_i = (2i + 1) L / (2M + 1) on (0, L).
The kinetic term is exact on the cosine set (each mode is an eigenfunction of
-d^2/dx^2) and the potential is sampled at the nodes, which makes the
resulting matrix non-symmetric.  It is deliberately solved as-is: the point of
this module is that, unlike the Rayleigh-Ritz route, collocation estimates
carry no upper-bound guarantee and can land below the exact energy.

Everything here runs at a fixed 34 working digits; the passed-in context is
accepted for interface uniformity but does not change the arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass

import gmpy2
import numpy as np
from gmpy2 import mpfr

from .basis1d import BasisKind
from .hamiltonian2d import HamiltonianForm, HamiltonianSpec
from .numerics import PrecisionContext

__all__ = ["CollocationGrid", "collocation_grid", "collocation_ground_energy"]

_FIXED_CTX = PrecisionContext(target_digits=24, guard_digits=10)  # 34 working digits


class UnsupportedBasisError(ValueError):
    """Collocation is implemented for the trigonometric basis only."""


@dataclass(frozen=True)
class CollocationGrid:
    size: int
    half_width: object
    nodes: tuple

    def __post_init__(self):
        prev = 0
        for x in self.nodes:
            if not (prev < x < self.half_width):
                raise ValueError("nodes must increase strictly inside (0, L)")
            prev = x


def collocation_grid(M: int, L) -> CollocationGrid:
    with _FIXED_CTX.local():
        Ls = _FIXED_CTX.to_scalar(L)
        nodes = tuple(Ls * (2 * i + 1) / (2 * M + 1) for i in range(M))
        return CollocationGrid(size=M, half_width=Ls, nodes=nodes)


def collocation_ground_energy(spec: HamiltonianSpec, alpha, ctx: PrecisionContext):
    """Ground-energy estimate from the M^2 x M^2 collocation matrix.

    Returns the eigenvalue with the smallest real part, refined to the fixed
    working precision by two-sided inverse iteration around a double-precision
    estimate.
    """
    if spec.basis is not BasisKind.TRIGONOMETRIC:
        raise UnsupportedBasisError("collocation requires the trigonometric basis")
    with _FIXED_CTX.local():
        M = spec.size
        grid = collocation_grid(M, alpha)
        L = grid.half_width
        pi = _FIXED_CTX.pi()
        a = np.array([(2 * n + 1) * pi / (2 * L) for n in range(M)], dtype=object)
        x = np.array(grid.nodes, dtype=object)
        inv_sqrt_L = 1 / gmpy2.sqrt(L)
        Phi = np.array(
            [[gmpy2.cos(an * xi) * inv_sqrt_L for an in a] for xi in x], dtype=object
        )  # Phi[i, n]
        C = _invert(Phi)  # C[n, i]
        lam = _FIXED_CTX.to_scalar(spec.coupling)
        V = np.empty((M, M), dtype=object)
        for i in range(M):
            for j in range(M):
                xi2 = x[i] * x[i]
                yj2 = x[j] * x[j]
                if spec.form is HamiltonianForm.ORIGINAL:
                    V[i, j] = xi2 + yj2 + lam * xi2 * yj2
                else:
                    diff = xi2 - yj2
                    V[i, j] = xi2 + yj2 + lam / 4 * diff * diff
        # Coefficient-space matrix: diag(k_n + k_m) + (C x C) diag(V) (Phi x Phi),
        # contracted axis by axis to stay O(M^5).
        G3 = C.T[:, :, None] * Phi[:, None, :]  # [i, n, n']
        Gm = G3.reshape(M, M * M)
        Wm = V @ Gm  # [i, (m, m')]
        P = Gm.T @ Wm  # [(n, n'), (m, m')]
        A = np.ascontiguousarray(
            P.reshape(M, M, M, M).transpose(0, 2, 1, 3).reshape(M * M, M * M)
        )
        k = a * a
        for n in range(M):
            for m in range(M):
                A[n * M + m, n * M + m] += k[n] + k[m]
        return _smallest_real_eigenvalue(A)


def _invert(B: np.ndarray) -> np.ndarray:
    n = B.shape[0]
    lu, piv = _lu_partial_pivot(B.copy())
    cols = [
        _lu_solve(lu, piv, np.array([mpfr(1 if i == j else 0) for i in range(n)]))
        for j in range(n)
    ]
    return np.array(cols, dtype=object).T


def _lu_partial_pivot(U: np.ndarray):
    n = U.shape[0]
    piv = np.arange(n)
    for j in range(n):
        p = j + max(range(n - j), key=lambda r: abs(U[j + r, j]))
        if p != j:
            U[[j, p], :] = U[[p, j], :]
            piv[[j, p]] = piv[[p, j]]
        if U[j, j] == 0:
            raise ArithmeticError("singular collocation matrix")
        if j + 1 < n:
            U[j + 1 :, j] /= U[j, j]
            U[j + 1 :, j + 1 :] -= U[j + 1 :, j : j + 1] * U[j : j + 1, j + 1 :]
    return U, piv


def _lu_solve(lu: np.ndarray, piv: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = lu.shape[0]
    y = b[piv].copy()
    for i in range(1, n):
        y[i] -= lu[i, :i] @ y[:i]
    for i in range(n - 1, -1, -1):
        y[i] = (y[i] - (lu[i, i + 1 :] @ y[i + 1 :] if i + 1 < n else 0)) / lu[i, i]
    return y


def _smallest_real_eigenvalue(A: np.ndarray):
    n = A.shape[0]
    Af = np.array([[float(v) for v in row] for row in A], dtype=float)
    w, vr = np.linalg.eig(Af)
    idx = int(np.argmin(w.real))
    sigma = mpfr(float(w[idx].real))
    v = np.array([mpfr(float(t)) for t in vr[:, idx].real], dtype=object)
    B = A.copy()
    for i in range(n):
        B[i, i] -= sigma
    lu, piv = _lu_partial_pivot(B)
    u = v.copy()
    for _ in range(3):
        v = _lu_solve(lu, piv, v)
        v = v / gmpy2.sqrt(v @ v)
        u = _solve_transposed(lu, piv, u)
        u = u / gmpy2.sqrt(u @ u)
    return (u @ (A @ v)) / (u @ v)


def _solve_transposed(lu: np.ndarray, piv: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve (P^T L U)^T x = b reusing the factorization of the original."""
    n = lu.shape[0]
    y = b.copy()
    for i in range(n):  # U^T is lower triangular with U's diagonal
        y[i] = (y[i] - (lu[:i, i] @ y[:i] if i else 0)) / lu[i, i]
    for i in range(n - 2, -1, -1):  # L^T is unit upper triangular
        y[i] -= lu[i + 1 :, i] @ y[i + 1 :]
    x = np.empty(n, dtype=object)
    x[piv] = y
    return x
