"""Selection of the optimal nonlinear basis parameter by trace stationarity.

At each order M the parameter (L for the trigonometric basis, Omega for the
oscillator one) is fixed where the derivative of the RR-matrix trace
vanishes.  If several positive stationary points exist, the one with the
smallest trace value wins; exact ties go to the smallest parameter.
"""

from __future__ import annotations

from dataclasses import dataclass

from .hamiltonian2d import HamiltonianSpec, trace_form
from .numerics import (
    PrecisionContext,
    stationary_points_signed_power_form,
)

__all__ = ["OptimizedBasisResult", "optimize_parameter"]


@dataclass(frozen=True)
class OptimizedBasisResult:
    spec: HamiltonianSpec
    alpha_opt: object
    trace_at_opt: object
    n_candidates: int


def optimize_parameter(
    spec: HamiltonianSpec, ctx: PrecisionContext
) -> OptimizedBasisResult:
    form = trace_form(spec, ctx)
    with ctx.local():
        roots = stationary_points_signed_power_form(form, ctx)
        best = roots[0]
        best_val = form.value(best)
        for r in roots[1:]:
            v = form.value(r)
            if v < best_val:  # strict: ties keep the smaller alpha
                best, best_val = r, v
        return OptimizedBasisResult(
            spec=spec, alpha_opt=best, trace_at_opt=best_val, n_candidates=len(roots)
        )
