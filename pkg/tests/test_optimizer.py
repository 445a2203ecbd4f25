from fractions import Fraction

import pytest
from gmpy2 import mpfr

from anharm import (
    BasisKind,
    HamiltonianForm,
    HamiltonianSpec,
    optimize_parameter,
    trace_form,
)
from anharm.numerics import format_scientific


def spec(lam, form, basis, M):
    return HamiltonianSpec(Fraction(lam), form, basis, M)


def test_uncoupled_ho_gives_unit_frequency(ctx):
    for M in (1, 4, 9):
        opt = optimize_parameter(
            spec(0, HamiltonianForm.ORIGINAL, BasisKind.HARMONIC_OSCILLATOR, M), ctx
        )
        assert abs(opt.alpha_opt - 1) < mpfr("1e-40")
        assert opt.n_candidates == 1


@pytest.mark.parametrize(
    "M,printed",
    [(10, "2.627"), (15, "2.988"), (20, "3.278"), (25, "3.525"), (30, "3.741"), (35, "3.935")],
)
def test_trig_original_lopt_column(ctx, M, printed):
    opt = optimize_parameter(
        spec(10, HamiltonianForm.ORIGINAL, BasisKind.TRIGONOMETRIC, M), ctx
    )
    assert format_scientific(opt.alpha_opt, 4) == printed + "e+00"


def test_large_coupling_ho_rotated(ctx):
    opt = optimize_parameter(
        spec(10000, HamiltonianForm.ROTATED, BasisKind.HARMONIC_OSCILLATOR, 35), ctx
    )
    assert format_scientific(opt.alpha_opt, 4) == "5.594e+01"


def test_lopt_monotone_in_basis_size(ctx):
    values = [
        optimize_parameter(
            spec(10, HamiltonianForm.ORIGINAL, BasisKind.TRIGONOMETRIC, M), ctx
        ).alpha_opt
        for M in (10, 15, 20, 25, 30, 35)
    ]
    assert all(a < b for a, b in zip(values, values[1:]))


def test_stationarity_residual(ctx):
    for lam in (5, 100, 10000):
        s = spec(lam, HamiltonianForm.ROTATED, BasisKind.TRIGONOMETRIC, 12)
        form = trace_form(s, ctx)
        opt = optimize_parameter(s, ctx)
        resid = abs(form.derivative_value(opt.alpha_opt, ctx))
        assert resid < abs(opt.trace_at_opt) * mpfr(10) ** (-ctx.target_digits)
