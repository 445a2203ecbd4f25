"""Acceptance gate: published-table reproduction and method-property checks.

Each ``test_criterion_N_*`` function is one acceptance criterion; the pytest
verbose output gives the per-criterion pass/fail line.  Heavy eigensolves are
cached per (form, basis, coupling, size, digits), so overlapping criteria
reuse each other's work.  Full run takes tens of minutes at desk scale.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from gmpy2 import mpfr

from anharm import (
    BasisKind,
    HamiltonianForm,
    HamiltonianSpec,
    PAPER_REFERENCES,
    PrecisionContext,
    assemble,
    collocation_ground_energy,
    eigenvalues_symmetric,
    optimize_parameter,
    smallest_eigenvalue,
)
from anharm.bench import correct_digits
from anharm.numerics import format_scientific

from oracles import agree_digits, ho_entry, trig_entry

ORIG = HamiltonianForm.ORIGINAL
ROT = HamiltonianForm.ROTATED
TRIG = BasisKind.TRIGONOMETRIC
HO = BasisKind.HARMONIC_OSCILLATOR

# Published convergence tables.  Per row: optimized parameter and ground
# energy for the original operator, then the same pair for the rotated one.
# All strings are exactly as printed in the source tables.

TRIG_SWEEP_LAMBDA10 = {
    10: ("2.627", "3.01970464", "3.015", "3.01917772606335945122"),
    15: ("2.988", "3.01921402", "3.443", "3.01917771478547514131"),
    20: ("3.278", "3.01918109", "3.787", "3.01917771477200287135"),
    25: ("3.525", "3.01917810", "4.077", "3.01917771477196754393"),
    30: ("3.741", "3.01917777", "4.332", "3.01917771477196738793"),
    35: ("3.935", "3.01917772", "4.560", "3.01917771477196738692"),
}

HO_SWEEP_LAMBDA10 = {
    5: ("3.65", "3.02083109727", "3.04", "3.0192115512360457661267360"),
    10: ("4.64", "3.01920677896", "3.77", "3.0191777151455247319696151"),
    15: ("5.32", "3.01917868488", "4.30", "3.0191777147719932650455193"),
    20: ("5.86", "3.01917776226", "4.71", "3.0191777147719673955033821"),
    25: ("6.31", "3.01917771779", "5.07", "3.0191777147719673869195328"),
    30: ("6.71", "3.01917771501", "5.38", "3.0191777147719673869116933"),
    35: ("7.06", "3.01917771479", "5.65", "3.0191777147719673869116789"),
}

# Coupling sweeps at M = 35, energies only: the printed parameter columns of
# the trigonometric coupling sweep contain internal inconsistencies at large
# coupling (see the repository notes), while the energy columns are
# self-consistent and are what we assert.

TRIG_LAMBDA_SWEEP = {
    Fraction(5): ("2.653909778", "2.65390977795321535349058"),
    Fraction(10): ("3.019177723", "3.01917771477196738692058"),
    Fraction(100): ("5.460971628", "5.46097039792335813076119"),
    Fraction(1000): ("11.23244729", "11.2324392672100309737449"),
    Fraction(10000): ("23.94601185", "23.9459896278197863410786"),
}

HO_LAMBDA_SWEEP = {
    Fraction(5): ("2.6539097779536", "2.65390977795321535349056980617"),
    Fraction(10): ("3.0191777147930", "3.01917771477196738691167893635"),
    Fraction(100): ("5.4609704165739", "5.46097039792335524182772613188"),
    Fraction(1000): ("11.232439458359", "11.2324392672098516856244029369"),
    Fraction(10000): ("23.945990215098", "23.9459896278189396640103254023"),
}

CMP = PrecisionContext(60, 15)


@dataclass(frozen=True)
class Solved:
    alpha: mpfr
    energy: mpfr
    cpu_seconds: float


_CACHE: dict = {}


def solve(form, basis, lam, size, digits=30) -> Solved:
    key = (form, basis, Fraction(lam), size, digits)
    if key not in _CACHE:
        ctx = PrecisionContext(digits, 15)
        spec = HamiltonianSpec(Fraction(lam), form, basis, size)
        t0 = time.process_time()
        opt = optimize_parameter(spec, ctx)
        H = assemble(spec, opt.alpha_opt, ctx)
        energy = smallest_eigenvalue(H, ctx)
        cpu = time.process_time() - t0
        _CACHE[key] = Solved(alpha=opt.alpha_opt, energy=energy, cpu_seconds=cpu)
    return _CACHE[key]


def within_print(value: mpfr, printed: str, ulps: int = 1) -> bool:
    """True if ``value`` rounds to the printed decimal within ``ulps`` of its
    last printed digit (printed tables are rounded, so exact-digit matching
    means agreement to one unit in the last place)."""
    decimals = len(printed.partition(".")[2])
    with CMP.local():
        tol = ulps * mpfr(10) ** (-decimals)
        return abs(value - CMP.to_scalar(printed)) <= tol


def check_rows(sweep, basis, lam=Fraction(10), alpha_digits=True):
    bad = []
    for size, (a1, e1, a2, e2) in sweep.items():
        for form, a_str, e_str in ((ORIG, a1, e1), (ROT, a2, e2)):
            res = solve(form, basis, lam, size)
            if alpha_digits and not within_print(res.alpha, a_str):
                bad.append((form.value, size, "alpha", format_scientific(res.alpha, 6), a_str))
            if not within_print(res.energy, e_str):
                bad.append((form.value, size, "energy", format_scientific(res.energy, len(e_str)), e_str))
    return bad


def test_criterion_1_trig_basis_size_sweep():
    bad = check_rows(TRIG_SWEEP_LAMBDA10, TRIG)
    assert not bad, f"trig sweep mismatches: {bad}"


def test_criterion_2_oscillator_basis_size_sweep():
    bad = check_rows(HO_SWEEP_LAMBDA10, HO)
    # the headline 25-digit value at the largest basis
    res = solve(ROT, HO, 10, 35)
    assert format_scientific(res.energy, 25) == "3.019177714771967386911679e+00"
    assert not bad, f"oscillator sweep mismatches: {bad}"


def test_criterion_3_coupling_sweeps_at_m35():
    bad = []
    for basis, sweep in ((TRIG, TRIG_LAMBDA_SWEEP), (HO, HO_LAMBDA_SWEEP)):
        for lam, (e1, e2) in sweep.items():
            for form, e_str in ((ORIG, e1), (ROT, e2)):
                res = solve(form, basis, lam, 35)
                if not within_print(res.energy, e_str):
                    bad.append(
                        (basis.value, form.value, str(lam),
                         format_scientific(res.energy, len(e_str)), e_str)
                    )
    assert not bad, f"coupling-sweep mismatches: {bad}"


def _all_rr_records():
    """Every (key, Solved) pair the reproduction criteria computed at 30 digits."""
    records = []
    for basis, sweep in ((TRIG, TRIG_SWEEP_LAMBDA10), (HO, HO_SWEEP_LAMBDA10)):
        for size in sweep:
            for form in (ORIG, ROT):
                records.append(((form, basis, Fraction(10), size), solve(form, basis, 10, size)))
    for basis, sweep in ((TRIG, TRIG_LAMBDA_SWEEP), (HO, HO_LAMBDA_SWEEP)):
        for lam in sweep:
            for form in (ORIG, ROT):
                records.append(((form, basis, lam, 35), solve(form, basis, lam, 35)))
    return records


def test_criterion_4_variational_properties():
    below = []
    with CMP.local():
        for key, res in _all_rr_records():
            ref = CMP.to_scalar(PAPER_REFERENCES[key[2]][0])
            # allow one ulp of the 30-digit reference for its own rounding
            if res.energy < ref - abs(ref) * mpfr("1e-28"):
                below.append(key)
    assert not below, f"records below the reference energy: {below}"

    not_monotone = []
    for basis, sweep in ((TRIG, TRIG_SWEEP_LAMBDA10), (HO, HO_SWEEP_LAMBDA10)):
        for form in (ORIG, ROT):
            series = [solve(form, basis, 10, size).energy for size in sorted(sweep)]
            if not all(a >= b for a, b in zip(series, series[1:])):
                not_monotone.append((basis.value, form.value))
    assert not not_monotone, f"energy not non-increasing in basis size: {not_monotone}"


def test_criterion_5_precision_doubling():
    disagreements = []
    for basis in (TRIG, HO):
        for lam in TRIG_LAMBDA_SWEEP:
            for form in (ORIG, ROT):
                lo = solve(form, basis, lam, 35, digits=30)
                hi = solve(form, basis, lam, 35, digits=45)
                agreed = agree_digits(
                    format_scientific(lo.energy, 40), format_scientific(hi.energy, 50)
                )
                if agreed < 25:
                    disagreements.append((basis.value, form.value, str(lam), agreed))
    assert not disagreements, f"precision doubling changed early digits: {disagreements}"


def _oracle_matrix_1d(kind, op, size, alpha):
    import mpmath as mp

    entry = trig_entry if kind is TRIG else ho_entry
    out = np.empty((size, size), dtype=object)
    with mp.workdps(60):
        for i in range(size):
            for j in range(i, size):
                n, m = (2 * i, 2 * j) if kind is HO else (i, j)
                out[i, j] = out[j, i] = entry(op, n, m, alpha)
    return out


def _oracle_hamiltonian(spec, alpha):
    import mpmath as mp

    T = _oracle_matrix_1d(spec.basis, "kinetic", spec.size, alpha)
    X2 = _oracle_matrix_1d(spec.basis, "x2", spec.size, alpha)
    X4 = _oracle_matrix_1d(spec.basis, "x4", spec.size, alpha)
    with mp.workdps(60):
        lam = mp.mpf(str(Fraction(spec.coupling)))
        eye = np.array(mp.eye(spec.size).tolist(), dtype=object)
        one_body = T + X2
        if spec.form is ROT:
            one_body = one_body + lam / 4 * X4
            cross = -lam / 2 * np.kron(X2, X2)
        else:
            cross = lam * np.kron(X2, X2)
        return np.kron(one_body, eye) + np.kron(eye, one_body) + cross


def test_criterion_6_oracle_equivalence():
    import mpmath as mp

    ctx = PrecisionContext(30, 15)
    for basis in (TRIG, HO):
        for form in (ORIG, ROT):
            spec = HamiltonianSpec(Fraction(10), form, basis, 6)
            alpha = optimize_parameter(spec, ctx).alpha_opt
            H = assemble(spec, alpha, ctx)
            oracle = _oracle_hamiltonian(spec, format_scientific(alpha, 45))
            scale = max(abs(float(v)) for v in oracle.flat)
            for i in range(36):
                for j in range(36):
                    ref = oracle[i, j]
                    with mp.workdps(45):
                        ref_str = mp.nstr(ref, 35)
                    # entries that vanish (or nearly so) relative to the matrix
                    # scale are compared absolutely; the rest digit by digit
                    if abs(float(ref)) <= scale * 1e-20:
                        assert abs(float(format_scientific(H.data[i, j], 30))) <= scale * 1e-25, (
                            f"{basis.value}/{form.value} entry ({i},{j})"
                        )
                    else:
                        got = agree_digits(format_scientific(H.data[i, j], 40), ref_str)
                        assert got >= 25, (
                            f"{basis.value}/{form.value} entry ({i},{j}) "
                            f"agrees to only {got} digits"
                        )
            # high-precision spectrum vs a double-precision dense solver
            ours_ev = eigenvalues_symmetric(H, ctx)
            ref_ev = np.linalg.eigvalsh(H.to_float64())
            for a, b in zip(ours_ev, ref_ev):
                assert abs(float(a) - b) <= 1e-12 * max(abs(b), 1.0)


def test_criterion_7_convergence_ordering():
    ctx = PrecisionContext(30, 15)
    ref = PAPER_REFERENCES[Fraction(10)][0]

    def digits(form, basis, size):
        return correct_digits(solve(form, basis, 10, size).energy, ref, ctx)

    # oscillator basis beats the trigonometric one once the basis is large:
    # strictly more correct digits at equal or lower CPU time
    for size in (15, 20, 25, 30, 35):
        for form in (ORIG, ROT):
            d_ho, d_trig = digits(form, HO, size), digits(form, TRIG, size)
            assert d_ho > d_trig, (form.value, size, d_ho, d_trig)
            assert (
                solve(form, HO, 10, size).cpu_seconds
                <= solve(form, TRIG, 10, size).cpu_seconds
            ), (form.value, size)

    # the rotated operator beats the original one in both bases at every size
    for basis, sweep in ((TRIG, TRIG_SWEEP_LAMBDA10), (HO, HO_SWEEP_LAMBDA10)):
        for size in sweep:
            assert digits(ROT, basis, size) > digits(ORIG, basis, size), (
                basis.value,
                size,
            )


def test_criterion_8_collocation_undershoots_where_rr_cannot():
    ctx = PrecisionContext(24, 10)
    with CMP.local():
        ref = CMP.to_scalar(PAPER_REFERENCES[Fraction(10)][0])
    witnesses = []
    for size in (6, 8, 10, 12):
        for half_width in ("3.5", "4.0", "4.5", "5.0"):
            spec = HamiltonianSpec(Fraction(10), ROT, TRIG, size)
            e = collocation_ground_energy(spec, half_width, ctx)
            if e < ref - mpfr("1e-10"):
                witnesses.append((size, half_width, format_scientific(e, 12)))
    assert witnesses, "no collocation estimate fell below the reference"

    with CMP.local():
        rr_below = [
            key
            for key, res in _all_rr_records()
            if res.energy
            < CMP.to_scalar(PAPER_REFERENCES[key[2]][0]) - mpfr("1e-28")
        ]
    assert not rr_below, f"variational records below reference: {rr_below}"
