"""Command-line driver for convergence studies.

Configuration comes from an optional flat key=value file, overridden by
flags.  Exit codes: 0 on success, 1 on configuration errors, 2 when some
study rows failed but the run completed.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from pathlib import Path

from .basis1d import BasisKind
from .bench import (
    PAPER_REFERENCES,
    StudyConfig,
    emit_figure_script,
    emit_table,
    run_study,
    self_computed_reference,
)
from .hamiltonian2d import HamiltonianForm

DIGITS_ENV_VAR = "ANHARM_BENCH_DIGITS"

_FORMS = {
    "original": (HamiltonianForm.ORIGINAL,),
    "rotated": (HamiltonianForm.ROTATED,),
    "both": (HamiltonianForm.ORIGINAL, HamiltonianForm.ROTATED),
}
_BASES = {
    "trig": (BasisKind.TRIGONOMETRIC,),
    "ho": (BasisKind.HARMONIC_OSCILLATOR,),
    "both": (BasisKind.TRIGONOMETRIC, BasisKind.HARMONIC_OSCILLATOR),
}
_METHODS = {"rr": ("rr",), "collocation": ("collocation",), "both": ("rr", "collocation")}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="anharm-bench",
        description="Convergence studies for the coupled anharmonic oscillators.",
    )
    p.add_argument("--config", type=Path, help="flat key=value config file")
    p.add_argument(
        "--lambda",
        dest="lambdas",
        help="comma-separated couplings (integers or rationals like 1/2)",
    )
    p.add_argument("--form", choices=sorted(_FORMS))
    p.add_argument("--basis", choices=sorted(_BASES))
    p.add_argument("--m-list", help="comma-separated basis sizes")
    p.add_argument("--digits", type=int, help="target decimal digits")
    p.add_argument("--method", choices=sorted(_METHODS))
    p.add_argument("--out", choices=("table", "csv", "json"))
    p.add_argument(
        "--emit-plot",
        type=Path,
        metavar="DIR",
        help="also write plot_figure.py and figure_data.csv to DIR",
    )
    p.add_argument(
        "--self-reference",
        action="store_true",
        help="replace shipped references with self-computed high-order ones",
    )
    return p


def _read_config_file(path: Path) -> dict:
    values = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, val = line.partition("=")
        values[key.strip().replace("-", "_")] = val.strip()
    return values


def _build_config(args) -> StudyConfig:
    file_vals = _read_config_file(args.config) if args.config else {}

    def pick(flag, key, default):
        if flag is not None:
            return flag
        return file_vals.get(key, default)

    lambdas = pick(args.lambdas, "lambda", "10")
    form = pick(args.form, "form", "both")
    basis = pick(args.basis, "basis", "both")
    m_list = pick(args.m_list, "m_list", "10,15,20,25,30,35")
    method = pick(args.method, "method", "rr")
    digits = args.digits
    if digits is None and "digits" in file_vals:
        digits = int(file_vals["digits"])
    if digits is None:
        digits = int(os.environ.get(DIGITS_ENV_VAR, "30"))
    if form not in _FORMS:
        raise ValueError(f"unknown form {form!r}")
    if basis not in _BASES:
        raise ValueError(f"unknown basis {basis!r}")
    if method not in _METHODS:
        raise ValueError(f"unknown method {method!r}")
    config = StudyConfig(
        lambdas=tuple(Fraction(tok) for tok in str(lambdas).split(",")),
        forms=_FORMS[form],
        bases=_BASES[basis],
        m_values=tuple(int(tok) for tok in str(m_list).split(",")),
        target_digits=digits,
        methods=_METHODS[method],
    )
    if args.self_reference:
        refs = {lam: self_computed_reference(lam) for lam in config.lambdas}
        config = StudyConfig(
            lambdas=config.lambdas,
            forms=config.forms,
            bases=config.bases,
            m_values=config.m_values,
            target_digits=config.target_digits,
            methods=config.methods,
            reference_energies=refs,
        )
    return config


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _build_config(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    records = run_study(config)
    out_style = args.out or "table"
    style = "paper-table" if out_style == "table" else out_style
    sys.stdout.write(emit_table(records, style))
    if args.emit_plot:
        script, csv_text = emit_figure_script(records)
        args.emit_plot.mkdir(parents=True, exist_ok=True)
        (args.emit_plot / "plot_figure.py").write_text(script)
        (args.emit_plot / "figure_data.csv").write_text(csv_text)
    if any(r.error for r in records):
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
