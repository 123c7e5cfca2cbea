"""Command-line batch runner emitting deterministic CSV."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import oracle as orc
from .model import iso_correlation_curve
from .qmeasure import QParams, purity_open, purity_paired, q_measure
from .scan import (
    MEASURE_NAMES,
    grid,
    numerical_derivative,
    phase_grid,
    q_sweep,
    singularity_table,
    sweep,
)
from .spectra import BlockSpec, mixed_block_spectrum

EXIT_OK, EXIT_INVALID, EXIT_ORACLE = 0, 1, 2
MODE_NAMES = {"paper": "paper_product", "exact": "exact_spectrum"}


class ValidationError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def fmt(v) -> str:
    """Shortest round-trip text for floats; everything else via ``str``."""
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        return repr(v)
    return str(v)


def write_csv(out, config: dict, header: list[str], rows) -> None:
    buf = io.StringIO()
    buf.write("# config: " + json.dumps(config, sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    text = buf.getvalue()
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _grid(lo, hi, step, what):
    try:
        return grid(lo, hi, step)
    except ValueError as exc:
        raise ValidationError(f"{what}: {exc}") from None


def _check_n(n, what="--n"):
    if not 0.0 < n <= 1.0:
        raise ValidationError(f"{what} must lie in (0, 1], got {n}")


def cmd_phase(args):
    ns = _grid(args.n_min, args.n_max, args.n_step, "n grid")
    us = _grid(args.u_min, args.u_max, args.u_step, "u grid")
    _check_n(ns[0], "--n-min")
    _check_n(ns[-1], "--n-max")
    g = phase_grid(ns, us)
    rows = (
        (g.n[i], g.u[j], g.region[i, j], g.n_s[i, j], g.n_d[i, j], g.a[i, j])
        for i in range(ns.size)
        for j in range(us.size)
    )
    return ["n", "u", "region", "n_s", "n_d", "a"], rows


def cmd_measures(args):
    given = [k for k in ("n", "u", "a") if getattr(args, k) is not None]
    if len(given) != 1:
        raise ValidationError("measures needs exactly one of --n, --u, --a")
    base = 2 if args.log_base == "2" else math.e
    if args.u is not None:
        xs = _grid(args.n_min, args.n_max, args.n_step, "n grid")
        _check_n(xs[0], "--n-min")
        _check_n(xs[-1], "--n-max")
        kw = {"u": args.u}
    else:
        xs = _grid(args.u_min, args.u_max, args.u_step, "u grid")
        if args.n is not None:
            _check_n(args.n)
            kw = {"n": args.n}
        else:
            if not 0.0 <= args.a <= 0.5:
                raise ValidationError(f"--a must lie in [0, 1/2], got {args.a}")
            if xs[-1] >= 4.0:
                raise ValidationError("iso-correlation sweeps need --u-max < 4")
            kw = {"iso_a": args.a}
    if xs.size < 3:
        raise ValidationError("measures needs at least 3 grid points")
    try:
        recs = numerical_derivative(sweep(xs, measures=MEASURE_NAMES, base=base, **kw))
    except ValueError as exc:
        raise ValidationError(str(exc)) from None
    header = ["x", "n", "u", "region", *MEASURE_NAMES, *(f"d_{m}" for m in MEASURE_NAMES)]
    rows = (
        [r.x, r.n, r.u, r.region, *(r.measures[m] for m in MEASURE_NAMES),
         *(r.d1.get(m, math.nan) for m in MEASURE_NAMES)]
        for r in recs
    )
    return header, rows


def cmd_qscan(args):
    if args.L < 1 or not 0 < args.N <= args.L:
        raise ValidationError(f"need 0 < N <= L, got L={args.L}, N={args.N}")
    Ds = args.D or [1, 2, 4, 8, 16, 32]
    for D in Ds:
        if not 1 <= D <= args.L - args.N:
            raise ValidationError(f"--D must lie in [1, L - N] = [1, {args.L - args.N}], got {D}")
    us = _grid(args.u_min, args.u_max, args.u_step, "u grid")
    rows = q_sweep(args.L, args.N, us, Ds, MODE_NAMES[args.mode], args.counting)
    header = ["u", "N_s", "N_d", *(f"Q_{D}" for D in Ds)]
    return header, ([r[h] for h in header] for r in rows)


def cmd_singularity(args):
    _check_n(args.n)
    header = ["transition", "variable", "x_c", "measure", "expected", "class",
              "fitted_exponent", "fit_quality", "side"]
    rows = (
        [c.label, c.variable, r.x_c, r.measure, c.expected, r.kind, r.fitted_exponent,
         r.fit_quality, r.side]
        for c, r in singularity_table(n=args.n)
    )
    return header, rows


def cmd_isocurve(args):
    if args.a is None:
        raise ValidationError("isocurve needs --a")
    if not 0.0 <= args.a <= 0.5:
        raise ValidationError(f"--a must lie in [0, 1/2], got {args.a}")
    us = _grid(args.u_min, args.u_max, args.u_step, "u grid")
    if us[-1] >= 4.0:
        raise ValidationError("isocurve needs --u-max < 4")
    rows = []
    for u in us:
        try:
            rows.append((u, iso_correlation_curve(args.a, float(u))))
        except ValueError:
            continue
    return ["u", "n"], rows


@dataclass
class Check:
    name: str
    deviation: float
    tol: float

    @property
    def ok(self) -> bool:
        return self.deviation <= self.tol


def oracle_checks(tol_spectrum=1e-12, tol_purity=1e-12, tol_q=1e-10, sizes=(4, 6, 8, 10)) -> list[Check]:
    """Closed forms against exact finite-size reduced density matrices."""
    specs = [BlockSpec(d1, p) for d1 in range(3) for p in range(3) if 0 < 2 * d1 + 2 * p <= 4]
    checks = []
    for L in sizes:
        dev_spec = dev_pur = dev_q = 0.0
        for Nd in range(L // 2 + 1):
            st = orc.build_state(L, Nd)
            for spec in specs:
                rdm = orc.exact_rdm(st, orc.block_modes(L, spec))
                closed = mixed_block_spectrum(L, Nd, spec)
                dim = 4**spec.modes
                dev_spec = max(dev_spec, float(np.abs(rdm.eigenvalues() - closed.expanded(dim)).max()))
                if spec.D1 == 0 or spec.D2 == 0:
                    # the closed forms describe unmixed blocks only
                    printed = purity_open(L, Nd, spec.D1) * purity_paired(L, Nd, spec.D2)
                    dev_pur = max(dev_pur, abs(rdm.purity() - printed))
            for D in range(1, 5):
                exact = orc.exact_q(st, D)
                closed_q = q_measure(QParams(L, 0, Nd, D, "exact_spectrum"))
                dev_q = max(dev_q, abs(exact - closed_q))
        checks += [
            Check(f"spectra L'={L}", dev_spec, tol_spectrum),
            Check(f"purity L'={L}", dev_pur, tol_purity),
            Check(f"Q L'={L}", dev_q, tol_q),
        ]
    return checks


def cmd_oracle_verify(args):
    tols = (args.tol,) * 3 if args.tol is not None else (1e-12, 1e-12, 1e-10)
    checks = oracle_checks(*tols)
    args._failed = any(not c.ok for c in checks)
    rows = ((c.name, c.deviation, c.tol, "pass" if c.ok else "fail") for c in checks)
    return ["check", "max_deviation", "tol", "status"], rows


COMMANDS = {
    "phase": cmd_phase,
    "measures": cmd_measures,
    "qscan": cmd_qscan,
    "singularity": cmd_singularity,
    "isocurve": cmd_isocurve,
    "oracle-verify": cmd_oracle_verify,
}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="eta-kspace", description="Momentum-space entanglement of the eta-paired ground state.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, u=(-5.0, 1.0, 0.01), n=(0.005, 1.0, 0.005)):
        sp.add_argument("--u-min", type=float, default=u[0])
        sp.add_argument("--u-max", type=float, default=u[1])
        sp.add_argument("--u-step", type=float, default=u[2])
        sp.add_argument("--n-min", type=float, default=n[0])
        sp.add_argument("--n-max", type=float, default=n[1])
        sp.add_argument("--n-step", type=float, default=n[2])
        sp.add_argument("--out", default=None, help="output path (default stdout)")

    sp = sub.add_parser("phase", help="region map on an n x u grid")
    common(sp, u=(-8.0, 8.0, 0.08))

    sp = sub.add_parser("measures", help="measures and first derivatives along a sweep")
    common(sp, u=(-3.9, 3.9, 0.01))
    sp.add_argument("--n", type=float, help="fix the filling and sweep u")
    sp.add_argument("--u", type=float, help="fix the coupling and sweep n")
    sp.add_argument("--a", type=float, help="follow the iso-correlation curve of this level in u")
    sp.add_argument("--log-base", choices=("2", "e"), default="2")

    sp = sub.add_parser("qscan", help="Q measure against u for a finite chain")
    common(sp)
    sp.add_argument("--L", type=int, default=1000)
    sp.add_argument("--N", type=int, default=500)
    sp.add_argument("--D", type=int, action="append", help="block size (repeatable)")
    sp.add_argument("--mode", choices=tuple(MODE_NAMES), default="paper")
    sp.add_argument("--counting", choices=("exact", "printed"), default="exact")

    sp = sub.add_parser("singularity", help="classify derivatives at each transition")
    sp.add_argument("--n", type=float, default=0.5)
    sp.add_argument("--out", default=None)

    sp = sub.add_parser("isocurve", help="(u, n) samples of an iso-correlation curve")
    common(sp, u=(-6.0, 3.99, 0.01))
    sp.add_argument("--a", type=float)

    sp = sub.add_parser("oracle-verify", help="closed forms against exact small systems")
    sp.add_argument("--tol", type=float, default=None, help="override every tolerance")
    sp.add_argument("--out", default=None)
    return p


def _config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k != "out" and not k.startswith("_")}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = _config(args)
    try:
        header, rows = COMMANDS[args.command](args)
        rows = list(rows)
    except ValidationError as exc:
        sys.stderr.write(f"eta-kspace: error: {exc}\n")
        return EXIT_INVALID
    write_csv(args.out, config, header, rows)
    if getattr(args, "_failed", False):
        sys.stderr.write("eta-kspace: oracle verification failed\n")
        return EXIT_ORACLE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
