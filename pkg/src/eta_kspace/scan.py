"""Parameter sweeps, numerical derivatives and singularity classification."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import measures as ms
from .model import (
    PhasePoint,
    Region,
    classify,
    critical_u,
    energy_density,
    finite_size_occupations,
    ground_state,
    iso_correlation_curve,
    unpaired_density,
)
from .qmeasure import QParams, q_measure

MEASURE_NAMES = (
    "a",
    "S_single",
    "S_pair",
    "S_pair_printed",
    "I_pair",
    "N_pair",
    "I_two_pair",
    "odlro",
    "energy",
)

CLASSES = ("inverse_sqrt", "log_divergence", "finite_jump", "smooth", "ambiguous")


class InsufficientResolution(ValueError):
    pass


@dataclass
class ScanRecord:
    x: float
    n: float
    u: float
    region: str
    measures: dict[str, float]
    d1: dict[str, float] = field(default_factory=dict)
    d2: dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class SingularityReport:
    x_c: float
    measure: str
    kind: str
    fitted_exponent: float
    fit_quality: float
    side: str
    notes: str = ""
    limit_below: float = math.nan
    limit_above: float = math.nan


def evaluate(n: float, u: float, names=MEASURE_NAMES, base: float = 2) -> tuple[str, dict[str, float]]:
    gs = ground_state(PhasePoint(n, u))
    tdl = ms.tdl_measures(gs.n_s, gs.n_d, base)
    out = {}
    for name in names:
        if name == "a":
            out[name] = gs.a
        elif name == "energy":
            out[name] = energy_density(gs.n_s, gs.n_d, u)
        elif name in tdl:
            out[name] = tdl[name].value
        else:
            raise KeyError(f"unknown measure {name!r}; known: {MEASURE_NAMES}")
    return gs.region.value, out


def grid(start: float, stop: float, step: float) -> np.ndarray:
    """Inclusive uniform grid; ``stop`` is kept when it lies on the lattice."""
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    if stop < start:
        raise ValueError(f"empty range [{start}, {stop}]")
    count = math.floor((stop - start) / step + 1e-9) + 1
    # snap to 12 decimals so printed coordinates read as typed
    return np.round(start + step * np.arange(count), 12)


def refined_grid(x_c: float, side: str = "both", lo: float = -6.0, hi: float = -1.5,
                 per_decade: int = 20) -> np.ndarray:
    """Points at ``x_c +- 10**t`` with ``t`` uniform in ``[lo, hi]``."""
    dist = 10.0 ** np.linspace(lo, hi, int(round((hi - lo) * per_decade)) + 1)
    parts = []
    if side in ("below", "both"):
        parts.append(x_c - dist[::-1])
    if side in ("above", "both"):
        parts.append(x_c + dist)
    if not parts:
        raise ValueError(f"side must be 'below', 'above' or 'both', got {side!r}")
    return np.concatenate(parts)


def _path(x: float, n, u, iso_a) -> tuple[float, float]:
    if iso_a is not None:
        return iso_correlation_curve(iso_a, x), x
    if n is not None:
        return n, x
    if not 0.0 < x <= 1.0:
        raise ValueError(f"sweep in n leaves (0, 1] at n={x}")
    return x, u


def sweep(xs, *, n=None, u=None, iso_a=None, measures=MEASURE_NAMES, base: float = 2) -> list[ScanRecord]:
    """Evaluate measures along a path in the ``(n, u)`` plane.

    Exactly one of ``n`` (x is u), ``u`` (x is n) or ``iso_a`` (x is u, n
    follows the iso-correlation curve) must be given.
    """
    if sum(v is not None for v in (n, u, iso_a)) != 1:
        raise ValueError("give exactly one of n, u, iso_a")
    xs = np.asarray(xs, dtype=float)
    if xs.size and np.any(np.diff(xs) <= 0):
        raise ValueError("sweep coordinates must be strictly increasing")
    if u is not None and xs.size and (xs.max() > 1.0 or xs.min() <= 0.0):
        raise ValueError("sweep in n leaves (0, 1]")
    records = []
    for x in xs:
        nn, uu = _path(float(x), n, u, iso_a)
        region, vals = evaluate(nn, uu, measures, base)
        records.append(ScanRecord(float(x), nn, uu, region, vals))
    return records


def _runs(records):
    start = 0
    for i in range(1, len(records) + 1):
        if i == len(records) or records[i].region != records[start].region:
            yield start, i
            start = i


def numerical_derivative(records: list[ScanRecord], order: int = 1) -> list[ScanRecord]:
    """Fill ``d1`` (or ``d2``) by finite differences on each region run.

    Runs are maximal stretches of one region, so stencils never straddle a
    transition; run ends inside the sweep use one-sided formulas. The first
    and last record of the sweep and ``boundary`` records get no entry.
    """
    if len(records) < 3:
        raise ValueError("need at least 3 records")
    names = list(records[0].measures)
    last = len(records) - 1
    for lo, hi in _runs(records):
        if records[lo].region == Region.BOUNDARY.value or hi - lo < 2:
            continue
        x = np.array([r.x for r in records[lo:hi]])
        for name in names:
            f = np.array([r.measures[name] for r in records[lo:hi]])
            if order == 1:
                d = np.gradient(f, x, edge_order=2 if hi - lo >= 3 else 1)
                target = "d1"
                valid = range(lo, hi)
            elif order == 2:
                if hi - lo < 3:
                    continue
                hm, hp = x[1:-1] - x[:-2], x[2:] - x[1:-1]
                inner = 2.0 * ((f[2:] - f[1:-1]) / hp - (f[1:-1] - f[:-2]) / hm) / (hp + hm)
                d = np.concatenate(([np.nan], inner, [np.nan]))
                target = "d2"
                valid = range(lo + 1, hi - 1)
            else:
                raise ValueError("order must be 1 or 2")
            for i in valid:
                if i in (0, last):
                    continue
                getattr(records[i], target)[name] = float(d[i - lo])
    return records


def _fit(xv: np.ndarray, yv: np.ndarray) -> tuple[float, float, float, np.ndarray]:
    slope, icept = np.polyfit(xv, yv, 1)
    pred = slope * xv + icept
    ss_res = float(np.sum((yv - pred) ** 2))
    ss_tot = float(np.sum((yv - yv.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return slope, icept, r2, pred


def classify_singularity(
    records: list[ScanRecord],
    x_c: float,
    measure: str,
    side: str | None = None,
    window: tuple[float, float] = (1e-5, 1e-2),
    exponent_tol: float = 0.05,
    min_points: int = 8,
    margin: float = 0.1,
) -> SingularityReport:
    """Classify the behaviour of ``d measure / dx`` as ``x -> x_c``.

    On the approach side ``|d1|`` is fitted both as ``A |x - x_c|^p`` (log-log)
    and as ``A log|x - x_c| + B`` (semilog). Both residuals are measured on
    ``log|d1|`` and the model that is smaller by ``margin`` wins. Bounded
    derivatives give ``finite_jump`` when the one-sided limits differ by more
    than ten times the round-off floor, ``smooth`` otherwise.
    """
    lo, hi = window
    data = {}
    for s in ("below", "above"):
        pts = [
            (abs(r.x - x_c), r.d1[measure], r.x)
            for r in records
            if measure in r.d1
            and lo <= abs(r.x - x_c) <= hi
            and ((r.x < x_c) if s == "below" else (r.x > x_c))
        ]
        pts.sort()
        data[s] = pts
    fvals = [abs(r.measures[measure]) for r in records]
    xs = np.array(sorted(r.x for r in records))
    spacing = np.diff(xs)
    h_min = float(spacing[spacing > 0].min()) if spacing.size else 1.0
    floor = 10.0 * np.finfo(float).eps * max(1.0, max(fvals)) / h_min

    def growth(pts):
        if len(pts) < 2:
            return 0.0
        g = np.abs(np.array([p[1] for p in pts]))
        if g.max() <= floor:
            return 1.0
        return float(g[0] / max(g[-1], floor))

    if side is None:
        usable = [s for s in ("below", "above") if len(data[s]) >= min_points]
        if not usable:
            raise InsufficientResolution(f"fewer than {min_points} points in window {window} on either side")
        side = max(usable, key=lambda s: growth(data[s]))
    approach = data[side]
    if len(approach) < min_points:
        raise InsufficientResolution(f"{len(approach)} < {min_points} points in window on side {side!r}")

    dist = np.array([p[0] for p in approach])
    d1 = np.array([p[1] for p in approach])
    g = np.abs(d1)

    def limit(pts):
        if len(pts) < 2:
            return math.nan
        dd = np.array([p[0] for p in pts])
        vv = np.array([p[1] for p in pts])
        return float(np.polyfit(dd, vv, 1)[1])

    lim = {s: limit(data[s]) for s in ("below", "above")}
    p_exp = math.nan
    if g.max() > floor and g.min() > 0:
        p_exp, _, r2_pow, pred_pow = _fit(np.log(dist), np.log(g))
        rss_pow = float(np.sum((np.log(g) - pred_pow) ** 2))
    if g.max() > floor and growth(approach) > 1.25 and g.min() > 0:
        _, _, r2_log, pred_log = _fit(np.log(dist), g)
        rss_log = (
            float(np.sum((np.log(g) - np.log(pred_log)) ** 2)) if np.all(pred_log > 0) else math.inf
        )
        note = f"rss_pow={rss_pow:.3g} rss_log={rss_log:.3g}"
        if rss_log < (1.0 - margin) * rss_pow:
            return SingularityReport(x_c, measure, "log_divergence", p_exp, r2_log, side, note,
                                     lim["below"], lim["above"])
        if rss_pow < (1.0 - margin) * rss_log:
            if abs(p_exp + 0.5) <= exponent_tol:
                return SingularityReport(x_c, measure, "inverse_sqrt", p_exp, r2_pow, side, note,
                                         lim["below"], lim["above"])
            return SingularityReport(x_c, measure, "ambiguous", p_exp, r2_pow, side,
                                     note + f"; power law with exponent {p_exp:.3f}",
                                     lim["below"], lim["above"])
        return SingularityReport(x_c, measure, "ambiguous", p_exp, max(r2_pow, r2_log), side,
                                 note + "; log and power fits within margin", lim["below"], lim["above"])

    other = "above" if side == "below" else "below"
    if math.isfinite(lim[side]) and math.isfinite(lim[other]):
        jump = abs(lim[side] - lim[other])
        if jump > 10.0 * floor:
            return SingularityReport(x_c, measure, "finite_jump", p_exp, 1.0, "both",
                                     f"jump={jump:.6g} floor={floor:.3g}", lim["below"], lim["above"])
    return SingularityReport(x_c, measure, "smooth", p_exp, 1.0, side,
                             f"floor={floor:.3g}", lim["below"], lim["above"])


@dataclass(frozen=True)
class TransitionCase:
    label: str
    variable: str  # "u" or "n"
    x_c: float
    fixed: float
    side: str
    measures: tuple[str, ...]
    expected: str


TABLE_MEASURES = ("S_single", "S_pair", "I_pair", "N_pair", "I_two_pair")


def table_cases(n: float = 0.5, u: float = -2.0, u_insulator: float = 5.0) -> list[TransitionCase]:
    """The transitions of the phase diagram with the behaviour expected per measure."""
    n_c = unpaired_density(u)
    return [
        TransitionCase("II->I", "u", critical_u(n), n, "below", ("S_single", "S_pair", "I_pair"), "log_divergence"),
        TransitionCase("II->I", "u", critical_u(n), n, "below", ("N_pair", "I_two_pair"), "finite_jump"),
        TransitionCase("II->I", "n", n_c, u, "above", ("S_single", "S_pair", "I_pair"), "log_divergence"),
        TransitionCase("II->I", "n", n_c, u, "above", ("N_pair", "I_two_pair"), "finite_jump"),
        TransitionCase("II->III", "u", -4.0, n, "above", TABLE_MEASURES, "inverse_sqrt"),
        TransitionCase("I->IV", "n", 1.0, u_insulator, "below", TABLE_MEASURES, "smooth"),
    ]


def transition_records(case: TransitionCase, per_decade: int = 20) -> list[ScanRecord]:
    sides = "below" if case.label == "I->IV" else "both"
    xs = refined_grid(case.x_c, sides, per_decade=per_decade)
    if case.variable == "u":
        recs = sweep(xs, n=case.fixed, measures=case.measures)
    else:
        if sides == "below":
            xs = np.append(xs, case.x_c)
        recs = sweep(xs, u=case.fixed, measures=case.measures)
    return numerical_derivative(recs)


def singularity_table(n: float = 0.5, u: float = -2.0, per_decade: int = 20) -> list[tuple[TransitionCase, SingularityReport]]:
    rows = []
    for case in table_cases(n, u):
        recs = transition_records(case, per_decade)
        for m in case.measures:
            rows.append((case, classify_singularity(recs, case.x_c, m, side=case.side)))
    return rows


@dataclass
class PhaseGrid:
    n: np.ndarray
    u: np.ndarray
    region: np.ndarray
    n_s: np.ndarray
    n_d: np.ndarray
    a: np.ndarray
    contours: dict[float, tuple[np.ndarray, np.ndarray]]


def phase_grid(n_values, u_values, iso_levels=()) -> PhaseGrid:
    """Region and densities on an ``n x u`` grid plus iso-correlation contours."""
    n_values = np.asarray(n_values, dtype=float)
    u_values = np.asarray(u_values, dtype=float)
    if n_values.size < 2 or u_values.size < 2:
        raise ValueError("need at least 2 points per axis")
    shape = (n_values.size, u_values.size)
    region = np.empty(shape, dtype=object)
    n_s, n_d, a = np.zeros(shape), np.zeros(shape), np.zeros(shape)
    for i, nn in enumerate(n_values):
        for j, uu in enumerate(u_values):
            gs = ground_state(PhasePoint(float(nn), float(uu)))
            region[i, j] = gs.region.value
            n_s[i, j], n_d[i, j], a[i, j] = gs.n_s, gs.n_d, gs.a
    contours = {}
    for level in iso_levels:
        us = u_values[(u_values > -4.0) & (u_values < 4.0)]
        ns = np.array([iso_correlation_curve(level, float(x)) for x in us])
        keep = (ns >= n_values.min()) & (ns <= n_values.max())
        contours[float(level)] = (us[keep], ns[keep])
    return PhaseGrid(n_values, u_values, region, n_s, n_d, a, contours)


def locate_transition(n: float, lo: float = -8.0, hi: float = 8.0, tol: float = 1e-13) -> float:
    """Bisect the region classifier for the II/I (or II/IV) line at filling ``n``."""
    def paired(u):
        # boundary points belong to the paired side
        return classify(PhasePoint(n, u)) not in (Region.I, Region.IV)

    if not paired(lo) or paired(hi):
        raise ValueError(f"no II/I transition bracketed in [{lo}, {hi}] at n={n}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if paired(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def q_sweep(L: int, N: int, us, Ds, mode: str = "paper_product", counting: str = "exact") -> list[dict]:
    """``Q_{D,4}`` along ``u`` for a finite chain; one row per ``u``."""
    rows = []
    for u in us:
        n_s, n_d = finite_size_occupations(L, N, float(u))
        row = {"u": float(u), "N_s": n_s, "N_d": n_d}
        for D in Ds:
            row[f"Q_{D}"] = q_measure(QParams(L, n_s, n_d, int(D), mode, counting))
        rows.append(row)
    return rows
