"""Combinatorial kernels shared by the finite-size formulas.

Two backends are used. Up to ``EXACT_LIMIT`` slots everything is done with
Python integers (``math.comb``) and only converted to float at the end, so the
oracle comparisons see correctly rounded numbers. Above that, binomials are
handled as logarithms: ``C(1000, 250)`` is ~1e242 and the squares that enter
purities overflow double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import gammaln
from scipy.stats import hypergeom

EXACT_LIMIT = 64


@dataclass(frozen=True)
class LogWeight:
    """Natural log of a nonnegative number, with an explicit zero flag."""

    log_value: float
    is_zero: bool = False

    @property
    def value(self) -> float:
        return 0.0 if self.is_zero else math.exp(self.log_value)


ZERO = LogWeight(-math.inf, True)


def log_binomial(m: int, k: int) -> LogWeight:
    """Return ``log C(m, k)``.

    Exact integer arithmetic is used for ``m <= EXACT_LIMIT``; otherwise the
    value comes from log-gamma. ``k`` outside ``[0, m]`` gives an exact zero.
    """
    if m < 0:
        raise ValueError(f"m must be nonnegative, got {m}")
    if k < 0 or k > m:
        return ZERO
    if m <= EXACT_LIMIT:
        return LogWeight(math.log(math.comb(m, k)))
    return LogWeight(float(gammaln(m + 1) - gammaln(k + 1) - gammaln(m - k + 1)))


def log_binomial_array(m, k) -> np.ndarray:
    """Vectorised ``log C(m, k)`` with ``-inf`` outside the support."""
    m = np.asarray(m, dtype=float)
    k = np.asarray(k, dtype=float)
    m, k = np.broadcast_arrays(m, k)
    out = np.full(m.shape, -np.inf)
    ok = (k >= 0) & (k <= m)
    out[ok] = gammaln(m[ok] + 1) - gammaln(k[ok] + 1) - gammaln(m[ok] - k[ok] + 1)
    return out


def log_binomial_run(m: int, ks: np.ndarray) -> np.ndarray:
    """``log C(m, k)`` along a run of consecutive integers ``ks``.

    Successive values are linked through the ratio ``(m - k) / (k + 1)``, so
    the differences between entries carry only a few ulps of error even when
    the absolute values are ~1e8. Only the first in-support entry is taken
    from log-gamma.
    """
    ks = np.asarray(ks, dtype=np.int64)
    out = np.full(ks.shape, -np.inf)
    if ks.size == 0:
        return out
    if np.any(np.diff(ks) != 1):
        raise ValueError("ks must be consecutive integers")
    ok = (ks >= 0) & (ks <= m)
    if not ok.any():
        return out
    idx = np.flatnonzero(ok)
    kk = ks[idx]
    steps = np.log(m - kk[:-1]) - np.log(kk[:-1] + 1.0)
    start = log_binomial(m, int(kk[0])).log_value
    out[idx] = start + np.concatenate(([0.0], np.cumsum(steps)))
    return out


def hypergeometric_weight(slots: int, pairs: int, marked: int, hit: int) -> float:
    """Probability that ``hit`` of ``marked`` slots are occupied.

    ``pairs`` indistinguishable pairs sit uniformly on ``slots`` slots; the
    result is ``C(marked, hit) C(slots - marked, pairs - hit) / C(slots, pairs)``.
    """
    if not 0 <= marked <= slots or not 0 <= pairs <= slots:
        raise ValueError("need 0 <= marked <= slots and 0 <= pairs <= slots")
    if hit < 0 or hit > marked or hit > pairs or pairs - hit > slots - marked:
        return 0.0
    if slots <= EXACT_LIMIT:
        return float(
            Fraction(
                math.comb(marked, hit) * math.comb(slots - marked, pairs - hit),
                math.comb(slots, pairs),
            )
        )
    # a log-gamma difference loses ~1e-12 here; scipy's pmf does not
    return float(hypergeom.pmf(hit, slots, marked, pairs))


def hypergeometric_pmf(slots: int, pairs: int, marked: int) -> tuple[np.ndarray, np.ndarray]:
    """Full support ``(hits, probabilities)`` of the hypergeometric law.

    Built from ratio recurrences and renormalised with compensated summation,
    which keeps it accurate far beyond the range where the closed form in
    ``hypergeometric_weight`` loses digits.
    """
    lo = max(0, pairs - (slots - marked))
    hi = min(marked, pairs)
    js = np.arange(lo, hi + 1)
    logw = log_binomial_run(marked, js) + log_binomial_run(slots - marked, pairs - js[::-1])[::-1]
    return js, normalized_exp(logw)


def normalized_exp(logw: np.ndarray, multiplicity: np.ndarray | None = None) -> np.ndarray:
    """Exponentiate unnormalised log weights so that ``sum(mult * w) == 1``."""
    logw = np.asarray(logw, dtype=float)
    finite = np.isfinite(logw)
    w = np.zeros_like(logw)
    if not finite.any():
        return w
    w[finite] = np.exp(logw[finite] - logw[finite].max())
    mult = np.ones_like(w) if multiplicity is None else np.asarray(multiplicity, dtype=float)
    total = math.fsum((mult * w).ravel())
    return w / total
