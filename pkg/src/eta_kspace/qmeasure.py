"""Generalised Meyer-Wallach measure ``Q_{D,4}`` over blocks of momentum modes.

``Q`` is the normalised average linear entropy of all ``C(L', D)`` blocks of
``D`` correlated modes; the ``N_s`` singly occupied modes are in a product
state and are left out of the average.

Two evaluation modes:

``paper_product``
    the quoted closed form, with the block purity written as the product
    of a lone-mode factor and a paired-mode factor;
``exact_spectrum``
    the purity of the actual mixed block.

Blocks are weighted by their true count by default. The quoted weight ``f(D2)``
matches it only for ``D2 <= 2``; for ``D2 >= 4`` it is smaller by
``2^(D2/2) (D2/2)! / D2!``, so the weights no longer sum to one and a product
state would get ``Q > 0``. It stays available as ``counting="printed"``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .numerics import log_binomial_array
from .spectra import BlockSpec, mixed_block_spectrum

MODES = ("paper_product", "exact_spectrum")


@dataclass(frozen=True)
class QParams:
    L: int
    N_s: int
    N_d: int
    D: int
    mode: str = "exact_spectrum"
    counting: str = "exact"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.counting not in ("exact", "printed"):
            raise ValueError(f"counting must be 'exact' or 'printed', got {self.counting!r}")
        slots = self.L - self.N_s
        if not 0 <= self.N_s <= self.L:
            raise ValueError(f"need 0 <= N_s <= L, got N_s={self.N_s}, L={self.L}")
        if not 1 <= self.D <= slots:
            raise ValueError(f"need 1 <= D <= L - N_s, got D={self.D}, L'={slots}")
        if not 0 <= self.N_d <= slots:
            raise ValueError(f"need 0 <= N_d <= L - N_s, got N_d={self.N_d}, L'={slots}")

    @property
    def slots(self) -> int:
        return self.L - self.N_s


def purity_open(slots: int, pairs: int, lone_modes: int) -> float:
    """``Tr rho^2`` of ``lone_modes`` unpartnered modes, summed term by term."""
    if 2 * lone_modes > slots:
        raise ValueError(f"2*D1={2 * lone_modes} exceeds L'={slots}")
    m = np.arange(2 * lone_modes + 1)
    logt = (
        log_binomial_array(2 * lone_modes, m)
        + 2.0 * log_binomial_array(slots - 2 * lone_modes, pairs - m)
        - 2.0 * log_binomial_array(slots, pairs)
    )
    return math.fsum(np.exp(logt[np.isfinite(logt)]))


def purity_paired(slots: int, pairs: int, paired_modes: int) -> float:
    """``Tr rho^2`` of ``paired_modes / 2`` complete ``(-k, k)`` pairs."""
    if paired_modes % 2 or paired_modes > slots:
        raise ValueError(f"D2 must be even and <= L', got D2={paired_modes}, L'={slots}")
    alpha = np.arange(paired_modes + 1)
    logt = 2.0 * (
        log_binomial_array(paired_modes, alpha)
        + log_binomial_array(slots - paired_modes, pairs - alpha)
        - log_binomial_array(slots, pairs)
    )
    return math.fsum(np.exp(logt[np.isfinite(logt)]))


def _falling(x: int, terms: int, step: int) -> int:
    out = 1
    for i in range(terms):
        out *= x - step * i
    return out


def partition_count(slots: int, D: int, paired_modes: int, counting: str = "printed") -> Fraction:
    """Number of ``D``-mode blocks with ``paired_modes`` modes in complete pairs.

    ``counting="printed"`` evaluates the quoted weight; it can be
    fractional for ``paired_modes >= 4``. ``counting="exact"`` chooses
    ``D2/2`` whole pairs and ``D1`` lone modes (one end each) among the
    ``L'/2`` momentum pairs.
    """
    if paired_modes % 2 or not 0 <= paired_modes <= D:
        raise ValueError(f"D2 must be even with 0 <= D2 <= D, got {paired_modes}")
    d1 = D - paired_modes
    half = paired_modes // 2
    if counting == "printed":
        first = Fraction(_falling(slots, d1, 2), math.factorial(d1))
        second = Fraction(_falling(slots - 2 * d1, half, 2), math.factorial(paired_modes))
        return first * second
    if counting == "exact":
        if slots % 2:
            raise ValueError(f"exact counting needs an even number of correlated modes, got {slots}")
        p = slots // 2
        return Fraction(math.comb(p, half) * math.comb(p - half, d1) * 2**d1)
    raise ValueError(f"counting must be 'printed' or 'exact', got {counting!r}")


@lru_cache(maxsize=4096)
def _weights(slots: int, D: int, counting: str) -> tuple[tuple[int, float], ...]:
    total = math.comb(slots, D)
    out = []
    for d2 in range(0, D + 1, 2):
        if 2 * (D - d2) + d2 > slots:
            continue
        w = partition_count(slots, D, d2, counting) / total
        if w:
            out.append((d2, float(w)))
    return tuple(out)


@lru_cache(maxsize=65536)
def _block_purity(slots: int, pairs: int, d1: int, d2: int, mode: str) -> float:
    if mode == "paper_product":
        return purity_open(slots, pairs, d1) * purity_paired(slots, pairs, d2)
    return mixed_block_spectrum(slots, pairs, BlockSpec(d1, d2 // 2)).purity()


def average_purity(p: QParams) -> float:
    terms = [
        w * _block_purity(p.slots, p.N_d, p.D - d2, d2, p.mode)
        for d2, w in _weights(p.slots, p.D, p.counting)
    ]
    return math.fsum(terms)


def q_measure(p: QParams) -> float:
    """``Q_{D,4}`` clamped to [0, 1]."""
    q = (1.0 - average_purity(p)) / (1.0 - 4.0 ** (-p.D))
    return min(max(q, 0.0), 1.0)
