"""Reduced-density-matrix spectra of blocks of momentum modes.

The correlated sector is ``L' = L - N_s`` momenta. The eta-paired state
``(eta^dag)^{N_d} |vac>`` on that sector is a uniform superposition of all
``N_d``-subsets of ``L'`` *pair slots*, slot ``j`` filling orbitals
``(k_j, dn)`` and ``(-k_j, up)``.

A block of modes is described by how it cuts slots:

* a lone mode (partner ``-k`` outside the block) owns half of two slots; the
  other halves live in the environment, so both slots are fully decohered;
* a complete ``(-k, k)`` pair owns two whole slots, which stay coherent and
  reduce like a Dicke state.

With ``2 D1`` decohered slots showing ``M`` occupied and ``D2`` coherent slots
in the symmetric ``alpha``-pair state, every eigenvalue is

    C(D2, alpha) C(L' - 2 D1 - D2, N_d - M - alpha) / C(L', N_d)

with multiplicity ``C(2 D1, M)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .numerics import EXACT_LIMIT, log_binomial_run, normalized_exp

FLUSH = 1e-300


@dataclass(frozen=True)
class BlockSpec:
    """Composition of a block of momentum modes.

    ``lone_modes`` counts modes whose partner is outside the block,
    ``paired_pairs`` counts complete ``(-k, k)`` pairs inside it.
    """

    lone_modes: int = 0
    paired_pairs: int = 0

    def __post_init__(self):
        if self.lone_modes < 0 or self.paired_pairs < 0:
            raise ValueError("block counts must be nonnegative")

    @property
    def D1(self) -> int:
        return self.lone_modes

    @property
    def D2(self) -> int:
        """Number of modes in complete pairs (always even)."""
        return 2 * self.paired_pairs

    @property
    def modes(self) -> int:
        return self.lone_modes + self.D2

    @property
    def slots(self) -> int:
        """Pair slots touched by the block."""
        return 2 * self.lone_modes + self.D2


@dataclass(frozen=True)
class Spectrum:
    """Diagonal form of a density matrix as (eigenvalue, multiplicity) pairs."""

    values: np.ndarray
    mult: np.ndarray

    @classmethod
    def from_pairs(cls, pairs) -> Spectrum:
        vals, mult = zip(*pairs) if pairs else ((), ())
        return cls.build(np.asarray(vals, dtype=float), np.asarray(mult, dtype=np.int64))

    @classmethod
    def build(cls, values, mult) -> Spectrum:
        values = np.asarray(values, dtype=float)
        mult = np.asarray(mult)
        if mult.dtype == object:
            mult = _int_or_float(mult)
        values, mult = np.broadcast_arrays(values, mult)
        values, mult = values.ravel(), mult.ravel()
        values = np.where(values < FLUSH, 0.0, values)
        keep = values > 0
        return cls(values[keep], mult[keep].copy())

    @property
    def entries(self) -> list[tuple[float, int]]:
        return [(float(v), int(m)) for v, m in zip(self.values, self.mult)]

    def total(self) -> float:
        return math.fsum(self.values * self.mult)

    def purity(self) -> float:
        return math.fsum(self.values**2 * self.mult)

    def rank(self) -> int:
        return int(self.mult.sum())

    def expanded(self, dim: int | None = None) -> np.ndarray:
        """All eigenvalues in ascending order, zero-padded to ``dim``."""
        vals = np.repeat(self.values, self.mult)
        if dim is not None:
            if dim < vals.size:
                raise ValueError(f"spectrum has {vals.size} nonzero entries > dim={dim}")
            vals = np.concatenate((np.zeros(dim - vals.size), vals))
        return np.sort(vals)


def _check_counts(slots: int, pairs: int, spec: BlockSpec) -> None:
    if slots < 0 or not 0 <= pairs <= slots:
        raise ValueError(f"need 0 <= N_d <= L', got L'={slots}, N_d={pairs}")
    if spec.slots > slots:
        raise ValueError(f"block needs {spec.slots} slots but only L'={slots} exist")


def mixed_block_spectrum(slots: int, pairs: int, spec: BlockSpec) -> Spectrum:
    """Spectrum of a block with ``spec.D1`` lone modes and ``spec.D2`` paired modes."""
    _check_counts(slots, pairs, spec)
    d1, d2 = spec.D1, spec.D2
    rest = slots - 2 * d1 - d2
    if slots <= EXACT_LIMIT:
        norm = math.comb(slots, pairs)
        vals, mult = [], []
        for m in range(2 * d1 + 1):
            for alpha in range(d2 + 1):
                k = pairs - m - alpha
                if k < 0 or k > rest:
                    continue
                vals.append(float(Fraction(math.comb(d2, alpha) * math.comb(rest, k), norm)))
                mult.append(math.comb(2 * d1, m))
        return Spectrum.build(vals, mult)

    ms = np.arange(2 * d1 + 1)
    alphas = np.arange(d2 + 1)
    s = np.arange(2 * d1 + d2 + 1)
    lb_alpha = log_binomial_run(d2, alphas)
    # log C(rest, N_d - s), computed on the ascending run and flipped
    lb_rest = log_binomial_run(rest, pairs - s[::-1])[::-1]
    logw = lb_alpha[None, :] + lb_rest[ms[:, None] + alphas[None, :]]
    mult = np.array([math.comb(2 * d1, int(m)) for m in ms], dtype=object)
    multiplicity = np.broadcast_to(mult[:, None], logw.shape)
    w = normalized_exp(logw, multiplicity.astype(float))
    return Spectrum.build(w, _int_or_float(multiplicity))


def open_block_spectrum(slots: int, pairs: int, lone_modes: int) -> Spectrum:
    """Block of ``lone_modes`` modes, none of which contains its partner."""
    return mixed_block_spectrum(slots, pairs, BlockSpec(lone_modes, 0))


def paired_block_spectrum(slots: int, pairs: int, inside: int) -> Spectrum:
    """Block made of ``inside / 2`` complete ``(-k, k)`` pairs."""
    if inside % 2:
        raise ValueError(f"a paired block holds an even number of slots, got {inside}")
    return mixed_block_spectrum(slots, pairs, BlockSpec(0, inside // 2))


def _int_or_float(mult: np.ndarray) -> np.ndarray:
    big = mult.size and max(mult.ravel()) >= 2**62
    return mult.astype(float if big else np.int64)


def single_mode_spectrum_tdl(a: float) -> Spectrum:
    """One mode in the thermodynamic limit: two independent occupation bits."""
    _check_a(a)
    return Spectrum.build([(1 - a) ** 2, a * (1 - a), a * a], [1, 2, 1])


def paired_block_spectrum_tdl(a: float, inside: int = 2) -> Spectrum:
    """Binomial limit of ``paired_block_spectrum`` at slot filling ``a``."""
    return mixed_block_spectrum_tdl(a, BlockSpec(0, inside // 2))


def mixed_block_spectrum_tdl(a: float, spec: BlockSpec) -> Spectrum:
    _check_a(a)
    d1, d2 = spec.D1, spec.D2
    vals, mult = [], []
    for m in range(2 * d1 + 1):
        for alpha in range(d2 + 1):
            occ = m + alpha
            vals.append(math.comb(d2, alpha) * a**occ * (1 - a) ** (spec.slots - occ))
            mult.append(math.comb(2 * d1, m))
    return Spectrum.build(vals, mult)


def _check_a(a: float) -> None:
    if not 0.0 <= a <= 1.0:
        raise ValueError(f"correlation parameter must lie in [0, 1], got {a}")
