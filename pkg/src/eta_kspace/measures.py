"""Scalar correlation measures in momentum space.

Entropies and mutual informations are in bits unless ``base`` is given
(``base=math.e`` for nats). Every thermodynamic-limit measure depends on the
slot filling ``a`` only.

Some measures have two evaluation paths. ``path="printed"`` uses a quoted
closed form verbatim and ``path="spectrum"`` derives the value from the
reduced spectra. For the entropy of a ``(-k, k)`` pair the two differ: the
quoted ``2 h(a) + a(1-a)`` is contradicted by the exact oracle, which
converges to ``2 h(a) - 2a(1-a)``. The spectrum form is the default.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spectra import (
    BlockSpec,
    Spectrum,
    mixed_block_spectrum,
    paired_block_spectrum_tdl,
    single_mode_spectrum_tdl,
)

LOG2_3 = math.log2(3.0)


@dataclass(frozen=True)
class MeasureValue:
    value: float
    kind: str  # entropy | mutual_info | negativity | odlro | purity


def _scale(bits: float, base: float) -> float:
    return bits if base == 2 else bits / math.log2(base)


def binary_entropy(a: float) -> float:
    if a <= 0.0 or a >= 1.0:
        return 0.0
    return -(a * math.log2(a) + (1.0 - a) * math.log2(1.0 - a))


def vn_entropy(s: Spectrum, base: float = 2) -> float:
    """Von Neumann entropy, with ``0 log 0 = 0``."""
    v = s.values[s.values > 0]
    m = s.mult[s.values > 0]
    bits = -math.fsum(m * v * np.log2(v))
    return _scale(max(bits, 0.0), base)


def single_mode_entropy(a: float, base: float = 2) -> float:
    return _scale(2.0 * binary_entropy(a), base)


def paired_modes_entropy(a: float, mode: str = "spectrum", base: float = 2) -> float:
    """Entropy of a ``(-k, k)`` pair; ``mode="printed"`` gives the quoted form."""
    if mode == "printed":
        return _scale(2.0 * binary_entropy(a) + a * (1.0 - a), base)
    if mode == "spectrum":
        return vn_entropy(paired_block_spectrum_tdl(a, 2), base)
    raise ValueError(f"mode must be 'spectrum' or 'printed', got {mode!r}")


def pair_mutual_information(
    a: float, partners: bool = True, path: str = "printed", base: float = 2
) -> float:
    """Mutual information of two modes; nonzero only for partners ``k, -k``."""
    if not partners:
        return 0.0
    if path == "printed":
        return _scale(single_mode_entropy(a) + 2.0 * a * (1.0 - a), base)
    if path == "spectrum":
        s1 = vn_entropy(single_mode_spectrum_tdl(a))
        return _scale(2.0 * s1 - paired_modes_entropy(a, "spectrum"), base)
    raise ValueError(f"path must be 'printed' or 'spectrum', got {path!r}")


def pair_negativity(a: float, partners: bool = True) -> float:
    """Negativity of two modes; ``a(1-a)/3`` for partners.

    The value corresponds to the plain partial-transpose negativity divided
    by ``d - 1 = 3``; see ``oracle.exact_negativity(normalize=True)``.
    """
    if not 0.0 <= a <= 1.0:
        raise ValueError(f"a must lie in [0, 1], got {a}")
    return a * (1.0 - a) / 3.0 if partners else 0.0


def two_pair_mutual_information(a: float, path: str = "printed", base: float = 2) -> float:
    """Mutual information between two distinct ``(-k, k)`` pairs."""
    if path == "printed":
        b = a * (1.0 - a)
        return _scale(2.0 * b * (2.0 + b * (3.0 * LOG2_3 - 5.0)), base)
    if path == "spectrum":
        s2 = vn_entropy(paired_block_spectrum_tdl(a, 2))
        s4 = vn_entropy(paired_block_spectrum_tdl(a, 4))
        return _scale(2.0 * s2 - s4, base)
    raise ValueError(f"path must be 'printed' or 'spectrum', got {path!r}")


def two_pair_negativity(a: float) -> float:
    """Zero in the thermodynamic limit: two-pair correlations are classical.

    At finite ``L'`` the exact value is positive and decays like ``1/L'``.
    """
    if not 0.0 <= a <= 1.0:
        raise ValueError(f"a must lie in [0, 1], got {a}")
    return 0.0


def odlro(n_s: float, n_d: float) -> float:
    """Long-distance pair correlation ``<eta_i^dag eta_j>``."""
    if n_s + n_d > 1.0 + 1e-15:
        raise ValueError(f"need n_s + n_d <= 1, got {n_s} + {n_d}")
    return n_d * (1.0 - n_s - n_d)


def odlro_from_negativity(n_s: float, n_d: float) -> float:
    """Same quantity through ``3 N_{k,-k} (1 - n_s)^2``."""
    a = 0.0 if n_d == 0.0 else n_d / (1.0 - n_s)
    return 3.0 * pair_negativity(a) * (1.0 - n_s) ** 2


def block_entropy(slots: int, pairs: int, spec: BlockSpec, base: float = 2) -> float:
    return vn_entropy(mixed_block_spectrum(slots, pairs, spec), base)


def tdl_measures(n_s: float, n_d: float, base: float = 2) -> dict[str, MeasureValue]:
    """All thermodynamic-limit measures at the given densities."""
    a = 0.0 if n_d == 0.0 else n_d / (1.0 - n_s)
    return {
        "S_single": MeasureValue(single_mode_entropy(a, base), "entropy"),
        "S_pair": MeasureValue(paired_modes_entropy(a, "spectrum", base), "entropy"),
        "S_pair_printed": MeasureValue(paired_modes_entropy(a, "printed", base), "entropy"),
        "I_pair": MeasureValue(pair_mutual_information(a, base=base), "mutual_info"),
        "N_pair": MeasureValue(pair_negativity(a), "negativity"),
        "I_two_pair": MeasureValue(two_pair_mutual_information(a, base=base), "mutual_info"),
        "odlro": MeasureValue(odlro(n_s, n_d), "odlro"),
    }
