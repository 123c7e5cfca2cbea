"""Exact finite-size reference for the eta-paired state.

The state ``(eta^dag)^{N_d} |vac>`` on ``L'`` correlated momenta is stored as
amplitudes over slot bitstrings (bit ``j`` set = slot ``j`` occupied). Modes
are labelled ``0 .. L'-1`` with momenta ``k_j = 2 pi (j - (L'-1)/2) / L'``.
The grid is symmetric and has no self-conjugate point, so ``-k_j`` is mode
``L'-1-j``. Slot ``j`` is ``eta_j^dag = a^dag_{-k_j,up} a^dag_{k_j,dn}``.

A basis state is the ordered product of the ``eta_j^dag`` of its occupied
slots acting on the vacuum (ascending slot index unless ``slot_order`` says
otherwise). Reduced density matrices bring the creation operators into
"subsystem first, environment after" order and pick up the permutation sign.
Inside the subsystem each mode contributes ``a^dag_up a^dag_dn`` and the
local basis index is ``n_up + 2 n_dn``, i.e. ``{0, up, dn, updn}``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from .spectra import BlockSpec

MAX_SLOTS = 24
MAX_BLOCKS = 100_000
UP, DN = 0, 1


def momentum(slots: int, j: int) -> float:
    return 2.0 * math.pi * (j - (slots - 1) / 2.0) / slots


def partner(slots: int, j: int) -> int:
    return slots - 1 - j


@dataclass
class OracleState:
    slots: int
    pairs: int
    configs: np.ndarray
    amplitudes: np.ndarray
    slot_order: tuple[int, ...]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def norm(self) -> float:
        return math.fsum(self.amplitudes**2)

    @cached_property
    def bits(self) -> np.ndarray:
        """Occupation matrix ``(configs, slots)``."""
        return ((self.configs[:, None] >> np.arange(self.slots)) & 1).astype(np.int8)


@dataclass(frozen=True)
class RdmMatrix:
    modes: tuple[int, ...]
    matrix: np.ndarray

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def purity(self) -> float:
        return float(np.einsum("ij,ji->", self.matrix, self.matrix))

    def entropy(self) -> float:
        w = self.eigenvalues()
        w = w[w > 1e-15]
        return float(-np.sum(w * np.log2(w)))


def build_state(slots: int, pairs: int, slot_order=None, signs=None) -> OracleState:
    """Uniform superposition of all ``pairs``-subsets of ``slots`` slots.

    ``signs[j] = -1`` flips the phase convention of ``eta_j^dag``; ``slot_order``
    changes the order of the product defining the basis states.
    """
    if slots % 2 or slots < 2:
        raise ValueError(f"L' must be even and >= 2, got {slots}")
    if slots > MAX_SLOTS:
        raise ValueError(f"L'={slots} exceeds the oracle limit {MAX_SLOTS}")
    if not 0 <= pairs <= slots:
        raise ValueError(f"need 0 <= N_d <= L', got {pairs}")
    everything = np.arange(1 << slots, dtype=np.int64)
    weight = np.zeros(everything.size, dtype=np.int8)
    for j in range(slots):
        weight += ((everything >> j) & 1).astype(np.int8)
    configs = everything[weight == pairs]
    amps = np.full(configs.size, 1.0 / math.sqrt(math.comb(slots, pairs)))
    if signs is not None:
        flipped = sum(1 << j for j, s in enumerate(signs) if s < 0)
        parity = np.array([bin(int(c) & flipped).count("1") & 1 for c in configs])
        amps = np.where(parity == 1, -amps, amps)
    order = tuple(range(slots)) if slot_order is None else tuple(slot_order)
    if sorted(order) != list(range(slots)):
        raise ValueError("slot_order must be a permutation of range(L')")
    return OracleState(slots, pairs, configs, amps, order)


def _parity(state: OracleState, rank: np.ndarray) -> np.ndarray:
    """Sign (0/1) of sorting each configuration's creation string by ``rank``."""
    order = state.slot_order
    # creation string position of each orbital, two per slot in product order
    orbitals = [
        (partner(state.slots, j), UP) if t == 0 else (j, DN) for j in order for t in (0, 1)
    ]
    r = np.array([rank[2 * m + s] for m, s in orbitals]).reshape(-1, 2)
    diag = (r[:, 0] > r[:, 1]).astype(np.int64)
    upper = (r[:, None, :, None] > r[None, :, None, :]).sum(axis=(2, 3))
    upper = np.triu(upper, k=1)
    y = state.bits[:, list(order)].astype(np.int64)
    return (y @ diag + ((y @ upper) * y).sum(axis=1)) & 1


def exact_rdm(state: OracleState, modes, env_order=None) -> RdmMatrix:
    """Reduced density matrix of the given modes (fermionic signs included)."""
    modes = tuple(int(m) for m in modes)
    L = state.slots
    if len(set(modes)) != len(modes) or any(not 0 <= m < L for m in modes):
        raise ValueError(f"modes must be distinct labels in [0, {L}), got {modes}")
    nA = len(modes)
    rank = np.empty(2 * L, dtype=np.int64)
    env = [g for g in (range(2 * L) if env_order is None else env_order) if g // 2 not in modes]
    rank[[2 * m + s for m in modes for s in (UP, DN)]] = np.arange(2 * nA)
    rank[env] = 2 * nA + np.arange(len(env))

    bits = state.bits
    a_idx = np.zeros(state.configs.size, dtype=np.int64)
    for m in modes:
        local = bits[:, partner(L, m)] + 2 * bits[:, m]
        a_idx = 4 * a_idx + local
    inside = 0
    for j in range(L):
        if j in modes and partner(L, j) in modes:
            inside |= 1 << j
    _, b_idx = np.unique(state.configs & ~inside, return_inverse=True)
    sign = 1 - 2 * _parity(state, rank)
    psi = sp.coo_matrix(
        (state.amplitudes * sign, (a_idx, b_idx)), shape=(4**nA, int(b_idx.max()) + 1)
    ).tocsr()
    rho = (psi @ psi.T).toarray()
    return RdmMatrix(modes, rho)


def exact_negativity(rdm: RdmMatrix, cut, normalize: bool = False) -> float:
    """Negativity of the partial transpose over the modes at positions ``cut``.

    Each mode is a 4-level system in the fixed orbital order. ``normalize``
    divides by ``d - 1`` with ``d`` the smaller side's dimension, the scale on
    which the closed form ``a(1-a)/3`` is quoted.
    """
    m = len(rdm.modes)
    cut = sorted(set(int(c) for c in cut))
    if m < 2 or not cut or len(cut) == m or any(not 0 <= c < m for c in cut):
        raise ValueError("cut must be a proper nonempty subset of the RDM's mode positions")
    t = rdm.matrix.reshape((4,) * (2 * m))
    axes = list(range(2 * m))
    for c in cut:
        axes[c], axes[m + c] = axes[m + c], axes[c]
    pt = t.transpose(axes).reshape(4**m, 4**m)
    w = np.linalg.eigvalsh(pt)
    neg = float(-w[w < 0].sum())
    if normalize:
        neg /= 4 ** min(len(cut), m - len(cut)) - 1
    return neg


def exact_mutual_information(state: OracleState, A, B) -> float:
    """``S_A + S_B - S_AB`` in bits."""
    sa = exact_rdm(state, A).entropy()
    sb = exact_rdm(state, B).entropy()
    sab = exact_rdm(state, tuple(A) + tuple(B)).entropy()
    return sa + sb - sab


def exact_q(state: OracleState, D: int) -> float:
    """Normalised average linear entropy over every block of ``D`` modes."""
    L = state.slots
    if not 1 <= D <= L:
        raise ValueError(f"need 1 <= D <= L', got {D}")
    if math.comb(L, D) > MAX_BLOCKS:
        raise ValueError(f"C({L}, {D}) blocks exceeds the enumeration guard {MAX_BLOCKS}")
    purities = [exact_rdm(state, blk).purity() for blk in itertools.combinations(range(L), D)]
    return (1.0 - math.fsum(purities) / len(purities)) / (1.0 - 4.0 ** (-D))


def block_modes(slots: int, spec: BlockSpec) -> tuple[int, ...]:
    """A concrete set of mode labels with the composition ``spec``.

    Complete pairs come first, then one end of further momentum pairs.
    """
    if spec.slots > slots:
        raise ValueError(f"block needs {spec.slots} slots, L'={slots}")
    modes = []
    for j in range(spec.paired_pairs):
        modes += [j, partner(slots, j)]
    for j in range(spec.paired_pairs, spec.paired_pairs + spec.lone_modes):
        modes.append(j)
    return tuple(modes)


def block_spec_of(slots: int, modes) -> BlockSpec:
    modes = set(modes)
    paired = sum(1 for m in modes if partner(slots, m) in modes)
    return BlockSpec(len(modes) - paired, paired // 2)
