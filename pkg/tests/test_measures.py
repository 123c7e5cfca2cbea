from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import cached_state
from eta_kspace import oracle
from eta_kspace.measures import (
    binary_entropy,
    block_entropy,
    odlro,
    odlro_from_negativity,
    pair_mutual_information,
    pair_negativity,
    paired_modes_entropy,
    single_mode_entropy,
    tdl_measures,
    two_pair_mutual_information,
    two_pair_negativity,
    vn_entropy,
)
from eta_kspace.model import PhasePoint, Region, ground_state
from eta_kspace.spectra import BlockSpec, Spectrum, mixed_block_spectrum

unit = st.floats(0.0, 1.0)


def test_vn_entropy_examples():
    assert vn_entropy(Spectrum.from_pairs([(0.25, 4)])) == pytest.approx(2.0, abs=1e-15)
    assert vn_entropy(Spectrum.from_pairs([(1.0, 1)])) == 0.0
    s = Spectrum.from_pairs([(49 / 64, 1), (7 / 64, 2), (1 / 64, 1)])
    assert vn_entropy(s) == pytest.approx(2 * binary_entropy(1 / 8), abs=1e-14)
    assert vn_entropy(s) == pytest.approx(1.087129, abs=1e-6)


def test_natural_log_flag():
    s = Spectrum.from_pairs([(0.25, 4)])
    assert vn_entropy(s, base=math.e) == pytest.approx(2 * math.log(2), rel=1e-15)
    assert single_mode_entropy(0.5, base=math.e) == pytest.approx(2 * math.log(2), rel=1e-15)


@pytest.mark.parametrize("a,expected", [(0.5, 2.0), (0.0, 0.0), (1 / 8, 1.087129)])
def test_single_mode_entropy(a, expected):
    assert single_mode_entropy(a) == pytest.approx(expected, abs=1e-6)


def test_pair_mutual_information_examples():
    assert pair_mutual_information(0.0) == 0.0
    assert pair_mutual_information(0.5) == pytest.approx(2.5, abs=1e-15)
    assert pair_mutual_information(0.5, path="spectrum") == pytest.approx(2.5, abs=1e-14)
    assert pair_mutual_information(0.3, partners=False) == 0.0


@settings(max_examples=1000)
@given(a=unit)
def test_pair_mutual_information_paths_agree(a):
    assert pair_mutual_information(a, path="spectrum") == pytest.approx(pair_mutual_information(a), abs=1e-12)


def test_pair_negativity_examples():
    assert pair_negativity(0.0) == 0.0
    assert pair_negativity(0.5) == pytest.approx(1 / 12, abs=1e-16)
    assert pair_negativity(1 / 8) == pytest.approx(7 / 192, abs=1e-16)
    assert pair_negativity(0.3, partners=False) == 0.0


def test_paired_modes_entropy_branches():
    assert paired_modes_entropy(0.0, "printed") == 0.0
    assert paired_modes_entropy(0.0, "spectrum") == 0.0
    assert paired_modes_entropy(0.5, "printed") == pytest.approx(2.25, abs=1e-15)
    assert paired_modes_entropy(0.5, "spectrum") == pytest.approx(1.5, abs=1e-15)
    with pytest.raises(ValueError):
        paired_modes_entropy(0.5, "verbatim")


@settings(max_examples=1000)
@given(a=unit)
def test_paired_entropy_spectrum_closed_form(a):
    expected = 2 * binary_entropy(a) - 2 * a * (1 - a)
    assert paired_modes_entropy(a) == pytest.approx(expected, abs=1e-12)


def test_oracle_selects_spectrum_branch_at_l12():
    rdm = oracle.exact_rdm(cached_state(12, 6), (0, 11))
    s = rdm.entropy()
    assert abs(s - paired_modes_entropy(0.5, "spectrum")) < abs(s - paired_modes_entropy(0.5, "printed"))


def test_two_pair_mutual_information():
    assert two_pair_mutual_information(0.0) == 0.0
    assert two_pair_mutual_information(0.5) == pytest.approx(0.969361, abs=1e-6)


@settings(max_examples=1000)
@given(a=unit)
def test_two_pair_paths_agree(a):
    assert two_pair_mutual_information(a, path="spectrum") == pytest.approx(
        two_pair_mutual_information(a), abs=1e-12
    )
    assert two_pair_negativity(a) == 0.0


def two_pair_oracle_negativity(slots):
    rdm = oracle.exact_rdm(cached_state(slots, slots // 2), (0, slots - 1, 1, slots - 2))
    return oracle.exact_negativity(rdm, (0, 1))


def test_two_pair_negativity_vanishes_like_inverse_size():
    # finite systems keep a small quantum part that dies off as 1/L'
    values = {L: two_pair_oracle_negativity(L) for L in (8, 12, 16)}
    assert values[8] > values[12] > values[16] > 0
    scaled = [L * v for L, v in values.items()]
    assert max(scaled) / min(scaled) < 1.3


def test_partner_negativity_trend_at_one_eighth():
    values = []
    for slots in (8, 16, 24):
        rdm = oracle.exact_rdm(cached_state(slots, slots // 8), (0, slots - 1))
        values.append(oracle.exact_negativity(rdm, (0,), normalize=True))
    target = pair_negativity(1 / 8)
    assert values[0] > values[1] > values[2] > target
    inv = np.array([1 / 16, 1 / 24])
    slope, icept = np.polyfit(inv, values[1:], 1)
    assert icept == pytest.approx(target, abs=5e-4)


def test_non_partner_negativity_is_zero():
    rdm = oracle.exact_rdm(cached_state(8, 4), (0, 1))
    assert oracle.exact_negativity(rdm, (0,)) == pytest.approx(0.0, abs=1e-12)


def test_odlro_examples():
    assert odlro(0.3, 0.0) == 0.0
    assert odlro(1 / 3, 1 / 12) == pytest.approx(7 / 144, abs=1e-16)
    assert 3 * (7 / 192) * (2 / 3) ** 2 == pytest.approx(7 / 144, abs=1e-16)
    with pytest.raises(ValueError):
        odlro(0.8, 0.4)


def test_odlro_identity_on_grid():
    for n in np.linspace(0.01, 1.0, 60):
        for u in np.linspace(-7.9, 3.9, 60):
            gs = ground_state(PhasePoint(float(n), float(u)))
            if gs.region in (Region.II, Region.III):
                assert odlro(gs.n_s, gs.n_d) == pytest.approx(odlro_from_negativity(gs.n_s, gs.n_d), abs=1e-12)


def test_block_entropy_examples():
    assert block_entropy(8, 4, BlockSpec(0, 4)) == 0.0
    spec = BlockSpec(1, 1)
    rdm = oracle.exact_rdm(cached_state(8, 4), oracle.block_modes(8, spec))
    assert block_entropy(8, 4, spec) == pytest.approx(rdm.entropy(), abs=1e-10)


@pytest.mark.parametrize("slots,pairs", [(10, 3), (40, 20), (500, 100)])
def test_subadditivity(slots, pairs):
    for d1 in range(4):
        for p in range(3):
            spec = BlockSpec(d1, p)
            whole = block_entropy(slots, pairs, spec)
            parts = block_entropy(slots, pairs, BlockSpec(d1, 0)) + block_entropy(slots, pairs, BlockSpec(0, p))
            assert whole <= parts + 1e-12


def test_block_entropy_grows_half_bit_per_doubling():
    slots = 2**22
    diffs = [
        block_entropy(slots, slots // 2, BlockSpec(0, P)) - block_entropy(slots, slots // 2, BlockSpec(0, P // 2))
        for P in (512, 1024, 2048)
    ]
    assert all(abs(d - 0.5) < 0.05 for d in diffs)


@settings(max_examples=1000)
@given(a=unit)
def test_measures_nonnegative(a):
    assert single_mode_entropy(a) >= 0
    assert paired_modes_entropy(a) >= 0
    assert pair_mutual_information(a, path="spectrum") >= -1e-15
    assert two_pair_mutual_information(a) >= 0
    assert pair_negativity(a) >= 0


def test_tdl_measures_keys_and_kinds():
    m = tdl_measures(1 / 3, 1 / 12)
    assert m["S_single"].kind == "entropy"
    assert m["N_pair"].value == pytest.approx(7 / 192)
    assert m["odlro"].value == pytest.approx(7 / 144)
    assert all(v.value >= 0 for v in m.values())


def test_mixed_block_entropy_oracle_all_shapes():
    for spec in (BlockSpec(2, 0), BlockSpec(0, 2), BlockSpec(1, 1)):
        for pairs in range(6):
            rdm = oracle.exact_rdm(cached_state(10, pairs), oracle.block_modes(10, spec))
            assert block_entropy(10, pairs, spec) == pytest.approx(rdm.entropy(), abs=1e-10)
    assert vn_entropy(mixed_block_spectrum(10, 5, BlockSpec(0, 5))) == 0.0
