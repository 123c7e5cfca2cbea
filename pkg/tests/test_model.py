from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eta_kspace.model import (
    PhasePoint,
    Region,
    SingularPointError,
    classify,
    critical_u,
    energy_density,
    energy_second_derivatives,
    finite_size_occupations,
    ground_state,
    ground_state_energy,
    iso_correlation_curve,
    unpaired_density,
)


def brute_force_minimum(n: float, u: float, samples: int = 1000) -> float:
    """Lowest energy over feasible (n_s, n_d) with n_s + 2 n_d = n."""
    n_s = np.linspace(0.0, n, samples)
    e = -2.0 / math.pi * np.sin(math.pi * n_s) + u * (n - n_s) / 2.0
    return float(e.min())


@pytest.mark.parametrize("n,expected", [(1.0, 4.0), (0.5, 0.0), (1 / 3, -2.0)])
def test_critical_u(n, expected):
    assert critical_u(n) == pytest.approx(expected, abs=1e-14)


@pytest.mark.parametrize("n", [0.0, -0.1, 1.2, math.nan])
def test_critical_u_domain(n):
    with pytest.raises(ValueError):
        critical_u(n)


def test_phase_point_rejects_bad_input():
    with pytest.raises(ValueError):
        PhasePoint(1.5, 0.0)
    with pytest.raises(ValueError):
        PhasePoint(0.5, math.inf)


def test_ground_state_examples():
    gs = ground_state(PhasePoint(0.5, 2.0))
    assert (gs.n_s, gs.n_d, gs.region) == (0.5, 0.0, Region.I)

    gs = ground_state(PhasePoint(0.5, -2.0))
    assert gs.region is Region.II
    assert gs.n_s == pytest.approx(1 / 3, abs=1e-15)
    assert gs.n_d == pytest.approx(1 / 12, abs=1e-15)
    assert gs.a == pytest.approx(1 / 8, abs=1e-15)

    gs = ground_state(PhasePoint(0.8, -5.0))
    assert (gs.n_s, gs.n_d, gs.region) == (0.0, 0.4, Region.III)

    assert ground_state(PhasePoint(1.0, 5.0)).region is Region.IV


def test_ground_state_minimises_energy_at_example():
    p = PhasePoint(0.5, -2.0)
    assert ground_state_energy(p) <= brute_force_minimum(0.5, -2.0) + 1e-12
    assert ground_state_energy(p) == pytest.approx(-math.sqrt(3) / math.pi - 1 / 6, abs=1e-15)


def test_region_ii_stationarity_and_minimality_on_grid():
    for n in np.linspace(0.01, 1.0, 40):
        for u in np.linspace(-7.9, 7.9, 41):
            p = PhasePoint(float(n), float(u))
            gs = ground_state(p)
            assert gs.n_s + 2 * gs.n_d == pytest.approx(n, abs=1e-15)
            if gs.region is Region.II:
                assert abs(math.cos(math.pi * gs.n_s) + u / 4) < 1e-12
            if gs.region in (Region.I, Region.IV):
                assert gs.n_d == 0.0
            if gs.region is Region.III:
                assert gs.n_s == 0.0
            assert ground_state_energy(p) <= brute_force_minimum(float(n), float(u)) + 1e-12


@settings(max_examples=300, deadline=None)
@given(n=st.floats(0.001, 1.0), u=st.floats(-8.0, 8.0))
def test_ground_state_is_minimum(n, u):
    p = PhasePoint(n, u)
    gs = ground_state(p)
    assert 0.0 <= gs.a <= 0.5 + 1e-15
    assert ground_state_energy(p) <= brute_force_minimum(n, u) + 1e-12


def test_boundary_points_carry_region_ii_limits():
    p = PhasePoint(0.5, critical_u(0.5))
    gs = ground_state(p)
    assert gs.region is Region.BOUNDARY
    assert gs.n_d == pytest.approx(0.0, abs=1e-15)
    assert classify(PhasePoint(0.5, -4.0)) is Region.BOUNDARY
    assert ground_state(PhasePoint(0.5, -4.0)).n_s == 0.0


def test_unpaired_density_half_angle_forms():
    for u in np.linspace(-3.999, 3.999, 101):
        assert math.cos(math.pi * unpaired_density(float(u))) == pytest.approx(-u / 4, abs=1e-14)
    # near the band edges arccos loses digits; the half-angle form keeps them
    u = -4.0 + 1e-12
    assert unpaired_density(u) == pytest.approx(2 / math.pi * math.sqrt((4.0 + u) / 8.0), rel=1e-10)
    assert unpaired_density(-5.0) == 0.0 and unpaired_density(5.0) == 1.0


@pytest.mark.parametrize(
    "n_s,n_d,u,expected",
    [(0.0, 0.4, -5.0, -2.0), (0.5, 0.0, 17.0, -2 / math.pi), (1 / 3, 1 / 12, -2.0, -math.sqrt(3) / math.pi - 1 / 6)],
)
def test_energy_density_examples(n_s, n_d, u, expected):
    assert energy_density(n_s, n_d, u) == pytest.approx(expected, abs=1e-6 if expected < -0.7 else 1e-15)


def test_energy_density_rejects_infeasible():
    with pytest.raises(ValueError):
        energy_density(1.0, 0.6, 0.0)


def test_second_derivative_half_filling_u0():
    d = energy_second_derivatives(PhasePoint(1.0, 0.0))
    assert d.d2E_du2 == pytest.approx(-1 / (8 * math.pi), rel=1e-15)
    assert d.d2E_dn2 == 0.0


def fd2(f, x, h):
    return (f(x + h) - 2 * f(x) + f(x - h)) / h**2


def test_second_derivative_region_i_zero_in_u():
    for n, u in [(0.3, 0.0), (0.5, 2.0), (0.9, 5.0)]:
        assert energy_second_derivatives(PhasePoint(n, u)).d2E_du2 == 0.0


def test_second_derivative_jump_across_ii_i():
    below = energy_second_derivatives(PhasePoint(0.5, 0.0), "from_below")
    above = energy_second_derivatives(PhasePoint(0.5, 0.0), "from_above")
    assert below.d2E_du2 == pytest.approx(-1 / (8 * math.pi), rel=1e-12)
    assert above.d2E_du2 == 0.0
    with pytest.raises(SingularPointError):
        energy_second_derivatives(PhasePoint(0.5, 0.0))

    def e(u):
        return ground_state_energy(PhasePoint(0.5, u))

    u = -0.01
    analytic = energy_second_derivatives(PhasePoint(0.5, u)).d2E_du2
    assert fd2(e, u, 1e-4) == pytest.approx(analytic, rel=1e-5)
    assert fd2(e, 0.01, 1e-4) == pytest.approx(0.0, abs=1e-7)


def test_limit_matches_critical_line_form():
    # at u -> u_c(n) from below the u-derivative is -1 / (8 pi sin(pi n))
    for n in (0.2, 0.5, 0.7):
        d = energy_second_derivatives(PhasePoint(n, critical_u(n)), "from_below")
        assert d.d2E_du2 == pytest.approx(-1 / (8 * math.pi * math.sqrt(1 - math.cos(math.pi * n) ** 2)), rel=1e-10)


def test_n_derivative_region_i_is_sine():
    u = 2.0
    for n in (0.2, 0.35, 0.45):
        def e(x):
            return ground_state_energy(PhasePoint(x, u))

        analytic = energy_second_derivatives(PhasePoint(n, u)).d2E_dn2
        assert analytic == pytest.approx(2 * math.pi * math.sin(math.pi * n), rel=1e-15)
        assert fd2(e, n, 1e-4) == pytest.approx(analytic, rel=1e-6)


def test_n_derivative_region_ii_vanishes():
    def e(x):
        return ground_state_energy(PhasePoint(x, -2.0))

    assert fd2(e, 0.6, 1e-4) == pytest.approx(0.0, abs=1e-7)
    assert energy_second_derivatives(PhasePoint(0.6, -2.0)).d2E_dn2 == 0.0


def test_singular_point_at_band_edge():
    with pytest.raises(SingularPointError):
        energy_second_derivatives(PhasePoint(1.0, 4.0), "from_below")


def test_energy_and_slope_continuous_across_transition():
    for n in (0.3, 0.5, 0.8):
        uc = critical_u(n)

        def e(u):
            return ground_state_energy(PhasePoint(n, u))

        h = 1e-6
        assert e(uc - h) == pytest.approx(e(uc + h), abs=1e-9)
        left = (e(uc - h) - e(uc - 2 * h)) / h
        right = (e(uc + 2 * h) - e(uc + h)) / h
        assert left == pytest.approx(right, abs=1e-5)


def test_iso_curve_examples():
    for u in np.linspace(-3.9, 3.9, 27):
        assert iso_correlation_curve(0.5, float(u)) == 1.0
        assert critical_u(iso_correlation_curve(0.0, float(u))) == pytest.approx(u, abs=1e-12)
    assert iso_correlation_curve(1 / 8, -2.0) == pytest.approx(0.5, abs=1e-15)
    assert iso_correlation_curve(0.25, -6.0) == 0.5


@pytest.mark.parametrize("a,u", [(0.6, 0.0), (0.2, 4.0), (0.0, -4.5)])
def test_iso_curve_domain(a, u):
    with pytest.raises(ValueError):
        iso_correlation_curve(a, u)


@pytest.mark.parametrize("a", [0.01, 1 / 8, 0.3, 0.49, 0.5])
def test_a_constant_along_iso_curve(a):
    values = [ground_state(PhasePoint(iso_correlation_curve(a, float(u)), float(u))).a for u in np.linspace(-3.95, 3.95, 100)]
    assert max(values) - min(values) < 1e-12
    assert values[0] == pytest.approx(a, abs=1e-12)


def test_half_filling_a_is_half():
    values = [ground_state(PhasePoint(1.0, float(u))).a for u in np.linspace(-3.99, 3.99, 200)]
    assert max(abs(v - 0.5) for v in values) < 1e-12


def test_finite_size_occupations():
    assert finite_size_occupations(1000, 500, 2.0) == (500, 0)
    assert finite_size_occupations(1000, 500, -5.0) == (0, 250)
    n_s, n_d = finite_size_occupations(1000, 500, -2.0)
    assert n_s + 2 * n_d == 500 and n_d == 83
    with pytest.raises(ValueError):
        finite_size_occupations(10, 11, 0.0)
