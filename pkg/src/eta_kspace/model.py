"""Ground-state phase diagram of the integrable bond-charge Hubbard chain.

Energies are per site in units of the hopping amplitude. In the
thermodynamic limit the energy of the eigenstate with ``n_s`` unpaired
fermions and ``n_d`` eta pairs per site is

    e(n_s, n_d) = -(2/pi) sin(pi n_s) + u n_d,

minimised at fixed filling ``n = n_s + 2 n_d``. The interior stationary
point obeys ``cos(pi n_s) = -u/4``. It is solved in closed form here, and the
tests use a brute-force minimiser as the oracle.

Regions: I (no pairs), II (singles and pairs), III (pairs only), IV (region I
at half filling with u > 4). Points within ``BOUNDARY_TOL`` of a transition
line are labelled ``boundary`` and carry the limiting values from region II.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

BOUNDARY_TOL = 1e-12


class Region(str, Enum):
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"
    BOUNDARY = "boundary"


class SingularPointError(ValueError):
    """Raised when a quantity is requested exactly at a transition without a side."""


@dataclass(frozen=True)
class PhasePoint:
    n: float
    u: float

    def __post_init__(self):
        _check_filling(self.n)
        if not math.isfinite(self.u):
            raise ValueError(f"u must be finite, got {self.u}")


@dataclass(frozen=True)
class GroundStateParams:
    n_s: float
    n_d: float
    region: Region
    a: float


@dataclass(frozen=True)
class EnergyDerivatives:
    d2E_du2: float
    d2E_dn2: float
    side: str | None


def _check_filling(n: float) -> None:
    if not (0.0 < n <= 1.0):
        raise ValueError(f"filling must lie in (0, 1], got {n}")


def critical_u(n: float) -> float:
    """Coupling of the II/I transition at filling ``n``."""
    _check_filling(n)
    return -4.0 * math.cos(math.pi * n)


def unpaired_density(u: float) -> float:
    """Stationary ``n_s(u) = arccos(-u/4)/pi``, clamped to [0, 1] outside |u| < 4.

    The half-angle forms avoid the loss of digits of ``arccos`` near +-1.
    """
    if u <= -4.0:
        return 0.0
    if u >= 4.0:
        return 1.0
    if u <= 0.0:
        return 2.0 / math.pi * math.asin(math.sqrt((4.0 + u) / 8.0))
    return 1.0 - 2.0 / math.pi * math.asin(math.sqrt((4.0 - u) / 8.0))


def correlation_parameter(n_s: float, n_d: float) -> float:
    """Slot filling ``a = n_d / (1 - n_s)``; zero when there are no pairs."""
    if n_d == 0.0:
        return 0.0
    return n_d / (1.0 - n_s)


def classify(p: PhasePoint) -> Region:
    n, u = p.n, p.u
    uc = critical_u(n)
    if abs(u - uc) <= BOUNDARY_TOL or abs(u + 4.0) <= BOUNDARY_TOL:
        return Region.BOUNDARY
    if u > uc:
        return Region.IV if n == 1.0 else Region.I
    if u < -4.0:
        return Region.III
    return Region.II


def ground_state(p: PhasePoint) -> GroundStateParams:
    """Densities minimising the energy at ``(n, u)``."""
    region = classify(p)
    n = p.n
    if region in (Region.I, Region.IV):
        return GroundStateParams(n, 0.0, region, 0.0)
    if region is Region.III:
        return GroundStateParams(0.0, n / 2.0, region, n / 2.0)
    n_s = min(unpaired_density(p.u), n)
    n_d = (n - n_s) / 2.0
    return GroundStateParams(n_s, n_d, region, correlation_parameter(n_s, n_d))


def energy_density(n_s: float, n_d: float, u: float) -> float:
    if not 0.0 <= n_s <= 1.0 or n_d < 0.0 or n_s + 2.0 * n_d > 2.0:
        raise ValueError(f"infeasible densities n_s={n_s}, n_d={n_d}")
    return -2.0 / math.pi * math.sin(math.pi * n_s) + u * n_d


def ground_state_energy(p: PhasePoint) -> float:
    gs = ground_state(p)
    return energy_density(gs.n_s, gs.n_d, p.u)


def energy_second_derivatives(p: PhasePoint, side: str | None = None) -> EnergyDerivatives:
    """Closed-form second derivatives of the ground-state energy.

    ``side`` ("from_below" or "from_above", in ``u``) selects the one-sided
    limit on a transition line and is ignored elsewhere.

    In region I the ``n`` derivative is that of ``-(2/pi) sin(pi n)``, i.e.
    ``2 pi sin(pi n)``.
    """
    if side not in (None, "from_below", "from_above"):
        raise ValueError(f"side must be 'from_below' or 'from_above', got {side!r}")
    region = classify(p)
    n, u = p.n, p.u
    if region is Region.BOUNDARY:
        if side is None:
            raise SingularPointError(f"(n={n}, u={u}) lies on a transition line; pass side")
        on_iii_line = abs(u + 4.0) <= BOUNDARY_TOL
        below = side == "from_below"
        if on_iii_line:
            region = Region.III if below else Region.II
        else:
            region = Region.II if below else (Region.IV if n == 1.0 else Region.I)
    if region is Region.II:
        if abs(u) >= 4.0 - BOUNDARY_TOL:
            raise SingularPointError(f"d2E/du2 diverges at u={u}")
        return EnergyDerivatives(-1.0 / (2.0 * math.pi * math.sqrt(16.0 - u * u)), 0.0, side)
    if region in (Region.I, Region.IV):
        return EnergyDerivatives(0.0, 2.0 * math.pi * math.sin(math.pi * n), side)
    return EnergyDerivatives(0.0, 0.0, side)


def iso_correlation_curve(a: float, u: float) -> float:
    """Filling ``n`` on the curve of constant correlation parameter ``a``.

    For ``u <= -4`` the curve continues into region III as ``n = 2a``.
    """
    if not 0.0 <= a <= 0.5:
        raise ValueError(f"iso-correlation level must lie in [0, 1/2], got {a}")
    if not u < 4.0:
        raise ValueError(f"iso-correlation curves are defined for u < 4, got {u}")
    n_s = unpaired_density(u)
    n = n_s + 2.0 * a * (1.0 - n_s)
    if 1.0 < n <= 1.0 + 4e-16:
        n = 1.0
    if not 0.0 < n <= 1.0:
        raise ValueError(f"curve a={a} leaves the supported fillings at u={u} (n={n})")
    return n


def finite_size_occupations(L: int, N: int, u: float) -> tuple[int, int]:
    """Integer ``(N_s, N_d)`` for a chain of ``L`` sites holding ``N`` electrons.

    ``N_d`` is the pair density of the infinite chain times ``L``, rounded
    half up; ``N_s = N - 2 N_d`` then has the parity of ``N``.
    """
    if L < 1 or not 0 < N <= L:
        raise ValueError(f"need 0 < N <= L, got L={L}, N={N}")
    gs = ground_state(PhasePoint(N / L, u))
    pairs = min(math.floor(gs.n_d * L + 0.5), N // 2)
    return N - 2 * pairs, pairs
