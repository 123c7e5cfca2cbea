"""Momentum-space entanglement of the eta-paired ground state of the bond-charge Hubbard chain."""

from .measures import tdl_measures
from .model import PhasePoint, Region, classify, critical_u, ground_state, iso_correlation_curve
from .qmeasure import QParams, q_measure
from .spectra import BlockSpec, Spectrum, mixed_block_spectrum

__all__ = [
    "BlockSpec",
    "PhasePoint",
    "QParams",
    "Region",
    "Spectrum",
    "classify",
    "critical_u",
    "ground_state",
    "iso_correlation_curve",
    "mixed_block_spectrum",
    "q_measure",
    "tdl_measures",
]

__version__ = "0.1.0"
