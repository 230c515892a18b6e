"""Two-dimensional partial-wave scattering from a hard disk plus an Aharonov-Bohm flux line."""
from .partial_wave import (
    AmplitudeSample,
    AsymptoticReferences,
    ChannelShift,
    CrossSectionResult,
    FluxParameter,
    ScatteringPoint,
    Statistics,
    TruncationError,
    TruncationPolicy,
    amplitude,
    asymptotic_references,
    channel_sin2,
    differential_cross_section,
    hard_disk_phase_shift,
    optical_theorem_check,
    total_cross_section,
)
from .specfun import BesselOrder, BesselPair, bessel_j, bessel_n, bessel_pair
from .sweep import SweepGrid, SweepRow, run_sweep

__version__ = "0.1.0"
