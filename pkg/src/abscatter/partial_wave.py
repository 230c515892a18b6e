"""Partial-wave scattering from a hard disk threaded by an Aharonov-Bohm flux line.

Everything is dimensionless: lengths are in units of the disk radius a, so the
wavenumber is k = ka and cross sections come out as sigma/a.  The flux enters
only through the channel order alpha = |m + mu0| with mu0 = -Phi/Phi0.

The phase shift of channel m satisfies tan(delta) = J_alpha(ka)/N_alpha(ka).
Observables are built from sin^2(delta) and sin(delta)cos(delta) evaluated in
ratio form, never from delta itself.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .specfun import bessel_ladder, bessel_pair

__all__ = [
    "Statistics",
    "FluxParameter",
    "TruncationPolicy",
    "ScatteringPoint",
    "ChannelShift",
    "CrossSectionResult",
    "AmplitudeSample",
    "OpticalTheoremCheck",
    "AsymptoticReferences",
    "TruncationError",
    "hard_disk_phase_shift",
    "channel_sin2",
    "channel_window",
    "total_cross_section",
    "amplitude",
    "amplitudes",
    "differential_cross_section",
    "optical_theorem_check",
    "asymptotic_references",
    "DEFAULT_TAIL_TOL",
]

DEFAULT_TAIL_TOL = 1e-12
LOW_ENERGY_KA_LIMIT = 0.5


class TruncationError(RuntimeError):
    """Auto truncation could not bound the channel tail within the hard cap."""


class Statistics(str, enum.Enum):
    DISTINGUISHABLE = "distinguishable"
    BOSON = "boson"
    FERMION = "fermion"

    @property
    def prefactor(self) -> float:
        return 4.0 if self is Statistics.DISTINGUISHABLE else 16.0

    def includes(self, m: int) -> bool:
        if self is Statistics.BOSON:
            return m % 2 == 0
        if self is Statistics.FERMION:
            return m % 2 != 0
        return True

    def amplitude_weight(self, m: int) -> float:
        """Weight of channel m in f(phi) +- f(phi + pi)."""
        if self is Statistics.DISTINGUISHABLE:
            return 1.0
        return 2.0 if self.includes(m) else 0.0


@dataclass(frozen=True)
class FluxParameter:
    """Dimensionless flux mu0 = -Phi/Phi0; any finite real value."""

    mu0: float

    def __post_init__(self):
        v = float(self.mu0)
        if not math.isfinite(v):
            raise ValueError(f"mu0 must be finite, got {self.mu0!r}")
        object.__setattr__(self, "mu0", v)

    def order_for_channel(self, m: int) -> float:
        return abs(m + self.mu0)


@dataclass(frozen=True)
class TruncationPolicy:
    mode: str = "auto"
    m_max: int = 0
    tail_tol: float = DEFAULT_TAIL_TOL

    def __post_init__(self):
        if self.mode not in ("auto", "fixed"):
            raise ValueError(f"truncation mode must be 'auto' or 'fixed', got {self.mode!r}")
        if self.mode == "fixed" and int(self.m_max) < 1:
            raise ValueError("fixed truncation needs m_max >= 1")
        if not (self.tail_tol > 0.0 and math.isfinite(self.tail_tol)):
            raise ValueError("tail_tol must be a positive finite number")

    @classmethod
    def auto(cls, tail_tol: float = DEFAULT_TAIL_TOL) -> "TruncationPolicy":
        return cls("auto", 0, tail_tol)

    @classmethod
    def fixed(cls, m_max: int, tail_tol: float = DEFAULT_TAIL_TOL) -> "TruncationPolicy":
        return cls("fixed", int(m_max), tail_tol)


def _as_flux(mu0) -> FluxParameter:
    return mu0 if isinstance(mu0, FluxParameter) else FluxParameter(mu0)


@dataclass(frozen=True)
class ScatteringPoint:
    ka: float
    mu0: FluxParameter = field(default_factory=lambda: FluxParameter(0.0))
    statistics: Statistics = Statistics.DISTINGUISHABLE
    truncation: TruncationPolicy = field(default_factory=TruncationPolicy)

    def __post_init__(self):
        ka = float(self.ka)
        if not (math.isfinite(ka) and ka > 0.0):
            raise ValueError(f"ka must be positive and finite, got {self.ka!r}")
        object.__setattr__(self, "ka", ka)
        object.__setattr__(self, "mu0", _as_flux(self.mu0))
        object.__setattr__(self, "statistics", Statistics(self.statistics))


@dataclass(frozen=True)
class ChannelShift:
    m: int
    alpha: float
    delta: float
    sin2: float
    sincos: float = math.nan

    def __post_init__(self):
        if math.isnan(self.sincos):
            object.__setattr__(self, "sincos", 0.5 * math.sin(2.0 * self.delta))


@dataclass(frozen=True)
class CrossSectionResult:
    sigma_t: float
    normalized: float
    channels: tuple
    m_used: int
    tail_bound: float
    statistics: Statistics


@dataclass(frozen=True)
class AmplitudeSample:
    phi: float
    f: complex


@dataclass(frozen=True)
class OpticalTheoremCheck:
    lhs: float
    rhs: float
    residual: float


@dataclass(frozen=True)
class AsymptoticReferences:
    """Closed-form reference cross sections, in units of a.

    ``low_energy_sigma`` = pi^2 / (ka ln^2(ka/2)) follows from the m = 0 phase
    shift tan(delta_0) ~ pi / (2 ln(ka/2)) and is meaningful only for
    ka < 0.5.  ``loglinear_sigma`` = (8/pi) / (ka ln ka) is the other closed
    form in circulation for the same limit; it is reported for comparison and
    disagrees with the engine (it is even negative for ka < 1).
    """

    ka: float
    low_energy_sigma: float
    low_energy_valid: bool
    loglinear_sigma: float
    high_energy_sigma: float = 4.0


PhaseShiftProvider = Callable[[int, float, float], ChannelShift]


# ---------------------------------------------------------------------------
# single channels


def _ratio_form(j: float, n: float) -> tuple[float, float]:
    """(sin^2 delta, sin delta cos delta) for tan(delta) = j/n, overflow-safe."""
    if abs(n) >= abs(j):
        if math.isinf(n):
            return 0.0, 0.0
        t = j / n
        d = 1.0 + t * t
        return t * t / d, t / d
    u = n / j
    d = 1.0 + u * u
    return 1.0 / d, u / d


def _delta(j: float, n: float) -> float:
    """Phase shift on the (-pi/2, pi/2] branch of tan(delta) = j/n."""
    if n == 0.0:
        return 0.5 * math.pi
    return math.atan(j / n) if math.isfinite(n) else 0.0


def _shift_from_pair(m: int, alpha: float, j: float, n: float) -> ChannelShift:
    sin2, sincos = _ratio_form(j, n)
    return ChannelShift(m, alpha, _delta(j, n), sin2, sincos)


def hard_disk_phase_shift(m: int, mu0, ka: float) -> ChannelShift:
    """Phase shift of channel m for a hard disk of radius 1 at wavenumber ka."""
    alpha = _as_flux(mu0).order_for_channel(int(m))
    p = bessel_pair(alpha, ka)
    return _shift_from_pair(int(m), alpha, p.j, p.n)


def channel_sin2(m: int, mu0, ka: float) -> float:
    """sin^2 delta = J^2/(J^2 + N^2) of channel m, always in [0, 1]."""
    return hard_disk_phase_shift(m, mu0, ka).sin2


def channel_window(mu0, ka: float, m_lo: int, m_hi: int) -> list[ChannelShift]:
    """Hard-disk channels m_lo..m_hi, using two Bessel ladders for the whole window.

    Channels with m + mu0 >= 0 have orders frac, frac + 1, ...; the rest have
    orders (1 - frac), (2 - frac), ...; each family is one ladder.
    """
    mu0 = _as_flux(mu0).mu0
    m0 = math.ceil(-mu0)  # first channel with m + mu0 >= 0
    out: dict[int, ChannelShift] = {}

    r_lo, r_hi = max(m0, m_lo), m_hi
    if r_hi >= r_lo:
        alpha0 = r_lo + mu0
        j, n, _ = bessel_ladder(alpha0, r_hi - r_lo + 1, ka)
        for i in range(r_hi - r_lo + 1):
            m = r_lo + i
            out[m] = _shift_from_pair(m, abs(m + mu0), float(j[i]), float(n[i]))

    l_hi, l_lo = min(m0 - 1, m_hi), m_lo
    if l_hi >= l_lo:
        alpha0 = -(l_hi + mu0)
        j, n, _ = bessel_ladder(alpha0, l_hi - l_lo + 1, ka)
        for i in range(l_hi - l_lo + 1):
            m = l_hi - i
            out[m] = _shift_from_pair(m, abs(m + mu0), float(j[i]), float(n[i]))

    return [out[m] for m in range(m_lo, m_hi + 1)]


# ---------------------------------------------------------------------------
# truncation


def _side_tail(edge: ChannelShift, out: ChannelShift, ka: float) -> Optional[float]:
    """Geometric majorant of the neglected sum beyond ``edge``, or None if invalid.

    Valid only past the turning point with orders growing outward and sin^2
    already decaying; then the decay ratio only shrinks further out.
    """
    if out.alpha <= edge.alpha or edge.alpha <= ka:
        return None
    if out.sin2 > edge.sin2:
        return None
    if edge.sin2 == 0.0:
        return 0.0
    q = out.sin2 / edge.sin2
    if q >= 1.0:
        return None
    return out.sin2 / (1.0 - q)


def _window(point: ScatteringPoint, m_max: int, provider) -> list[ChannelShift]:
    if provider is None:
        return channel_window(point.mu0, point.ka, -m_max, m_max)
    return [provider(m, point.mu0.mu0, point.ka) for m in range(-m_max, m_max + 1)]


def _tail(chans: list[ChannelShift], ka: float) -> float:
    lo = _side_tail(chans[1], chans[0], ka)
    hi = _side_tail(chans[-2], chans[-1], ka)
    if lo is None or hi is None:
        return math.inf
    return lo + hi


def hard_cap(ka: float) -> int:
    return int(10 * ka + 1000)


def resolve_channels(point: ScatteringPoint, provider: Optional[PhaseShiftProvider] = None):
    """Channels m in [-M, M] for the point's truncation policy.

    Returns (channels, M, tail_bound) where tail_bound bounds the neglected
    sum of sin^2 delta over |m| > M.  In auto mode M grows from ceil(ka) + 8
    until the bound drops below tail_tol; the outermost channel is evaluated
    only to form the bound and is not part of the returned window.
    """
    pol = point.truncation
    ka = point.ka
    if pol.mode == "fixed":
        chans = _window(point, pol.m_max + 1, provider)
        return chans[1:-1], pol.m_max, _tail(chans, ka)

    cap = hard_cap(ka)
    m_max = math.ceil(ka) + 8
    while True:
        m_max = min(m_max, cap)
        chans = _window(point, m_max + 1, provider)
        tail = _tail(chans, ka)
        edges_small = chans[1].sin2 < pol.tail_tol and chans[-2].sin2 < pol.tail_tol
        if edges_small and tail <= pol.tail_tol:
            return chans[1:-1], m_max, tail
        if m_max >= cap:
            raise TruncationError(
                f"could not bound channel tail below {pol.tail_tol:g} with M <= {cap} "
                f"(ka={ka:g}, mu0={point.mu0.mu0:g}, last bound {tail:g})"
            )
        m_max = max(m_max + 8, int(1.25 * m_max))


# ---------------------------------------------------------------------------
# observables


def total_cross_section(point: ScatteringPoint,
                        provider: Optional[PhaseShiftProvider] = None) -> CrossSectionResult:
    """sigma_t/a = (4/ka) sum sin^2 delta (16/ka over even/odd m for bosons/fermions)."""
    chans, m_used, tail = resolve_channels(point, provider)
    stats = point.statistics
    total = math.fsum(c.sin2 for c in chans if stats.includes(c.m))
    sigma = stats.prefactor / point.ka * total
    return CrossSectionResult(
        sigma_t=sigma,
        normalized=sigma / 4.0,
        channels=tuple(chans),
        m_used=m_used,
        tail_bound=tail,
        statistics=stats,
    )


def _amplitude_from_channels(chans: Sequence[ChannelShift], stats: Statistics,
                             ka: float, phi) -> np.ndarray:
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    ms = np.array([c.m for c in chans])
    w = np.array([stats.amplitude_weight(c.m) for c in chans])
    # e^{i(delta - pi/4)} 2i sin(delta) = e^{-i pi/4} (2i sin.cos - 2 sin^2)
    coef = w * np.array([complex(-2.0 * c.sin2, 2.0 * c.sincos) for c in chans])
    coef = coef * cmath.exp(-0.25j * math.pi) / math.sqrt(2.0 * math.pi * ka)
    return np.exp(1j * np.outer(phi, ms)) @ coef


def amplitudes(point: ScatteringPoint, phi, provider=None) -> np.ndarray:
    """Vectorised scattering amplitude (symmetrised for identical particles)."""
    chans, _, _ = resolve_channels(point, provider)
    return _amplitude_from_channels(chans, point.statistics, point.ka, phi)


def amplitude(point: ScatteringPoint, phi: float, provider=None) -> AmplitudeSample:
    f = amplitudes(point, [phi], provider)[0]
    return AmplitudeSample(float(phi), complex(f))


def differential_cross_section(point: ScatteringPoint, phi, provider=None):
    """|f(phi)|^2, or |f(phi) +- f(phi + pi)|^2 for bosons/fermions.  Scalar in, scalar out."""
    f = amplitudes(point, phi, provider)
    out = (f * f.conj()).real
    return float(out[0]) if np.ndim(phi) == 0 else out


def optical_theorem_check(point: ScatteringPoint, provider=None) -> OpticalTheoremCheck:
    """Compare sigma_t with (2 sqrt(2 pi)/sqrt(k)) Im[e^{-i pi/4} f(0)].

    The e^{-i pi/4} rotation is needed with this amplitude's phase convention;
    without it the forward amplitude's imaginary part picks up a cross term.
    """
    if point.statistics is not Statistics.DISTINGUISHABLE:
        raise ValueError("optical theorem check applies to distinguishable statistics")
    chans, _, _ = resolve_channels(point, provider)
    lhs = Statistics.DISTINGUISHABLE.prefactor / point.ka * math.fsum(c.sin2 for c in chans)
    f0 = _amplitude_from_channels(chans, point.statistics, point.ka, [0.0])[0]
    rhs = 2.0 * math.sqrt(2.0 * math.pi) / math.sqrt(point.ka) * float((cmath.exp(-0.25j * math.pi) * f0).imag)
    return OpticalTheoremCheck(lhs, rhs, abs(lhs - rhs) / lhs if lhs else abs(rhs))


def asymptotic_references(ka: float) -> AsymptoticReferences:
    ka = float(ka)
    if not (ka > 0.0 and math.isfinite(ka)):
        raise ValueError(f"ka must be positive and finite, got {ka!r}")
    log_half = math.log(0.5 * ka)
    low = math.pi ** 2 / (ka * log_half ** 2) if ka != 2.0 else math.inf
    loglinear = (8.0 / math.pi) / (ka * math.log(ka)) if ka != 1.0 else math.inf
    return AsymptoticReferences(
        ka=ka,
        low_energy_sigma=low,
        low_energy_valid=ka < LOW_ENERGY_KA_LIMIT,
        loglinear_sigma=loglinear,
    )
