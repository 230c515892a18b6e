import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abscatter.checks import parseval_residual
from abscatter.partial_wave import (
    ChannelShift,
    FluxParameter,
    ScatteringPoint,
    Statistics,
    TruncationError,
    TruncationPolicy,
    amplitude,
    amplitudes,
    asymptotic_references,
    channel_sin2,
    channel_window,
    differential_cross_section,
    hard_cap,
    hard_disk_phase_shift,
    optical_theorem_check,
    resolve_channels,
    total_cross_section,
)

EULER_GAMMA = 0.5772156649015329
J0_FIRST_ZERO = 2.404825557695773

# brute-force sums to |m| <= 60 in 40-digit arithmetic (tests/data/make_oracle.py)
F0_KA2_MU03 = complex(-1.512151539528205684, 0.824381952127511291)
DSIGMA_KA2_MU03_PI3 = 0.891919318063464236
DSIGMA_BOSON_KA2_MU03_PI3 = 2.068140410423278034
SIN2_M0_KA1 = 0.986871614207637243
SIGMA_KA2_MU03 = 5.856820914806517052

STATS = list(Statistics)


def sigma(ka, mu0, stats=Statistics.DISTINGUISHABLE, **kw):
    return total_cross_section(ScatteringPoint(ka, mu0, stats, **kw)).sigma_t


def rel(a, b):
    return abs(a - b) / max(abs(a), abs(b))


# --- types -----------------------------------------------------------------

def test_flux_parameter():
    f = FluxParameter(-2.3)
    assert f.order_for_channel(2) == pytest.approx(0.3)
    assert f.order_for_channel(-1) == pytest.approx(3.3)
    with pytest.raises(ValueError):
        FluxParameter(math.inf)


@pytest.mark.parametrize("ka", [0.0, -1.0, math.nan, math.inf])
def test_point_rejects_bad_ka(ka):
    with pytest.raises(ValueError):
        ScatteringPoint(ka, 0.0)


def test_truncation_policy_validation():
    assert TruncationPolicy.auto().mode == "auto"
    assert TruncationPolicy.fixed(5).m_max == 5
    for bad in (dict(mode="sometimes"), dict(mode="fixed", m_max=0), dict(tail_tol=0.0),
                dict(tail_tol=-1e-3)):
        with pytest.raises(ValueError):
            TruncationPolicy(**bad)


def test_statistics_channel_sets():
    assert Statistics("boson").includes(4) and not Statistics.BOSON.includes(-3)
    assert Statistics.FERMION.includes(-3) and not Statistics.FERMION.includes(0)
    assert Statistics.DISTINGUISHABLE.prefactor == 4.0
    assert Statistics.BOSON.prefactor == Statistics.FERMION.prefactor == 16.0


def test_channel_shift_fills_sincos():
    c = ChannelShift(0, 0.0, 0.4, math.sin(0.4) ** 2)
    assert c.sincos == pytest.approx(math.sin(0.4) * math.cos(0.4))


# --- phase shifts ----------------------------------------------------------

def test_phase_shift_at_j0_zero():
    c = hard_disk_phase_shift(0, 0.0, J0_FIRST_ZERO)
    assert abs(math.remainder(c.delta, math.pi)) < 1e-14
    assert c.sin2 < 1e-28


def test_phase_shift_low_energy():
    ka = 1e-4
    c = hard_disk_phase_shift(0, 0.0, ka)
    # exact small-argument form keeps Euler's constant
    assert math.tan(c.delta) == pytest.approx(math.pi / (2 * (math.log(ka / 2) + EULER_GAMMA)), rel=1e-7)
    assert -0.18 < c.delta < -0.15
    # the bare logarithmic approximation is within 5% once ka is small enough
    for ka in (1e-6, 1e-8):
        c = hard_disk_phase_shift(0, 0.0, ka)
        assert rel(math.tan(c.delta), math.pi / (2 * math.log(ka / 2))) < 0.05


def test_phase_shift_half_flux_closed_form():
    c = hard_disk_phase_shift(0, 0.5, 1.0)
    expected = math.atan2(math.sin(1.0), -math.cos(1.0))
    assert abs(math.remainder(c.delta - expected, math.pi)) < 1e-14
    assert -math.pi / 2 < c.delta <= math.pi / 2


@settings(max_examples=200, deadline=None)
@given(st.integers(-40, 40), st.floats(-3, 3), st.floats(1e-3, 200))
def test_channel_shift_invariants(m, mu0, ka):
    c = hard_disk_phase_shift(m, mu0, ka)
    assert 0.0 <= c.sin2 <= 1.0
    assert abs(c.sin2 - math.sin(c.delta) ** 2) <= 1e-14
    assert -math.pi / 2 < c.delta <= math.pi / 2
    assert c.alpha == pytest.approx(abs(m + mu0))


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-3, 300))
def test_half_order_sin2_is_sin_squared(x):
    assert channel_sin2(0, 0.5, x) == pytest.approx(math.sin(x) ** 2, abs=1e-13)


def test_channel_sin2_oracle():
    assert channel_sin2(0, 0.0, 1.0) == pytest.approx(SIN2_M0_KA1, rel=1e-13)


def test_channel_sin2_decays_past_turning_point():
    ka = 20.0
    vals = [channel_sin2(m, 0.3, ka) for m in range(25, 80)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 1e-12


def test_channel_window_matches_single_channels():
    win = channel_window(-0.7, 3.5, -12, 12)
    assert [c.m for c in win] == list(range(-12, 13))
    for c in win:
        s = hard_disk_phase_shift(c.m, -0.7, 3.5)
        assert c.sin2 == pytest.approx(s.sin2, rel=1e-12, abs=1e-300)


# --- total cross section ---------------------------------------------------

def test_total_cross_section_oracle():
    res = total_cross_section(ScatteringPoint(2.0, 0.3))
    assert res.sigma_t == pytest.approx(SIGMA_KA2_MU03, rel=1e-12)
    assert res.normalized == res.sigma_t / 4.0
    assert res.tail_bound <= 1e-12
    assert len(res.channels) == 2 * res.m_used + 1


def test_sigma_is_prefactor_times_included_sum():
    for s in STATS:
        res = total_cross_section(ScatteringPoint(1.7, -0.4, s))
        total = math.fsum(c.sin2 for c in res.channels if s.includes(c.m))
        assert res.sigma_t == s.prefactor / 1.7 * total
        assert res.sigma_t >= 0


def test_high_energy_limit():
    assert total_cross_section(ScatteringPoint(500.0, 0.0)).normalized == pytest.approx(1.0, abs=0.02)


def test_low_energy_limit():
    ratios = [sigma(ka, 0.0) * ka * math.log(ka / 2) ** 2 / math.pi ** 2 for ka in (1e-4, 1e-5, 1e-6)]
    assert all(0.9 <= r <= 1.1 for r in ratios)
    assert ratios[0] > ratios[1] > ratios[2]


@pytest.mark.parametrize("s", STATS)
def test_integer_flux_reduces_to_free_case(s):
    base = sigma(1.3, 0.0, s)
    shifted = sigma(1.3, 2.0, s)
    assert rel(base, shifted) < 1e-12


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, 40), st.floats(-2.5, 2.5))
def test_periodicity_and_reflection(ka, mu0):
    d = sigma(ka, mu0)
    assert rel(d, sigma(ka, mu0 + 1.0)) <= 1e-10
    assert rel(d, sigma(ka, -mu0)) <= 1e-10
    for s in (Statistics.BOSON, Statistics.FERMION):
        v = sigma(ka, mu0, s)
        assert rel(v, sigma(ka, mu0 + 2.0, s)) <= 1e-10
        assert rel(v, sigma(ka, -mu0, s)) <= 1e-10


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, 50), st.floats(-2, 2))
def test_partition_identity(ka, mu0):
    d, b, f = (sigma(ka, mu0, s) for s in STATS)
    assert rel(b + f, 4 * d) <= 1e-12


def test_boson_fermion_swap_under_unit_shift():
    assert rel(sigma(0.8, 0.3, Statistics.BOSON), sigma(0.8, 1.3, Statistics.FERMION)) < 1e-12


def test_suppression_features():
    assert sigma(0.1, 0.5) < 0.3 * sigma(0.1, 0.0)
    assert sigma(0.1, 1.0, Statistics.BOSON) < 0.05 * sigma(0.1, 0.0, Statistics.BOSON)
    assert sigma(0.1, 0.0, Statistics.FERMION) < 0.05 * sigma(0.1, 1.0, Statistics.FERMION)


# --- truncation ------------------------------------------------------------

@pytest.mark.parametrize("ka", [1e-3, 0.5, 5.0, 50.0, 500.0])
def test_auto_truncation_bounds_tail(ka):
    chans, m_used, tail = resolve_channels(ScatteringPoint(ka, 0.37))
    assert tail <= 1e-12
    assert chans[0].sin2 < 1e-12 and chans[-1].sin2 < 1e-12
    assert m_used <= hard_cap(ka)


@pytest.mark.parametrize("ka", [5.0, 50.0, 500.0])
def test_channels_die_within_cube_root_margin(ka):
    m = math.floor(ka)
    while channel_sin2(m, 0.37, ka) >= 1e-12:
        m += 1
    assert m - ka <= 6 * ka ** (1 / 3)


def test_auto_truncation_respects_tolerance():
    loose = total_cross_section(ScatteringPoint(10.0, 0.2, truncation=TruncationPolicy.auto(1e-4)))
    tight = total_cross_section(ScatteringPoint(10.0, 0.2))
    assert loose.m_used <= tight.m_used
    assert loose.tail_bound <= 1e-4
    assert rel(loose.sigma_t, tight.sigma_t) < 1e-3


def test_fixed_truncation_uses_given_window():
    res = total_cross_section(ScatteringPoint(2.0, 0.3, truncation=TruncationPolicy.fixed(3)))
    assert res.m_used == 3
    assert [c.m for c in res.channels] == list(range(-3, 4))
    assert res.sigma_t < SIGMA_KA2_MU03


def test_fixed_truncation_inside_turning_point_has_no_bound():
    res = total_cross_section(ScatteringPoint(30.0, 0.0, truncation=TruncationPolicy.fixed(5)))
    assert res.tail_bound == math.inf


def test_truncation_failure_raises():
    # a provider whose channels never decay cannot be truncated
    def flat(m, mu0, ka):
        return ChannelShift(m, abs(m + mu0), 0.1, math.sin(0.1) ** 2)

    with pytest.raises(TruncationError):
        total_cross_section(ScatteringPoint(1.0, 0.0), provider=flat)


# --- custom providers ------------------------------------------------------

def test_provider_seam():
    def hard_disk(m, mu0, ka):
        return hard_disk_phase_shift(m, mu0, ka)

    point = ScatteringPoint(3.0, 0.25)
    assert total_cross_section(point, provider=hard_disk).sigma_t == pytest.approx(
        total_cross_section(point).sigma_t, rel=1e-13)

    def s_wave_only(m, mu0, ka):
        delta = 0.3 if m == 0 else 0.0
        return ChannelShift(m, abs(m + mu0), delta, math.sin(delta) ** 2)

    res = total_cross_section(ScatteringPoint(2.0, 0.0), provider=s_wave_only)
    assert res.sigma_t == pytest.approx(4 / 2.0 * math.sin(0.3) ** 2, rel=1e-15)


# --- amplitudes ------------------------------------------------------------

def test_forward_amplitude_oracle():
    f = amplitude(ScatteringPoint(2.0, 0.3), 0.0).f
    assert abs(f - F0_KA2_MU03) <= 1e-12 * abs(F0_KA2_MU03)


def test_differential_oracle():
    assert differential_cross_section(ScatteringPoint(2.0, 0.3), math.pi / 3) == pytest.approx(
        DSIGMA_KA2_MU03_PI3, rel=1e-12)
    assert differential_cross_section(ScatteringPoint(2.0, 0.3, "boson"), math.pi / 3) == pytest.approx(
        DSIGMA_BOSON_KA2_MU03_PI3, rel=1e-12)


def test_differential_scalar_and_vector():
    point = ScatteringPoint(1.5, 0.2)
    phi = np.linspace(-3, 3, 7)
    vec = differential_cross_section(point, phi)
    assert vec.shape == (7,)
    assert isinstance(differential_cross_section(point, 0.4), float)
    assert vec[2] == pytest.approx(differential_cross_section(point, phi[2]), rel=1e-15)


def test_integer_flux_leaves_modulus_unchanged():
    phi = np.linspace(-math.pi, math.pi, 33)
    window = TruncationPolicy.fixed(40)
    f0 = amplitudes(ScatteringPoint(2.5, 0.0, truncation=window), phi)
    f1 = amplitudes(ScatteringPoint(2.5, 1.0, truncation=window), phi)
    assert np.allclose(np.abs(f0), np.abs(f1), rtol=1e-12, atol=0)


@pytest.mark.parametrize("s", [Statistics.BOSON, Statistics.FERMION])
def test_identical_particles_symmetrize(s):
    phi = np.linspace(-math.pi, math.pi, 17)
    d = amplitudes(ScatteringPoint(1.2, 0.35), phi)
    d_shift = amplitudes(ScatteringPoint(1.2, 0.35), phi + math.pi)
    sign = 1 if s is Statistics.BOSON else -1
    assert np.allclose(amplitudes(ScatteringPoint(1.2, 0.35, s), phi), d + sign * d_shift,
                       rtol=1e-12, atol=1e-14)
    dsig = differential_cross_section(ScatteringPoint(1.2, 0.35, s), phi)
    dsig_pi = differential_cross_section(ScatteringPoint(1.2, 0.35, s), phi + math.pi)
    assert np.allclose(dsig, dsig_pi, rtol=1e-12)


@pytest.mark.parametrize("ka,mu0", [(2.0, 0.3), (10.0, 0.7), (0.2, -1.6), (40.0, 0.45)])
@pytest.mark.parametrize("s", STATS)
def test_parseval(ka, mu0, s):
    assert parseval_residual(ka, mu0, s) <= 1e-8


@pytest.mark.parametrize("ka,mu0", [(2.0, 0.3), (10.0, 0.0), (0.01, 0.9), (120.0, -0.25)])
def test_optical_theorem(ka, mu0):
    chk = optical_theorem_check(ScatteringPoint(ka, mu0))
    assert chk.residual <= 1e-10
    assert chk.lhs == pytest.approx(sigma(ka, mu0), rel=1e-15)


def test_optical_theorem_needs_phase_rotation():
    point = ScatteringPoint(2.0, 0.3)
    f0 = amplitude(point, 0.0).f
    bare = 2 * math.sqrt(2 * math.pi) / math.sqrt(2.0) * f0.imag
    assert rel(bare, sigma(2.0, 0.3)) > 1e-2
    rotated = 2 * math.sqrt(2 * math.pi) / math.sqrt(2.0) * (cmath.exp(-0.25j * math.pi) * f0).imag
    assert rel(rotated, sigma(2.0, 0.3)) < 1e-12


def test_optical_theorem_integer_flux_matches_free_case():
    a = optical_theorem_check(ScatteringPoint(3.0, 0.0))
    b = optical_theorem_check(ScatteringPoint(3.0, 1.0))
    assert a.lhs == pytest.approx(b.lhs, rel=1e-13)
    assert b.residual <= 1e-10


def test_optical_theorem_rejects_identical_particles():
    with pytest.raises(ValueError):
        optical_theorem_check(ScatteringPoint(1.0, 0.0, Statistics.BOSON))


# --- reference curves ------------------------------------------------------

def test_asymptotic_references():
    r = asymptotic_references(1e-6)
    assert r.high_energy_sigma == 4.0
    assert r.low_energy_sigma == pytest.approx(math.pi ** 2 / (1e-6 * math.log(5e-7) ** 2), rel=1e-15)
    assert r.low_energy_valid
    assert sigma(1e-6, 0.0) / r.low_energy_sigma == pytest.approx(1.0, abs=0.1)
    assert r.loglinear_sigma < 0
    assert not asymptotic_references(0.5).low_energy_valid
    assert asymptotic_references(3.0).high_energy_sigma == 4.0
    assert asymptotic_references(2.0).low_energy_sigma == math.inf
    with pytest.raises(ValueError):
        asymptotic_references(0.0)
