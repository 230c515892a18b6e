"""Cylindrical Bessel functions J_alpha(x), N_alpha(x) for real order alpha >= 0, x > 0.

Every evaluation reduces the order to a base mu in [-1/2, 1/2) and builds a
ladder of orders mu, mu + 1, ...:

* N on the ladder comes from upward recurrence, which is stable for the
  second kind.  The two starting values N_mu, N_{mu+1} come from one of four
  base evaluators (the ``regime``): Temme's series for x < 2, Steed's
  continued fraction for 2 <= x < 25, Hankel's asymptotic expansion for
  x >= 25, or the elementary closed forms when mu is a half-integer.
* J on the ladder comes from Miller-style downward recurrence started from
  the continued fraction for J'/J at the top order, then normalised through
  the Wronskian J_{mu+1} N_mu - J_mu N_{mu+1} = 2/(pi x).

Because the reduced order never approaches an integer from the connection
formula side, integer orders need no special treatment.  The connection
formula is still available as :func:`neumann_connection`, an independent
small-argument route used for cross-checks.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "BesselDomainError",
    "BesselPrecisionError",
    "BesselOrder",
    "BesselPair",
    "OrderKind",
    "Regime",
    "bessel_j",
    "bessel_n",
    "bessel_pair",
    "bessel_ladder",
    "bessel_j_series",
    "neumann_connection",
    "HALF_INTEGER_TOL",
    "INTEGER_GUARD",
]

EPS = 1.0e-16
FPMIN = 1.0e-300
RESCALE = 1.0e200
SERIES_XMAX = 2.0
ASYMPTOTIC_XMIN = 25.0
MAXIT = 1_000_000
TURNING_MARGIN = 16

HALF_INTEGER_TOL = 1.0e-12
INTEGER_GUARD = 1.0e-6

EULER_GAMMA = 0.5772156649015329

# Taylor coefficients of 1/Gamma(1 + z) about z = 0.
_RGAMMA1_COEFFS = (
    1.0,
    0.5772156649015329,
    -0.6558780715202539,
    -0.04200263503409524,
    0.16653861138229148,
    -0.04219773455554433,
    -0.009621971527876973,
    0.0072189432466631,
    -0.0011651675918590652,
    -0.00021524167411495098,
    0.0001280502823881162,
    -2.013485478078824e-05,
    -1.2504934821426706e-06,
    1.133027231981696e-06,
    -2.056338416977607e-07,
    6.116095104481416e-09,
    5.002007644469223e-09,
    -1.18127457048702e-09,
    1.0434267116911005e-10,
    7.782263439905071e-12,
    -3.696805618642206e-12,
    5.100370287454476e-13,
    -2.0583260535665066e-14,
    -5.348122539423018e-15,
    1.2267786282382608e-15,
)


class BesselDomainError(ValueError):
    """Order or argument outside alpha >= 0, x > 0 (or non-finite)."""


class BesselPrecisionError(ArithmeticError):
    """An evaluation route was asked for a point where it cannot deliver digits."""


class OrderKind(enum.Enum):
    INTEGER = "integer"
    HALF_INTEGER = "half_integer"
    GENERIC = "generic"


class Regime(str, enum.Enum):
    SERIES = "series"
    CONTINUED_FRACTION = "continued_fraction"
    ASYMPTOTIC = "asymptotic"
    CLOSED_FORM = "closed_form"


@dataclass(frozen=True)
class BesselOrder:
    alpha: float

    def __post_init__(self):
        a = float(self.alpha)
        if not math.isfinite(a) or a < 0.0:
            raise BesselDomainError(f"order must be finite and >= 0, got {self.alpha!r}")
        object.__setattr__(self, "alpha", a)

    @property
    def kind(self) -> OrderKind:
        return classify_order(self.alpha)


@dataclass(frozen=True)
class BesselPair:
    j: float
    n: float
    regime: Regime


def classify_order(alpha: float, tol: float = HALF_INTEGER_TOL) -> OrderKind:
    if abs(alpha - round(alpha)) <= tol:
        return OrderKind.INTEGER
    if abs(alpha - math.floor(alpha) - 0.5) <= tol:
        return OrderKind.HALF_INTEGER
    return OrderKind.GENERIC


def _check(alpha, x) -> tuple[float, float]:
    if isinstance(alpha, BesselOrder):
        alpha = alpha.alpha
    alpha = float(alpha)
    x = float(x)
    if not math.isfinite(alpha) or alpha < 0.0:
        raise BesselDomainError(f"order must be finite and >= 0, got {alpha!r}")
    if not math.isfinite(x) or x <= 0.0:
        raise BesselDomainError(f"argument must be finite and > 0, got {x!r}")
    return alpha, x


# ---------------------------------------------------------------------------
# base evaluators: return (N_mu, N_{mu+1}) for |mu| <= 1/2


def _temme_gammas(mu: float) -> tuple[float, float, float, float]:
    """Return gam1, gam2, 1/Gamma(1+mu), 1/Gamma(1-mu).

    gam1 = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu) is taken from the odd
    Taylor coefficients directly, so there is no cancellation near mu = 0.
    """
    mu2 = mu * mu
    even = 0.0
    for c in reversed(_RGAMMA1_COEFFS[0::2]):
        even = even * mu2 + c
    odd = 0.0
    for c in reversed(_RGAMMA1_COEFFS[1::2]):
        odd = odd * mu2 + c
    return -odd, even, even + mu * odd, even - mu * odd


def _temme_series(mu: float, x: float) -> tuple[float, float]:
    x2 = 0.5 * x
    pimu = math.pi * mu
    fact = 1.0 if abs(pimu) < EPS else pimu / math.sin(pimu)
    d = -math.log(x2)
    e = mu * d
    fact2 = 1.0 if abs(e) < EPS else math.sinh(e) / e
    gam1, gam2, gampl, gammi = _temme_gammas(mu)
    ff = 2.0 / math.pi * fact * (gam1 * math.cosh(e) + gam2 * fact2 * d)
    e = math.exp(e)
    p = e / (gampl * math.pi)
    q = 1.0 / (e * math.pi * gammi)
    pimu2 = 0.5 * pimu
    fact3 = 1.0 if abs(pimu2) < EPS else math.sin(pimu2) / pimu2
    r = math.pi * pimu2 * fact3 * fact3
    c = 1.0
    d = -x2 * x2
    total = ff + r * q
    total1 = p
    mu2 = mu * mu
    i = 1
    while True:
        ff = (i * ff + p + q) / (i * i - mu2)
        c *= d / i
        p /= i - mu
        q /= i + mu
        delta = c * (ff + r * q)
        total += delta
        delta1 = c * p - i * delta
        total1 += delta1
        if abs(delta) < (1.0 + abs(total)) * EPS:
            break
        i += 1
        if i > MAXIT:
            raise BesselPrecisionError("Temme series failed to converge")
    return -total, -total1 * (2.0 / x)


def _steed(mu: float, x: float, f: float, sign: float) -> tuple[float, float]:
    """Steed's CF2 for (J' + iN')/(J + iN); f = J'_mu/J_mu from the downward sweep."""
    xi = 1.0 / x
    a = 0.25 - mu * mu
    pq = complex(-0.5 * xi, 1.0)
    b = complex(2.0 * x, 2.0)
    c = b + 1j * a * xi / pq
    d = 1.0 / b
    dl = c * d
    pq = pq * dl
    i = 2
    while True:
        a += 2 * (i - 1)
        b += 2j
        d = a * d + b
        if abs(d) < FPMIN:
            d = FPMIN
        c = b + a / c
        if abs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        dl = c * d
        pq *= dl
        if abs(dl.real - 1.0) + abs(dl.imag) < EPS:
            break
        i += 1
        if i > MAXIT:
            raise BesselPrecisionError("Steed continued fraction failed to converge")
    p, q = pq.real, pq.imag
    w = 2.0 / (math.pi * x)
    gam = (p - f) / q
    jmu = math.copysign(math.sqrt(w / ((p - f) * gam + q)), sign)
    nmu = jmu * gam
    nmup = nmu * p + jmu * q
    n1 = mu * xi * nmu - nmup
    return nmu, n1


def _hankel(nu: float, x: float) -> tuple[float, float]:
    """Large-argument expansion; returns (J_nu, N_nu)."""
    m4 = 4.0 * nu * nu
    p = 1.0
    q = 0.0
    term = 1.0
    inv8x = 1.0 / (8.0 * x)
    k = 1
    prev = math.inf
    while True:
        term *= (m4 - (2 * k - 1) ** 2) * inv8x / k
        if abs(term) > prev:
            break
        if k % 2 == 1:
            q += term if (k // 2) % 2 == 0 else -term
        else:
            p += term if (k // 2) % 2 == 0 else -term
        if abs(term) < EPS * 1e-2 or term == 0.0:
            break
        prev = abs(term)
        k += 1
    # chi = x - (nu/2 + 1/4) pi, expanded to avoid reducing a large x - phase
    phase = (0.5 * nu + 0.25) * math.pi
    cx, sx = math.cos(x), math.sin(x)
    cp, sp = math.cos(phase), math.sin(phase)
    cchi = cx * cp + sx * sp
    schi = sx * cp - cx * sp
    amp = math.sqrt(2.0 / (math.pi * x))
    return amp * (p * cchi - q * schi), amp * (p * schi + q * cchi)


def _closed_form_half(x: float) -> tuple[float, float, float, float]:
    """(J_{-1/2}, N_{-1/2}, J_{1/2}, N_{1/2})."""
    amp = math.sqrt(2.0 / (math.pi * x))
    s, c = math.sin(x), math.cos(x)
    return amp * c, amp * s, amp * s, -amp * c


# ---------------------------------------------------------------------------
# ladders


def _cf1(nu: float, x: float) -> tuple[float, float]:
    """Continued fraction for J'_nu(x)/J_nu(x) (modified Lentz), plus sign of J_nu."""
    xi = 1.0 / x
    xi2 = 2.0 * xi
    h = nu * xi
    if h < FPMIN:
        h = FPMIN
    b = xi2 * nu
    d = 0.0
    c = h
    sign = 1.0
    for _ in range(MAXIT):
        b += xi2
        d = b - d
        if abs(d) < FPMIN:
            d = FPMIN
        c = b - 1.0 / c
        if abs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        delta = c * d
        h *= delta
        if d < 0.0:
            sign = -sign
        if abs(delta - 1.0) < EPS:
            return h, sign
    raise BesselPrecisionError(f"CF1 failed to converge for nu={nu}, x={x}")


def _downward(mu: float, top: int, x: float) -> list[float]:
    """Unnormalised J_{mu+k}(x), k = 0..top, by recurrence from order mu+top."""
    nu = mu + top
    h, sign = _cf1(nu, x)
    u = [0.0] * (top + 2)
    u[top] = sign
    u[top + 1] = (nu / x - h) * sign
    for k in range(top, 0, -1):
        val = (2.0 * (mu + k) / x) * u[k] - u[k + 1]
        u[k - 1] = val
        if abs(val) > RESCALE:
            inv = 1.0 / RESCALE
            for i in range(k - 1, top + 2):
                u[i] *= inv
    return u


def _ladder(alpha0: float, count: int, x: float) -> tuple[np.ndarray, np.ndarray, Regime]:
    nl = int(math.floor(alpha0 + 0.5))
    mu = alpha0 - nl
    half = abs(mu + 0.5) <= HALF_INTEGER_TOL
    if half:
        mu = -0.5
    top = nl + count - 1
    # CF1 loses ~x ulps below the turning point, so start the sweep above it
    start = max(top, 1, int(math.ceil(x - mu)) + TURNING_MARGIN)
    u = _downward(mu, start, x)

    if half:
        _, n0, _, n1 = _closed_form_half(x)
        regime = Regime.CLOSED_FORM
    elif x < SERIES_XMAX:
        n0, n1 = _temme_series(mu, x)
        regime = Regime.SERIES
    elif x >= ASYMPTOTIC_XMIN:
        _, n0 = _hankel(mu, x)
        _, n1 = _hankel(mu + 1.0, x)
        regime = Regime.ASYMPTOTIC
    else:
        f = mu / x - u[1] / u[0] if u[0] != 0.0 else math.copysign(math.inf, -u[1])
        n0, n1 = _steed(mu, x, f, math.copysign(1.0, u[0]))
        regime = Regime.CONTINUED_FRACTION

    scale = (2.0 / (math.pi * x)) / (u[1] * n0 - u[0] * n1)

    j = np.empty(count)
    n = np.empty(count)
    for i in range(count):
        j[i] = scale * u[nl + i]

    # upward recurrence for N from (N_mu, N_{mu+1}); index i holds order mu + nl + i
    if nl == 0:
        n[0] = n0
    if 0 <= 1 - nl < count:
        n[1 - nl] = n1
    prev, cur = n0, n1
    for k in range(1, top):
        if math.isinf(cur):
            nxt = cur
        else:
            nxt = (2.0 * (mu + k) / x) * cur - prev
            if not math.isfinite(nxt):
                nxt = math.copysign(math.inf, cur)
        prev, cur = cur, nxt
        idx = k + 1 - nl
        if 0 <= idx < count:
            n[idx] = cur
    return j, n, regime


def bessel_ladder(alpha0: float, count: int, x: float) -> tuple[np.ndarray, np.ndarray, Regime]:
    """J and N at orders alpha0, alpha0 + 1, ..., alpha0 + count - 1.

    One base evaluation serves the whole ladder, which is what makes partial
    wave sums with hundreds of channels cheap.  N overflows to -inf at large
    order and small argument; J underflows to 0 there.
    """
    alpha0, x = _check(alpha0, x)
    if count < 1:
        raise ValueError("count must be >= 1")
    return _ladder(alpha0, int(count), x)


def bessel_pair(order, x) -> BesselPair:
    """J_alpha(x) and N_alpha(x) together, tagged with the base regime used."""
    alpha, x = _check(order, x)
    j, n, regime = _ladder(alpha, 1, x)
    return BesselPair(float(j[0]), float(n[0]), regime)


def bessel_j(order, x) -> float:
    """Bessel function of the first kind J_alpha(x)."""
    return bessel_pair(order, x).j


def bessel_n(order, x) -> float:
    """Bessel function of the second kind N_alpha(x) (Neumann / Weber Y)."""
    return bessel_pair(order, x).n


# ---------------------------------------------------------------------------
# independent small-argument route


def bessel_j_series(nu: float, x: float) -> float:
    """Ascending power series for J_nu(x), any real nu not a negative integer.

    Accumulated with math.fsum.  Loses digits to cancellation once x/2 grows
    past sqrt(nu + 1); intended for x of order a few units.
    """
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise BesselDomainError(f"argument must be finite and > 0, got {x!r}")
    half = 0.5 * x
    log_half = math.log(half)
    terms = []
    s = 0
    while True:
        g = s + nu + 1.0
        if g > 0.0:
            t = math.exp((2 * s + nu) * log_half - math.lgamma(s + 1.0) - math.lgamma(g))
        elif g == math.floor(g):
            t = 0.0  # 1/Gamma has zeros at the non-positive integers
        else:
            t = math.exp((2 * s + nu) * log_half - math.lgamma(s + 1.0)) / math.gamma(g)
        if s % 2:
            t = -t
        terms.append(t)
        if s * (s + nu) > half * half and abs(t) <= 1e-3 * EPS * abs(math.fsum(terms)):
            break
        s += 1
        if s > 10000:
            raise BesselPrecisionError("ascending series failed to converge")
    return math.fsum(terms)


def neumann_connection(alpha, x) -> float:
    """N_alpha(x) = (J_alpha cos(alpha pi) - J_{-alpha}) / sin(alpha pi) from series.

    Raises BesselPrecisionError inside the integer guard band
    |alpha - round(alpha)| < INTEGER_GUARD, where sin(alpha pi) -> 0 wipes out
    the result; callers must reroute to :func:`bessel_n` there.
    """
    alpha, x = _check(alpha, x)
    if abs(alpha - round(alpha)) < INTEGER_GUARD:
        raise BesselPrecisionError(
            f"order {alpha} lies in the integer guard band (+-{INTEGER_GUARD}); "
            "the connection formula is ill-conditioned here"
        )
    jp = bessel_j_series(alpha, x)
    jm = bessel_j_series(-alpha, x)
    return (jp * math.cos(alpha * math.pi) - jm) / math.sin(alpha * math.pi)
