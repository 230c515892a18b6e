"""Built-in consistency battery behind ``abscatter check``.

Each item returns a CheckResult; none of them raise on a failed identity.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from .partial_wave import (
    ScatteringPoint,
    Statistics,
    differential_cross_section,
    optical_theorem_check,
    total_cross_section,
)
from .specfun import bessel_pair

# extended-precision values (50-digit evaluation, rounded)
J0_AT_1 = 0.76519768655796655145
N0_AT_1 = 0.088256964215676957983

DEFAULT_POINTS = ((0.5, 0.25), (2.0, 0.3), (10.0, 0.7), (30.0, -1.4))

WRONSKIAN_TOL = 1e-9
HALF_INTEGER_TOL = 1e-12
REFERENCE_TOL = 1e-12
PERIODICITY_TOL = 1e-10
PARTITION_TOL = 1e-12
PARSEVAL_TOL = 1e-8
OPTICAL_TOL = 1e-10
PARSEVAL_NODES = 4096


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst: float
    tol: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" {self.detail}" if self.detail else ""
        return f"{status} {self.name}: worst={self.worst:.3e} tol={self.tol:.1e}{extra}"


def _rel(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale else 0.0


def wronskian_residual(alpha: float, x: float) -> float:
    """|J N' - J' N - 2/(pi x)| relative to 2/(pi x), derivatives from recurrences."""
    p = bessel_pair(alpha, x)
    p1 = bessel_pair(alpha + 1.0, x)
    if alpha >= 1.0:
        pm = bessel_pair(alpha - 1.0, x)
        jd = 0.5 * (pm.j - p1.j)
        nd = 0.5 * (pm.n - p1.n)
    else:
        jd = alpha / x * p.j - p1.j
        nd = alpha / x * p.n - p1.n
    w = 2.0 / (math.pi * x)
    return abs(p.j * nd - jd * p.n - w) / w


def check_wronskian(n: int = 12) -> CheckResult:
    worst = 0.0
    where = None
    for a in np.linspace(0.0, 50.0, n):
        for x in np.geomspace(0.01, 500.0, n):
            r = wronskian_residual(float(a), float(x))
            if not r <= worst:
                worst, where = r, (float(a), float(x))
    return CheckResult("wronskian", worst <= WRONSKIAN_TOL, worst, WRONSKIAN_TOL,
                       f"at alpha={where[0]:.4g}, x={where[1]:.4g}" if where else "")


def half_integer_closed_forms(alpha: float, x: float) -> tuple[float, float]:
    amp = math.sqrt(2.0 / (math.pi * x))
    s, c = math.sin(x), math.cos(x)
    if alpha == 0.5:
        return amp * s, -amp * c
    if alpha == 1.5:
        return amp * (s / x - c), -amp * (c / x + s)
    if alpha == 2.5:
        return amp * ((3.0 / x**2 - 1.0) * s - 3.0 * c / x), -amp * ((3.0 / x**2 - 1.0) * c + 3.0 * s / x)
    raise ValueError("closed forms tabulated for 1/2, 3/2, 5/2 only")


def check_half_integer(n: int = 40) -> CheckResult:
    # explicit forms cancel badly for x < 1, so the battery samples x in [1, 100]
    worst = 0.0
    for a in (0.5, 1.5, 2.5):
        for x in np.geomspace(1.0, 100.0, n):
            p = bessel_pair(a, float(x))
            j, nn = half_integer_closed_forms(a, float(x))
            worst = max(worst, _rel(p.j, j), _rel(p.n, nn))
    return CheckResult("half_integer_closed_forms", worst <= HALF_INTEGER_TOL, worst, HALF_INTEGER_TOL)


def check_reference_values() -> CheckResult:
    p = bessel_pair(0.0, 1.0)
    worst = max(_rel(p.j, J0_AT_1), _rel(p.n, N0_AT_1))
    return CheckResult("j0_n0_reference", worst <= REFERENCE_TOL, worst, REFERENCE_TOL)


def _sigma(ka, mu0, stats=Statistics.DISTINGUISHABLE) -> float:
    return total_cross_section(ScatteringPoint(ka, mu0, stats)).sigma_t


def check_periodicity(points) -> CheckResult:
    worst = 0.0
    for ka, mu0 in points:
        worst = max(worst, _rel(_sigma(ka, mu0), _sigma(ka, mu0 + 1.0)))
        for s in (Statistics.BOSON, Statistics.FERMION):
            worst = max(worst, _rel(_sigma(ka, mu0, s), _sigma(ka, mu0 + 2.0, s)))
    return CheckResult("flux_periodicity", worst <= PERIODICITY_TOL, worst, PERIODICITY_TOL)


def check_reflection(points) -> CheckResult:
    worst = 0.0
    for ka, mu0 in points:
        for s in Statistics:
            worst = max(worst, _rel(_sigma(ka, mu0, s), _sigma(ka, -mu0, s)))
    return CheckResult("reflection", worst <= PERIODICITY_TOL, worst, PERIODICITY_TOL)


def check_partition(points) -> CheckResult:
    worst = 0.0
    for ka, mu0 in points:
        d, b, f = (_sigma(ka, mu0, s) for s in Statistics)
        worst = max(worst, _rel(b + f, 4.0 * d))
    return CheckResult("partition_identity", worst <= PARTITION_TOL, worst, PARTITION_TOL)


def parseval_residual(ka: float, mu0: float, stats=Statistics.DISTINGUISHABLE,
                      nodes: int = PARSEVAL_NODES) -> float:
    point = ScatteringPoint(ka, mu0, stats)
    phi = -math.pi + 2.0 * math.pi * np.arange(1, nodes + 1) / nodes
    quad = float(np.sum(differential_cross_section(point, phi))) * 2.0 * math.pi / nodes
    return _rel(quad, total_cross_section(point).sigma_t)


def check_parseval(points) -> CheckResult:
    worst = max(parseval_residual(ka, mu0, s) for ka, mu0 in points for s in Statistics)
    return CheckResult("parseval", worst <= PARSEVAL_TOL, worst, PARSEVAL_TOL)


def check_optical(points) -> CheckResult:
    worst = 0.0
    for ka, mu0 in points:
        worst = max(worst, optical_theorem_check(ScatteringPoint(ka, mu0)).residual)
    return CheckResult("optical_theorem", worst <= OPTICAL_TOL, worst, OPTICAL_TOL)


def random_points(n: int, seed: int) -> list[tuple[float, float]]:
    rng = random.Random(seed)
    return [(rng.uniform(0.05, 50.0), rng.uniform(-2.0, 2.0)) for _ in range(n)]


def run_battery(points=DEFAULT_POINTS) -> list[CheckResult]:
    points = list(points)
    return [
        check_reference_values(),
        check_wronskian(),
        check_half_integer(),
        check_periodicity(points),
        check_reflection(points),
        check_partition(points),
        check_parseval(points),
        check_optical(points),
    ]
