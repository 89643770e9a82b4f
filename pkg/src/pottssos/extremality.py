"""Extreme / non-extreme verdicts for TISGMs and the threshold constants.

Two sufficient conditions are combined:

* Kesten-Stigum: ``k * lambda_max**2 > 1`` implies the measure is not extreme.
* ``k * kappa * gamma < 1`` implies it is extreme.

``kappa`` is the Dobrushin coefficient of the kernel.  ``gamma`` is taken to
be the largest variation distance between two rows of the kernel; for the
``x = 1`` solutions on the line ``r = theta^2`` that is its exact value.  Off
that line the second test is reported but marked heuristic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .chain import Spectrum, TransitionKernel, build_kernel, spectrum
from .model import DomainError
from .polyroot import Q_value, bisect_root, solve_cubic
from .tisgm import CUBIC_X1, FixedPoint, enumerate_tisgm, residual12

NON_EXTREME = "NonExtreme"
EXTREME = "Extreme"
UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class ExtremalityVerdict:
    measure_index: int
    lambda_max: float
    eta: float
    kappa: float
    gamma: float
    two_kappa_gamma: float  # k * kappa * gamma
    status: str
    heuristic: bool = False
    complex_pair: bool = False


def kesten_stigum(sp: Spectrum, k: int = 2) -> tuple[float, bool]:
    eta = k * sp.lambda_max ** 2 - 1.0
    return eta, eta > 0


def row_pair_distances(P) -> dict[tuple[int, int], float]:
    P = P.P if isinstance(P, TransitionKernel) else np.asarray(P)
    return {(i, j): 0.5 * float(np.abs(P[i] - P[j]).sum())
            for i, j in combinations(range(P.shape[0]), 2)}


def kappa_of_kernel(kern) -> float:
    return max(row_pair_distances(kern).values(), default=0.0)


def gamma_of_kernel(kern) -> float:
    """Largest change of a neighbour's law when one boundary spin is switched.

    For a single edge that change is the variation distance between the two
    corresponding rows of the kernel; the supremum over larger sets and
    boundary conditions is not attempted.
    """
    d = row_pair_distances(kern)
    return max(d[(0, 1)], d[(0, 2)], d[(1, 2)]) if len(d) == 3 else max(d.values(), default=0.0)


def on_square_line(fp: FixedPoint, theta: float, r: float, rel: float = 1e-12) -> bool:
    return abs(r - theta * theta) <= rel * theta * theta and abs(fp.x - 1.0) <= 1e-10


def extremality_verdict(fp: FixedPoint, theta: float, r: float, k: int = 2,
                        measure_index: int = 0) -> ExtremalityVerdict:
    if k != 2:
        raise DomainError("the 3x3 kernel analysis is only available for k = 2")
    kern = build_kernel(fp, theta, r)
    sp = spectrum(kern)
    eta, fires = kesten_stigum(sp, k)
    kappa, gamma = kappa_of_kernel(kern), gamma_of_kernel(kern)
    kkg = k * kappa * gamma
    if fires:
        status = NON_EXTREME
    elif kkg < 1.0:
        status = EXTREME
    else:
        status = UNDETERMINED
    return ExtremalityVerdict(measure_index, sp.lambda_max, eta, kappa, gamma, kkg, status,
                              heuristic=not on_square_line(fp, theta, r), complex_pair=sp.is_complex)


def verdicts(theta: float, r: float, k: int = 2) -> list[ExtremalityVerdict]:
    res = enumerate_tisgm(theta, r)
    return [extremality_verdict(fp, theta, r, k, i + 1) for i, fp in enumerate(res.fixed_points)]


# ------------------------------------------------------- the r = theta^2 line

def square_line_cubic(theta: float) -> tuple[float, float, float, float]:
    return (1.0, -theta, 2.0 * theta, -2.0)


def square_line_discriminant(theta: float) -> float:
    return 4.0 * (theta ** 4 - 10 * theta ** 3 + 18 * theta ** 2 - 27)


def square_line_roots(theta: float) -> tuple[float, ...]:
    """Positive roots ``y_1 <= y_2 <= y_3`` of the cubic on ``r = theta^2`` (distinct)."""
    return solve_cubic(*square_line_cubic(theta)).positive_roots


def cardano_y1(theta: float) -> float:
    """The single real root on ``r = theta^2`` below ``theta_c``, in radicals."""
    if not theta > 0:
        raise DomainError("theta must be positive")
    D = square_line_discriminant(theta)
    if D >= 0:
        raise DomainError(f"cubic has three real roots at theta={theta} (discriminant {D:.3g} >= 0)")
    a = theta ** 3 - 9 * theta ** 2 + 27
    # the two cube roots multiply to theta^2 - 6 theta; take the radicand free of cancellation
    c = float(np.cbrt(a + math.copysign(1.5 * math.sqrt(-3 * D), a)))
    return (theta + c + (theta ** 2 - 6 * theta) / c) / 3.0


def kappa_closed_form(theta: float, y: float) -> float:
    return (2 * abs(1 - theta * y) + y * y * abs(theta - y)) / (2 * y * (2 * theta + y * y))


def U_closed_form(theta: float, y: float) -> float:
    """``2 kappa gamma - 1`` for the solution ``(1, y)`` on ``r = theta^2``."""
    num = y ** 3 - theta * y * y - 2 * theta * y + 2
    return num * num / (2 * y * y * (2 * theta + y * y) ** 2) - 1.0


def line_measure(theta: float, index: int) -> FixedPoint:
    """``mu_index`` on ``r = theta^2`` (1-based, ascending ``y``)."""
    ys = square_line_roots(theta)
    if not 1 <= index <= len(ys):
        raise DomainError(f"mu_{index} does not exist at theta={theta} ({len(ys)} measure(s))")
    y = ys[index - 1]
    return FixedPoint(1.0, y, CUBIC_X1, residual12(1.0, y, theta, theta * theta))


def eta_on_line(theta: float, index: int) -> float:
    fp = line_measure(theta, index)
    return kesten_stigum(spectrum(build_kernel(fp, theta, theta * theta)))[0]


# -------------------------------------------------------------- thresholds

THETA_1 = 3 * 2 ** (1 / 3) * (2 ** (1 / 3) - 1)


@dataclass(frozen=True)
class ThresholdReport:
    name: str
    value: float
    bracket: tuple[float, float]
    tol: float
    defining_function: str


def _theta_c_poly(t):
    return t ** 4 - 10 * t ** 3 + 18 * t ** 2 - 27


_THRESHOLDS = {
    "theta_c": (_theta_c_poly, (7.0, 8.0),
                "theta^4 - 10 theta^3 + 18 theta^2 - 27 (discriminant of the cubic on r = theta^2)"),
    "r_c_at_theta1": (lambda r: Q_value(r, THETA_1), (4.0, 5.0),
                      "Q(r, theta_1) with theta_1 = 3 cbrt(2) (cbrt(2) - 1)"),
    "theta_ks1": (lambda t: eta_on_line(t, 1), (0.1, 0.3),
                  "eta_1(theta) = 2 lambda_max(mu_1)^2 - 1 on r = theta^2"),
    "theta_ks2": (lambda t: eta_on_line(t, 2), (9.0, 10.0),
                  "eta_2(theta) = 2 lambda_max(mu_2)^2 - 1 on r = theta^2"),
}
THRESHOLD_NAMES = tuple(_THRESHOLDS)
ALIASES = {"r_c": "r_c_at_theta1", "theta_1": "theta_ks1", "theta_2": "theta_ks2"}


def find_threshold(name: str, tol: float = 1e-12) -> ThresholdReport:
    key = ALIASES.get(name, name)
    if key not in _THRESHOLDS:
        raise KeyError(f"unknown threshold {name!r}; expected one of {THRESHOLD_NAMES}")
    f, (lo, hi), desc = _THRESHOLDS[key]
    return ThresholdReport(key, bisect_root(f, lo, hi, tol), (lo, hi), tol, desc)
