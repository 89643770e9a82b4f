"""Real roots of the cubic and quartic equations behind the TISGM count.

Three independent routes are provided:

* :func:`solve_cubic` -- Cardano / trigonometric closed form, branching on the
  sign of ``Q = (p/3)**3 + (q/2)**2`` of the depressed cubic.
* :func:`solve_quartic` -- eigenvalues of the companion matrix.
* :func:`oracle_real_roots` -- root isolation between consecutive critical
  points (found recursively from the derivative) followed by bisection.  It
  never touches eigenvalues or radicals, so it serves as a check on the
  other two.

Coefficients are always given highest degree first.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import optimize

ZERO_BAND = 1e-10
MERGE_TOL = 1e-7


class DegreeError(ValueError):
    pass


class DegenerateError(ValueError):
    pass


class BracketError(ValueError):
    pass


@dataclass(frozen=True)
class RootSet:
    roots: tuple[float, ...]
    multiplicities: tuple[int, ...]

    @property
    def positive_count(self) -> int:
        # distinct roots, multiplicity ignored
        return sum(1 for y in self.roots if y > 0)

    @property
    def positive_roots(self) -> tuple[float, ...]:
        return tuple(y for y in self.roots if y > 0)

    def __len__(self):
        return len(self.roots)


@dataclass(frozen=True)
class DepressedCubicAnalysis:
    p: float
    q: float
    Q: float
    shift: float


def in_band(v: float, scale: float = 1.0) -> bool:
    return abs(v) <= ZERO_BAND * max(1.0, scale)


def sign_band(v: float, scale: float = 1.0) -> int:
    """Sign of ``v`` with everything inside the zero band mapped to 0."""
    if in_band(v, scale):
        return 0
    return 1 if v > 0 else -1


def polyval(coeffs: Sequence[float], x: float) -> float:
    acc = 0.0
    for c in coeffs:
        acc = acc * x + c
    return acc


def _merge_tol(v) -> float:
    return MERGE_TOL * max(1.0, abs(v))


def merge_roots(values: Sequence[complex], weights: Sequence[int] | None = None) -> RootSet:
    """Cluster (possibly complex) roots and keep the real clusters.

    Roots closer than ``MERGE_TOL * max(1, |root|)`` fall into one cluster whose
    multiplicity is the summed weight.  A conjugate pair that collapses this
    way is a real double root.
    """
    vals = [complex(v) for v in values]
    w = list(weights) if weights is not None else [1] * len(vals)
    order = sorted(range(len(vals)), key=lambda i: (vals[i].real, vals[i].imag))
    clusters: list[list[int]] = []
    for i in order:
        for cl in clusters:
            if any(abs(vals[i] - vals[j]) <= _merge_tol(vals[j]) for j in cl):
                cl.append(i)
                break
        else:
            clusters.append([i])
    out = []
    for cl in clusters:
        tot = sum(w[i] for i in cl)
        z = sum(vals[i] * w[i] for i in cl) / tot
        if abs(z.imag) <= _merge_tol(z):
            out.append((float(z.real), tot))
    out.sort()
    return RootSet(tuple(v for v, _ in out), tuple(n for _, n in out))


def _polish(coeffs: Sequence[float], y: float, steps: int = 3) -> float:
    """A few guarded Newton steps; keeps ``y`` if they do not help."""
    n = len(coeffs) - 1
    d = [c * (n - i) for i, c in enumerate(coeffs[:-1])]
    best, fbest = y, abs(polyval(coeffs, y))
    for _ in range(steps):
        dp = polyval(d, best)
        if dp == 0.0:
            break
        cand = best - polyval(coeffs, best) / dp
        fc = abs(polyval(coeffs, cand))
        if not fc < fbest:
            break
        best, fbest = cand, fc
    return best


# ---------------------------------------------------------------- cubic

def cubic_x1_coefficients(theta: float, r: float) -> tuple[float, float, float, float]:
    """Cubic in ``y`` obtained by putting ``x = 1`` into the fixed-point system."""
    return (theta, -r, theta * theta + r, -2.0 * theta)


def depress(c3: float, c2: float, c1: float, c0: float) -> DepressedCubicAnalysis:
    """``y = z + shift`` turns ``c3 y^3 + ... + c0`` into ``z^3 + p z + q``."""
    if c3 == 0.0:
        raise DegreeError("leading coefficient of a cubic is zero")
    a, b, c = c2 / c3, c1 / c3, c0 / c3
    p = b - a * a / 3.0
    q = 2.0 * a ** 3 / 27.0 - a * b / 3.0 + c
    return DepressedCubicAnalysis(p, q, (p / 3.0) ** 3 + (q / 2.0) ** 2, -a / 3.0)


def depressed_form(theta: float, r: float) -> DepressedCubicAnalysis:
    p = r / theta + theta - r * r / (3.0 * theta * theta)
    q = r / 3.0 + r * r / (3.0 * theta * theta) - 2.0 * r ** 3 / (27.0 * theta ** 3) - 2.0
    return DepressedCubicAnalysis(p, q, (p / 3.0) ** 3 + (q / 2.0) ** 2, r / (3.0 * theta))


def Q_value(r: float, theta: float) -> float:
    return depressed_form(theta, r).Q


def cubic_case(d: DepressedCubicAnalysis) -> str:
    """One of ``"one_real"``, ``"double"``, ``"triple"``, ``"three_real"``."""
    scale = max(abs(d.p / 3.0) ** 3, (d.q / 2.0) ** 2)
    s = sign_band(d.Q, scale)
    if s > 0:
        return "one_real"
    if s < 0:
        return "three_real"
    if in_band(d.p, d.shift ** 2) and in_band(d.q, abs(d.shift) ** 3):
        return "triple"
    return "double"


def _is_multiple_root(coeffs: Sequence[float], y: float) -> bool:
    """``y`` annihilates both the polynomial and its derivative, relative to coefficient size."""
    if not math.isfinite(y):
        return False
    n = len(coeffs) - 1
    d = [c * (n - i) for i, c in enumerate(coeffs[:-1])]
    a = max(1.0, abs(y))
    return (abs(polyval(coeffs, y)) <= 1e-9 * sum(abs(c) for c in coeffs) * a ** n
            and abs(polyval(d, y)) <= 1e-4 * sum(abs(c) for c in d) * a ** (n - 1))


def _cubic_z(d: DepressedCubicAnalysis, case: str) -> tuple[list[float], list[int]]:
    p, q = d.p, d.q
    if case == "one_real":
        # cube root chosen to avoid cancellation
        sq = math.sqrt(max(d.Q, 0.0))
        w = -q / 2.0 - math.copysign(sq, q) if q != 0 else sq
        u = math.copysign(abs(w) ** (1.0 / 3.0), w)
        return [u - p / (3.0 * u) if u != 0 else 0.0], [1]
    if case == "triple":
        return [0.0], [3]
    if case == "double":
        if p == 0.0:
            return [math.nan], [2]
        return [3.0 * q / p, -1.5 * q / p], [1, 2]
    rho = 2.0 * math.sqrt(-p / 3.0)
    arg = 3.0 * q / (2.0 * p) * math.sqrt(-3.0 / p)
    phi = math.acos(max(-1.0, min(1.0, arg))) / 3.0
    return [rho * math.cos(phi - 2.0 * math.pi * j / 3.0) for j in range(3)], [1, 1, 1]


def solve_cubic(c3: float, c2: float, c1: float, c0: float) -> RootSet:
    d = depress(c3, c2, c1, c0)
    coeffs = (c3, c2, c1, c0)
    case = cubic_case(d)
    zs, mult = _cubic_z(d, case)
    ys = [z + d.shift for z in zs]
    if case in ("double", "triple") and not all(_is_multiple_root(coeffs, y)
                                                for y, n in zip(ys, mult) if n > 1):
        # the zero band swallowed a genuinely nonzero Q (tiny coefficients): use its exact sign
        case = "one_real" if d.Q > 0 or d.p >= 0 else "three_real"
        zs, mult = _cubic_z(d, case)
        ys = [z + d.shift for z in zs]
    ys = [_polish(coeffs, y) if n == 1 else y for y, n in zip(ys, mult)]
    if not all(_root_ok(coeffs, y) for y in ys):
        # widely spread roots: depressing the cubic cancels the small ones away
        rs = merge_roots(np.roots(coeffs))
        ys = [_polish(coeffs, y, 8) if n == 1 else y for y, n in zip(rs.roots, rs.multiplicities)]
        mult = list(rs.multiplicities)
    return merge_roots(ys, mult)


def _root_ok(coeffs: Sequence[float], y: float, rel: float = 1e-10) -> bool:
    n = len(coeffs) - 1
    return abs(polyval(coeffs, y)) <= rel * sum(abs(c) * abs(y) ** (n - i) for i, c in enumerate(coeffs))


# ------------------------------------------------------------- quartic

def quartic_coefficients(theta: float, r: float) -> tuple[float, float, float, float, float]:
    """Quartic in ``y`` left after eliminating ``x`` from the ``x != 1`` branch."""
    t, s = theta, r - theta * theta
    return (
        t * t * (t + 1.0) * (r * r - 2.0 * t * r + t ** 3 - t * t + t),
        -t * s * (r * r + (t * t + 1.0) * r - 3.0 * t * t),
        ((t + 1.0) * r + t ** 3) * s * s,
        -(r + t * t) * s * s,
        t * s * s,
    )


def _strip(coeffs: Sequence[float]) -> list[float]:
    c = [float(v) for v in coeffs]
    if not any(c):
        raise DegenerateError("all coefficients are zero")
    while c[0] == 0.0:
        c.pop(0)
    return c


def solve_quadratic(a: float, b: float, c: float) -> RootSet:
    if a == 0.0:
        if b == 0.0:
            return RootSet((), ())
        return RootSet((-c / b,), (1,))
    disc = b * b - 4.0 * a * c
    if in_band(disc, b * b + abs(4.0 * a * c)):
        return RootSet((-b / (2.0 * a),), (2,))
    if disc < 0:
        return RootSet((), ())
    sq = math.sqrt(disc)
    t = -0.5 * (b + math.copysign(sq, b)) if b != 0 else 0.5 * sq
    ys = [t / a, c / t] if t != 0 else [0.0, 0.0]
    return merge_roots(ys)


def solve_quartic(coeffs: Sequence[float]) -> RootSet:
    c = _strip(coeffs)
    if len(c) > 5:
        raise DegreeError("solve_quartic takes at most five coefficients")
    deg = len(c) - 1
    if deg == 0:
        return RootSet((), ())
    if deg == 1:
        return RootSet((-c[1] / c[0],), (1,))
    if deg == 2:
        return solve_quadratic(*c)
    if deg == 3:
        return solve_cubic(*c)
    rs = merge_roots(np.roots(c))
    return RootSet(tuple(float(_polish(c, y)) if n == 1 else y for y, n in zip(rs.roots, rs.multiplicities)),
                   rs.multiplicities)


# -------------------------------------------------------------- oracle

def _isolate(c: list[float]) -> list[tuple[float, int]]:
    deg = len(c) - 1
    if deg == 0:
        return []
    if deg == 1:
        return [(-c[1] / c[0], 1)]
    dc = [ci * (deg - i) for i, ci in enumerate(c[:-1])]
    crit = [(x, n) for x, n in _isolate(dc)]
    bound = 1.0 + max(abs(ci / c[0]) for ci in c[1:])

    def scale(x):
        return sum(abs(ci) * abs(x) ** (deg - i) for i, ci in enumerate(c))

    found: list[tuple[float, int]] = []
    root_at: set[int] = set()
    for j, (x, n) in enumerate(crit):
        if abs(polyval(c, x)) <= 1e-12 * scale(x):
            found.append((x, n + 1))
            root_at.add(j)
    pts = [-bound] + [x for x, _ in crit if -bound < x < bound] + [bound]
    inner = {x: j for j, (x, _) in enumerate(crit)}
    for a, b in zip(pts[:-1], pts[1:]):
        if inner.get(a) in root_at or inner.get(b) in root_at:
            continue
        fa, fb = polyval(c, a), polyval(c, b)
        if fa == 0.0:
            if a == pts[0]:
                found.append((a, 1))
            continue
        if fb == 0.0:
            found.append((b, 1))
            continue
        if (fa < 0) == (fb < 0):
            continue
        lo, hi = a, b
        for _ in range(2000):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            fm = polyval(c, mid)
            if fm == 0.0:
                lo = hi = mid
                break
            if (fm < 0) == (fa < 0):
                lo, fa = mid, fm
            else:
                hi = mid
        found.append((0.5 * (lo + hi), 1))
    return found


def oracle_real_roots(coeffs: Sequence[float]) -> RootSet:
    """Real roots by derivative-based isolation and plain bisection."""
    c = _strip(coeffs)
    found = _isolate(c)
    return merge_roots([x for x, _ in found], [n for _, n in found])


# ----------------------------------------------------------- bisection

def bisect_root(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12) -> float:
    """Root of ``f`` in ``[lo, hi]``, located to a bracket of width ``tol``."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo < 0) == (fhi < 0):
        name = getattr(f, "__name__", repr(f))
        raise BracketError(f"{name} does not change sign on [{lo}, {hi}]: f(lo)={flo}, f(hi)={fhi}")
    return optimize.bisect(f, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=500)
