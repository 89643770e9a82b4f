"""Translation-invariant splitting Gibbs measures (TISGMs).

For general ``(k, m)`` a boundary law ``h`` in ``R^m`` is a TISGM iff
``h = k F(h)``.  Only iteration is available there.  At ``k = m = 2`` the
substitution ``x = exp(h_0 / 2)``, ``y = exp(h_1 / 2)`` turns the fixed-point
equation into

    x = (r x^2 + theta y^2 + theta^2) / (theta^2 x^2 + theta y^2 + r)
    y = (theta x^2 + r y^2 + theta)   / (theta^2 x^2 + theta y^2 + r)

whose positive solutions split into the ``x = 1`` branch (a cubic in ``y``)
and the ``x != 1`` branch (a quartic in ``y``).  :func:`enumerate_tisgm`
lists all of them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from .model import DomainError, ModelParams, edge_weight_matrix
from .polyroot import (
    DegenerateError,
    RootSet,
    cubic_case,
    cubic_x1_coefficients,
    depressed_form,
    in_band,
    quartic_coefficients,
    sign_band,
    solve_cubic,
    solve_quartic,
)

RESIDUAL_TOL = 1e-8
DEDUP_TOL = 1e-6
# candidate acceptance for near-double roots; validated by the residual afterwards
CANDIDATE_TOL = 1e-6

CUBIC_X1 = "CubicX1"
QUARTIC = "Quartic"


# ------------------------------------------------------------ general (k, m)

def F_general(h, params: ModelParams) -> np.ndarray:
    """The recursion map ``F(h, m, theta, r)``; broadcasts over leading axes of ``h``."""
    h = np.asarray(h, dtype=float)
    if h.shape[-1] != params.m:
        raise DomainError(f"boundary law has {h.shape[-1]} components, expected m={params.m}")
    logW = np.log(edge_weight_matrix(params.theta, params.r, params.m))
    hfull = np.concatenate([h, np.zeros(h.shape[:-1] + (1,))], axis=-1)
    terms = logW + hfull[..., None, :]
    lse = logsumexp(terms, axis=-1)
    return lse[..., :-1] - lse[..., -1:]


def _F_jacobian(h: np.ndarray, params: ModelParams) -> np.ndarray:
    logW = np.log(edge_weight_matrix(params.theta, params.r, params.m))
    hfull = np.concatenate([h, np.zeros(h.shape[:-1] + (1,))], axis=-1)
    terms = logW + hfull[..., None, :]
    soft = np.exp(terms - logsumexp(terms, axis=-1, keepdims=True))  # row-normalised weights
    m = params.m
    return soft[..., :m, :m] - soft[..., m:m + 1, :m]


@dataclass
class IterationResult:
    h: np.ndarray
    converged: bool
    iterations: int
    defect: float


def ti_fixed_point_iterate(h0, params: ModelParams, max_iter: int = 20000, tol: float = 1e-12,
                           damping: float = 0.5, method: str = "damped") -> IterationResult:
    """Solve ``h = k F(h)`` from ``h0``.

    ``method="damped"`` runs ``h <- (1 - a) h + a k F(h)``; it can only reach
    fixed points that are attracting for the damped map.  ``method="newton"``
    runs Newton's method with a capped step and reaches repelling ones too.
    Non-convergence is reported through ``converged``.
    """
    h = np.array(h0, dtype=float)
    k = params.k
    defect = np.inf
    for it in range(1, max_iter + 1):
        G = k * F_general(h, params)
        defect = float(np.max(np.abs(h - G)))
        if defect <= tol:
            return IterationResult(h, True, it - 1, defect)
        if not np.all(np.isfinite(G)):
            break
        if method == "damped":
            h = (1.0 - damping) * h + damping * G
        elif method == "newton":
            J = np.eye(params.m) - k * _F_jacobian(h, params)
            try:
                step = np.linalg.solve(J, G - h)
            except np.linalg.LinAlgError:
                break
            s = np.max(np.abs(step))
            h = h + (step * (2.0 / s) if s > 2.0 else step)
        else:
            raise ValueError(f"unknown method {method!r}")
    return IterationResult(h, False, max_iter, defect)


def multistart_fixed_points(params: ModelParams, n_starts: int = 500, box: float = 10.0,
                            seed: int = 0, max_iter: int = 200, tol: float = 1e-11) -> list[np.ndarray]:
    """Distinct solutions of ``h = k F(h)`` reached by batched Newton from random starts.

    Starts are drawn uniformly from ``[-box, box]^m``.
    """
    rng = np.random.default_rng(seed)
    H = rng.uniform(-box, box, size=(n_starts, params.m))
    k, eye = params.k, np.eye(params.m)
    for _ in range(max_iter):
        G = k * F_general(H, params)
        R = G - H
        J = eye - k * _F_jacobian(H, params)
        ok = np.abs(np.linalg.det(J)) > 1e-300
        step = np.zeros_like(H)
        step[ok] = np.linalg.solve(J[ok], R[ok][..., None])[..., 0]
        s = np.max(np.abs(step), axis=-1, keepdims=True)
        H = H + np.where(s > 2.0, step * 2.0 / np.maximum(s, 1e-300), step)
    defect = np.max(np.abs(H - k * F_general(H, params)), axis=-1)
    found: list[np.ndarray] = []
    for h in H[np.isfinite(defect) & (defect <= tol)]:
        if not any(np.max(np.abs(h - g)) <= DEDUP_TOL * max(1.0, np.max(np.abs(g))) for g in found):
            found.append(h)
    return found


# ----------------------------------------------------------------- k = m = 2

@dataclass(frozen=True)
class FixedPoint:
    x: float
    y: float
    branch: str
    residual: float

    @property
    def h(self) -> np.ndarray:
        """Boundary law ``(h_0, h_1) = (2 ln x, 2 ln y)``."""
        return np.array([2.0 * math.log(self.x), 2.0 * math.log(self.y)])


def system12_defect(x: float, y: float, theta: float, r: float) -> tuple[float, float]:
    Z = theta * theta * x * x + theta * y * y + r
    return (x - (r * x * x + theta * y * y + theta * theta) / Z,
            y - (theta * x * x + r * y * y + theta) / Z)


def residual12(x: float, y: float, theta: float, r: float) -> float:
    return float(max(abs(v) for v in system12_defect(x, y, theta, r)))


def _poly_system(x, y, t, r):
    # the fixed-point system with denominators cleared
    return np.array([t * t * x ** 3 - r * x * x + (t * y * y + r) * x - t * y * y - t * t,
                     t * y ** 3 - r * y * y + (t * t * x * x + r) * y - t * x * x - t])


def _poly_jacobian(x, y, t, r):
    return np.array([[3 * t * t * x * x - 2 * r * x + t * y * y + r, 2 * t * y * x - 2 * t * y],
                     [2 * t * t * x * y - 2 * t * x, 3 * t * y * y - 2 * r * y + t * t * x * x + r]])


def is_degenerate(x: float, y: float, theta: float, r: float, tol: float = 1e-6) -> bool:
    """True when the Jacobian at ``(x, y)`` is numerically singular (solutions coalescing)."""
    J = _poly_jacobian(x, y, theta, r)
    return abs(np.linalg.det(J)) <= tol * float(np.sum(J * J))


def _polish_xy(x: float, y: float, theta: float, r: float, steps: int = 30) -> tuple[float, float]:
    """Guarded Newton on the polynomial form of the fixed-point system."""
    t = theta

    def G(x, y):
        return _poly_system(x, y, t, r)

    def J(x, y):
        return _poly_jacobian(x, y, t, r)

    best = np.array([x, y])
    fbest = residual12(x, y, theta, r)
    for _ in range(steps):
        if fbest == 0.0:
            break
        try:
            cand = best - np.linalg.solve(J(*best), G(*best))
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(cand)) or np.any(cand <= 0):
            break
        fc = residual12(cand[0], cand[1], theta, r)
        if fc < fbest:
            best, fbest = cand, fc
        elif fc > fbest:
            break
        else:
            best = cand
            break
    return float(best[0]), float(best[1])


def _x_candidates(theta: float, r: float, y: float) -> list[float]:
    # positive roots in x of  theta^2 x^2 + (theta^2 - r) x + theta^2 + theta y^2 = 0
    a, b, c = theta * theta, theta * theta - r, theta * theta + theta * y * y
    disc = b * b - 4 * a * c
    if disc < -CANDIDATE_TOL * (b * b + 4 * a * c):
        return []
    sq = math.sqrt(max(disc, 0.0))
    return [v for v in ((-b - sq) / (2 * a), (-b + sq) / (2 * a)) if v > 0]


def _same(p: FixedPoint, x: float, y: float) -> bool:
    return (abs(p.x - x) <= DEDUP_TOL * max(1.0, abs(x))
            and abs(p.y - y) <= DEDUP_TOL * max(1.0, abs(y)))


A_REGIONS = ("A1", "A2", "A3", "A4", "A5", "A6")
B_FROM_COUNT = {4: "B1", 3: "B2", 2: "B3", 1: "B4", 0: "B5"}

# count table: (A-set, B-set) -> N; A1..A3 fix N regardless of B.
_TABLE = {
    ("A4", "B4"): 2, ("A5", "B5"): 2,
    ("A4", "B3"): 3, ("A5", "B4"): 3,
    ("A4", "B2"): 4, ("A5", "B3"): 4, ("A6", "B4"): 4,
    ("A4", "B1"): 5, ("A5", "B2"): 5, ("A6", "B3"): 5,
    ("A5", "B1"): 6, ("A6", "B2"): 6,
    ("A6", "B1"): 7,
}


def table_count(a_region: str, b_region: str) -> int | None:
    """``N`` read off the count table, or ``None`` for a combination it does not list."""
    lower = {"A1": 1, "A2": 2, "A3": 3}
    if a_region in lower:
        return lower[a_region]
    return _TABLE.get((a_region, b_region))


@dataclass(frozen=True)
class RegionLabel:
    a_region: str
    b_region: str
    boundary: tuple[str, ...] = ()

    @property
    def is_boundary(self) -> bool:
        return bool(self.boundary)


@dataclass
class ClassificationResult:
    params: ModelParams
    region: RegionLabel
    fixed_points: list[FixedPoint]
    cubic_roots: RootSet
    quartic_roots: RootSet | None
    gate_ok: bool = True
    notes: list[str] = field(default_factory=list)

    @property
    def N(self) -> int:
        return len(self.fixed_points)

    @property
    def boundary(self) -> bool:
        return self.region.is_boundary


def _a_region(theta: float, r: float, flags: list[str]) -> str:
    s = sign_band(r - 3 * theta * theta, 3 * theta * theta)
    if s == 0:
        flags.append("r=3theta^2")
    case = cubic_case(depressed_form(theta, r))
    if case == "double":
        flags.append("Q=0")
    elif case == "triple":
        flags.append("p=q=0")
    if s <= 0:
        return {"one_real": "A1", "triple": "A1", "double": "A2", "three_real": "A3"}[case]
    # p = q = 0 above the parabola is not covered by any A-set; one root, like A4
    return {"one_real": "A4", "triple": "A4", "double": "A5", "three_real": "A6"}[case]


def enumerate_tisgm(theta: float, r: float) -> ClassificationResult:
    """All TISGMs at ``k = m = 2`` as positive solutions ``(x, y)``.

    Fixed points are ordered: ``x = 1`` branch by ascending ``y``, then the
    ``x != 1`` branch by ascending ``(y, x)``.
    """
    params = ModelParams(theta, r)
    flags: list[str] = []
    a_region = _a_region(theta, r, flags)

    cubic = solve_cubic(*cubic_x1_coefficients(theta, r))
    points = [FixedPoint(1.0, y, CUBIC_X1, residual12(1.0, y, theta, r)) for y in cubic.positive_roots]
    points = [p for p in points if p.residual <= RESIDUAL_TOL]

    qc = quartic_coefficients(theta, r)
    try:
        quartic = solve_quartic(qc)
    except DegenerateError:
        quartic = None
    lead_degenerate = in_band(qc[0], max(abs(v) for v in qc))

    branch2: list[FixedPoint] = []
    if quartic is not None:
        ys = [z.real for z in np.roots(qc)
              if abs(z.imag) <= CANDIDATE_TOL * max(1.0, abs(z)) and z.real > 0]
        for y0 in ys:
            for x0 in _x_candidates(theta, r, y0):
                x, y = _polish_xy(x0, y0, theta, r)
                res = residual12(x, y, theta, r)
                if not (x > 0 and y > 0 and res <= RESIDUAL_TOL):
                    continue
                if not any(_same(p, x, y) for p in points + branch2):
                    branch2.append(FixedPoint(x, y, QUARTIC, res))
    branch2.sort(key=lambda p: (p.y, p.x))

    above = sign_band(r - 3 * theta * theta, 3 * theta * theta)
    gate_ok = not (branch2 and above < 0)
    if any(is_degenerate(p.x, p.y, theta, r) for p in branch2):
        flags.append("quartic double root")

    if lead_degenerate:
        b_region = "NotApplicable"
    else:
        b_region = B_FROM_COUNT[min(len(branch2), 4)]
    return ClassificationResult(params, RegionLabel(a_region, b_region, tuple(flags)),
                                points + branch2, cubic, quartic, gate_ok)


def classify_region(theta: float, r: float) -> RegionLabel:
    return enumerate_tisgm(theta, r).region


LINES = ("potts", "sos", "square")


def line_point(line: str, param: float) -> tuple[float, float]:
    """``(theta, r)`` for a point on one of the special lines.

    ``potts``: theta = 1, param = r.  ``sos``: r = 1, param = theta.
    ``square``: r = theta^2, param = theta.
    """
    if line == "potts":
        return 1.0, float(param)
    if line == "sos":
        return float(param), 1.0
    if line == "square":
        return float(param), float(param) ** 2
    raise ValueError(f"unknown line {line!r}; expected one of {LINES}")


def count_on_line(line: str, param: float) -> int:
    return enumerate_tisgm(*line_point(line, param)).N
