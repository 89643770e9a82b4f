"""Tree-indexed Markov chain of a TISGM at ``k = m = 2``."""
from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .tisgm import FixedPoint


class InconsistentKernelError(ValueError):
    """Rows of the reduced kernel do not sum to one: the input is not a fixed point."""


@dataclass(frozen=True)
class TransitionKernel:
    P: np.ndarray
    Z: float
    source: FixedPoint
    theta: float
    r: float


@dataclass(frozen=True)
class Spectrum:
    lambda1: complex
    lambda2: complex
    lambda_max: float
    Dstar: float

    @property
    def is_complex(self) -> bool:
        return self.Dstar < 0


def build_kernel(fp: FixedPoint, theta: float, r: float, row_tol: float = 1e-8) -> TransitionKernel:
    x, y = fp.x, fp.y
    Z = theta * theta * x * x + theta * y * y + r
    P = np.array([
        [r * x, theta * y * y / x, theta * theta / x],
        [theta * x * x / y, r * y, theta / y],
        [theta * theta * x * x, theta * y * y, r],
    ]) / Z
    dev = np.max(np.abs(P.sum(axis=1) - 1.0))
    if dev > row_tol:
        raise InconsistentKernelError(f"row sums deviate from 1 by {dev:.3g}; (x, y)=({x}, {y}) "
                                      "does not solve the fixed-point system")
    # the reduced form is stochastic only up to the fixed-point residual
    P = P / P.sum(axis=1, keepdims=True)
    return TransitionKernel(P, Z, fp, theta, r)


def full_kernel(x: float, y: float, theta: float, r: float) -> np.ndarray:
    """Unreduced kernel: row ``i`` is ``W[i, j] l_j`` normalised, ``l = (x^2, y^2, 1)``."""
    l = np.array([x * x, y * y, 1.0])
    W = np.array([[r, theta, theta * theta], [theta, r, theta], [theta * theta, theta, r]])
    M = W * l[None, :]
    return M / M.sum(axis=1, keepdims=True)


def spectrum(kern: TransitionKernel) -> Spectrum:
    """Non-unit eigenvalues from the closed-form quadratic."""
    x, y = kern.source.x, kern.source.y
    theta, r, Z = kern.theta, kern.r, kern.Z
    b = (1.0 + x + y) * r - Z
    # 2 theta^4 - theta^4 r - 2 theta^2 r + r^3, factored so it vanishes exactly at r = theta^2
    c = (r - theta * theta) * (r * r + theta * theta * r - 2 * theta * theta) * x * y
    D = b * b - 4.0 * c / Z
    sq = cmath.sqrt(D)
    l1 = (b + sq) / (2.0 * Z)
    l2 = (b - sq) / (2.0 * Z)
    if D >= 0:
        l1, l2 = l1.real, l2.real
    return Spectrum(l1, l2, max(abs(l1), abs(l2)), D)


def eig_nonunit(P: np.ndarray) -> np.ndarray:
    """The two eigenvalues of ``P`` other than the one closest to 1, by direct eigensolve."""
    ev = list(np.linalg.eigvals(P))
    ev.pop(int(np.argmin([abs(e - 1.0) for e in ev])))
    return np.array(ev)


def stationary_law(kern: TransitionKernel | np.ndarray) -> np.ndarray:
    P = kern.P if isinstance(kern, TransitionKernel) else np.asarray(kern)
    n = P.shape[0]
    # nu (P - I) = 0 with sum(nu) = 1
    A = np.vstack([(P - np.eye(n)).T, np.ones(n)])
    b = np.zeros(n + 1)
    b[-1] = 1.0
    nu, *_ = np.linalg.lstsq(A, b, rcond=None)
    nu = np.clip(nu, 0.0, None)
    return nu / nu.sum()
