"""Parameters and finite-volume energy of the three-state Potts-SOS model.

The model lives on a Cayley tree; spins take values in ``{0, ..., m}`` and a
nearest-neighbour edge ``<x, y>`` contributes

    -J |s(x) - s(y)| - J_p delta(s(x), s(y))

to the energy.  Everything downstream works with the activities
``theta = exp(J beta)`` and ``r = exp(J_p beta)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np


class DomainError(ValueError):
    """Raised when an input lies outside the domain of an operation."""


@dataclass(frozen=True)
class ModelParams:
    theta: float
    r: float
    k: int = 2
    m: int = 2

    def __post_init__(self):
        for name in ("theta", "r"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be a finite positive number, got {v!r}")
        if self.k < 1 or self.m < 1:
            raise DomainError(f"need k >= 1 and m >= 1, got k={self.k}, m={self.m}")

    @classmethod
    def from_couplings(cls, c: "Couplings", k: int = 2, m: int = 2) -> "ModelParams":
        theta, r = activities_from_couplings(c)
        return cls(theta, r, k, m)

    def edge_weights(self) -> np.ndarray:
        return edge_weight_matrix(self.theta, self.r, self.m)


@dataclass(frozen=True)
class Couplings:
    J: float
    J_p: float
    beta: float = 1.0

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.J, self.J_p, self.beta)):
            raise DomainError("couplings must be finite")
        if self.beta <= 0:
            raise DomainError(f"beta must be positive, got {self.beta!r}")


# vertex id -> spin
Configuration = Mapping[int, int]


def activities_from_couplings(c: Couplings) -> tuple[float, float]:
    """Return ``(theta, r) = (exp(J beta), exp(J_p beta))``."""
    return math.exp(c.J * c.beta), math.exp(c.J_p * c.beta)


def edge_weight_matrix(theta: float, r: float, m: int = 2) -> np.ndarray:
    """``W[i, j] = theta**|i-j| * r**delta_ij`` for spins ``0..m``."""
    s = np.arange(m + 1)
    W = float(theta) ** np.abs(s[:, None] - s[None, :]).astype(float)
    W[s, s] = r
    return W


def hamiltonian(sigma: Configuration, edges: Iterable[tuple[int, int]], c: Couplings,
                m: int | None = None) -> float:
    """Energy of ``sigma`` restricted to ``edges``.

    Every edge endpoint must be assigned.  If ``m`` is given the spins are
    also checked to lie in ``{0, ..., m}``.
    """
    H = 0.0
    for x, y in edges:
        try:
            a, b = sigma[x], sigma[y]
        except KeyError as exc:
            raise DomainError(f"vertex {exc.args[0]!r} has no spin assigned") from None
        if m is not None and not (0 <= a <= m and 0 <= b <= m):
            raise DomainError(f"spin out of range on edge ({x}, {y}): ({a}, {b})")
        H -= c.J * abs(a - b) + c.J_p * (a == b)
    return H


def gibbs_weight(sigma: Configuration, edges: Iterable[tuple[int, int]], theta: float,
                 r: float) -> float:
    """Product of edge activities; equals ``exp(-beta H)`` for matching couplings."""
    w = 1.0
    for x, y in edges:
        a, b = sigma[x], sigma[y]
        w *= r if a == b else theta ** abs(a - b)
    return w
