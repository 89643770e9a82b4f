"""Finite Cayley trees, exact finite-volume marginals and chain sampling.

The exact marginal sums Gibbs weights over every configuration of the ball
``V_n`` and is the independent check on the boundary-law recursion.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .model import DomainError, ModelParams, edge_weight_matrix
from .tisgm import F_general

EXACT_CAP = 10 ** 6


class SizeCapError(ValueError):
    pass


@dataclass(frozen=True)
class FiniteTree:
    k: int
    depth: int
    parent: np.ndarray  # parent[0] == -1
    generations: tuple[np.ndarray, ...]

    @property
    def n_vertices(self) -> int:
        return len(self.parent)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(int(self.parent[v]), v) for v in range(1, self.n_vertices)]

    def children(self, v: int) -> np.ndarray:
        return np.flatnonzero(self.parent == v)

    @property
    def leaves(self) -> np.ndarray:
        return self.generations[-1]


def build_tree(k: int, depth: int) -> FiniteTree:
    """Ball of radius ``depth`` around the root; the root has ``k + 1`` children."""
    if k < 1 or depth < 0:
        raise DomainError(f"need k >= 1 and depth >= 0, got k={k}, depth={depth}")
    parent = [-1]
    gens = [np.array([0])]
    for j in range(1, depth + 1):
        nchild = k + 1 if j == 1 else k
        new = []
        for v in gens[-1]:
            for _ in range(nchild):
                new.append(len(parent))
                parent.append(int(v))
        gens.append(np.array(new))
    return FiniteTree(k, depth, np.array(parent), tuple(gens))


def ball_size(k: int, depth: int) -> int:
    if depth == 0:
        return 1
    if k == 1:
        return 1 + 2 * depth
    return 1 + (k + 1) * (k ** depth - 1) // (k - 1)


def _leaf_fields(tree: FiniteTree, boundary_h, m: int) -> np.ndarray:
    h = np.asarray(boundary_h, dtype=float)
    if h.shape[-1] != m:
        raise DomainError(f"boundary field has {h.shape[-1]} components, expected m={m}")
    h = np.broadcast_to(h, (len(tree.leaves), m))
    return np.concatenate([h, np.zeros((len(tree.leaves), 1))], axis=1)


def exact_root_marginal(tree: FiniteTree, params: ModelParams, boundary_h) -> np.ndarray:
    """Root-spin law by summing Gibbs weights over all configurations of the ball.

    ``boundary_h`` is one field for all leaves, shape ``(m,)``, or one per leaf,
    shape ``(len(tree.leaves), m)``.  Leaf ``x`` carries the extra weight
    ``exp(h[sigma(x)])`` with ``h[m] = 0``.
    """
    q, n = params.m + 1, tree.n_vertices
    if float(q) ** n > EXACT_CAP:
        raise SizeCapError(f"{q}^{n} configurations exceed the exact-summation cap of {EXACT_CAP}")
    hleaf = _leaf_fields(tree, boundary_h, params.m)
    logW = np.log(edge_weight_matrix(params.theta, params.r, params.m))
    sigma = np.stack(np.unravel_index(np.arange(q ** n), (q,) * n), axis=1)
    logw = np.zeros(q ** n)
    for a, b in tree.edges:
        logw += logW[sigma[:, a], sigma[:, b]]
    for i, v in enumerate(tree.leaves):
        logw += hleaf[i, sigma[:, v]]
    out = np.array([logsumexp(logw[sigma[:, 0] == s]) for s in range(q)])
    return np.exp(out - logsumexp(out))


def recursion_root_marginal(depth_or_tree, params: ModelParams, boundary_h) -> np.ndarray:
    """Root-spin law by pushing the boundary field inward with ``F``."""
    tree = depth_or_tree if isinstance(depth_or_tree, FiniteTree) else build_tree(params.k, depth_or_tree)
    hleaf = _leaf_fields(tree, boundary_h, params.m)[:, :-1]
    field = {int(v): hleaf[i] for i, v in enumerate(tree.leaves)}
    for gen in reversed(tree.generations[:-1]):
        for v in gen:
            kids = tree.children(int(v))
            field[int(v)] = np.sum(F_general(np.stack([field[int(c)] for c in kids]), params), axis=0)
    h0 = np.append(field[0], 0.0)
    return np.exp(h0 - logsumexp(h0))


@dataclass(frozen=True)
class SampleStats:
    root_counts: np.ndarray          # (q,)
    generation_counts: np.ndarray    # (depth + 1, q), summed over the vertices of each generation
    edge_counts: np.ndarray          # (q, q) root/child pairs on the first generation
    generation_sizes: tuple[int, ...]
    n_samples: int
    seed: int


def sample_configurations(tree: FiniteTree, P, nu, seed: int, n_samples: int) -> np.ndarray:
    """``(n_samples, n_vertices)`` spins of the tree-indexed Markov chain.

    The root is drawn from ``nu``; each child from the row of ``P`` given its
    parent.  Uses numpy's PCG64 generator seeded with ``seed``.
    """
    P = np.asarray(P, dtype=float)
    rng = np.random.default_rng(seed)
    cdf = np.cumsum(P, axis=1)
    cdf[:, -1] = 1.0
    nu_cdf = np.cumsum(nu)
    nu_cdf[-1] = 1.0
    spins = np.empty((n_samples, tree.n_vertices), dtype=np.int8)
    spins[:, 0] = np.searchsorted(nu_cdf, rng.random(n_samples), side="right")
    for gen in tree.generations[1:]:
        par = spins[:, tree.parent[gen]]
        u = rng.random(par.shape)
        spins[:, gen] = (u[..., None] >= cdf[par]).sum(axis=-1)
    return spins


def sample_chain(tree: FiniteTree, kern, nu, seed: int, n_samples: int) -> SampleStats:
    P = getattr(kern, "P", kern)
    q = np.asarray(P).shape[0]
    spins = sample_configurations(tree, P, nu, seed, n_samples)
    gen_counts = np.array([np.bincount(spins[:, g].ravel(), minlength=q) for g in tree.generations])
    edge = np.zeros((q, q), dtype=np.int64)
    if tree.depth >= 1:
        first = tree.generations[1]
        np.add.at(edge, (np.repeat(spins[:, 0], len(first)), spins[:, first].ravel()), 1)
    return SampleStats(gen_counts[0].copy(), gen_counts, edge,
                       tuple(len(g) for g in tree.generations), n_samples, seed)
