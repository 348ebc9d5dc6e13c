"""Mixture proposals parameterized by the leaves of a tree pyramid.

Each leaf contributes one component centered on its cell: either a uniform
density over the cell or an untruncated isotropic Gaussian whose standard
deviation equals the cell radius. The proposal density is the arithmetic
mean of the component densities over all current leaves.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .tree import Node, TreePyramid


class Kernel(enum.Enum):
    """Per-leaf component family."""

    UNIFORM = "uniform"
    GAUSSIAN = "gaussian"


def _as_batch(x, dims: int):
    """Coerce a point or batch of points to shape (n, dims)."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        if x.shape[0] != dims:
            raise ValueError(f"point has {x.shape[0]} coordinates, expected {dims}")
        return x[None, :], True
    if x.ndim != 2 or x.shape[1] != dims:
        raise ValueError(f"expected points of shape (n, {dims})")
    return x, False


def component_density(node: Node, x, kernel: Kernel):
    """Density of a single leaf component at ``x``.

    ``x`` may be one point of shape (K,) or a batch of shape (n, K); the
    return value is a scalar or an (n,) array accordingly. The uniform
    component is ``1 / volume`` inside the node's half-open cell and zero
    elsewhere; the Gaussian component is an isotropic normal with mean
    ``center`` and standard deviation ``radius`` in every dimension.
    """
    pts, single = _as_batch(x, node.dims)
    if kernel is Kernel.UNIFORM:
        lo = node.center - node.radius
        hi = node.center + node.radius
        top = np.array([(node.top_faces >> d) & 1 for d in range(node.dims)],
                       dtype=bool)
        below = (pts < hi) | (top & (pts == hi))
        inside = np.all((pts >= lo) & below, axis=1)
        out = inside / node.volume
    else:
        z = (pts - node.center) / node.radius
        norm = (node.radius * math.sqrt(2.0 * math.pi)) ** node.dims
        out = np.exp(-0.5 * np.sum(z * z, axis=1)) / norm
    return float(out[0]) if single else out


def sample_leaf(node: Node, kernel: Kernel, rng: np.random.Generator) -> np.ndarray:
    """Draw one point from a leaf's component."""
    if kernel is Kernel.UNIFORM:
        lo = node.center - node.radius
        hi = node.center + node.radius
        return rng.uniform(lo, hi)
    return rng.normal(node.center, node.radius)


class TreeProposal:
    """Equal-weight mixture of one component per current leaf."""

    _CHUNK = 1 << 22  # cap on points * leaves per broadcast block

    def __init__(self, tree: TreePyramid, kernel: Kernel = Kernel.UNIFORM):
        self.tree = tree
        self.kernel = kernel
        self._cache_count = -1
        self._cache = None

    def _leaf_arrays(self):
        """Stacked leaf geometry, cached until the tree grows."""
        leaves = self.tree.leaves()
        if len(leaves) != self._cache_count:
            centers = np.stack([leaf.center for leaf in leaves])
            radii = np.array([leaf.radius for leaf in leaves])
            dims = self.tree.dims
            tops = np.array([[(leaf.top_faces >> d) & 1 for d in range(dims)]
                             for leaf in leaves], dtype=bool)
            lo = centers - radii[:, None]
            hi = centers + radii[:, None]
            if self.kernel is Kernel.UNIFORM:
                comp = 1.0 / (len(leaves) * (2.0 * radii) ** dims)
            else:
                comp = 1.0 / (len(leaves)
                              * (radii * math.sqrt(2.0 * math.pi)) ** dims)
            self._cache = (centers, radii, tops, lo, hi, comp)
            self._cache_count = len(leaves)
        return self._cache

    def density(self, x):
        """Mixture density ``mean_i D(x; leaf_i)`` at one point or a batch."""
        pts, single = _as_batch(x, self.tree.dims)
        centers, radii, tops, lo, hi, comp = self._leaf_arrays()
        n_leaves = centers.shape[0]
        dims = self.tree.dims
        acc = np.empty(pts.shape[0])
        step = max(1, self._CHUNK // max(n_leaves, 1))
        for start in range(0, pts.shape[0], step):
            block = pts[start:start + step]
            if self.kernel is Kernel.UNIFORM:
                inside = np.ones((block.shape[0], n_leaves), dtype=bool)
                for d in range(dims):
                    xd = block[:, d, None]
                    hit = (xd >= lo[:, d]) & (xd < hi[:, d])
                    if tops[:, d].any():
                        hit |= tops[:, d] & (xd == hi[:, d])
                    inside &= hit
                acc[start:start + step] = inside.astype(float) @ comp
            else:
                z2 = np.zeros((block.shape[0], n_leaves))
                for d in range(dims):
                    diff = (block[:, d, None] - centers[:, d]) / radii
                    z2 += diff * diff
                acc[start:start + step] = np.exp(-0.5 * z2) @ comp
        return float(acc[0]) if single else acc

    def __call__(self, x):
        return self.density(x)


def mixture_weights(tree: TreePyramid) -> np.ndarray:
    """Normalized per-leaf selection weights ``w_i * r_i**K``.

    Leaves whose importance weight is unset or zero contribute zero. Raises
    ``ValueError`` when every leaf does (a degenerate mixture that cannot
    be drawn from).
    """
    leaves = tree.leaves()
    dims = tree.dims
    vals = np.array([
        (leaf.weight if leaf.weight is not None else 0.0) * leaf.radius ** dims
        for leaf in leaves
    ])
    if not np.all(np.isfinite(vals)) or np.any(vals < 0.0):
        raise ValueError("leaf weights must be finite and non-negative")
    total = vals.sum()
    if total <= 0.0:
        raise ValueError("degenerate mixture: every leaf has zero weight")
    return vals / total


def sample_mixture(weights: np.ndarray, rng: np.random.Generator) -> int:
    """Draw a component index by inverse-CDF over ``weights``.

    Returns the smallest index whose cumulative weight reaches the uniform
    draw, so ties and zero-weight entries behave deterministically.
    """
    weights = np.asarray(weights, dtype=float)
    cum = np.cumsum(weights)
    alpha = rng.uniform()
    idx = int(np.searchsorted(cum, alpha, side="left"))
    return min(idx, len(weights) - 1)
