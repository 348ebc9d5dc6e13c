"""Adaptive importance sampling driven by tree-pyramid refinement.

The sampler grows a tree pyramid over the domain: each iteration picks one
leaf, splits it, and draws a fresh sample from every new child cell. The
leaf mixture therefore concentrates components wherever the target has
mass, and every drawn sample doubles as an importance-weighted point.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .proposal import (Kernel, TreeProposal, component_density, mixture_weights,
                       sample_leaf, sample_mixture)
from .tree import DEFAULT_MAX_DEPTH, DomainBounds, Node, TreePyramid


class Weighting(enum.Enum):
    """Importance weight denominator."""

    STANDARD = "standard"            # sample's own component density
    DETERMINISTIC_MIXTURE = "dm"     # full leaf-mixture density


class NodeSelection(enum.Enum):
    """Rule for choosing which leaf to split next."""

    MAX_EVIDENCE = "max_evidence"    # argmax of target_value * radius**K
    MIXTURE_DRAW = "mixture_draw"    # categorical draw over leaf weights


@dataclass
class SamplerConfig:
    """Configuration for :func:`run_tp_ais`.

    ``n_samples`` is the size the returned sample set must reach; the final
    refinement step may overshoot it by at most ``2**dims - 1`` samples.
    """

    dims: int
    n_samples: int
    bounds: DomainBounds = None
    kernel: Kernel = Kernel.UNIFORM
    weighting: Weighting = Weighting.STANDARD
    node_selection: NodeSelection = NodeSelection.MAX_EVIDENCE
    resample_leaves: bool = False
    seed: int = 0
    max_depth: int = DEFAULT_MAX_DEPTH

    def __post_init__(self):
        if self.bounds is None:
            self.bounds = DomainBounds.centered(self.dims)
        if self.bounds.dims != self.dims:
            raise ValueError("bounds dimensionality does not match dims")
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")


@dataclass
class WeightedSampleSet:
    """Importance-weighted points: samples (n, K) with raw weights (n,)."""

    samples: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        self.samples = np.atleast_2d(np.asarray(self.samples, dtype=float))
        self.weights = np.asarray(self.weights, dtype=float)
        if self.samples.shape[0] != self.weights.shape[0]:
            raise ValueError("samples and weights must have equal length")

    def __len__(self) -> int:
        return self.samples.shape[0]


@dataclass
class TPAISResult:
    """Output of a sampler run: the weighted samples and the adapted tree."""

    sample_set: WeightedSampleSet
    tree: TreePyramid
    config: SamplerConfig = field(repr=False, default=None)


def standard_weight(target_value: float, component_value: float) -> float:
    """Importance weight against the sample's own component density."""
    if component_value <= 0.0:
        raise ValueError("sample fell outside its own component's support")
    return target_value / component_value


def dm_weight(target_value: float, proposal: TreeProposal, x) -> float:
    """Deterministic-mixture weight against the full current leaf mixture."""
    q = proposal.density(x)
    if q <= 0.0:
        raise ValueError("proposal mixture density is zero at the sample")
    return target_value / q


def _eval_target(target, x) -> np.ndarray:
    """Evaluate the target density on a batch and validate the values."""
    vals = np.asarray(target(x), dtype=float)
    if vals.ndim == 0:
        vals = vals[None]
    if not np.all(np.isfinite(vals)):
        raise ValueError("target density returned a non-finite value")
    if np.any(vals < 0.0):
        raise ValueError("target density returned a negative value")
    return vals


def _batch_draw(nodes, kernel: Kernel, rng: np.random.Generator, dims: int):
    """One draw per node; returns the points and each point's density under
    its own component."""
    centers = np.stack([node.center for node in nodes])
    radii = np.array([node.radius for node in nodes])
    if kernel is Kernel.UNIFORM:
        u = rng.random((len(nodes), dims))
        points = centers + (2.0 * u - 1.0) * radii[:, None]
        own = 1.0 / (2.0 * radii) ** dims
    else:
        z = rng.standard_normal((len(nodes), dims))
        points = centers + z * radii[:, None]
        own = (np.exp(-0.5 * np.sum(z * z, axis=1))
               / (radii * math.sqrt(2.0 * math.pi)) ** dims)
    return points, own


def run_tp_ais(target, config: SamplerConfig) -> TPAISResult:
    """Run the tree-pyramid adaptive importance sampler.

    Parameters
    ----------
    target : callable
        Unnormalized density over the domain; must accept a batch of points
        of shape (n, K) and return non-negative finite values.
    config : SamplerConfig

    Returns
    -------
    TPAISResult
        Without leaf resampling the sample set accumulates every draw in
        order (the run can be cut short after any iteration and remains a
        valid importance-sampling state). With ``resample_leaves`` each
        iteration redraws all current leaves in place and only the final
        per-leaf samples are returned. Deterministic-mixture weights in the
        returned set are evaluated against the mixture as it stood when
        each sample was drawn; use :func:`leaf_sample_set` to re-weight
        the final leaves against the finished tree.
    """
    rng = np.random.default_rng(config.seed)
    tree = TreePyramid(config.bounds, max_depth=config.max_depth)
    proposal = TreeProposal(tree, config.kernel)

    drawn_x: list[np.ndarray] = []
    drawn_w: list[float] = []

    def sample_nodes(nodes):
        points, own = _batch_draw(nodes, config.kernel, rng, config.dims)
        values = _eval_target(target, points)
        if config.weighting is Weighting.STANDARD:
            if np.any(own <= 0.0):
                raise ValueError("sample fell outside its own component's "
                                 "support")
            weights = values / own
        else:
            q = proposal.density(points)
            if np.any(q <= 0.0):
                raise ValueError("proposal mixture density is zero at a "
                                 "sample")
            weights = values / q
        for node, x, f, w in zip(nodes, points, values, weights):
            node.sample = x
            node.target_value = float(f)
            node.weight = float(w)
        return points, weights

    points, weights = sample_nodes([tree.root])
    drawn_x.extend(points)
    drawn_w.extend(weights)

    def reported_count() -> int:
        if config.resample_leaves:
            return len(tree.leaves())
        return len(drawn_x)

    while reported_count() < config.n_samples:
        if config.resample_leaves:
            sample_nodes(tree.leaves())
        leaves = tree.leaves()
        if config.node_selection is NodeSelection.MAX_EVIDENCE:
            scores = np.array([
                leaf.target_value * leaf.radius ** tree.dims for leaf in leaves
            ])
            chosen = leaves[int(np.argmax(scores))]
        else:
            chosen = leaves[sample_mixture(mixture_weights(tree), rng)]
        children = tree.expand(chosen)
        points, weights = sample_nodes(children)
        drawn_x.extend(points)
        drawn_w.extend(weights)

    if config.resample_leaves:
        leaves = tree.leaves()
        sample_set = WeightedSampleSet(
            np.array([leaf.sample for leaf in leaves]),
            np.array([leaf.weight for leaf in leaves]))
    else:
        sample_set = WeightedSampleSet(np.array(drawn_x), np.array(drawn_w))
    return TPAISResult(sample_set, tree, config)


def leaf_sample_set(tree: TreePyramid, kernel: Kernel,
                    weighting: Weighting = Weighting.STANDARD) -> WeightedSampleSet:
    """One weighted sample per current leaf, weighted against the final tree.

    Standard weights divide each leaf's stored target density by its own
    component density; deterministic-mixture weights divide by the full
    leaf-mixture density of the finished tree.
    """
    leaves = tree.leaves()
    if any(leaf.sample is None for leaf in leaves):
        raise ValueError("every leaf must hold a sample")
    samples = np.array([leaf.sample for leaf in leaves])
    values = np.array([leaf.target_value for leaf in leaves])
    if weighting is Weighting.STANDARD:
        own = np.array([
            component_density(leaf, x, kernel)
            for leaf, x in zip(leaves, samples)
        ])
        if np.any(own <= 0.0):
            raise ValueError("a leaf sample fell outside its own component's "
                             "support")
        weights = values / own
    else:
        proposal = TreeProposal(tree, kernel)
        q = proposal.density(samples)
        if np.any(q <= 0.0):
            raise ValueError("proposal mixture density is zero at a leaf "
                             "sample")
        weights = values / q
    return WeightedSampleSet(samples, weights)


def evidence_from_tree(target, tree: TreePyramid, kernel: Kernel,
                       rng: np.random.Generator) -> float:
    """Unbiased evidence estimate from an adapted tree.

    Draws one fresh point per leaf and averages the deterministic-mixture
    weights. Because the redraw is independent of how the tree was grown,
    the expectation equals the target mass the leaf mixture covers; reusing
    the samples stored during adaptation would instead be biased low, since
    refinement keeps exactly the leaves whose draws understated their cell
    mass.
    """
    leaves = tree.leaves()
    points, _ = _batch_draw(leaves, kernel, rng, tree.dims)
    values = _eval_target(target, points)
    q = TreeProposal(tree, kernel).density(points)
    if np.any(q <= 0.0):
        raise ValueError("proposal mixture density is zero at a fresh draw")
    return float(np.mean(values / q))
