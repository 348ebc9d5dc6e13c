"""Tree pyramids: full 2**K-ary partition trees over hypercube domains.

Every node owns an axis-aligned hypercube cell described by a center and a
single scalar half-width (radius). Expanding a node splits its cell into
2**K congruent sub-cells, one per sign combination of ``center +- radius/2``.
The childless nodes (leaves) always partition the root cell exactly.

Cells follow a half-open convention: a point belongs to ``[c - r, c + r)``
in every dimension, except that faces lying on the domain's upper boundary
are closed so the full domain stays covered.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

DEFAULT_MAX_DEPTH = 64


class DepthLimitError(RuntimeError):
    """Raised when expanding a node would exceed the tree's depth cap."""


@dataclass(frozen=True)
class DomainBounds:
    """Axis-aligned hypercube domain ``[lower_d, upper_d]`` for each dimension.

    Extents must be strictly positive and equal across dimensions: the tree
    uses one scalar radius per node, so only hypercube domains are supported.
    """

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.atleast_1d(np.asarray(self.lower, dtype=float))
        upper = np.atleast_1d(np.asarray(self.upper, dtype=float))
        if lower.ndim != 1 or lower.shape != upper.shape:
            raise ValueError("bounds must be 1-d arrays of equal length")
        extents = upper - lower
        if np.any(extents <= 0.0):
            raise ValueError("every upper bound must exceed its lower bound")
        if not np.allclose(extents, extents[0], rtol=1e-12, atol=0.0):
            raise ValueError("domain must be a hypercube (equal extents)")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def centered(cls, dims: int, half_width: float = 1.0) -> "DomainBounds":
        """Symmetric domain ``[-half_width, half_width]**dims``."""
        if dims < 1:
            raise ValueError("dims must be >= 1")
        return cls(np.full(dims, -half_width), np.full(dims, half_width))

    @property
    def dims(self) -> int:
        return self.lower.shape[0]

    @property
    def center(self) -> np.ndarray:
        return (self.upper + self.lower) / 2.0

    @property
    def radius(self) -> float:
        return float((self.upper[0] - self.lower[0]) / 2.0)

    @property
    def volume(self) -> float:
        return float(np.prod(self.upper - self.lower))


class Node:
    """One cell of a tree pyramid.

    Attributes
    ----------
    center : ndarray, shape (K,)
        Cell center.
    radius : float
        Scalar half-width; the cell is ``center +- radius`` in every axis.
    level : int
        Depth below the root (root is 0).
    children : list of Node
        Empty for leaves, exactly ``2**K`` entries otherwise.
    sample, weight, target_value
        Last sample drawn inside the cell, its importance weight and raw
        target density. ``None`` until the node has been sampled.
    top_faces : int
        Bitmask; bit ``d`` is set when the cell's upper face in dimension
        ``d`` lies on the domain boundary (those faces are closed).
    """

    __slots__ = ("center", "radius", "level", "children", "sample", "weight",
                 "target_value", "top_faces")

    def __init__(self, center, radius, level, top_faces):
        self.center = np.asarray(center, dtype=float)
        self.radius = float(radius)
        self.level = int(level)
        self.children: list["Node"] = []
        self.sample = None
        self.weight = None
        self.target_value = None
        self.top_faces = int(top_faces)

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def dims(self) -> int:
        return self.center.shape[0]

    @property
    def volume(self) -> float:
        return float((2.0 * self.radius) ** self.dims)

    def contains(self, x) -> bool:
        """Half-open membership test for a single point."""
        x = np.asarray(x, dtype=float)
        lo = self.center - self.radius
        hi = self.center + self.radius
        top = np.array([(self.top_faces >> d) & 1 for d in range(self.dims)],
                       dtype=bool)
        below = (x < hi) | (top & (x == hi))
        return bool(np.all((x >= lo) & below))


class TreePyramid:
    """Full 2**K-ary tree of hypercube cells over a bounded domain.

    The root cell is the whole domain (center ``(upper + lower) / 2``,
    radius ``(upper - lower) / 2``). ``leaves()`` reflects insertion order:
    expanding a leaf removes it and appends its children.
    """

    def __init__(self, bounds: DomainBounds, max_depth: int = DEFAULT_MAX_DEPTH):
        if max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        self.bounds = bounds
        self.dims = bounds.dims
        self.max_depth = int(max_depth)
        self.root = Node(bounds.center, bounds.radius, 0, (1 << self.dims) - 1)
        self._leaves: list[Node] = [self.root]
        # Children are ordered lexicographically over the sign pattern:
        # "+" before "-", first dimension most significant.
        self._signs = list(itertools.product((1.0, -1.0), repeat=self.dims))

    def leaves(self) -> list[Node]:
        """Current leaf set in insertion order (do not mutate)."""
        return list(self._leaves)

    def __len__(self) -> int:
        """Total number of nodes."""
        count = 0
        stack = [self.root]
        while stack:
            node = stack.pop()
            count += 1
            stack.extend(node.children)
        return count

    def expand(self, node: Node) -> list[Node]:
        """Split a leaf into its 2**K children and return them.

        Raises ``ValueError`` for non-leaf nodes and ``DepthLimitError``
        when the child level would exceed ``max_depth``.
        """
        if node.children:
            raise ValueError("only leaf nodes can be expanded")
        if node.level >= self.max_depth:
            raise DepthLimitError(
                f"expansion past depth cap {self.max_depth}; the tree cannot "
                "refine further")
        half = node.radius / 2.0
        children = []
        for signs in self._signs:
            offset = half * np.asarray(signs)
            mask = 0
            for d, s in enumerate(signs):
                if s > 0 and (node.top_faces >> d) & 1:
                    mask |= 1 << d
            children.append(Node(node.center + offset, half, node.level + 1, mask))
        node.children = children
        self._leaves.remove(node)
        self._leaves.extend(children)
        return children

    def find_leaf(self, x) -> Node:
        """Return the unique leaf whose cell contains ``x``.

        Descends from the root, picking the "+" child along dimension ``d``
        whenever ``x[d] >= center[d]``; this realizes the half-open cell
        convention without any floating-point tolerance.
        """
        x = np.asarray(x, dtype=float)
        if not self.root.contains(x):
            raise ValueError("point lies outside the domain")
        node = self.root
        while node.children:
            idx = 0
            for d in range(self.dims):
                idx <<= 1
                if x[d] < node.center[d]:
                    idx |= 1
            node = node.children[idx]
        return node


def serialize_tree(tree: TreePyramid) -> str:
    """Render a tree as deterministic line-oriented text.

    One node per line in depth-first preorder (children in sign order);
    fields are level, center coordinates, radius, weight and sample
    coordinates, space-separated, with ``-`` for unset values.
    """
    lines = []

    def fmt(value) -> str:
        return repr(float(value))

    def visit(node: Node):
        fields = [str(node.level)]
        fields.extend(fmt(c) for c in node.center)
        fields.append(fmt(node.radius))
        fields.append(fmt(node.weight) if node.weight is not None else "-")
        if node.sample is not None:
            fields.extend(fmt(s) for s in node.sample)
        else:
            fields.append("-")
        lines.append(" ".join(fields))
        for child in node.children:
            visit(child)

    visit(tree.root)
    return "\n".join(lines) + "\n"
