"""Finite model of a semi-homogeneous tree around the root vertex.

The root has degree ``d0``. A vertex is addressed by its child-index path
from the root; inside a ball it is equivalently addressed by its depth and
its index within the sphere of that depth (the path read as a mixed-radix
number, lexicographic order).
"""
from __future__ import annotations

import itertools
import os
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import (
    BudgetExceededError,
    InvalidParameterError,
    NotRefinedError,
    VertexOutsideBallError,
)

DEFAULT_BUDGET = 10**7
BUDGET_ENV = "TREEHARM_BUDGET"


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError as exc:
        raise InvalidParameterError(f"{BUDGET_ENV}={raw!r} is not an integer") from exc
    if value < 1:
        raise InvalidParameterError(f"{BUDGET_ENV} must be positive")
    return value


@dataclass(frozen=True)
class TreeParams:
    """Degrees of the tree and the number of vertex orbits of the group.

    ``kappa = 1`` means the group is vertex-transitive, which forces a
    homogeneous tree (``d0 == d1``).
    """

    d0: int
    d1: int
    kappa: int
    delta: int = field(init=False)

    def __post_init__(self):
        for name in ("d0", "d1", "kappa"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise InvalidParameterError(f"{name} must be an integer, got {value!r}")
        d0, d1, kappa = int(self.d0), int(self.d1), int(self.kappa)
        if d0 < 2 or d1 < 2:
            raise InvalidParameterError(f"degrees must be >= 2, got ({d0}, {d1})")
        if d0 + d1 < 5:
            raise InvalidParameterError(f"need d0 + d1 >= 5, got ({d0}, {d1})")
        if kappa not in (1, 2):
            raise InvalidParameterError(f"kappa must be 1 or 2, got {kappa}")
        if kappa == 1 and d0 != d1:
            raise InvalidParameterError(
                "kappa = 1 (one vertex orbit) requires a homogeneous tree, d0 == d1"
            )
        object.__setattr__(self, "d0", d0)
        object.__setattr__(self, "d1", d1)
        object.__setattr__(self, "kappa", kappa)
        object.__setattr__(self, "delta", (d0 - 1) * (d1 - 1))

    def to_dict(self) -> dict:
        return {"d0": self.d0, "d1": self.d1, "kappa": self.kappa}


def make_tree_params(d0: int, d1: int, kappa: int) -> TreeParams:
    """Validated :class:`TreeParams`; raises :class:`InvalidParameterError`."""
    return TreeParams(d0, d1, kappa)


def branching(params: TreeParams, depth: int) -> int:
    """Number of children of a vertex at ``depth``."""
    if depth == 0:
        return params.d0
    return params.d1 - 1 if depth % 2 else params.d0 - 1


@lru_cache(maxsize=4096)
def sphere_size(params: TreeParams, r: int) -> int:
    """Cardinality of the sphere of radius ``r`` around the root."""
    if r < 0:
        raise InvalidParameterError(f"radius must be >= 0, got {r}")
    if r == 0:
        return 1
    odd = r // 2          # ceil((r-1)/2)
    even = (r - 1) // 2   # floor((r-1)/2)
    return params.d0 * (params.d1 - 1) ** odd * (params.d0 - 1) ** even


def ball_size(params: TreeParams, radius: int) -> int:
    return sum(sphere_size(params, r) for r in range(radius + 1))


def check_radius(params: TreeParams, m: int) -> int:
    """Validate that ``m`` is a radius of the orbit ``Go`` (a multiple of kappa)."""
    if isinstance(m, bool) or not isinstance(m, (int, np.integer)) or m < 0:
        raise InvalidParameterError(f"radius must be a nonnegative integer, got {m!r}")
    if m % params.kappa:
        raise InvalidParameterError(f"radius {m} is not a multiple of kappa={params.kappa}")
    return int(m)


@dataclass(frozen=True, order=True)
class VertexAddress:
    path: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "path", tuple(int(c) for c in self.path))
        if any(c < 0 for c in self.path):
            raise InvalidParameterError(f"negative child index in {self.path}")

    @property
    def depth(self) -> int:
        return len(self.path)

    def parent(self) -> VertexAddress:
        if not self.path:
            raise InvalidParameterError("the root has no parent")
        return VertexAddress(self.path[:-1])

    def common_prefix(self, other: VertexAddress) -> int:
        n = 0
        for a, b in zip(self.path, other.path):
            if a != b:
                break
            n += 1
        return n

    def __str__(self):
        return "o" if not self.path else "o/" + "/".join(map(str, self.path))


ROOT = VertexAddress(())


def is_valid_address(params: TreeParams, x: VertexAddress) -> bool:
    return all(c < branching(params, t) for t, c in enumerate(x.path))


def address_to_index(params: TreeParams, x: VertexAddress) -> int:
    """Index of ``x`` within its sphere."""
    if not is_valid_address(params, x):
        raise InvalidParameterError(f"address {x} is not a vertex of this tree")
    idx = 0
    for t, c in enumerate(x.path):
        idx = idx * branching(params, t) + c
    return idx


def index_to_address(params: TreeParams, depth: int, index: int) -> VertexAddress:
    if not 0 <= index < sphere_size(params, depth):
        raise InvalidParameterError(f"index {index} outside sphere of radius {depth}")
    digits = []
    for t in range(depth - 1, -1, -1):
        index, c = divmod(index, branching(params, t))
        digits.append(c)
    return VertexAddress(tuple(reversed(digits)))


def ancestor_ratios(params: TreeParams, depth: int) -> np.ndarray:
    """``|S_depth| / |S_t|`` for ``t = 0..depth``; ancestor index is ``k // ratio``."""
    size = sphere_size(params, depth)
    out = [size // sphere_size(params, t) for t in range(depth + 1)]
    if size >= 2**62:
        raise BudgetExceededError(f"sphere of radius {depth} overflows 64-bit indices")
    return np.array(out, dtype=np.int64)


def ancestor_indices(params: TreeParams, x: VertexAddress) -> np.ndarray:
    """Sphere index of the ancestor of ``x`` at each depth ``0..depth(x)``."""
    out = [0]
    idx = 0
    for t, c in enumerate(x.path):
        idx = idx * branching(params, t) + c
        out.append(idx)
    return np.array(out, dtype=np.int64)


class _VertexView(Sequence):
    """Lazy list of the addresses of a ball, in breadth-first order."""

    def __init__(self, ball: BallEnumeration):
        self._ball = ball

    def __len__(self):
        return len(self._ball)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[k] for k in range(*i.indices(len(self)))]
        return self._ball.address(i)


class BallEnumeration:
    """All vertices of depth <= ``radius`` with explicit parent links.

    Vertices are numbered breadth-first; within a sphere the numbering is the
    lexicographic order of addresses. ``depth[g]`` and ``parent[g]`` are numpy
    arrays over global vertex numbers (``parent[0] == -1``).
    """

    def __init__(self, params: TreeParams, radius: int, budget: int | None = None):
        if radius < 0:
            raise InvalidParameterError(f"radius must be >= 0, got {radius}")
        budget = default_budget() if budget is None else budget
        total = ball_size(params, radius)
        if total > budget:
            raise BudgetExceededError(
                f"ball of radius {radius} for {params.to_dict()} has {total} vertices, "
                f"budget is {budget}"
            )
        self.params = params
        self.radius = radius
        sizes = [sphere_size(params, r) for r in range(radius + 1)]
        self.offsets = np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)
        self.depth = np.repeat(np.arange(radius + 1, dtype=np.int8), sizes)
        self.parent = np.empty(total, dtype=np.int64)
        self.parent[0] = -1
        for r in range(1, radius + 1):
            k = np.arange(sizes[r], dtype=np.int64)
            self.parent[self.offsets[r]:self.offsets[r + 1]] = (
                self.offsets[r - 1] + k // branching(params, r - 1)
            )

    def __len__(self):
        return int(self.offsets[-1])

    @property
    def vertices(self) -> Sequence[VertexAddress]:
        return _VertexView(self)

    def sphere(self, r: int) -> range:
        """Global vertex numbers of the sphere of radius ``r``."""
        return range(int(self.offsets[r]), int(self.offsets[r + 1]))

    def sphere_addresses(self, r: int) -> Iterator[VertexAddress]:
        ranges = [range(branching(self.params, t)) for t in range(r)]
        for path in itertools.product(*ranges):
            yield VertexAddress(path)

    def address(self, g: int) -> VertexAddress:
        g = int(g)
        if not 0 <= g < len(self):
            raise IndexError(g)
        r = int(self.depth[g])
        return index_to_address(self.params, r, g - int(self.offsets[r]))

    def index_of(self, x: VertexAddress) -> int:
        self.require(x)
        return int(self.offsets[x.depth]) + address_to_index(self.params, x)

    def contains(self, x: VertexAddress) -> bool:
        return x.depth <= self.radius and is_valid_address(self.params, x)

    def require(self, x: VertexAddress) -> None:
        if not self.contains(x):
            raise VertexOutsideBallError(f"vertex {x} is not in the ball of radius {self.radius}")

    def parent_of(self, x: VertexAddress) -> VertexAddress:
        return self.address(self.parent[self.index_of(x)])

    def sphere_counts(self) -> np.ndarray:
        return np.bincount(self.depth, minlength=self.radius + 1)


def enumerate_ball(params: TreeParams, radius: int, budget: int | None = None) -> BallEnumeration:
    """Enumerate the ball of ``radius`` around the root; see :class:`BallEnumeration`."""
    return BallEnumeration(params, radius, budget)


def distance(ball: BallEnumeration, x: VertexAddress, y: VertexAddress) -> int:
    """Shortest-path distance between two vertices of the ball."""
    ball.require(x)
    ball.require(y)
    return x.depth + y.depth - 2 * x.common_prefix(y)


@dataclass(frozen=True)
class Cylinder:
    """Boundary points whose ray from the root passes through ``base``."""

    base: VertexAddress
    measure: Fraction

    @property
    def depth(self) -> int:
        return self.base.depth


def cylinders_at_depth(params: TreeParams, n: int) -> list[Cylinder]:
    """The partition of the boundary into the cylinders of depth ``n``.

    Every cylinder has the same root-visibility measure by K-invariance.
    """
    if n < 1:
        raise InvalidParameterError(f"cylinder depth must be >= 1, got {n}")
    measure = Fraction(1, sphere_size(params, n))
    ranges = [range(branching(params, t)) for t in range(n)]
    return [Cylinder(VertexAddress(p), measure) for p in itertools.product(*ranges)]


def horocycle_index(x: VertexAddress, cyl: Cylinder) -> int:
    """Horocycle index of ``x`` relative to the root, constant on ``cyl``.

    Equals ``d(o, u) - d(x, u)`` for any vertex ``u`` far enough along a ray
    in the cylinder, i.e. ``2j - n`` where ``j`` is the length of the common
    prefix of ``x`` and the cylinder base and ``n = depth(x)``.
    """
    n = x.depth
    if cyl.depth < n:
        raise NotRefinedError(
            f"cylinder depth {cyl.depth} < depth(x) = {n}; index not constant on it"
        )
    return 2 * x.common_prefix(cyl.base) - n
