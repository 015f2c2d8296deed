"""Boundary model: cylinder partitions, horocycle indices and the Poisson kernel.

Spherical functions are integrals of powers of the Poisson kernel against
the root's visibility measure. For a vertex at depth ``n`` the horocycle
index is constant on every cylinder of depth ``n``, so the integral is an
exact finite sum over index strata.
"""
from __future__ import annotations

import cmath
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .errors import BallTooSmallError, InvalidParameterError
from .kernels import prefix_lengths
from .tree import (
    ROOT,
    BallEnumeration,
    Cylinder,
    TreeParams,
    VertexAddress,
    ancestor_indices,
    ancestor_ratios,
    branching,
    check_radius,
    index_to_address,
    sphere_size,
)


def poisson_kernel_value(params: TreeParams, z: complex, index: int) -> complex:
    """``P^z = delta^(z * index / 2)`` for a cylinder with the given horocycle index."""
    return cmath.exp(z * index / 2 * math.log(params.delta))


@dataclass(frozen=True)
class BoundaryPartition:
    """Cylinders of depth ``depth`` paired with the horocycle index of a vertex."""

    depth: int
    entries: tuple[tuple[Cylinder, int], ...]

    def strata(self) -> dict[int, Fraction]:
        """Total measure per index value."""
        out: dict[int, Fraction] = {}
        for cyl, idx in self.entries:
            out[idx] = out.get(idx, Fraction(0)) + cyl.measure
        return dict(sorted(out.items()))

    def total_measure(self) -> Fraction:
        return sum((cyl.measure for cyl, _ in self.entries), Fraction(0))


def partition_with_indices(ball: BallEnumeration, x: VertexAddress) -> BoundaryPartition:
    """Enumerate the depth-``n`` cylinders, ``n = depth(x)``, with their indices."""
    p = ball.params
    n = x.depth
    if n > ball.radius:
        raise BallTooSmallError(f"depth(x) = {n} exceeds ball radius {ball.radius}")
    ball.require(x)
    if n == 0:
        return BoundaryPartition(0, ((Cylinder(ROOT, Fraction(1)), 0),))
    size = sphere_size(p, n)
    measure = Fraction(1, size)
    j = prefix_lengths(size, ancestor_ratios(p, n), ancestor_indices(p, x), n)
    entries = tuple(
        (Cylinder(index_to_address(p, n, k), measure), 2 * int(j[k]) - n) for k in range(size)
    )
    return BoundaryPartition(n, entries)


def index_strata(params: TreeParams, n: int) -> list[tuple[int, int]]:
    """``(index, number of depth-n cylinders)`` for any vertex at depth ``n``.

    A cylinder whose base leaves the geodesic to the vertex at depth ``j``
    has index ``2j - n``; there are ``branching(j) - 1`` ways to leave and
    every subsequent step is free. The counts only depend on ``n``.
    """
    if n < 0:
        raise InvalidParameterError(f"depth must be >= 0, got {n}")
    if n == 0:
        return [(0, 1)]
    out = [(n, 1)]
    below = 1  # descendants at depth n of a vertex at depth j + 1
    for j in range(n - 1, -1, -1):
        if branching(params, j) > 1:  # a vertex with one child has no way to leave
            out.append((2 * j - n, (branching(params, j) - 1) * below))
        below *= branching(params, j)
    out.sort()
    assert sum(c for _, c in out) == sphere_size(params, n)
    return out


def spherical_via_boundary(params: TreeParams, z: complex, r: int) -> complex:
    """Spherical function with parameter ``z`` at radius ``r``, as a boundary integral."""
    r = check_radius(params, r)
    if r == 0:
        return 1.0 + 0j
    size = sphere_size(params, r)
    log_delta = math.log(params.delta)
    total = 0j
    for idx, count in index_strata(params, r):
        total += (count / size) * cmath.exp(z * idx / 2 * log_delta)
    return total


def poisson_moment_exact(params: TreeParams, r: int, k: int) -> Fraction:
    """Exact ``sum over cylinders of measure * delta^(k * index / 2)`` for integer ``k``.

    On the orbit the half powers are integers: either the index is even, or
    ``kappa = 1`` and ``delta`` is the square of ``d0 - 1``.
    """
    r = check_radius(params, r)
    size = sphere_size(params, r)
    total = Fraction(0)
    for idx, count in index_strata(params, r):
        e = k * idx
        if e % 2 == 0:
            base, power = Fraction(params.delta), e // 2
        else:
            base, power = Fraction(params.d0 - 1), e
        total += Fraction(count, size) * base**power
    return total


def strata_from_enumeration(ball: BallEnumeration, x: VertexAddress) -> dict[int, int]:
    """Cylinder counts per index obtained by brute-force enumeration."""
    part = partition_with_indices(ball, x)
    return dict(sorted(Counter(idx for _, idx in part.entries).items()))
