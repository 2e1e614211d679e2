"""Closed-form homotopy types for stars and leafy caterpillars, and the
reduction of cycle instances to path instances.

The caterpillar formula sums over subsets T of spine edges: each T
contributes spheres of dimension (total spine bound) - |T| - 1 with
multiplicity prod_i C(m_i - 1, lambda_i - T_i), where T_i is the degree of
spine vertex i in T.  Out-of-range binomials are zero, which silently kills
subsets that over-saturate a vertex or ask for more leaves than exist.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Optional, Sequence

from .errors import HypothesisViolatedError, InvalidSizeError, InvalidStarError
from .graph import CaterpillarSpec, DegreeBounds, Graph, gen_path
from .recursion import SphereCounts, counts_normalize


def _binom(a: int, b: int) -> int:
    return comb(a, b) if 0 <= b <= a else 0


@dataclass(frozen=True)
class SpineSubset:
    """A subset of the spine edges 0..n-2 of a length-n spine."""

    n: int
    members: frozenset[int]

    def __post_init__(self):
        if any(not 0 <= e < self.n - 1 for e in self.members):
            raise ValueError("spine edge index out of range")

    @property
    def size(self) -> int:
        return len(self.members)

    def vertex_degrees(self) -> tuple[int, ...]:
        """Degree of each spine vertex in the subgraph induced by the subset."""
        deg = [0] * self.n
        for e in self.members:
            deg[e] += 1
            deg[e + 1] += 1
        return tuple(deg)

    def suspension_flags(self) -> tuple[int, ...]:
        """1 at spine vertex i > 0 when the edge entering it from the left is chosen."""
        return tuple(
            1 if i > 0 and (i - 1) in self.members else 0 for i in range(self.n)
        )


def spine_subsets(n: int):
    """All subsets of the n-1 spine edges of a length-n spine."""
    for r in range(n):
        for combo in itertools.combinations(range(n - 1), r):
            yield SpineSubset(n, frozenset(combo))


def star_profile(k: int, r: int) -> SphereCounts:
    """Homotopy type of the complex of a star with r leaves and center bound k.

    The faces are the leaf-edge subsets of size at most k, i.e. the
    (k-1)-skeleton of a simplex on r vertices: a wedge of C(r-1, k) spheres
    of dimension k-1 when k < r, a point when k >= r, and the bare empty
    face when k = 0.
    """
    if r < 1:
        raise InvalidStarError("a star needs at least one leaf")
    if k < 0:
        raise ValueError("the center bound must be non-negative")
    if k == 0:
        return {-1: 1}
    if k >= r:
        return {}
    return {k - 1: _binom(r - 1, k)}


def caterpillar_closed_form(spec: CaterpillarSpec) -> SphereCounts:
    """Sphere counts for a caterpillar in which every spine vertex has a leaf."""
    if any(m == 0 for m in spec.m):
        raise HypothesisViolatedError(
            "closed form needs every spine vertex adjacent to a leaf; "
            "use the forest recursion instead"
        )
    total = sum(spec.lambda_spine)
    counts: SphereCounts = {}
    for subset in spine_subsets(spec.n):
        degrees = subset.vertex_degrees()
        mult = 1
        for m_i, lam_i, t_i in zip(spec.m, spec.lambda_spine, degrees):
            mult *= _binom(m_i - 1, lam_i - t_i)
            if mult == 0:
                break
        if mult:
            d = total - subset.size - 1
            counts[d] = counts.get(d, 0) + mult
    return counts_normalize(counts)


def _cycle_rotation(bounds: Sequence[int]) -> Optional[int]:
    """Index of the first bound != 1, or None when every bound is 1."""
    for i, b in enumerate(bounds):
        if b != 1:
            return i
    return None


def cycle_reduce(n: int, bounds: Sequence[int]) -> Optional[tuple[Graph, DegreeBounds]]:
    """Path instance whose complex equals that of the cycle instance.

    The cycle is rotated so the first bound different from 1 sits at the last
    position.  A zero bound there disconnects the cycle into a shorter path;
    a bound of at least 2 makes the constraint at that vertex slack enough to
    split it into the two ends of a longer path.  Returns None when every
    bound is 1, where no such reduction exists.
    """
    bounds = tuple(int(b) for b in bounds)
    if n < 3 or len(bounds) != n:
        raise InvalidSizeError("cycle instances need n >= 3 matching bounds")
    if any(b < 0 for b in bounds):
        raise ValueError("degree bounds must be non-negative")
    pivot = _cycle_rotation(bounds)
    if pivot is None:
        return None
    rotated = tuple(bounds[(j + pivot + 1) % n] for j in range(n))
    last = rotated[n - 1]
    if last == 0:
        return gen_path(n - 1), rotated[: n - 1]
    return gen_path(n + 1), (1,) + rotated[: n - 1] + (last - 1,)


def cycle_reduction_edge_map(n: int, bounds: Sequence[int]) -> Optional[tuple[Optional[int], ...]]:
    """Cycle edge index -> path edge index under the reduction, None per killed edge.

    Cycle edge k joins vertices k and k+1 mod n.  Matches the rotation chosen
    by cycle_reduce; returns None when the instance is not reducible.
    """
    bounds = tuple(int(b) for b in bounds)
    if n < 3 or len(bounds) != n:
        raise InvalidSizeError("cycle instances need n >= 3 matching bounds")
    pivot = _cycle_rotation(bounds)
    if pivot is None:
        return None
    if bounds[pivot] == 0:
        mapping = []
        for k in range(n):
            j = (k - pivot - 1) % n
            mapping.append(j if j <= n - 3 else None)
        return tuple(mapping)
    return tuple((k - pivot) % n for k in range(n))
