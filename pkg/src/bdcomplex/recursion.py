"""Sphere-count vectors of bounded degree complexes of forests.

The homotopy type of such a complex is a wedge of spheres (or contractible),
so it is fully described by a map from dimension to sphere multiplicity.
Vectors are plain dicts holding only nonzero counts: {} is contractible and
{-1: 1} is the complex consisting of the empty face alone.

The computation removes one edge at a time.  Deleting the chosen edge keeps
the bounds; using it lowers both endpoint bounds by one and contributes a
suspension, i.e. a dimension shift by one.  Components are handled
independently and combined with the join convolution.
"""

from __future__ import annotations

from typing import Callable, MutableMapping, Optional, Sequence

from .errors import NotAForestError, WouldGoNegativeError
from .graph import (
    CanonicalKey,
    DegreeBounds,
    Graph,
    canonical_code,
    components,
    is_forest,
    validate_bounds,
)

SphereCounts = dict[int, int]


def counts_normalize(counts: dict[int, int]) -> SphereCounts:
    return {d: c for d, c in counts.items() if c}


def counts_shift(counts: SphereCounts, by: int = 1) -> SphereCounts:
    """Suspension: every sphere dimension moves up by `by`."""
    return {d + by: c for d, c in counts.items()}


def counts_add(a: SphereCounts, b: SphereCounts) -> SphereCounts:
    out = dict(a)
    for d, c in b.items():
        out[d] = out.get(d, 0) + c
    return counts_normalize(out)


def join_convolve(a: SphereCounts, b: SphereCounts) -> SphereCounts:
    """Sphere counts of a join: dimensions add plus one, multiplicities multiply.

    The empty-complex vector {-1: 1} is the identity and a contractible
    (all-zero) factor makes the whole join contractible; both fall out of the
    convolution itself.
    """
    out: SphereCounts = {}
    for p, cp in a.items():
        for q, cq in b.items():
            d = p + q + 1
            out[d] = out.get(d, 0) + cp * cq
    return counts_normalize(out)


def decrement_bounds(bounds: Sequence[int], edge: tuple[int, int]) -> DegreeBounds:
    """Lower both endpoint bounds of `edge` by one."""
    u, v = edge
    if bounds[u] < 1 or bounds[v] < 1:
        raise WouldGoNegativeError(f"cannot decrement zero bound on edge ({u},{v})")
    out = list(bounds)
    out[u] -= 1
    out[v] -= 1
    return tuple(out)


def simplify(graph: Graph, bounds: Sequence[int]) -> tuple[Graph, DegreeBounds]:
    """Drop edges at zero-bound vertices, then drop isolated vertices.

    The bounded degree complex is unchanged: an edge at a zero-bound vertex
    can never appear in a face, and a vertex without edges imposes nothing.
    """
    bounds = validate_bounds(graph, bounds)
    if not is_forest(graph):
        raise NotAForestError("simplify expects a forest")
    edges = tuple(
        (u, v) for u, v in graph.edges if bounds[u] > 0 and bounds[v] > 0
    )
    used = sorted({v for e in edges for v in e})
    index = {v: i for i, v in enumerate(used)}
    return (
        Graph(len(used), tuple((index[u], index[v]) for u, v in edges)),
        tuple(bounds[v] for v in used),
    )


def pick_recursion_edge(graph: Graph) -> Optional[int]:
    """Smallest-index edge with a leaf neighbor off the edge, or None.

    The edge {v,w} qualifies when some leaf u outside {v,w} is adjacent to v
    or to w.  On a simplified forest this is exactly the condition that makes
    removing the edge a valid recursion step; None means every component is a
    single edge (or there are no edges), i.e. a base case.
    """
    deg = graph.degrees()
    adj = graph.adjacency()
    for i, (v, w) in enumerate(graph.edges):
        for x in (v, w):
            if any(deg[u] == 1 and u != v and u != w for u in adj[x]):
                return i
    return None


def sphere_counts(
    graph: Graph,
    bounds: Sequence[int],
    *,
    cache: Optional[MutableMapping[CanonicalKey, SphereCounts]] = None,
    edge_picker: Optional[Callable[[Graph], Optional[int]]] = None,
) -> SphereCounts:
    """Sphere multiplicities of the bounded degree complex of a forest.

    `cache` memoizes results by canonical forest code; pass a shared mapping
    to reuse work across calls.  Concurrent use is safe: entries for equal
    keys are equal values, so lost updates are benign.  `edge_picker`
    overrides the recursion edge choice (any edge with a leaf neighbor off
    the edge yields the same result; this hook exists so tests can verify
    that).
    """
    bounds = validate_bounds(graph, bounds)
    if not is_forest(graph):
        raise NotAForestError("sphere counts require a forest")
    if cache is None:
        cache = {}
    result = _counts(graph, bounds, cache, edge_picker or pick_recursion_edge)
    return dict(result)


def _counts(
    graph: Graph,
    bounds: DegreeBounds,
    cache: MutableMapping[CanonicalKey, SphereCounts],
    pick: Callable[[Graph], Optional[int]],
) -> SphereCounts:
    graph, bounds = simplify(graph, bounds)
    if graph.num_edges == 0:
        return {-1: 1}
    key = canonical_code(graph, bounds)
    hit = cache.get(key)
    if hit is not None:
        return hit
    parts = components(graph, bounds)
    if len(parts) > 1:
        result: SphereCounts = {-1: 1}
        for part in parts:
            result = join_convolve(result, _counts(part.graph, part.bounds, cache, pick))
    elif graph.num_edges == 1:
        # a lone edge with both bounds >= 1: a cone, hence contractible
        result = {}
    else:
        e = pick(graph)
        if e is None:
            raise RuntimeError("no recursion edge on a component with >= 2 edges")
        endpoints = graph.edges[e]
        rest = graph.remove_edge(e)
        kept = _counts(rest, bounds, cache, pick)
        used = _counts(rest, decrement_bounds(bounds, endpoints), cache, pick)
        result = counts_add(kept, counts_shift(used, 1))
    cache[key] = result
    return result
