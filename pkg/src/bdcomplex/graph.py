"""Simple undirected graphs, family generators, and canonical forest codes.

Vertices are integers 0..num_vertices-1 and edges are kept in a fixed order:
edge i is a stable name that later doubles as vertex i of the bounded degree
complex.  Degree bounds are plain tuples of non-negative integers, one per
vertex.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .errors import (
    DuplicateEdgeError,
    IndexOutOfRangeError,
    InvalidSizeError,
    LoopEdgeError,
    NotAForestError,
)

Edge = tuple[int, int]
DegreeBounds = tuple[int, ...]
CanonicalKey = bytes


@dataclass(frozen=True)
class Graph:
    """A simple undirected graph with positional vertex and edge identity."""

    num_vertices: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if self.num_vertices < 0:
            raise InvalidSizeError("num_vertices must be non-negative")
        normalized = []
        for u, v in self.edges:
            if u == v:
                raise LoopEdgeError(f"loop edge at vertex {u}")
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
                raise IndexOutOfRangeError(f"edge ({u},{v}) out of range")
            normalized.append((u, v) if u < v else (v, u))
        if len(set(normalized)) != len(normalized):
            raise DuplicateEdgeError("duplicate edge in edge list")
        object.__setattr__(self, "edges", tuple(normalized))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def degrees(self) -> list[int]:
        deg = [0] * self.num_vertices
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.num_vertices)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def remove_edge(self, index: int) -> "Graph":
        """Same vertex set with edge `index` dropped; later edges shift down."""
        return Graph(self.num_vertices, self.edges[:index] + self.edges[index + 1 :])


def make_graph(num_vertices: int, edges: Iterable[Sequence[int]]) -> Graph:
    """Validate and build a simple graph from vertex-index pairs."""
    return Graph(num_vertices, tuple((e[0], e[1]) for e in edges))


def validate_bounds(graph: Graph, bounds: Sequence[int]) -> DegreeBounds:
    """Check a per-vertex bound vector against `graph` and normalize to a tuple."""
    bounds = tuple(int(b) for b in bounds)
    if len(bounds) != graph.num_vertices:
        raise ValueError(
            f"expected {graph.num_vertices} bounds, got {len(bounds)}"
        )
    if any(b < 0 for b in bounds):
        raise ValueError("degree bounds must be non-negative")
    return bounds


@dataclass(frozen=True)
class CaterpillarSpec:
    """Spine length, per-spine leaf counts, and per-spine degree bounds.

    Leaves always get bound 1; only the spine bounds are free parameters.
    """

    m: tuple[int, ...]
    lambda_spine: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(int(x) for x in self.m))
        object.__setattr__(
            self, "lambda_spine", tuple(int(x) for x in self.lambda_spine)
        )
        if len(self.m) != len(self.lambda_spine) or not self.m:
            raise InvalidSizeError("m and lambda_spine must have equal length >= 1")
        if any(x < 0 for x in self.m) or any(x < 0 for x in self.lambda_spine):
            raise ValueError("leaf counts and bounds must be non-negative")

    @property
    def n(self) -> int:
        return len(self.m)


def gen_path(n: int) -> Graph:
    """Path on n vertices: edges (0,1), (1,2), ..., (n-2,n-1)."""
    if n < 1:
        raise InvalidSizeError("a path needs at least one vertex")
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def gen_cycle(n: int) -> Graph:
    """Cycle on n vertices: path edges first, then the closing edge (0,n-1)."""
    if n < 3:
        raise InvalidSizeError("a cycle needs at least three vertices")
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)) + ((0, n - 1),))


def gen_caterpillar(spec: CaterpillarSpec) -> tuple[Graph, DegreeBounds]:
    """Caterpillar graph plus its bound vector.

    Vertices: spine 0..n-1 first, then leaf blocks in spine order.  Edges:
    the n-1 spine edges first, then each spine vertex's leaf edges as a
    block.  Bounds: the spine bounds followed by 1 for every leaf.
    """
    n = spec.n
    edges = [(i, i + 1) for i in range(n - 1)]
    next_leaf = n
    for i, leaves in enumerate(spec.m):
        for _ in range(leaves):
            edges.append((i, next_leaf))
            next_leaf += 1
    bounds = spec.lambda_spine + (1,) * sum(spec.m)
    return Graph(next_leaf, tuple(edges)), bounds


def is_forest(graph: Graph) -> bool:
    """True iff the graph is acyclic."""
    parent = list(range(graph.num_vertices))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in graph.edges:
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


def disjoint_union(
    g1: Graph, b1: Sequence[int], g2: Graph, b2: Sequence[int]
) -> tuple[Graph, DegreeBounds]:
    """Disjoint union with g2's vertices and edges appended after g1's."""
    shift = g1.num_vertices
    edges = g1.edges + tuple((u + shift, v + shift) for u, v in g2.edges)
    return Graph(shift + g2.num_vertices, edges), tuple(b1) + tuple(b2)


class GraphComponent(NamedTuple):
    graph: Graph
    bounds: DegreeBounds
    vertex_map: tuple[int, ...]  # new vertex index -> original vertex index
    edge_map: tuple[int, ...]  # new edge index -> original edge index


def components(graph: Graph, bounds: Sequence[int]) -> list[GraphComponent]:
    """Connected components with restricted bounds and re-index maps.

    Isolated vertices are dropped: they carry no edges, so they do not
    contribute to the bounded degree complex.  Components are ordered by
    their smallest original vertex; edge order within a component follows
    the original edge order.
    """
    bounds = validate_bounds(graph, bounds)
    adj = graph.adjacency()
    seen = [False] * graph.num_vertices
    out: list[GraphComponent] = []
    for start in range(graph.num_vertices):
        if seen[start] or not adj[start]:
            seen[start] = True
            continue
        stack = [start]
        seen[start] = True
        vertices = []
        while stack:
            v = stack.pop()
            vertices.append(v)
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        vertices.sort()
        index = {v: i for i, v in enumerate(vertices)}
        vset = set(vertices)
        edge_ids = [i for i, (u, v) in enumerate(graph.edges) if u in vset]
        sub_edges = tuple(
            (index[graph.edges[i][0]], index[graph.edges[i][1]]) for i in edge_ids
        )
        out.append(
            GraphComponent(
                Graph(len(vertices), sub_edges),
                tuple(bounds[v] for v in vertices),
                tuple(vertices),
                tuple(edge_ids),
            )
        )
    return out


def canonical_code(graph: Graph, bounds: Sequence[int]) -> CanonicalKey:
    """Canonical byte code of a vertex-labeled forest.

    Two (forest, bounds) pairs get the same code exactly when there is a
    graph isomorphism between them that preserves the bounds.  Each tree is
    rooted at its center (the middle of a longest path), subtree codes are
    sorted bottom-up, and the bound of every vertex is woven into its code.
    Raises NotAForestError on cyclic input.
    """
    bounds = validate_bounds(graph, bounds)
    if not is_forest(graph):
        raise NotAForestError("canonical codes are defined for forests only")
    adj = graph.adjacency()

    def subtree_code(root: int, parent: int) -> bytes:
        kids = sorted(
            subtree_code(c, root) for c in adj[root] if c != parent
        )
        return b"(%d:" % bounds[root] + b"".join(kids) + b")"

    def tree_code(vertices: list[int]) -> bytes:
        if len(vertices) == 1:
            return subtree_code(vertices[0], -1)
        # peel leaves layer by layer until one or two center vertices remain
        vset = set(vertices)
        deg = {v: sum(1 for w in adj[v] if w in vset) for v in vertices}
        remaining = set(vertices)
        layer = [v for v in vertices if deg[v] <= 1]
        while len(remaining) > 2:
            nxt = []
            for v in layer:
                remaining.discard(v)
                for w in adj[v]:
                    if w in remaining:
                        deg[w] -= 1
                        if deg[w] == 1:
                            nxt.append(w)
            layer = nxt
        centers = sorted(remaining)
        if len(centers) == 1:
            return subtree_code(centers[0], -1)
        c1, c2 = centers
        halves = sorted([subtree_code(c1, c2), subtree_code(c2, c1)])
        return b"=" + halves[0] + halves[1]

    trees = []
    seen = [False] * graph.num_vertices
    for start in range(graph.num_vertices):
        if seen[start]:
            continue
        stack, verts = [start], []
        seen[start] = True
        while stack:
            v = stack.pop()
            verts.append(v)
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        trees.append(tree_code(verts))
    trees.sort()
    return b"|".join(trees)


def nonisomorphic_trees(num_vertices: int) -> list[Graph]:
    """All trees on `num_vertices` vertices, one per isomorphism class.

    Built by attaching a new leaf to every vertex of every smaller tree and
    deduplicating by canonical code (every tree arises this way because every
    tree with at least two vertices has a leaf).
    """
    if num_vertices < 1:
        raise InvalidSizeError("trees need at least one vertex")
    trees = [Graph(1, ())]
    for n in range(2, num_vertices + 1):
        seen: dict[bytes, Graph] = {}
        for tree in trees:
            for v in range(tree.num_vertices):
                grown = Graph(n, tree.edges + ((v, n - 1),))
                key = canonical_code(grown, (0,) * n)
                if key not in seen:
                    seen[key] = grown
        trees = [seen[k] for k in sorted(seen)]
    return trees


def nonisomorphic_forests(max_edges: int, include_empty: bool = True) -> list[Graph]:
    """All forests without isolated vertices and at most `max_edges` edges.

    One representative per isomorphism class, built as multisets of trees
    with at least one edge each.  The edgeless forest (no vertices at all)
    is included by default.
    """
    trees_by_edges: dict[int, list[Graph]] = {
        e: nonisomorphic_trees(e + 1) for e in range(1, max_edges + 1)
    }
    pool: list[tuple[int, Graph]] = []
    for e in sorted(trees_by_edges):
        for t in trees_by_edges[e]:
            pool.append((e, t))

    out: list[Graph] = []
    if include_empty:
        out.append(Graph(0, ()))

    def extend(start: int, budget: int, acc: Graph):
        for i in range(start, len(pool)):
            e, tree = pool[i]
            if e > budget:
                break
            merged, _ = disjoint_union(acc, (0,) * acc.num_vertices, tree, (0,) * tree.num_vertices)
            out.append(merged)
            extend(i, budget - e, merged)

    extend(0, max_edges, Graph(0, ()))
    return out


def random_tree(rng, num_vertices: int) -> Graph:
    """Uniform random labeled tree via a random Pruefer sequence."""
    n = num_vertices
    if n < 1:
        raise InvalidSizeError("trees need at least one vertex")
    if n == 1:
        return Graph(1, ())
    seq = [rng.randrange(n) for _ in range(n - 2)]
    degree = [1] * n
    for s in seq:
        degree[s] += 1
    edges = []
    for s in seq:
        leaf = min(v for v in range(n) if degree[v] == 1)
        edges.append((leaf, s))
        degree[leaf] -= 1
        degree[s] -= 1
    u, v = (x for x in range(n) if degree[x] == 1)
    edges.append((u, v))
    return Graph(n, tuple(edges))


def random_forest(rng, max_vertices: int, keep_probability: float = 0.7) -> Graph:
    """Random forest: a random tree with each edge kept independently.

    Vertices that end up isolated are removed so the result has no padding.
    """
    n = rng.randint(1, max_vertices)
    tree = random_tree(rng, n)
    edges = tuple(e for e in tree.edges if rng.random() < keep_probability)
    used = sorted({v for e in edges for v in e})
    index = {v: i for i, v in enumerate(used)}
    return Graph(len(used), tuple((index[u], index[v]) for u, v in edges))
