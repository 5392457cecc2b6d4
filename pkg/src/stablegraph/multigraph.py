"""Planted multigraphs with labelled leaves and unlabelled internal vertices.

Vertices are plain integers.  Leaves occupy ids ``0 .. leaves-1`` (leaf 0 is
the root when the graph is rooted); internal vertices occupy
``leaves .. leaves+internal-1``.  A graph with ``leaves == 0`` is unrooted
(the ``n = -1`` case).  Edges form a multiset of unordered pairs; a self-loop
``(v, v)`` contributes 2 to ``deg(v)``.

Isomorphism here always fixes the leaves pointwise and permutes internal
vertices only.  All symmetry/canonicalisation routines work by exhaustive
permutation, which is fine at the scales this package enumerates (at most a
handful of internal vertices) and keeps everything bit-exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import permutations
from math import factorial

MAX_INTERNAL_FOR_SEARCH = 8


class SizeLimitError(ValueError):
    """Raised when a factorial search over internal vertices would blow up."""


@dataclass(frozen=True)
class Multigraph:
    """Immutable multigraph value.

    edges: tuple of (u, v, mult) with u <= v, sorted; mult >= 1.
    """

    leaves: int
    internal: int
    edges: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        nv = self.leaves + self.internal
        for u, v, m in self.edges:
            if not (0 <= u <= v < nv):
                raise ValueError(f"edge ({u},{v}) out of range for {nv} vertices")
            if m < 1:
                raise ValueError("edge multiplicity must be >= 1")
        object.__setattr__(self, "edges", tuple(sorted(self.edges)))

    # -- basic counts -------------------------------------------------------

    @property
    def n(self) -> int:
        """Largest leaf label; -1 for an unrooted graph."""
        return self.leaves - 1

    @property
    def num_vertices(self) -> int:
        return self.leaves + self.internal

    @property
    def num_edges(self) -> int:
        """|E| counted with multiplicity."""
        return sum(m for _, _, m in self.edges)

    @property
    def self_loops(self) -> int:
        return sum(m for u, v, m in self.edges if u == v)

    def mult_product(self) -> int:
        """Product of mult(e)! over the support of the edge multiset."""
        out = 1
        for _, _, m in self.edges:
            out *= factorial(m)
        return out

    def internal_vertices(self) -> range:
        return range(self.leaves, self.leaves + self.internal)

    def degree(self, v: int) -> int:
        if not (0 <= v < self.num_vertices):
            raise ValueError(f"unknown vertex {v}")
        d = 0
        for u, w, m in self.edges:
            if u == v:
                d += m
            if w == v:
                d += m
        return d

    def degrees(self) -> list[int]:
        d = [0] * self.num_vertices
        for u, w, m in self.edges:
            d[u] += m
            d[w] += m
        return d

    def adjacency(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {v: set() for v in range(self.num_vertices)}
        for u, w, _ in self.edges:
            adj[u].add(w)
            adj[w].add(u)
        return adj

    def is_connected(self) -> bool:
        if self.num_vertices == 0:
            return False
        adj = self.adjacency()
        seen = {0}
        stack = [0]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.num_vertices

    # -- structural queries --------------------------------------------------

    def edge_dict(self) -> dict[tuple[int, int], int]:
        return {(u, v): m for u, v, m in self.edges}

    def graph_distances(self, sources=None) -> dict[int, list[int]]:
        """BFS hop distances from each source (default: all leaves)."""
        if sources is None:
            sources = range(self.leaves)
        adj = self.adjacency()
        out = {}
        for s in sources:
            dist = [-1] * self.num_vertices
            dist[s] = 0
            frontier = [s]
            while frontier:
                nxt = []
                for v in frontier:
                    for w in adj[v]:
                        if dist[w] < 0:
                            dist[w] = dist[v] + 1
                            nxt.append(w)
                frontier = nxt
            out[s] = dist
        return out


def surplus(g: Multigraph) -> int:
    """s(G) = |E| - |V| + 1, edges counted with multiplicity."""
    return g.num_edges - g.num_vertices + 1


def degree(g: Multigraph, v: int) -> int:
    return g.degree(v)


def _relabelled_edges(g: Multigraph, perm: tuple[int, ...]) -> tuple:
    """Edge tuple after permuting internal ids by perm (leaves fixed)."""
    base = g.leaves

    def ren(x):
        return x if x < base else base + perm[x - base]

    out = []
    for u, v, m in g.edges:
        a, b = ren(u), ren(v)
        if a > b:
            a, b = b, a
        out.append((a, b, m))
    out.sort()
    return tuple(out)


def _check_search_size(g: Multigraph):
    if g.internal > MAX_INTERNAL_FOR_SEARCH:
        raise SizeLimitError(
            f"{g.internal} internal vertices exceeds the factorial-search limit "
            f"({MAX_INTERNAL_FOR_SEARCH})"
        )


def symmetry_count(g: Multigraph) -> int:
    """Number of internal-vertex permutations preserving the edge multiset."""
    _check_search_size(g)
    ident = g.edges
    count = 0
    for perm in permutations(range(g.internal)):
        if _relabelled_edges(g, perm) == ident:
            count += 1
    return count


@dataclass(frozen=True)
class CanonicalCode:
    """Bytes uniquely identifying the internal-relabelling class of a graph."""

    code: bytes

    def hex(self) -> str:
        return self.code.hex()

    def __lt__(self, other):
        return self.code < other.code


def canonical_code(g: Multigraph) -> CanonicalCode:
    _check_search_size(g)
    best = min(_relabelled_edges(g, p) for p in permutations(range(g.internal)))
    payload = repr((g.leaves, g.internal, best)).encode()
    return CanonicalCode(payload)


def canonicalize(g: Multigraph) -> Multigraph:
    """Representative of g's class with the minimal internal labelling."""
    _check_search_size(g)
    best = min(_relabelled_edges(g, p) for p in permutations(range(g.internal)))
    return Multigraph(g.leaves, g.internal, best)


def is_valid(g: Multigraph) -> bool:
    """Connected, every leaf degree 1, every internal degree >= 3."""
    if g.num_vertices == 0 or not g.is_connected():
        return False
    degs = g.degrees()
    for v in range(g.leaves):
        if degs[v] != 1:
            return False
    for v in g.internal_vertices():
        if degs[v] < 3:
            return False
    return True


def validate_membership(g: Multigraph, s: int, n: int) -> bool:
    """Is g a member of the space with surplus s and leaf labels 0..n?

    n = -1 selects the unrooted spaces (minimum degree 3, s >= 2).
    """
    if n == -1:
        if g.leaves != 0 or s < 2:
            return False
    else:
        if g.leaves != n + 1:
            return False
    return is_valid(g) and surplus(g) == s


# -- JSON wire format --------------------------------------------------------


def _vertex_name(g: Multigraph, v: int) -> str:
    return f"L{v}" if v < g.leaves else f"I{v - g.leaves}"


def _vertex_id(name: str, leaves: int) -> int:
    if name.startswith("L"):
        return int(name[1:])
    if name.startswith("I"):
        return leaves + int(name[1:])
    raise ValueError(f"bad vertex name {name!r}")


def to_json_dict(g: Multigraph) -> dict:
    return {
        "surplus": surplus(g),
        "leaves": g.leaves,
        "internal": g.internal,
        "edges": [
            {"u": _vertex_name(g, u), "v": _vertex_name(g, v), "mult": m}
            for u, v, m in g.edges
        ],
    }


def to_json(g: Multigraph) -> str:
    return json.dumps(to_json_dict(g))


def from_json_dict(d: dict) -> Multigraph:
    leaves = d["leaves"]
    edges = []
    for e in d["edges"]:
        u = _vertex_id(e["u"], leaves)
        v = _vertex_id(e["v"], leaves)
        edges.append((min(u, v), max(u, v), e["mult"]))
    g = Multigraph(leaves, d["internal"], tuple(edges))
    if "surplus" in d and surplus(g) != d["surplus"]:
        raise ValueError("surplus field inconsistent with edge list")
    return g


def from_json(s: str) -> Multigraph:
    return from_json_dict(json.loads(s))


def from_edge_dict(leaves: int, internal: int, edges: dict) -> Multigraph:
    return Multigraph(
        leaves, internal, tuple((min(u, v), max(u, v), m) for (u, v), m in edges.items())
    )


# -- small standard graphs used all over the tests ---------------------------


def single_edge() -> Multigraph:
    """The unique graph with two leaves and no internal vertex (s=0, n=1)."""
    return Multigraph(2, 0, ((0, 1, 1),))


def planted_figure_eight() -> Multigraph:
    """Root leaf attached to one internal vertex carrying two self-loops."""
    return Multigraph(1, 1, ((0, 1, 1), (1, 1, 2)))


def planted_theta() -> Multigraph:
    """Root edge into a triple edge between two internal vertices."""
    return Multigraph(1, 2, ((0, 1, 1), (1, 2, 3)))
