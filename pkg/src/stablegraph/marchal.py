"""Recursive leaf-attachment growth of multigraphs and ordered trees.

One growth step from a graph with surplus s and leaves 0..n: give every edge
copy weight alpha-1 and every internal vertex u weight deg(u)-1-alpha, pick
an edge or vertex with probability proportional to its weight, then

  * vertex: hang a new pendant edge-leaf labelled n+1 on it;
  * edge:   split the chosen copy with a fresh degree-3 vertex carrying the
            new edge-leaf.

The total weight is alpha*(s+n) + s - 1 identically, which the exact
(rational-alpha) mode asserts at every step.  The same step run from an
unrooted graph (no leaves) attaches the root leaf 0.

The ordered-tree variant additionally tracks the cyclic order of half-edges:
a vertex insertion lands in a uniformly chosen corner and an edge split sends
the new leaf left or right with probability 1/2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .multigraph import Multigraph, canonical_code, from_edge_dict
from .rng import RandomStream
from .weights import Number, WeightSeq, total_weight

_code_cache: dict = {}


def _cached_code(leaves, internal, edges_key):
    hit = _code_cache.get((leaves, internal, edges_key))
    if hit is None:
        g = Multigraph(leaves, internal, edges_key)
        hit = canonical_code(g)
        _code_cache[(leaves, internal, edges_key)] = hit
    return hit


@dataclass
class MarchalState:
    """Growth state: a multigraph in edge-dict form plus its weight data."""

    alpha: Number
    leaves: int
    internal: int
    edges: dict  # (u, v) sorted pair -> multiplicity
    degrees: dict  # vertex -> degree

    @property
    def exact(self) -> bool:
        return isinstance(self.alpha, (Fraction, int))

    @property
    def n(self) -> int:
        return self.leaves - 1

    @property
    def num_edges(self) -> int:
        return sum(self.edges.values())

    @property
    def surplus(self) -> int:
        return self.num_edges - (self.leaves + self.internal) + 1

    def total_weight(self) -> Number:
        vw = sum(
            self.degrees[v] - 1 - self.alpha
            for v in range(self.leaves, self.leaves + self.internal)
        )
        return vw + (self.alpha - 1) * self.num_edges

    def check_weight_identity(self):
        expect = total_weight(self.surplus, self.n, self.alpha)
        got = self.total_weight()
        if self.exact:
            assert got == expect, f"weight identity broken: {got} != {expect}"
        else:
            assert abs(got - expect) < 1e-9 * max(1.0, abs(expect))

    def graph(self) -> Multigraph:
        return from_edge_dict(self.leaves, self.internal, self.edges)

    def code(self):
        key = tuple(sorted((u, v, m) for (u, v), m in self.edges.items()))
        return _cached_code(self.leaves, self.internal, key)

    def copy(self) -> "MarchalState":
        return MarchalState(
            self.alpha, self.leaves, self.internal, dict(self.edges), dict(self.degrees)
        )

    @classmethod
    def from_multigraph(cls, g: Multigraph, alpha: Number) -> "MarchalState":
        st = cls(alpha, g.leaves, g.internal, g.edge_dict(), {})
        st.degrees = {v: 0 for v in range(g.num_vertices)}
        for (u, v), m in st.edges.items():
            st.degrees[u] += m
            st.degrees[v] += m
        return st

    @classmethod
    def single_edge(cls, alpha: Number) -> "MarchalState":
        return cls(alpha, 2, 0, {(0, 1): 1}, {0: 1, 1: 1})


def _pick_move(st: MarchalState, u: float):
    """Map a uniform variate to ('vertex', v) or ('edge', (a, b)).

    In exact mode the cut points are exact rationals, so ties cannot depend
    on float rounding of the weights themselves.
    """
    alpha = st.alpha
    total = st.total_weight()
    target = (Fraction(u) if st.exact else u) * total
    acc = 0
    for v in range(st.leaves, st.leaves + st.internal):
        acc += st.degrees[v] - 1 - alpha
        if target < acc:
            return ("vertex", v)
    ew = alpha - 1
    for pair, m in st.edges.items():
        acc += ew * m
        if target < acc:
            return ("edge", pair)
    return ("edge", next(reversed(st.edges)))  # float-rounding guard


def apply_vertex_move(st: MarchalState, v: int) -> MarchalState:
    """Attach the next leaf to internal vertex v (labels shift up by one)."""
    out = _shift_for_new_leaf(st)
    new_leaf = out.leaves - 1
    vv = v + 1  # internal ids moved up by the shift
    _add_edge(out, new_leaf, vv)
    return out


def apply_edge_move(st: MarchalState, pair) -> MarchalState:
    """Split one copy of the given edge and attach the next leaf there."""
    out = _shift_for_new_leaf(st)
    a, b = (x + 1 if x >= st.leaves else x for x in pair)
    new_leaf = out.leaves - 1
    w = out.leaves + out.internal
    out.internal += 1
    out.degrees[w] = 0
    _remove_edge(out, a, b)
    _add_edge(out, a, w)
    _add_edge(out, w, b)
    _add_edge(out, w, new_leaf)
    return out


def _shift_for_new_leaf(st: MarchalState) -> MarchalState:
    """Renumber so the new leaf takes id `leaves` and internals move up."""
    base = st.leaves
    edges = {}
    for (u, v), m in st.edges.items():
        a = u + 1 if u >= base else u
        b = v + 1 if v >= base else v
        edges[(min(a, b), max(a, b))] = m
    degrees = {(v + 1 if v >= base else v): d for v, d in st.degrees.items()}
    degrees[base] = 0
    return MarchalState(st.alpha, base + 1, st.internal, edges, degrees)


def _add_edge(st: MarchalState, a: int, b: int):
    key = (min(a, b), max(a, b))
    st.edges[key] = st.edges.get(key, 0) + 1
    st.degrees[a] += 1
    st.degrees[b] += 1
    if a == b:
        st.degrees[a] += 1


def _remove_edge(st: MarchalState, a: int, b: int):
    key = (min(a, b), max(a, b))
    st.edges[key] -= 1
    if st.edges[key] == 0:
        del st.edges[key]
    st.degrees[a] -= 1
    st.degrees[b] -= 1
    if a == b:
        st.degrees[a] -= 1


def marchal_graph_step(st: MarchalState, rng: RandomStream) -> MarchalState:
    kind, where = _pick_move(st, rng.random())
    out = apply_vertex_move(st, where) if kind == "vertex" else apply_edge_move(st, where)
    if out.exact:
        out.check_weight_identity()
    return out


def grow(start: MarchalState, steps: int, rng: RandomStream) -> list[MarchalState]:
    """Trajectory [start, one step, ..., `steps` steps]."""
    if steps < 0:
        raise ValueError("steps must be >= 0")
    traj = [start]
    cur = start
    for _ in range(steps):
        cur = marchal_graph_step(cur, rng)
        traj.append(cur)
    return traj


def transition_distribution(g: Multigraph, ws: WeightSeq) -> dict[bytes, Number]:
    """Exact one-step law from g, keyed by canonical code of the result."""
    st = MarchalState.from_multigraph(g, ws.alpha)
    total = st.total_weight()
    out: dict[bytes, Number] = {}
    for v in range(st.leaves, st.leaves + st.internal):
        w = (st.degrees[v] - 1 - ws.alpha) / total
        code = apply_vertex_move(st, v).code().code
        out[code] = out.get(code, 0) + w
    for pair, m in st.edges.items():
        w = m * (ws.alpha - 1) / total
        code = apply_edge_move(st, pair).code().code
        out[code] = out.get(code, 0) + w
    return out


# -- root erasure (s >= 2) ----------------------------------------------------


def erase_root(g: Multigraph) -> Multigraph:
    """Remove leaf 0 and its edge, contracting any degree-2 vertex created.

    Maps the rooted kernel (one leaf, surplus s >= 2) to the unrooted one.
    """
    from .multigraph import surplus as _surplus

    if g.leaves != 1 or _surplus(g) < 2:
        raise ValueError("root erasure needs a single-leaf graph with surplus >= 2")
    edges = g.edge_dict()
    # the root's unique edge
    (pair,) = [(u, v) for (u, v) in edges if u == 0 or v == 0]
    nbr = pair[0] if pair[1] == 0 else pair[1]
    edges[pair] -= 1
    if edges[pair] == 0:
        del edges[pair]
    deg = {v: 0 for v in range(1, g.num_vertices)}
    for (u, v), m in edges.items():
        deg[u] += m
        deg[v] += m
        if u == v:
            deg[u] += m
    if deg[nbr] == 2:
        inc = []
        for (u, v), m in list(edges.items()):
            if u == nbr or v == nbr:
                if u == v:
                    inc.extend([u] * (2 * m))
                else:
                    inc.extend([v if u == nbr else u] * m)
                del edges[(u, v)]
        a, b = inc  # exactly two half-edges remain at nbr
        if a == nbr or b == nbr:
            raise ValueError("degree-2 vertex closed on itself; input was invalid")
        key = (min(a, b), max(a, b))
        edges[key] = edges.get(key, 0) + 1
        drop = {nbr}
    else:
        drop = set()
    keep = [v for v in range(1, g.num_vertices) if v not in drop]
    relabel = {v: i for i, v in enumerate(keep)}
    new_edges = {}
    for (u, v), m in edges.items():
        a, b = relabel[u], relabel[v]
        new_edges[(min(a, b), max(a, b))] = new_edges.get((min(a, b), max(a, b)), 0) + m
    return from_edge_dict(0, len(keep), new_edges)


# -- ordered trees ------------------------------------------------------------


@dataclass
class OrderedTree:
    """Planted plane tree.  Node 0 is the root leaf; every node stores its
    ordered child list.  Leaves carry labels (root = 0, others 1..n)."""

    alpha: Number
    children: list = field(default_factory=list)  # node -> list of nodes
    parent: list = field(default_factory=list)
    label: list = field(default_factory=list)  # leaf label or None

    @classmethod
    def single_edge(cls, alpha: Number) -> "OrderedTree":
        t = cls(alpha)
        t.children = [[1], []]
        t.parent = [None, 0]
        t.label = [0, 1]
        return t

    @property
    def exact(self) -> bool:
        return isinstance(self.alpha, (Fraction, int))

    @property
    def num_nodes(self) -> int:
        return len(self.children)

    @property
    def num_leaves(self) -> int:
        return sum(1 for l in self.label if l is not None)

    def degree(self, v: int) -> int:
        d = len(self.children[v])
        if self.parent[v] is not None:
            d += 1
        return d

    def internal_nodes(self) -> list[int]:
        return [v for v in range(self.num_nodes) if self.label[v] is None]

    def copy(self) -> "OrderedTree":
        t = OrderedTree(self.alpha)
        t.children = [list(c) for c in self.children]
        t.parent = list(self.parent)
        t.label = list(self.label)
        return t

    def total_weight(self) -> Number:
        num_edges = self.num_nodes - 1
        vw = sum(self.degree(v) - 1 - self.alpha for v in self.internal_nodes())
        return vw + (self.alpha - 1) * num_edges

    def shape_key(self):
        """Nested-tuple planar shape with leaf labels, for exact comparison."""

        def rec(v):
            if self.label[v] is not None:
                return ("L", self.label[v])
            return ("V", tuple(rec(c) for c in self.children[v]))

        return rec(self.children[0][0])


def marchal_tree_step(t: OrderedTree, rng: RandomStream) -> OrderedTree:
    """One ordered growth step; the new leaf gets the next label."""
    out = t.copy()
    alpha = out.alpha
    total = out.total_weight()
    target = (Fraction(rng.random()) if out.exact else rng.random()) * total
    acc = 0
    choice = None
    for v in out.internal_nodes():
        acc += out.degree(v) - 1 - alpha
        if target < acc:
            choice = ("vertex", v)
            break
    if choice is None:
        # edges are identified by their child endpoint
        ew = alpha - 1
        for v in range(out.num_nodes):
            if out.parent[v] is None:
                continue
            acc += ew
            if target < acc:
                choice = ("edge", v)
                break
    if choice is None:
        choice = ("edge", out.num_nodes - 1)

    new_label = out.num_leaves
    kind, v = choice
    if kind == "vertex":
        corner = int(rng.integers(0, len(out.children[v]) + 1))
        leaf = out.num_nodes
        out.children.append([])
        out.parent.append(v)
        out.label.append(new_label)
        out.children[v].insert(corner, leaf)
    else:
        p = out.parent[v]
        mid = out.num_nodes
        out.children.append([])
        out.parent.append(p)
        out.label.append(None)
        leaf = out.num_nodes
        out.children.append([])
        out.parent.append(mid)
        out.label.append(new_label)
        idx = out.children[p].index(v)
        out.children[p][idx] = mid
        out.parent[v] = mid
        if rng.random() < 0.5:
            out.children[mid] = [leaf, v]  # new leaf points left
        else:
            out.children[mid] = [v, leaf]  # new leaf points right
    return out


def grow_tree(start: OrderedTree, steps: int, rng: RandomStream) -> OrderedTree:
    cur = start
    for _ in range(steps):
        cur = marchal_tree_step(cur, rng)
    return cur


# -- metric utilities ---------------------------------------------------------


def rescaled_leaf_metric(g: Multigraph, n: int, alpha: Number) -> np.ndarray:
    """Pairwise graph distances among the leaves divided by n^(1-1/alpha)."""
    dists = g.graph_distances()
    L = g.leaves
    out = np.zeros((L, L))
    for i in range(L):
        for j in range(L):
            out[i, j] = dists[i][j]
    return out / float(n) ** (1 - 1 / float(alpha))


def fast_tree_root_leaf_distance(n_leaves: int, alpha: float, rng: RandomStream,
                                 runs: int) -> np.ndarray:
    """Rescaled root-to-leaf-1 distances from `runs` independent trees grown
    to n_leaves leaves.

    Array-based implementation of the same unordered growth step (uniform
    edge with weight alpha-1 per edge, internal vertex with weight
    deg-1-alpha), specialised to trees so that 10^4 runs at n ~ 2000 are
    affordable.  Cross-checked against the generic step in the tests.
    """
    alpha = float(alpha)
    gen = rng.gen
    out = np.empty(runs)
    for r in range(runs):
        max_nodes = 2 * n_leaves + 2
        parent = np.full(max_nodes, -1, dtype=np.int64)
        vweight = np.zeros(max_nodes)  # deg-1-alpha for internals, 0 else
        parent[1] = 0
        nodes = 2
        vtotal = 0.0
        for n in range(1, n_leaves):
            num_edges = nodes - 1
            total = (alpha - 1) * num_edges + vtotal
            u = gen.random() * total
            if u < vtotal:
                # internal vertex proportional to its weight
                c = np.cumsum(vweight[:nodes])
                v = int(np.searchsorted(c, u))
                leaf = nodes
                parent[leaf] = v
                nodes += 1
                vweight[v] += 1.0
                vtotal += 1.0
            else:
                # uniform edge, identified by its child endpoint (id >= 1)
                x = 1 + int(gen.integers(0, num_edges))
                mid = nodes
                leaf = nodes + 1
                parent[mid] = parent[x]
                parent[x] = mid
                parent[leaf] = mid
                nodes += 2
                vweight[mid] = 2.0 - alpha
                vtotal += 2.0 - alpha
        # node 1 is leaf 1 throughout; hop count up to the root
        d = 0
        v = 1
        while v != 0:
            v = parent[v]
            d += 1
        out[r] = d
    return out / float(n_leaves) ** (1 - 1 / alpha)
