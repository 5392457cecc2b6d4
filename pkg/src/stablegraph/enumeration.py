"""Exhaustive enumeration of the small multigraph spaces and their exact laws.

The space with surplus s and leaves 0..n consists of connected multigraphs
with n+1 labelled degree-1 leaves, unlabelled internal vertices of degree at
least 3 and surplus s.  n = -1 selects the unrooted variant (no leaves,
minimum degree 3), available for s >= 2.

Counting constraints pin the sizes: with r internal vertices the internal
degree sum is n + 2r + 2s - 1 (n >= 0) or 2(r - 1 + s) (n = -1), so r <=
n + 2s - 1 resp. r <= 2s - 2.  These bounds are asserted rather than assumed;
they imply |E| <= 2n + 3s - 1 resp. 3s - 3.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Union

from .multigraph import (
    CanonicalCode,
    Multigraph,
    canonical_code,
    canonicalize,
    is_valid,
    surplus,
    symmetry_count,
    validate_membership,
)
from .weights import Number, WeightSeq

MAX_INTERNAL = 8


class EnumerationBudgetError(ValueError):
    pass


def _degree_partitions(total: int, parts: int, cap: int):
    """Nonincreasing sequences of `parts` integers in [3, cap] summing to total."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    lo = 3
    for first in range(min(cap, total - 3 * (parts - 1)), lo - 1, -1):
        for rest in _degree_partitions(total - first, parts - 1, first):
            yield (first,) + rest


def _internal_edge_multisets(residual: list[int]):
    """All edge multisets (incl. self-loops) on internal vertices realizing
    the residual degree vector."""
    r = len(residual)
    pairs = [(i, j) for i in range(r) for j in range(i, r)]

    def rec(idx: int, rd: tuple[int, ...], acc: list):
        if idx == len(pairs):
            if all(x == 0 for x in rd):
                yield tuple(acc)
            return
        i, j = pairs[idx]
        # how many copies of (i, j) can we still place?
        if i == j:
            top = rd[i] // 2
        else:
            top = min(rd[i], rd[j])
        # prune: remaining pairs must be able to soak up what's left of rd[i]
        # once we move past the last pair touching i.
        for m in range(top + 1):
            nrd = list(rd)
            if i == j:
                nrd[i] -= 2 * m
            else:
                nrd[i] -= m
                nrd[j] -= m
            if idx == len(pairs) - 1 or _feasible(nrd, pairs[idx + 1 :]):
                if m:
                    acc.append(((i, j), m))
                    yield from rec(idx + 1, tuple(nrd), acc)
                    acc.pop()
                else:
                    yield from rec(idx + 1, tuple(nrd), acc)

    def _feasible(rd, remaining):
        touch = {i: 0 for i in range(r)}
        for i, j in remaining:
            touch[i] += 1
            touch[j] += 1
        return all(rd[i] == 0 or touch[i] > 0 for i in range(r))

    yield from rec(0, tuple(residual), [])


def _leaf_assignments(leaves: int, r: int):
    def rec(i):
        if i == leaves:
            yield ()
            return
        for t in range(r):
            for rest in rec(i + 1):
                yield (t,) + rest

    yield from rec(0)


def enumerate_space(s: int, n: int, max_internal: int = MAX_INTERNAL) -> list[Multigraph]:
    """One canonical representative per isomorphism class, sorted by code."""
    if s < 0 or n < -1:
        raise ValueError("need s >= 0 and n >= -1")
    if n == -1 and s < 2:
        raise ValueError("unrooted spaces need s >= 2")
    if s == 0 and n < 1:
        raise ValueError("no tree with surplus 0 and fewer than 2 leaves")

    leaves = 0 if n == -1 else n + 1
    r_max = 2 * s - 2 if n == -1 else n + 2 * s - 1
    if r_max > max_internal:
        raise EnumerationBudgetError(
            f"space (s={s}, n={n}) may need {r_max} internal vertices; "
            f"budget is {max_internal}"
        )

    seen: dict[bytes, Multigraph] = {}

    def consider(g: Multigraph):
        if not is_valid(g):
            return
        assert surplus(g) == s  # forced by the vertex/edge count bookkeeping
        code = canonical_code(g)
        if code.code not in seen:
            seen[code.code] = canonicalize(g)

    if n >= 1:
        # r = 0 only admits the two-leaf single edge
        if s == 0 and n == 1:
            consider(Multigraph(2, 0, ((0, 1, 1),)))

    for r in range(1, r_max + 1):
        total = 2 * (r - 1 + s) if n == -1 else n + 2 * r + 2 * s - 1
        if total < 3 * r:
            continue
        for degs in _degree_partitions(total, r, total):
            if n == -1:
                for internal_edges in _internal_edge_multisets(list(degs)):
                    edges = tuple(
                        (i, j, m) for (i, j), m in internal_edges
                    )
                    consider(Multigraph(0, r, edges))
            else:
                for assign in _leaf_assignments(leaves, r):
                    residual = list(degs)
                    ok = True
                    for t in assign:
                        residual[t] -= 1
                        if residual[t] < 0:
                            ok = False
                            break
                    if not ok:
                        continue
                    leaf_edges = [
                        (ell, leaves + assign[ell], 1) for ell in range(leaves)
                    ]
                    for internal_edges in _internal_edge_multisets(residual):
                        edges = list(leaf_edges)
                        merged: dict[tuple[int, int], int] = {}
                        for u, v, m in edges:
                            merged[(u, v)] = merged.get((u, v), 0) + m
                        for (i, j), m in internal_edges:
                            key = (leaves + i, leaves + j)
                            merged[key] = merged.get(key, 0) + m
                        consider(
                            Multigraph(
                                leaves,
                                r,
                                tuple((u, v, m) for (u, v), m in merged.items()),
                            )
                        )

    return [seen[k] for k in sorted(seen)]


@dataclass(frozen=True)
class DistRow:
    graph: Multigraph
    code: CanonicalCode
    self_loops: int
    weight_product: Number
    mult_product: int
    sym: int
    prob: Number


@dataclass(frozen=True)
class ExactDistribution:
    """Exact law on an enumerated space; probabilities sum to one exactly
    in rational mode."""

    alpha: Number
    s: int
    n: int
    rows: tuple[DistRow, ...]

    @property
    def support(self) -> list[CanonicalCode]:
        return [r.code for r in self.rows]

    @property
    def probs(self) -> list[Number]:
        return [r.prob for r in self.rows]

    def prob_of(self, code: CanonicalCode) -> Number:
        for r in self.rows:
            if r.code == code:
                return r.prob
        zero = Fraction(0) if isinstance(self.alpha, Fraction) else 0.0
        return zero

    def as_mapping(self) -> dict[bytes, Number]:
        return {r.code.code: r.prob for r in self.rows}

    def sample(self, rng) -> Multigraph:
        u = rng.random()
        acc = 0.0
        for r in self.rows:
            acc += float(r.prob)
            if u < acc:
                return r.graph
        return self.rows[-1].graph


def _unnormalized_weight(g: Multigraph, ws: WeightSeq) -> tuple[Number, int, int]:
    wprod = Fraction(1) if ws.exact else 1.0
    for v in g.internal_vertices():
        wprod *= ws.w(g.degree(v) - 1)
    sym = symmetry_count(g)
    denom = sym * (2 ** g.self_loops) * g.mult_product()
    return wprod, sym, denom


def exact_distribution(s: int, n: int, ws: WeightSeq) -> ExactDistribution:
    """P(G) proportional to prod w_{deg-1} / (|Sym| 2^sl prod mult!)."""
    graphs = enumerate_space(s, n)
    raw = []
    for g in graphs:
        wprod, sym, denom = _unnormalized_weight(g, ws)
        weight = wprod / denom if ws.exact else wprod / denom
        raw.append((g, wprod, sym, weight))
    total = sum(w for _, _, _, w in raw)
    if total == 0:
        raise ValueError("degenerate weights: total mass is zero")
    rows = tuple(
        DistRow(
            graph=g,
            code=canonical_code(g),
            self_loops=g.self_loops,
            weight_product=wprod,
            mult_product=g.mult_product(),
            sym=sym,
            prob=w / total,
        )
        for g, wprod, sym, w in raw
    )
    return ExactDistribution(ws.alpha, s, n, rows)


def brownian_distribution(s: int, n: int) -> ExactDistribution:
    """Support restricted to graphs whose internal degrees are all 3;
    P(G) proportional to 1 / (|Sym| 2^sl prod mult!).  Coincides with the
    alpha = 2 weights, for which w_k vanishes off {0, 2}."""
    graphs = enumerate_space(s, n)
    raw = []
    for g in graphs:
        regular = all(g.degree(v) == 3 for v in g.internal_vertices())
        sym = symmetry_count(g)
        wprod = Fraction(1 if regular else 0)
        weight = wprod / (sym * 2 ** g.self_loops * g.mult_product())
        raw.append((g, wprod, sym, weight))
    total = sum(w for _, _, _, w in raw)
    if total == 0:
        raise ValueError(f"no 3-regular graphs with s={s}, n={n}")
    rows = tuple(
        DistRow(
            graph=g,
            code=canonical_code(g),
            self_loops=g.self_loops,
            weight_product=wprod,
            mult_product=g.mult_product(),
            sym=sym,
            prob=w / total,
        )
        for g, wprod, sym, w in raw
    )
    return ExactDistribution(Fraction(2), s, n, rows)


def ordering_count(g: Multigraph) -> int:
    """Number of systems of cyclic half-edge orderings on g, up to the
    relabellings that fix the leaves:

        prod (deg(v)-1)! / ( |Sym| 2^sl prod mult! )

    Only defined for rooted graphs (the count formula fails at n = -1)."""
    if g.leaves == 0:
        raise ValueError("ordering counts are only defined for rooted graphs")
    num = 1
    for v in g.internal_vertices():
        num *= factorial(g.degree(v) - 1)
    den = symmetry_count(g) * 2 ** g.self_loops * g.mult_product()
    q, r = divmod(num, den)
    assert r == 0, "ordering count must be an integer"
    return q


def conditioned_on_vertex_count(dist: ExactDistribution, m: int) -> ExactDistribution:
    """Restrict an exact law to graphs with m vertices and renormalize."""
    rows = [r for r in dist.rows if r.graph.num_vertices == m]
    if not rows:
        raise ValueError(f"no graphs with {m} vertices in the support")
    total = sum(r.prob for r in rows)
    new_rows = tuple(
        DistRow(r.graph, r.code, r.self_loops, r.weight_product, r.mult_product,
                r.sym, r.prob / total)
        for r in rows
    )
    return ExactDistribution(dist.alpha, dist.s, dist.n, new_rows)
