"""Rank-greedy spanning trees and their logarithmic bound against the MST.

Given unique ranks, every node except the top-ranked one links to its
cheapest strictly-higher-ranked node.  The links always form a spanning tree;
on metric costs its total weight stays within 2·(1 + ln n) of the minimum
spanning tree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .graph import CostFunction, Edge, GraphError, normalize_edge
from .nn import LambdaProfile


def validate_ranks(ranks, n: int) -> None:
    if len(ranks) != n or sorted(ranks) != list(range(n)):
        raise GraphError(f"ranks must be a bijection onto 0..{n - 1}, got {list(ranks)!r}")


def identity_ranks(n: int) -> list[int]:
    return list(range(n))


def shuffled_ranks(n: int, rng) -> list[int]:
    ranks = list(range(n))
    rng.shuffle(ranks)
    return ranks


@dataclass
class RankedTree:
    """Spanning tree where each non-top node holds one edge to a higher rank."""

    attach: dict[int, int]  # node -> its chosen higher-ranked target
    edges: list[Edge]
    costs: dict[Edge, int]
    total: int
    root: int

    @property
    def n(self) -> int:
        return len(self.attach) + 1

    def edge_profile(self) -> LambdaProfile:
        """Counts of edges of cost >= j; the level sums integrate to the total."""
        counts: dict[int, int] = {}
        for e in self.edges:
            for j in range(1, self.costs[e] + 1):
                counts[j] = counts.get(j, 0) + 1
        return LambdaProfile(counts)


def nn_tree(c: CostFunction, ranks) -> RankedTree:
    """Link every node to its cheapest strictly-higher-ranked node (ties: lowest id)."""
    n = c.n
    validate_ranks(ranks, n)
    mat = c.as_matrix()
    root = ranks.index(n - 1)
    attach: dict[int, int] = {}
    for v in range(n):
        if v == root:
            continue
        best = min(
            (w for w in range(n) if ranks[w] > ranks[v]),
            key=lambda w: (mat[v][w], w),
        )
        attach[v] = best
    edges = sorted(normalize_edge(v, w) for v, w in attach.items())
    costs = {e: mat[e[0]][e[1]] for e in edges}
    return RankedTree(attach, edges, costs, sum(costs.values()), root)


def mst_cost(c: CostFunction) -> tuple[int, list[Edge]]:
    """Exact minimum spanning tree over the complete cost graph (Prim, deterministic)."""
    n = c.n
    mat = c.as_matrix()
    if n == 1:
        return 0, []
    in_tree = [False] * n
    best = list(mat[0])
    best_from = [0] * n
    in_tree[0] = True
    edges: list[Edge] = []
    total = 0
    for _ in range(n - 1):
        v = min(
            (u for u in range(n) if not in_tree[u]),
            key=lambda u: (best[u], u),
        )
        in_tree[v] = True
        total += best[v]
        edges.append(normalize_edge(best_from[v], v))
        row = mat[v]
        for u in range(n):
            if not in_tree[u] and row[u] < best[u]:
                best[u] = row[u]
                best_from[u] = v
    return total, sorted(edges)


@dataclass(frozen=True)
class BoundReport:
    tree_cost: int
    mst: int
    budget: int
    ok: bool


def nnt_bound_check(c: CostFunction, ranks) -> BoundReport:
    """Check rank-greedy tree cost <= ceil(2·(1 + ln n)·MST); metric inputs only."""
    if not c.is_metric():
        raise GraphError("the tree bound is only claimed for metric costs")
    tree = nn_tree(c, ranks)
    mst, _ = mst_cost(c)
    budget = math.ceil(2 * (1 + math.log(c.n)) * mst)
    return BoundReport(tree.total, mst, budget, tree.total <= budget)
