"""Greedy nearest-neighbor traversals, step-cost profiles, and approximation bounds."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .graph import (
    CostFunction,
    GraphError,
    UnreachableError,
    cost_of,
    metric_closure,
    nearest_of,
    validate_traversal,
)

OPT_ORACLE_LIMIT = 13


# --- tie-breaking policies --------------------------------------------------


class TieBreak:
    """Chooses one node from a nonempty ascending list of equally-near candidates."""

    def choose(self, tied: list[int]) -> int:
        raise NotImplementedError


class LowestId(TieBreak):
    def choose(self, tied: list[int]) -> int:
        return tied[0]


class SeededRandom(TieBreak):
    """Uniform choice among tied candidates, reproducible from the seed."""

    def __init__(self, seed: int):
        self.seed = seed
        self._rng = random.Random(seed)

    def choose(self, tied: list[int]) -> int:
        return self._rng.choice(tied)


class Scripted(TieBreak):
    """Break every tie toward the candidate appearing earliest in a preference order.

    A full intended traversal works directly as the preference order: if that
    traversal is greedy at every step, replaying it through the greedy walk
    reproduces it exactly.
    """

    def __init__(self, preference: Sequence[int]):
        self.preference = list(preference)
        self._pos = {v: i for i, v in enumerate(self.preference)}

    def choose(self, tied: list[int]) -> int:
        best = None
        for v in tied:
            i = self._pos.get(v)
            if i is not None and (best is None or i < best[0]):
                best = (i, v)
        if best is None:
            raise GraphError(f"scripted preference names none of the tied nodes {tied}")
        return best[1]


# --- greedy traversal -------------------------------------------------------


def _nearest_unvisited(c: CostFunction, pos: int, unvisited: set[int]) -> tuple[int, list[int]]:
    """(distance, sorted tied nodes) for the cheapest unvisited node from ``pos``."""
    if c.kind == "hop":
        found = nearest_of(c.graph, pos, unvisited)
        if found is None:
            raise UnreachableError(f"no unvisited node reachable from {pos}")
        return found
    best = None
    tied: list[int] = []
    row = c._matrix[pos]
    for v in sorted(unvisited):
        w = row[v]
        if best is None or w < best:
            best = w
            tied = [v]
        elif w == best:
            tied.append(v)
    return best, tied


def nn_traversal(c: CostFunction, start: int, tie_break: TieBreak | None = None) -> list[int]:
    """Greedy traversal: repeatedly move to a nearest unvisited node."""
    if not 0 <= start < c.n:
        raise GraphError(f"invalid start node {start}")
    tb = tie_break if tie_break is not None else LowestId()
    order = [start]
    unvisited = set(range(c.n))
    unvisited.discard(start)
    pos = start
    while unvisited:
        _, tied = _nearest_unvisited(c, pos, unvisited)
        pos = tied[0] if len(tied) == 1 else tb.choose(tied)
        order.append(pos)
        unvisited.discard(pos)
    return order


def validate_nn_traversal(c: CostFunction, order: Sequence[int]) -> int | None:
    """None when every step goes to a nearest unvisited node; else the first bad index.

    The returned index is the position in ``order`` of the first node that was
    not a valid greedy choice.  Tie-breaking is irrelevant: any nearest node is
    accepted.
    """
    validate_traversal(order, c.n)
    if c.n == 1:
        return None
    if c.kind == "matrix":
        mat = c._matrix
        unvisited = set(range(c.n))
        unvisited.discard(order[0])
        for i in range(1, c.n):
            prev, cur = order[i - 1], order[i]
            step = mat[prev][cur]
            row = mat[prev]
            if any(row[v] < step for v in unvisited):
                return i
            unvisited.discard(cur)
        return None
    # hop metric: expand BFS levels from the previous node until the chosen
    # node appears; any unvisited node in a strictly earlier level wins.
    graph = c.graph
    unvisited = set(range(c.n))
    unvisited.discard(order[0])
    for i in range(1, c.n):
        prev, cur = order[i - 1], order[i]
        if cur in graph.adjacent(prev):
            unvisited.discard(cur)
            continue  # steps of cost 1 are always greedy-valid
        seen = {prev}
        frontier = [prev]
        while frontier:
            nxt = []
            found_cur = False
            found_other = False
            for x in frontier:
                for w in graph.adjacent(x):
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
                        if w == cur:
                            found_cur = True
                        elif w in unvisited:
                            found_other = True
            if found_cur:
                break
            if found_other:
                return i
            frontier = nxt
        else:
            raise UnreachableError(f"step {i}: node {cur} unreachable from {prev}")
        unvisited.discard(cur)
    return None


# --- step-cost profile and route partitioning -------------------------------


@dataclass
class LambdaProfile:
    """Sparse counts: ``counts[j]`` = number of steps of cost >= j, for j >= 1."""

    counts: dict[int, int] = field(default_factory=dict)

    def at(self, j: int) -> int:
        if j < 1:
            raise GraphError(f"profile is indexed from 1, got {j}")
        return self.counts.get(j, 0)

    def total(self) -> int:
        """Equals the traversal cost: summing level counts integrates step costs."""
        return sum(self.counts.values())

    def max_level(self) -> int:
        return max(self.counts, default=0)

    def as_json_obj(self) -> dict[str, int]:
        return {str(j): self.counts[j] for j in sorted(self.counts)}


def lambda_profile(order: Sequence[int], c: CostFunction) -> LambdaProfile:
    validate_traversal(order, c.n)
    steps = [c.cost(order[i], order[i + 1]) for i in range(len(order) - 1)]
    counts: dict[int, int] = {}
    for s in steps:
        for j in range(1, s + 1):
            counts[j] = counts.get(j, 0) + 1
    return LambdaProfile(counts)


@dataclass
class RoutePartition:
    """Consecutive blocks of a route; block boundaries are start indices plus n."""

    parts: list[list[int]]
    cuts: list[int]


def partition_route(order: Sequence[int], j: int, c: CostFunction) -> RoutePartition:
    """Split a route into consecutive blocks accumulating < j cost inside each.

    Walking from a block's first node, costs accumulate until a step pushes the
    running total to >= j; the block ends just before that step completes, so
    every within-block prefix sums to < j.  Under the triangle inequality any
    two nodes of one block then lie at cost < j from each other, and the block
    count k satisfies (k-1)*j <= total route cost.
    """
    validate_traversal(order, c.n)
    if j < 1:
        raise GraphError(f"threshold must be >= 1, got {j}")
    if not c.is_metric():
        raise GraphError("route partitioning needs the triangle inequality")
    n = len(order)
    cuts = [0]
    acc = 0
    for t in range(n - 1):
        acc += c.cost(order[t], order[t + 1])
        if acc >= j:
            cuts.append(t + 1)
            acc = 0
    cuts.append(n)
    parts = [list(order[a:b]) for a, b in zip(cuts, cuts[1:])]
    return RoutePartition(parts, cuts)


# --- exact optimum (small instances) ----------------------------------------


def opt_traversal(c: CostFunction) -> tuple[int, list[int]]:
    """Exact minimum-cost traversal over all start nodes, for n <= 13.

    Dynamic program over (visited-subset, last-node) states; deterministic
    result under strict-improvement updates scanned in id order.
    """
    n = c.n
    if n > OPT_ORACLE_LIMIT:
        raise GraphError(f"exact oracle is limited to n <= {OPT_ORACLE_LIMIT}, got {n}")
    if n == 1:
        return 0, [0]
    mat = c.as_matrix()
    size = 1 << n
    inf = float("inf")
    dp = [[inf] * n for _ in range(size)]
    parent: list[list[int]] = [[-1] * n for _ in range(size)]
    for v in range(n):
        dp[1 << v][v] = 0
    for mask in range(size):
        row = dp[mask]
        for last in range(n):
            d = row[last]
            if d == inf:
                continue
            cl = mat[last]
            rest = ~mask
            for nxt in range(n):
                if (rest >> nxt) & 1:
                    m2 = mask | (1 << nxt)
                    nd = d + cl[nxt]
                    if nd < dp[m2][nxt]:
                        dp[m2][nxt] = nd
                        parent[m2][nxt] = last
    full = size - 1
    best_last = min(range(n), key=lambda v: (dp[full][v], v))
    best = dp[full][best_last]
    order = []
    mask, last = full, best_last
    while last != -1:
        order.append(last)
        prev = parent[mask][last]
        mask ^= 1 << last
        last = prev
    order.reverse()
    return int(best), order


# --- bounds and ratios -------------------------------------------------------


def nn_upper_bound(n: int, opt_cost: int) -> int:
    """Ceiling of opt_cost * (1 + ln(n-1)): a budget every greedy traversal of a
    metric instance on n nodes must respect."""
    if n < 2:
        raise GraphError(f"bound needs n >= 2, got {n}")
    if opt_cost < 0:
        raise GraphError("optimal cost must be nonnegative")
    return math.ceil(opt_cost * (1.0 + math.log(n - 1)))


def aspect_ratio_bound(c: CostFunction, opt_cost: int) -> int:
    """Ceiling of opt_cost * (1 + ln(max pair cost / min pair cost))."""
    lo, hi = c.pair_cost_extremes()
    if lo == 0:
        raise GraphError("aspect ratio undefined: some distinct pair has cost 0")
    if opt_cost < 0:
        raise GraphError("optimal cost must be nonnegative")
    return math.ceil(opt_cost * (1.0 + math.log(hi / lo)))


def approx_ratio(c: CostFunction, order: Sequence[int], opt_cost: int | None = None) -> Fraction:
    """Exact rational (traversal cost) / (optimal cost).

    Without ``opt_cost`` the exact oracle is used, so n must be <= 13; larger
    instances need a certificate (for example a traversal of cost n-1 on a hop
    metric, which no traversal can beat).
    """
    cost = cost_of(order, c)
    if opt_cost is None:
        opt_cost, _ = opt_traversal(c)
    if opt_cost < 0:
        raise GraphError("optimal cost must be nonnegative")
    if opt_cost == 0:
        if cost == 0:
            return Fraction(1)
        raise GraphError("ratio undefined: optimal cost 0 against positive cost")
    return Fraction(cost, opt_cost)
