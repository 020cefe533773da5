"""Undirected graphs on dense integer ids, hop metrics, and explicit cost matrices.

Node ids are always 0..n-1.  Edges are unordered pairs; after construction the
only mutation a graph supports is edge deletion, which keeps failure runs
replayable against their original input.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Sequence

Edge = tuple[int, int]


class GraphError(ValueError):
    """Invalid node, edge, traversal, or serialized input."""


class UnreachableError(GraphError):
    """A required pairwise distance does not exist in the current graph."""


def normalize_edge(u: int, v: int) -> Edge:
    return (u, v) if u <= v else (v, u)


class Graph:
    """Simple undirected graph supporting edge deletion but never insertion."""

    __slots__ = ("n", "_adj", "_edge_count")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()):
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise GraphError(f"node count must be a positive int, got {n!r}")
        self.n = n
        self._adj: list[set[int]] = [set() for _ in range(n)]
        self._edge_count = 0
        for pair in edges:
            u, v = pair
            self._check_node(u)
            self._check_node(v)
            if u == v:
                raise GraphError(f"self-loop at node {u}")
            if v in self._adj[u]:
                raise GraphError(f"duplicate edge {normalize_edge(u, v)}")
            self._adj[u].add(v)
            self._adj[v].add(u)
            self._edge_count += 1

    def _check_node(self, v: int) -> None:
        if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < self.n:
            raise GraphError(f"invalid node id {v!r} for a graph on {self.n} nodes")

    @property
    def edge_count(self) -> int:
        return self._edge_count

    def has_edge(self, u: int, v: int) -> bool:
        self._check_node(u)
        self._check_node(v)
        return v in self._adj[u]

    def adjacent(self, v: int) -> set[int]:
        """Neighbor set of ``v``.  Treat the returned set as read-only."""
        self._check_node(v)
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self.adjacent(v))

    def edges(self) -> list[Edge]:
        out = [(u, v) for u in range(self.n) for v in self._adj[u] if u < v]
        out.sort()
        return out

    def delete_edge(self, u: int, v: int) -> None:
        self._check_node(u)
        self._check_node(v)
        if u == v:
            raise GraphError(f"self-loop at node {u} cannot be deleted")
        if v not in self._adj[u]:
            raise GraphError(f"edge {normalize_edge(u, v)} is not in the graph")
        self._adj[u].discard(v)
        self._adj[v].discard(u)
        self._edge_count -= 1

    def copy(self) -> Graph:
        g = Graph(self.n)
        g._adj = [set(s) for s in self._adj]
        g._edge_count = self._edge_count
        return g

    def component(self, v: int) -> set[int]:
        self._check_node(v)
        seen = {v}
        queue = deque([v])
        while queue:
            u = queue.popleft()
            for w in self._adj[u]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return seen

    def is_connected(self) -> bool:
        return len(self.component(0)) == self.n

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self._adj == other._adj

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self._edge_count})"


def complete_graph(n: int) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(v, v + 1) for v in range(n - 1)])


def bfs_distances(graph: Graph, source: int) -> list[int]:
    """Hop distances from ``source``; unreachable nodes get the sentinel n+1."""
    graph._check_node(source)
    sentinel = graph.n + 1
    dist = [sentinel] * graph.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        d = dist[u] + 1
        for w in graph.adjacent(u):
            if dist[w] == sentinel:
                dist[w] = d
                queue.append(w)
    return dist


def hop_distance(graph: Graph, u: int, v: int) -> int | None:
    """Hop distance between two nodes, or None when unreachable.

    Early-exits at the target, so the cost is the BFS ball around ``u`` rather
    than a full sweep.
    """
    graph._check_node(u)
    graph._check_node(v)
    if u == v:
        return 0
    seen = {u}
    frontier = [u]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for x in frontier:
            for w in graph.adjacent(x):
                if w == v:
                    return d
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return None


def nearest_of(graph: Graph, source: int, targets: set[int]) -> tuple[int, list[int]] | None:
    """Distance to the nearest node of ``targets`` plus every target at that distance.

    ``source`` itself is ignored even if present in ``targets``.  Returns None
    when no target is reachable.  The tied list is sorted ascending.
    """
    graph._check_node(source)
    seen = {source}
    frontier = [source]
    d = 0
    while frontier:
        d += 1
        nxt = []
        hits = []
        for x in frontier:
            for w in graph.adjacent(x):
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
                    if w in targets:
                        hits.append(w)
        if hits:
            return d, sorted(hits)
        frontier = nxt
    return None


class CostFunction:
    """Symmetric nonnegative integer costs on node pairs.

    Two kinds: the hop metric of a graph, or an explicit complete matrix.
    Zero costs between distinct nodes are legal for matrices but are surfaced
    by :meth:`zero_cost_pairs` so reports can flag them.
    """

    __slots__ = ("kind", "n", "graph", "_matrix", "_metric")

    def __init__(self, kind: str, n: int, graph: Graph | None, matrix: list[list[int]] | None):
        self.kind = kind
        self.n = n
        self.graph = graph
        self._matrix = matrix
        self._metric: bool | None = True if kind == "hop" else None

    @classmethod
    def hop_metric(cls, graph: Graph) -> CostFunction:
        if not isinstance(graph, Graph):
            raise GraphError(f"hop metric needs a Graph, got {type(graph).__name__}")
        return cls("hop", graph.n, graph, None)

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence[int]]) -> CostFunction:
        n = len(matrix)
        if n < 1:
            raise GraphError("cost matrix must be non-empty")
        rows = []
        for u in range(n):
            row = list(matrix[u])
            if len(row) != n:
                raise GraphError(f"cost matrix row {u} has length {len(row)}, expected {n}")
            rows.append(row)
        for u in range(n):
            if rows[u][u] != 0:
                raise GraphError(f"cost matrix diagonal entry ({u},{u}) must be 0")
            for v in range(u + 1, n):
                w = rows[u][v]
                if not isinstance(w, int) or isinstance(w, bool) or w < 0:
                    raise GraphError(f"cost ({u},{v}) must be a nonnegative int, got {w!r}")
                if rows[v][u] != w:
                    raise GraphError(f"cost matrix is asymmetric at ({u},{v})")
        return cls("matrix", n, None, rows)

    def cost(self, u: int, v: int) -> int:
        if self.kind == "matrix":
            if not 0 <= u < self.n or not 0 <= v < self.n:
                raise GraphError(f"invalid node pair ({u},{v})")
            return self._matrix[u][v]
        d = hop_distance(self.graph, u, v)
        if d is None:
            raise UnreachableError(f"nodes {u} and {v} are disconnected under the hop metric")
        return d

    def as_matrix(self) -> list[list[int]]:
        if self.kind == "matrix":
            return [row[:] for row in self._matrix]
        sentinel = self.n + 1
        rows = []
        for u in range(self.n):
            row = bfs_distances(self.graph, u)
            if sentinel in row:
                raise UnreachableError("graph is disconnected; hop metric is partial")
            rows.append(row)
        return rows

    def is_metric(self) -> bool:
        if self._metric is None:
            self._metric = check_triangle(self) is None
        return self._metric

    def pair_cost_extremes(self) -> tuple[int, int]:
        """(min, max) cost over distinct pairs."""
        if self.n < 2:
            raise GraphError("no distinct pairs on a single node")
        if self.kind == "hop":
            if self.graph.edge_count == 0:
                raise UnreachableError("graph has no edges; hop metric is partial")
            # adjacent distinct nodes sit at distance exactly 1
            lo = 1
            hi = 0
            sentinel = self.n + 1
            for u in range(self.n):
                row = bfs_distances(self.graph, u)
                far = max(row)
                if far == sentinel:
                    raise UnreachableError("graph is disconnected; hop metric is partial")
                hi = max(hi, far)
            return lo, hi
        lo = min(self._matrix[u][v] for u in range(self.n) for v in range(u + 1, self.n))
        hi = max(self._matrix[u][v] for u in range(self.n) for v in range(u + 1, self.n))
        return lo, hi

    def zero_cost_pairs(self) -> list[Edge]:
        if self.kind == "hop":
            return []
        return [
            (u, v)
            for u in range(self.n)
            for v in range(u + 1, self.n)
            if self._matrix[u][v] == 0
        ]


def check_triangle(c: CostFunction) -> tuple[int, int, int] | None:
    """None when the triangle inequality holds everywhere, else the
    lexicographically least ordered triple (u, w, v) with c(u,v) > c(u,w) + c(w,v)."""
    mat = c.as_matrix()
    n = c.n
    for u in range(n):
        for w in range(n):
            if w == u:
                continue
            uw = mat[u][w]
            for v in range(n):
                if v == u or v == w:
                    continue
                if mat[u][v] > uw + mat[w][v]:
                    return (u, w, v)
    return None


def metric_closure(graph: Graph) -> CostFunction:
    """All-pairs hop distances materialized as an explicit matrix."""
    return CostFunction.from_matrix(CostFunction.hop_metric(graph).as_matrix())


def validate_traversal(order: Sequence[int], n: int) -> None:
    if len(order) != n or sorted(order) != list(range(n)):
        raise GraphError(f"not a permutation of 0..{n - 1}: {list(order)!r}")


def cost_of(order: Sequence[int], c: CostFunction) -> int:
    """Total cost of consecutive steps of a traversal (a permutation of all nodes)."""
    validate_traversal(order, c.n)
    return sum(c.cost(order[i], order[i + 1]) for i in range(len(order) - 1))


def random_metric_cost(n: int, rng, max_cost: int = 9) -> CostFunction:
    """Random symmetric integer costs pushed through their shortest-path closure,
    which enforces the triangle inequality while keeping every pair cost >= 1."""
    if n < 1:
        raise GraphError("need at least one node")
    if max_cost < 1:
        raise GraphError("max_cost must be >= 1")
    w = [[0] * n for _ in range(n)]
    for u in range(n):
        for v in range(u + 1, n):
            w[u][v] = w[v][u] = rng.randint(1, max_cost)
    for k in range(n):
        wk = w[k]
        for i in range(n):
            wik = w[i][k]
            wi = w[i]
            for j in range(n):
                t = wik + wk[j]
                if t < wi[j]:
                    wi[j] = t
    return CostFunction.from_matrix(w)


def unbounded_ratio_instance(x: int = 10) -> CostFunction:
    """Four-point matrix whose greedy traversal costs x+3 while a cost-5 tour exists.

    The pair (0,1) costs ``x``; raising ``x`` makes the greedy route from node 3
    arbitrarily worse than optimal, and for x > 4 the triangle inequality fails.
    """
    if x < 0:
        raise GraphError("x must be nonnegative")
    m = [
        [0, x, 2, 2],
        [x, 0, 2, 2],
        [2, 2, 0, 1],
        [2, 2, 1, 0],
    ]
    return CostFunction.from_matrix(m)


# --- serialization ---------------------------------------------------------


def instance_to_json_obj(graph: Graph, cost: CostFunction | None = None) -> dict:
    obj: dict = {"n": graph.n, "edges": [list(e) for e in graph.edges()]}
    if cost is not None and cost.kind == "matrix":
        obj["weights"] = [
            [u, v, cost.cost(u, v)] for u in range(cost.n) for v in range(u + 1, cost.n)
        ]
    return obj


def instance_from_json_obj(obj: dict) -> tuple[Graph, CostFunction | None]:
    """Parse ``{"n":…, "edges":[[u,v],…]}`` with an optional complete ``"weights"`` list."""
    if not isinstance(obj, dict):
        raise GraphError("graph JSON must be an object")
    try:
        n = obj["n"]
        edges = obj["edges"]
    except KeyError as err:
        raise GraphError(f"graph JSON is missing key {err.args[0]!r}") from None
    graph = Graph(n, edges)
    weights = obj.get("weights")
    if weights is None:
        return graph, None
    mat = [[0] * n for _ in range(n)]
    seen: set[Edge] = set()
    for item in weights:
        if len(item) != 3:
            raise GraphError(f"weight entry must be [u, v, w], got {item!r}")
        u, v, w = item
        graph._check_node(u)
        graph._check_node(v)
        if u == v:
            raise GraphError(f"weight entry for self-pair ({u},{v})")
        e = normalize_edge(u, v)
        if e in seen:
            raise GraphError(f"duplicate weight entry for pair {e}")
        seen.add(e)
        mat[u][v] = mat[v][u] = w
    want = n * (n - 1) // 2
    if len(seen) != want:
        raise GraphError(f"explicit matrix must cover all {want} pairs, got {len(seen)}")
    return graph, CostFunction.from_matrix(mat)


def graph_to_edge_list(graph: Graph) -> str:
    """Plain text: header ``<n> <edge-count>`` then one ``u v`` line per edge."""
    lines = [f"{graph.n} {graph.edge_count}"]
    lines.extend(f"{u} {v}" for u, v in graph.edges())
    return "\n".join(lines) + "\n"


def graph_from_edge_list(text: str) -> Graph:
    rows = [ln for ln in (s.strip() for s in text.splitlines()) if ln and not ln.startswith("#")]
    if not rows:
        raise GraphError("edge-list text is empty")
    head = rows[0].split()
    if len(head) != 2:
        raise GraphError(f"edge-list header must be 'n <count>', got {rows[0]!r}")
    try:
        n, count = int(head[0]), int(head[1])
    except ValueError:
        raise GraphError(f"edge-list header must be two ints, got {rows[0]!r}") from None
    body = rows[1:]
    if len(body) != count:
        raise GraphError(f"edge-list header promises {count} edges, found {len(body)}")
    edges = []
    for ln in body:
        parts = ln.split()
        if len(parts) != 2:
            raise GraphError(f"edge line must be 'u v', got {ln!r}")
        edges.append((int(parts[0]), int(parts[1])))
    return Graph(n, edges)


def graph_to_dot(graph: Graph, name: str = "G") -> str:
    lines = [f"graph {name} {{"]
    lines.extend(f"  {v};" for v in range(graph.n))
    lines.extend(f"  {u} -- {v};" for u, v in graph.edges())
    lines.append("}")
    return "\n".join(lines) + "\n"
