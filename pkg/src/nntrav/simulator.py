"""Synchronous-round walker with per-node distance labels, under edge deletions.

Each round, every visited node recomputes its label from the previous round's
snapshot: ``dist = 1 + min(dist of itself and its neighbors)``, capped at
``n + 1``; unvisited nodes hold 0.  The walker then moves to the neighbor with
the smallest label if that label beats its own, and the run stops once the
walker's label exceeds the count of explored nodes — at that point no
reachable unvisited node can exist.  Scheduled deletions land at the end of
each round, so the labels may chase a moving target; the two runtime checks
(labels never decrease, labels never overestimate the true distance to the
nearest unvisited node) hold regardless.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field

from .graph import Edge, Graph, GraphError, normalize_edge


class ScheduleError(GraphError):
    """A failure schedule is malformed or names a missing edge."""


@dataclass(frozen=True)
class FailureSchedule:
    """Edges to delete at the end of given iterations; iteration 0 means before the run."""

    deletions: dict[int, tuple[Edge, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        seen: set[Edge] = set()
        cleaned: dict[int, tuple[Edge, ...]] = {}
        for iteration, edges in sorted(self.deletions.items()):
            if not isinstance(iteration, int) or isinstance(iteration, bool) or iteration < 0:
                raise ScheduleError(f"iteration keys must be integers >= 0, got {iteration!r}")
            batch = []
            for e in edges:
                u, v = e
                e = normalize_edge(u, v)
                if e in seen:
                    raise ScheduleError(f"edge {e} scheduled for deletion twice")
                seen.add(e)
                batch.append(e)
            if batch:
                cleaned[iteration] = tuple(batch)
        object.__setattr__(self, "deletions", cleaned)

    @classmethod
    def empty(cls) -> FailureSchedule:
        return cls({})

    @classmethod
    def from_json_obj(cls, obj: object) -> FailureSchedule:
        if not isinstance(obj, dict) or not isinstance(obj.get("deletions"), list):
            raise ScheduleError('schedule JSON must be {"deletions": [...]}')
        deletions: dict[int, list[Edge]] = {}
        for entry in obj["deletions"]:
            if not isinstance(entry, dict) or "iter" not in entry or "edges" not in entry:
                raise ScheduleError('each deletion entry needs "iter" and "edges"')
            it = entry["iter"]
            if not isinstance(it, int) or isinstance(it, bool):
                raise ScheduleError(f'"iter" must be an integer, got {it!r}')
            for pair in entry["edges"]:
                if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                    raise ScheduleError(f"edge entries must be pairs, got {pair!r}")
                deletions.setdefault(it, []).append((pair[0], pair[1]))
        return cls({it: tuple(edges) for it, edges in deletions.items()})

    def to_json_obj(self) -> dict:
        return {
            "deletions": [
                {"iter": it, "edges": [list(e) for e in self.deletions[it]]}
                for it in sorted(self.deletions)
            ]
        }

    def edges_at(self, iteration: int) -> tuple[Edge, ...]:
        return self.deletions.get(iteration, ())

    def last_iteration(self) -> int:
        return max(self.deletions, default=0)


@dataclass
class SimState:
    """Snapshot of the walker between rounds.

    ``exp`` counts explored (visited) nodes and starts at 1 for the start node;
    ``iteration`` counts completed rounds.
    """

    vis: list[bool]
    dist: list[int]
    pos: int
    exp: int
    iteration: int

    @classmethod
    def initial(cls, n: int, start: int) -> SimState:
        vis = [False] * n
        vis[start] = True
        return cls(vis, [0] * n, start, 1, 0)

    def copy(self) -> SimState:
        return SimState(list(self.vis), list(self.dist), self.pos, self.exp, self.iteration)


def has_terminated(state: SimState) -> bool:
    return state.dist[state.pos] > state.exp


@dataclass(frozen=True)
class SimStep:
    iteration: int
    pos_before: int
    pos_after: int
    moved: bool
    explored: int | None
    dist: tuple[int, ...]
    deleted: tuple[Edge, ...]

    def as_json_obj(self) -> dict:
        return {
            "iter": self.iteration,
            "pos_before": self.pos_before,
            "pos_after": self.pos_after,
            "moved": self.moved,
            "explored": self.explored,
            "dist": list(self.dist),
            "deleted": [list(e) for e in self.deleted],
        }


def sim_step(state: SimState, graph: Graph, deletions: tuple[Edge, ...] = ()) -> tuple[SimState, SimStep]:
    """One synchronous round: label update, move, then deletions.

    Returns the successor state and its step record without touching the input
    state.  ``graph`` is mutated by the deletions — except on the terminating
    round, whose deletions are skipped (the run is already over when they
    would land).
    """
    n = graph.n
    cap = n + 1
    old = state.dist
    dist = list(old)
    for v in range(n):
        if state.vis[v]:
            best = old[v]
            for u in graph.adjacent(v):
                if old[u] < best:
                    best = old[u]
            dist[v] = min(cap, 1 + best)
    pos = state.pos
    vis = list(state.vis)
    exp = state.exp
    moved = False
    explored = None
    neighbors = graph.adjacent(pos)
    if neighbors:
        target = min(neighbors, key=lambda u: (dist[u], u))
        if dist[target] < dist[pos]:
            pos = target
            moved = True
            if not vis[pos]:
                vis[pos] = True
                exp += 1
                explored = pos
    new = SimState(vis, dist, pos, exp, state.iteration + 1)
    applied: tuple[Edge, ...] = ()
    if not has_terminated(new):
        for u, v in deletions:
            graph.delete_edge(u, v)
        applied = tuple(normalize_edge(u, v) for u, v in deletions)
    record = SimStep(new.iteration, state.pos, pos, moved, explored, tuple(dist), applied)
    return new, record


@dataclass
class SimTrace:
    n: int
    start: int
    pre_deleted: tuple[Edge, ...]
    steps: list[SimStep]
    outcome: str  # "terminated" | "budget-exhausted"
    final: SimState

    @property
    def iterations(self) -> int:
        return self.final.iteration

    def visited(self) -> set[int]:
        return {v for v in range(self.n) if self.final.vis[v]}

    def explored_order(self) -> list[int]:
        order = [self.start]
        order.extend(s.explored for s in self.steps if s.explored is not None)
        return order

    def to_json_lines(self) -> list[str]:
        lines = []
        if self.pre_deleted:
            lines.append(json.dumps(
                {"iter": 0, "deleted": [list(e) for e in self.pre_deleted]}, sort_keys=True))
        lines.extend(json.dumps(s.as_json_obj(), sort_keys=True) for s in self.steps)
        summary = {
            "outcome": self.outcome,
            "iterations": self.iterations,
            "explored": self.final.exp,
            "visited": sorted(self.visited()),
        }
        lines.append(json.dumps(summary, sort_keys=True))
        return lines


def iteration_budget(n: int) -> int:
    """Default round budget: every legal run must finish within 4·n²."""
    if n < 1:
        raise GraphError(f"need n >= 1, got {n}")
    return 4 * n * n


def run_sim(
    graph: Graph,
    start: int,
    schedule: FailureSchedule | None = None,
    max_iterations: int | None = None,
) -> SimTrace:
    """Run rounds until the walker's label exceeds its explored count, or budget.

    The input graph is not modified; deletions land on an internal copy.
    Deterministic: same graph, start, and schedule give the identical trace.
    """
    if not 0 <= start < graph.n:
        raise GraphError(f"start {start} out of range for {graph.n} nodes")
    schedule = schedule or FailureSchedule.empty()
    budget = iteration_budget(graph.n) if max_iterations is None else max_iterations
    work = graph.copy()
    pre = schedule.edges_at(0)
    for u, v in pre:
        work.delete_edge(u, v)
    state = SimState.initial(graph.n, start)
    steps: list[SimStep] = []
    outcome = "budget-exhausted"
    while state.iteration < budget:
        state, record = sim_step(state, work, schedule.edges_at(state.iteration + 1))
        steps.append(record)
        if has_terminated(state):
            outcome = "terminated"
            break
    return SimTrace(graph.n, start, pre, steps, outcome, state)


def _true_distances_to_unvisited(graph: Graph, visited: list[bool]) -> list[int]:
    # Multi-source BFS from every unvisited node; unreachable => n + 1 (the cap).
    n = graph.n
    cap = n + 1
    true = [cap] * n
    queue = deque()
    for v in range(n):
        if not visited[v]:
            true[v] = 0
            queue.append(v)
    while queue:
        v = queue.popleft()
        for u in graph.adjacent(v):
            if true[u] > true[v] + 1:
                true[u] = true[v] + 1
                queue.append(u)
    return true


def check_r1_r2(trace: SimTrace, graph: Graph) -> str | None:
    """Validate the two label invariants against the original graph + trace.

    R1: every node's label is nondecreasing over the run.  R2: no visited
    node's label ever exceeds its true distance to the nearest unvisited node
    in the graph as it stood during that round (no unvisited reachable =>
    compared against the cap n + 1).  Returns None if both hold, else a
    description of the first violation.
    """
    work = graph.copy()
    for u, v in trace.pre_deleted:
        work.delete_edge(u, v)
    prev = [0] * trace.n
    visited = [False] * trace.n
    visited[trace.start] = True
    for step in trace.steps:
        if step.explored is not None:
            visited[step.explored] = True
        for v in range(trace.n):
            if step.dist[v] < prev[v]:
                return (
                    f"R1 violated at iteration {step.iteration}: "
                    f"dist[{v}] decreased {prev[v]} -> {step.dist[v]}"
                )
        true = _true_distances_to_unvisited(work, visited)
        for v in range(trace.n):
            if visited[v] and step.dist[v] > true[v]:
                return (
                    f"R2 violated at iteration {step.iteration}: "
                    f"dist[{v}] = {step.dist[v]} exceeds true distance {true[v]}"
                )
        prev = list(step.dist)
        for u, v in step.deleted:
            work.delete_edge(u, v)
    return None


def check_progress(trace: SimTrace) -> str | None:
    """Validate the per-round liveness accounting of the termination argument.

    Every round either moves the walker strictly downhill in label value,
    terminates the run, or strictly increases some node's label.  Returns None
    if every round complies, else a description of the first violation.
    """
    prev = [0] * trace.n
    last = trace.steps[-1] if trace.steps else None
    for step in trace.steps:
        if step.moved:
            if step.dist[step.pos_after] >= step.dist[step.pos_before]:
                return (
                    f"move at iteration {step.iteration} was not downhill: "
                    f"{step.dist[step.pos_before]} -> {step.dist[step.pos_after]}"
                )
        else:
            terminated = step is last and trace.outcome == "terminated"
            if not terminated and not any(step.dist[v] > prev[v] for v in range(trace.n)):
                return f"no move and no dist increase at iteration {step.iteration}"
        prev = list(step.dist)
    return None
