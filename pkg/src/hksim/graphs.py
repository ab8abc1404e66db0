"""Social networks: deterministic families, random generators, and schedules.

Random graphs are driven by numpy's PCG64 generator so a fixed seed
reproduces the same edge set on any platform. G(n, p) draws the pairs
row by row (row i draws the n-1-i uniforms for pairs (i, i+1..n-1), in
that order); preferential attachment starts from a clique on m+1 nodes
and attaches every later node to m distinct existing nodes sampled with
probability proportional to current degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .core import Configuration, interaction_mask

Seed = "int | np.random.SeedSequence"


@dataclass(frozen=True, eq=False)
class SocialGraph:
    """Undirected graph on n agents; no self-edges are stored."""

    n: int
    adjacency: np.ndarray

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("graph needs n >= 1")
        adj = np.array(self.adjacency, dtype=bool)
        if adj.shape != (self.n, self.n):
            raise ValueError("adjacency must be an (n, n) boolean matrix")
        if not np.array_equal(adj, adj.T):
            raise ValueError("adjacency must be symmetric")
        if adj.diagonal().any():
            raise ValueError("self-edges are not stored in a social graph")
        adj.flags.writeable = False
        object.__setattr__(self, "adjacency", adj)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "SocialGraph":
        adj = np.zeros((n, n), dtype=bool)
        for i, j in edges:
            if i == j:
                raise ValueError(f"self-edge ({i}, {j}) is not allowed")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) out of range for n={n}")
            adj[i, j] = adj[j, i] = True
        return cls(n, adj)

    @property
    def edge_count(self) -> int:
        return int(self.adjacency.sum()) // 2

    def edges(self) -> list[tuple[int, int]]:
        """Sorted list of edges as (i, j) with i < j, 0-based."""
        iu, ju = np.nonzero(np.triu(self.adjacency, 1))
        return list(zip(iu.tolist(), ju.tolist()))

    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    def with_edges(self, extra: Iterable[tuple[int, int]]) -> "SocialGraph":
        """Copy of the graph with additional edges."""
        adj = self.adjacency.copy()
        for i, j in extra:
            if i == j:
                raise ValueError("cannot add a self-edge")
            adj[i, j] = adj[j, i] = True
        return SocialGraph(self.n, adj)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SocialGraph):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.adjacency, other.adjacency))

    def __repr__(self) -> str:
        return f"SocialGraph(n={self.n}, edges={self.edge_count})"

    def to_json_dict(self) -> dict:
        """File form uses 1-based endpoints."""
        return {"n": self.n, "edges": [[i + 1, j + 1] for i, j in self.edges()]}

    @classmethod
    def from_json_dict(cls, data: dict) -> "SocialGraph":
        n = int(data["n"])
        edges = [(int(i) - 1, int(j) - 1) for i, j in data.get("edges", [])]
        return cls.from_edges(n, edges)


def gnp(n: int, p: float, seed) -> SocialGraph:
    """Erdos-Renyi G(n, p): each pair is an edge independently with probability p."""
    if n < 1:
        raise ValueError("gnp needs n >= 1")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability must lie in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    adj = np.zeros((n, n), dtype=bool)
    for i in range(n - 1):
        adj[i, i + 1 :] = rng.random(n - 1 - i) < p
    adj |= adj.T
    return SocialGraph(n, adj)


def barabasi_albert(n: int, m: int, seed) -> SocialGraph:
    """Preferential attachment: clique on m+1 nodes, then m edges per new node.

    Each new node picks m distinct targets, each drawn with probability
    proportional to current degree (resampling on collisions). The edge
    count is exactly m(m+1)/2 + (n-m-1)m.
    """
    if not 1 <= m < n:
        raise ValueError(f"attachment count must satisfy 1 <= m < n, got m={m}, n={n}")
    rng = np.random.default_rng(seed)
    adj = np.zeros((n, n), dtype=bool)
    adj[: m + 1, : m + 1] = True
    np.fill_diagonal(adj, False)
    # one entry per unit of degree; sampling an index uniformly from this
    # list is degree-proportional sampling over nodes
    repeated = [v for v in range(m + 1) for _ in range(m)]
    for u in range(m + 1, n):
        targets: set[int] = set()
        while len(targets) < m:
            cand = repeated[int(rng.integers(len(repeated)))]
            targets.add(cand)
        for v in targets:
            adj[u, v] = adj[v, u] = True
            repeated.append(v)
        repeated.extend([u] * m)
    return SocialGraph(n, adj)


def named_graph(kind: str, n: int) -> SocialGraph:
    """One of the deterministic families: complete, path, or empty."""
    if n < 1:
        raise ValueError("named_graph needs n >= 1")
    if kind == "complete":
        adj = np.ones((n, n), dtype=bool)
        np.fill_diagonal(adj, False)
        return SocialGraph(n, adj)
    if kind == "path":
        return SocialGraph.from_edges(n, [(i, i + 1) for i in range(n - 1)])
    if kind == "empty":
        return SocialGraph(n, np.zeros((n, n), dtype=bool))
    raise ValueError(f"unknown graph kind {kind!r} (expected complete, path or empty)")


def is_friendly_transition(
    g_t: SocialGraph,
    g_next: SocialGraph,
    x_t: Configuration,
    x_next: Configuration,
) -> tuple[bool, list[tuple[int, int]]]:
    """Check the friendliness condition for one step of a time-varying network.

    A transition is friendly when every pair that interacts at time t (edge
    of G_t and within the confidence bound) and is still within the bound at
    time t+1 keeps its edge in G_{t+1}. Returns the verdict and every
    violating pair.
    """
    n = x_t.n
    if not (g_t.n == g_next.n == n == x_next.n):
        raise ValueError("graphs and configurations must all have the same n")
    interacting = interaction_mask(x_t, g_t)
    np.fill_diagonal(interacting, False)
    in_range_next = interaction_mask(x_next)
    bad = interacting & in_range_next & ~g_next.adjacency
    iu, ju = np.nonzero(np.triu(bad, 1))
    violations = list(zip(iu.tolist(), ju.tolist()))
    return len(violations) == 0, violations


PolicyFn = Callable[[int, SocialGraph, Configuration, Configuration], SocialGraph]


@dataclass
class GraphSchedule:
    """Static, pre-listed, or endogenously evolving social network.

    ``policy`` mode produces G_{t+1} from (t, G_t, x_t, x_{t+1}), which
    permits evolution that depends on the states. ``declared_friendly``
    asks the runner to verify friendliness at every transition.
    """

    mode: str
    graph: Optional[SocialGraph] = None
    graphs: Optional[list[SocialGraph]] = None
    policy: Optional[PolicyFn] = None
    declared_friendly: bool = False

    def __post_init__(self) -> None:
        if self.mode == "static":
            if self.graph is None:
                raise ValueError("static schedule needs a graph")
        elif self.mode == "sequence":
            if not self.graphs:
                raise ValueError("sequence schedule needs at least one graph")
            ns = {g.n for g in self.graphs}
            if len(ns) != 1:
                raise ValueError("every graph in a schedule must have the same n")
        elif self.mode == "policy":
            if self.graph is None or self.policy is None:
                raise ValueError("policy schedule needs an initial graph and a policy")
        else:
            raise ValueError(f"unknown schedule mode {self.mode!r}")

    @classmethod
    def static(cls, graph: SocialGraph, declared_friendly: bool = False) -> "GraphSchedule":
        return cls("static", graph=graph, declared_friendly=declared_friendly)

    @classmethod
    def sequence(
        cls, graphs: Sequence[SocialGraph], declared_friendly: bool = False
    ) -> "GraphSchedule":
        return cls("sequence", graphs=list(graphs), declared_friendly=declared_friendly)

    @classmethod
    def from_policy(
        cls, initial: SocialGraph, policy: PolicyFn, declared_friendly: bool = False
    ) -> "GraphSchedule":
        return cls("policy", graph=initial, policy=policy, declared_friendly=declared_friendly)

    @property
    def n(self) -> int:
        return self.graph.n if self.graph is not None else self.graphs[0].n

    def start(self) -> SocialGraph:
        if self.mode == "sequence":
            return self.graphs[0]
        return self.graph

    def advance(
        self, t: int, g_t: SocialGraph, x_t: Configuration, x_next: Configuration
    ) -> SocialGraph:
        """Graph for step t+1, given the step t -> t+1 just taken."""
        if self.mode == "static":
            return g_t
        if self.mode == "sequence":
            return self.graphs[min(t + 1, len(self.graphs) - 1)]
        g = self.policy(t, g_t, x_t, x_next)
        if g.n != g_t.n:
            raise ValueError("policy produced a graph with a different n")
        return g


def random_edge_addition_policy(seed, per_step: int = 1) -> PolicyFn:
    """Policy adding ``per_step`` uniformly random absent edges each step.

    Edges are never deleted, so any schedule built from this policy is
    friendly by construction.
    """
    rng = np.random.default_rng(seed)

    def policy(t, g_t, x_t, x_next):
        adj = g_t.adjacency.copy()
        n = g_t.n
        iu, ju = np.nonzero(np.triu(~adj, 1))
        if len(iu) == 0:
            return g_t
        take = min(per_step, len(iu))
        chosen = rng.choice(len(iu), size=take, replace=False)
        for k in np.atleast_1d(chosen):
            adj[iu[k], ju[k]] = adj[ju[k], iu[k]] = True
        return SocialGraph(n, adj)

    return policy
