"""Agent configurations, neighborhoods, and the induced communication graph.

Agents are points in R^d. Two distinct agents interact when they are within
the confidence bound of each other and, if a social network is given, are
also adjacent in it. Self-pairs always interact, so no neighborhood is ever
empty and the averaging update is always well defined.

All types here are immutable values; the operations are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components as _cc

if TYPE_CHECKING:
    from .graphs import SocialGraph


@dataclass(frozen=True, eq=False)
class Configuration:
    """Immutable snapshot of n agent positions in R^d with a confidence bound.

    ``positions`` accepts an (n, d) array or, for one-dimensional opinions,
    a flat sequence of n scalars. ``confidence`` is the interaction radius
    r > 0; the classical model normalizes it to 1.
    """

    positions: np.ndarray
    confidence: float = 1.0

    def __post_init__(self) -> None:
        pos = np.array(self.positions, dtype=float)
        if pos.ndim == 1:
            pos = pos.reshape(-1, 1)
        if pos.ndim != 2 or pos.shape[0] < 1 or pos.shape[1] < 1:
            raise ValueError("positions must be a non-empty (n, d) array")
        if not np.all(np.isfinite(pos)):
            raise ValueError("every coordinate must be finite")
        conf = float(self.confidence)
        if not (np.isfinite(conf) and conf > 0):
            raise ValueError("confidence bound must be a positive real")
        pos = np.ascontiguousarray(pos)
        pos.flags.writeable = False
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "confidence", conf)

    @property
    def n(self) -> int:
        return self.positions.shape[0]

    @property
    def dimension(self) -> int:
        return self.positions.shape[1]

    def with_positions(self, positions: np.ndarray) -> "Configuration":
        """New configuration with the same confidence bound."""
        return Configuration(positions, self.confidence)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Configuration):
            return NotImplemented
        return (
            self.confidence == other.confidence
            and self.positions.shape == other.positions.shape
            and bool(np.array_equal(self.positions, other.positions))
        )

    def __repr__(self) -> str:
        return f"Configuration(n={self.n}, d={self.dimension}, r={self.confidence})"

    def to_json_dict(self) -> dict:
        """JSON form; 1-D positions are emitted in the flat shorthand."""
        if self.dimension == 1:
            positions = [float(v) for v in self.positions[:, 0]]
        else:
            positions = [[float(v) for v in row] for row in self.positions]
        return {
            "dimension": self.dimension,
            "confidence": self.confidence,
            "positions": positions,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "Configuration":
        if "positions" not in data:
            raise ValueError("configuration JSON needs a 'positions' field")
        pos = np.array(data["positions"], dtype=float)
        if pos.ndim == 1:
            pos = pos.reshape(-1, 1)
        declared = data.get("dimension")
        if declared is not None and pos.ndim == 2 and pos.shape[1] != declared:
            raise ValueError(
                f"declared dimension {declared} does not match positions of width {pos.shape[1]}"
            )
        return cls(pos, float(data.get("confidence", 1.0)))


@dataclass(frozen=True, eq=False)
class CommunicationGraph:
    """Symmetric interaction relation on agents, self-pairs always included."""

    n: int
    adjacency: np.ndarray

    def __post_init__(self) -> None:
        adj = np.array(self.adjacency, dtype=bool)
        if adj.shape != (self.n, self.n):
            raise ValueError("adjacency must be an (n, n) boolean matrix")
        if not np.array_equal(adj, adj.T):
            raise ValueError("adjacency must be symmetric")
        if not adj.diagonal().all():
            raise ValueError("every agent must be adjacent to itself")
        adj.flags.writeable = False
        object.__setattr__(self, "adjacency", adj)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CommunicationGraph):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.adjacency, other.adjacency))

    def __repr__(self) -> str:
        off_edges = (int(self.adjacency.sum()) - self.n) // 2
        return f"CommunicationGraph(n={self.n}, edges={off_edges})"


def _require_same_n(config: Configuration, graph: Optional["SocialGraph"]) -> None:
    if graph is not None and graph.n != config.n:
        raise ValueError(f"graph has n={graph.n} but configuration has n={config.n}")


def pairwise_sq_dists(config: Configuration) -> np.ndarray:
    """Matrix of squared Euclidean distances between all agent pairs."""
    x = config.positions
    diff = x[:, None, :] - x[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def interaction_mask(
    config: Configuration,
    graph: Optional["SocialGraph"] = None,
    sq_dists: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Boolean matrix of interacting pairs.

    Entry (i, j) is True iff ||x(i) - x(j)|| <= r and, when a social graph is
    given, (i, j) is one of its edges. The diagonal is always True. The
    distance comparison is an exact <= in double precision (no tolerance), so
    pairs at distance exactly r interact; this is sensitive to rounding in
    the last ulp of the coordinates.
    """
    _require_same_n(config, graph)
    if sq_dists is None:
        sq_dists = pairwise_sq_dists(config)
    mask = np.sqrt(sq_dists) <= config.confidence
    if graph is not None:
        mask &= graph.adjacency
        np.fill_diagonal(mask, True)
    return mask


def neighbors(config: Configuration, graph: Optional["SocialGraph"], i: int) -> set:
    """Indices interacting with agent i (always includes i itself)."""
    if not 0 <= i < config.n:
        raise IndexError(f"agent index {i} out of range for n={config.n}")
    mask = interaction_mask(config, graph)
    return set(int(j) for j in np.flatnonzero(mask[i]))


def communication_graph(
    config: Configuration, graph: Optional["SocialGraph"] = None
) -> CommunicationGraph:
    """Communication graph of the current state: social edge AND within range."""
    return CommunicationGraph(config.n, interaction_mask(config, graph))


def _component_labels(adjacency: np.ndarray) -> tuple[int, np.ndarray]:
    """(component count, per-node labels) for a boolean adjacency matrix."""
    count, labels = _cc(csr_matrix(adjacency), directed=False)
    return int(count), labels


def components(cg: CommunicationGraph) -> list[list[int]]:
    """Connected components as sorted index lists; their union is [n]."""
    count, labels = _component_labels(cg.adjacency)
    return [sorted(np.flatnonzero(labels == c).tolist()) for c in range(count)]


def split_clusters_1d(positions: np.ndarray, r: float) -> list[np.ndarray]:
    """Maximal groups of 1-D positions whose consecutive sorted gaps are <= r.

    Returns index arrays into ``positions``; groups are the independent
    subsystems of the dynamics (agents in different groups are farther than
    r apart and can never interact before the groups move).
    """
    pos = np.asarray(positions, dtype=float).reshape(-1)
    order = np.argsort(pos, kind="stable")
    s = pos[order]
    breaks = np.flatnonzero(np.diff(s) > r) + 1
    return [order[a:b] for a, b in zip(np.r_[0, breaks], np.r_[breaks, len(pos)])]
