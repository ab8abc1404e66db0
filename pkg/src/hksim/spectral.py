"""Energy functions, the second eigenvalue, and the decrement inequality.

The energy of a configuration sums, over ordered pairs of distinct agents,
the squared distance for interacting pairs and 1 for non-interacting pairs
(each unordered pair counts twice; self-pairs contribute 0). It lies in
[0, n^2 - n], is non-increasing along social trajectories, and each step
decreases it by at least (1 - lambda^2) times the active part, where lambda
is the largest non-unit eigenvalue magnitude of the averaging matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .core import (
    CommunicationGraph,
    Configuration,
    _component_labels,
    communication_graph,
    interaction_mask,
    pairwise_sq_dists,
)
from .graphs import SocialGraph

DECREMENT_TOL = 1e-9


def _energy_terms(mask: np.ndarray, sq: np.ndarray) -> tuple[float, float]:
    """(active part, inactive pair count) under the ordered-pair convention."""
    off = ~np.eye(mask.shape[0], dtype=bool)
    active = float(sq[mask & off].sum())
    inactive = float((~mask).sum())  # the diagonal is never inactive
    return active, inactive


def energy(config: Configuration, graph: Optional[SocialGraph] = None) -> float:
    """Total energy: active squared distances plus 1 per non-interacting pair."""
    sq = pairwise_sq_dists(config)
    mask = interaction_mask(config, graph, sq_dists=sq)
    active, inactive = _energy_terms(mask, sq)
    return active + inactive


def active_energy(config: Configuration, graph: Optional[SocialGraph] = None) -> float:
    """Sum of squared distances over ordered interacting pairs."""
    sq = pairwise_sq_dists(config)
    mask = interaction_mask(config, graph, sq_dists=sq)
    active, _ = _energy_terms(mask, sq)
    return active


def _lambda_from_adjacency(adj: np.ndarray) -> float:
    """Largest |eigenvalue| of D^-1 A after removing the unit eigenvalues.

    Computed on the symmetrized matrix D^-1/2 A D^-1/2, which has the same
    (real) spectrum. The unit eigenvalue appears once per connected
    component; those are the top ``count`` entries of the sorted spectrum.
    """
    n = adj.shape[0]
    count, _ = _component_labels(adj)
    if n - count == 0:
        return 0.0
    deg = adj.sum(axis=1).astype(float)
    dinv = 1.0 / np.sqrt(deg)
    sym = adj * dinv[:, None] * dinv[None, :]
    ev = np.linalg.eigvalsh(sym)
    return float(np.abs(ev[: n - count]).max())


def second_eigenvalue(cg: CommunicationGraph) -> float:
    """max |lambda| over non-unit eigenvalues of the averaging matrix.

    Unit eigenvalues are excluded with multiplicity equal to the number of
    connected components; 0 when nothing remains (all-singleton graphs).
    """
    return _lambda_from_adjacency(cg.adjacency)


def _max_component_diameter(adj: np.ndarray) -> int:
    """Largest hop diameter over connected components (singletons give 0)."""
    dist = shortest_path(csr_matrix(adj), method="D", directed=False, unweighted=True)
    finite = dist[np.isfinite(dist)]
    return int(finite.max()) if finite.size else 0


def gap_bound(cg: CommunicationGraph) -> float:
    """Spectral bound 1 - 1/(n^2 diam); 0 when every component is a singleton."""
    diam = _max_component_diameter(cg.adjacency)
    if diam == 0:
        return 0.0
    return 1.0 - 1.0 / (cg.n * cg.n * diam)


@dataclass(frozen=True)
class DecrementCheck:
    """One evaluation of the per-step energy decrement inequality."""

    lhs: float  # E(x_t) - E(x_{t+1})
    rhs: float  # (1 - lambda^2) * E_act(x_t)
    lam: float
    holds: bool


def check_decrement(
    x_t: Configuration,
    x_next: Configuration,
    graph: Optional[SocialGraph] = None,
) -> DecrementCheck:
    """Evaluate E(x_t) - E(x_{t+1}) >= (1 - lambda^2) E_act(x_t) for one step.

    ``x_next`` must be the averaging step of ``x_t`` under the same graph,
    otherwise the comparison is meaningless (the caller enforces this).
    """
    if x_t.n != x_next.n:
        raise ValueError("configurations must have the same n")
    sq = pairwise_sq_dists(x_t)
    mask = interaction_mask(x_t, graph, sq_dists=sq)
    active, inactive = _energy_terms(mask, sq)
    lam = _lambda_from_adjacency(mask)
    lhs = (active + inactive) - energy(x_next, graph)
    rhs = (1.0 - lam * lam) * active
    return DecrementCheck(lhs=lhs, rhs=rhs, lam=lam, holds=bool(lhs >= rhs - DECREMENT_TOL))


@dataclass(frozen=True)
class SpectralReport:
    """Energy and spectral quantities of one configuration."""

    energy: float
    active_energy: float
    lam: float
    gap_bound: float
    diameter: int
    component_count: int

    def to_json_dict(self) -> dict:
        return {
            "energy": self.energy,
            "active_energy": self.active_energy,
            "lambda": self.lam,
            "gap_bound": self.gap_bound,
            "diameter": self.diameter,
            "components": self.component_count,
        }


def spectral_report(config: Configuration, graph: Optional[SocialGraph] = None) -> SpectralReport:
    """All spectral diagnostics of the current communication graph at once."""
    sq = pairwise_sq_dists(config)
    mask = interaction_mask(config, graph, sq_dists=sq)
    active, inactive = _energy_terms(mask, sq)
    count, _ = _component_labels(mask)
    diam = _max_component_diameter(mask)
    lam = _lambda_from_adjacency(mask)
    gap = 0.0 if diam == 0 else 1.0 - 1.0 / (config.n * config.n * diam)
    return SpectralReport(
        energy=active + inactive,
        active_energy=active,
        lam=lam,
        gap_bound=gap,
        diameter=diam,
        component_count=count,
    )
