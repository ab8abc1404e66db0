"""The four update rules and the trajectory runner.

All rules are synchronous: a step reads only the previous configuration.
Every rule is implemented through the same displacement kernel
``x'(i) = x(i) + mean over neighbors of (x(j) - x(i))``, which is the mass
center of the neighborhood in exact arithmetic. Sharing the kernel makes
the reductions exact identities in floating point as well: the social rule
on a complete graph, and both non-deterministic rules with zero noise,
produce bit-identical trajectories to the classical rule.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .core import Configuration, interaction_mask, split_clusters_1d
from .graphs import GraphSchedule, SocialGraph, is_friendly_transition

PER_AGENT = "per-agent"
PER_PAIR = "per-pair"

_KINDS = ("zero", "uniform", "schedule", "adversarial")


class FriendlinessViolation(RuntimeError):
    """A schedule declared friendly deleted an edge between interacting agents."""

    def __init__(self, t: int, pairs: list):
        self.t = t
        self.pairs = pairs
        super().__init__(f"friendliness violated at step {t} by pairs {pairs}")


@dataclass
class NoiseSource:
    """Bounded perturbations for the non-deterministic rules.

    Every produced value lies in the closed interval [-eps, eps]. ``uniform``
    noise is a pure function of (seed, t, agent index or pair): the whole
    row for step t is drawn in one shot from a PCG64 stream derived from the
    seed, so values never depend on evaluation order within a step.
    ``adversarial`` wraps a callback receiving (t, i[, j], configuration);
    out-of-range callback values are rejected.
    """

    eps: float
    mode: str = PER_AGENT
    kind: str = "zero"
    seed: Union[int, tuple, None] = None
    table: Optional[dict] = None
    callback: Optional[Callable] = None
    _blocks: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not (np.isfinite(self.eps) and self.eps >= 0):
            raise ValueError("noise bound eps must be a finite real >= 0")
        if self.mode not in (PER_AGENT, PER_PAIR):
            raise ValueError(f"unknown noise mode {self.mode!r}")
        if self.kind not in _KINDS:
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if self.kind == "uniform" and self.seed is None:
            raise ValueError("uniform noise needs a seed")
        if self.kind == "schedule":
            if self.table is None:
                raise ValueError("schedule noise needs a table")
            for key, v in self.table.items():
                if abs(v) > self.eps:
                    raise ValueError(f"table value {v} at {key} exceeds the bound {self.eps}")
        if self.kind == "adversarial" and self.callback is None:
            raise ValueError("adversarial noise needs a callback")

    @classmethod
    def zero(cls, eps: float = 0.0, mode: str = PER_AGENT) -> "NoiseSource":
        return cls(eps=eps, mode=mode, kind="zero")

    @classmethod
    def uniform(cls, eps: float, seed, mode: str = PER_AGENT) -> "NoiseSource":
        return cls(eps=eps, mode=mode, kind="uniform", seed=seed)

    @classmethod
    def from_table(cls, eps: float, table: dict, mode: str = PER_AGENT) -> "NoiseSource":
        return cls(eps=eps, mode=mode, kind="schedule", table=dict(table))

    @classmethod
    def adversarial(cls, eps: float, callback: Callable, mode: str = PER_AGENT) -> "NoiseSource":
        return cls(eps=eps, mode=mode, kind="adversarial", callback=callback)

    def _uniform_block(self, t: int, n: int) -> np.ndarray:
        """Rows 0..t of the uniform stream, grown geometrically and cached.

        A prefix of a PCG64 uniform fill is stable under growing the
        requested shape, so regenerating a larger block never changes
        already-used values.
        """
        shape_tail = (n,) if self.mode == PER_AGENT else (n, n)
        block = self._blocks.get(n)
        if block is None or block.shape[0] <= t:
            rows = 512
            while rows <= t:
                rows *= 2
            rng = np.random.default_rng(np.random.SeedSequence(self.seed))
            block = rng.uniform(-self.eps, self.eps, size=(rows,) + shape_tail)
            self._blocks[n] = block
        return block

    def values_for_step(self, t: int, config: Configuration) -> np.ndarray:
        """Noise for step t: shape (n,) in per-agent mode, (n, n) in per-pair."""
        n = config.n
        shape = (n,) if self.mode == PER_AGENT else (n, n)
        if self.kind == "zero":
            return np.zeros(shape)
        if self.kind == "uniform":
            return self._uniform_block(t, n)[t]
        if self.kind == "schedule":
            out = np.zeros(shape)
            for key, v in self.table.items():
                if key[0] != t:
                    continue
                idx = key[1:]
                if any(not 0 <= k < n for k in idx):
                    raise ValueError(f"table key {key} out of range for n={n}")
                out[idx] = v
            return out
        out = np.empty(shape)
        if self.mode == PER_AGENT:
            for i in range(n):
                out[i] = self._checked(self.callback(t, i, config))
        else:
            for i in range(n):
                for j in range(n):
                    out[i, j] = self._checked(self.callback(t, i, j, config))
        return out

    def _checked(self, v: float) -> float:
        v = float(v)
        if abs(v) > self.eps:
            raise ValueError(f"adversarial noise value {v} outside [-{self.eps}, {self.eps}]")
        return v

    def to_json_dict(self) -> dict:
        """Noise schedule file form; agent indices are 1-based, t is 0-based."""
        if self.kind != "schedule":
            raise ValueError("only schedule noise has a file form")
        values = {}
        for key, v in self.table.items():
            values[",".join(str(k + 1) if pos else str(k) for pos, k in enumerate(key))] = v
        return {"eps": self.eps, "mode": self.mode, "values": values}

    @classmethod
    def from_json_dict(cls, data: dict) -> "NoiseSource":
        mode = data.get("mode", PER_AGENT)
        want = 2 if mode == PER_AGENT else 3
        table = {}
        for key, v in data.get("values", {}).items():
            parts = [int(s) for s in str(key).split(",")]
            if len(parts) != want:
                raise ValueError(f"noise key {key!r} must have {want} comma-separated indices")
            table[(parts[0],) + tuple(k - 1 for k in parts[1:])] = float(v)
        return cls.from_table(float(data["eps"]), table, mode=mode)


def _averaging_move(x: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Mean displacement toward the masked neighborhood, one row per agent."""
    k = mask.sum(axis=1)
    disp = x[None, :, :] - x[:, None, :]
    return (disp * mask[:, :, None]).sum(axis=1) / k[:, None]


def step_classical(config: Configuration) -> Configuration:
    """Every agent moves to the mass center of all agents within range."""
    mask = interaction_mask(config)
    return config.with_positions(config.positions + _averaging_move(config.positions, mask))


def step_social(config: Configuration, graph: SocialGraph) -> Configuration:
    """Classical averaging restricted to pairs joined by a social edge.

    Equivalent to x' = P x for the row-stochastic neighborhood-averaging
    matrix P; works in any dimension.
    """
    mask = interaction_mask(config, graph)
    return config.with_positions(config.positions + _averaging_move(config.positions, mask))


def _require_1d(config: Configuration, what: str) -> None:
    if config.dimension != 1:
        raise ValueError(f"{what} is defined for one-dimensional opinions only")


def step_nd(config: Configuration, noise: NoiseSource, t: int) -> Configuration:
    """Non-deterministic rule: the whole displacement is scaled by 1 + eps_{i,t}."""
    _require_1d(config, "the non-deterministic rule")
    if noise.mode != PER_AGENT:
        raise ValueError("step_nd needs a per-agent noise source")
    mask = interaction_mask(config)
    move = _averaging_move(config.positions, mask)
    scale = 1.0 + noise.values_for_step(t, config)
    return config.with_positions(config.positions + scale[:, None] * move)


def step_nd_pairwise(config: Configuration, noise: NoiseSource, t: int) -> Configuration:
    """Per-pair variant: each neighbor's pull is scaled by 1 + eps_{i,j,t}."""
    _require_1d(config, "the pairwise non-deterministic rule")
    if noise.mode != PER_PAIR:
        raise ValueError("step_nd_pairwise needs a per-pair noise source")
    mask = interaction_mask(config)
    x = config.positions
    k = mask.sum(axis=1)
    weights = (1.0 + noise.values_for_step(t, config)) * mask
    disp = x[None, :, :] - x[:, None, :]
    move = (disp * weights[:, :, None]).sum(axis=1) / k[:, None]
    return config.with_positions(x + move)


MODELS = ("classical", "social", "nd", "nd-pairwise")


@dataclass
class StopRule:
    """Stop conditions for a run: step cap, movement threshold, cluster size."""

    max_steps: int = 100_000
    movement_threshold: Optional[float] = None
    cluster_rho: Optional[float] = None

    def __post_init__(self) -> None:
        if self.max_steps < 0:
            raise ValueError("max_steps must be >= 0")
        if self.movement_threshold is not None and self.movement_threshold <= 0:
            raise ValueError("movement threshold must be positive")
        if self.cluster_rho is not None and self.cluster_rho < 0:
            raise ValueError("cluster rho must be >= 0")


@dataclass
class Trajectory:
    """A run: configurations x_0..x_T plus what produced and stopped it."""

    configs: list
    model: str
    graphs: Optional[list] = None  # graph used for step t, length = steps
    noise: Optional[NoiseSource] = None
    stop_reason: str = "max_steps"
    converged_at: Optional[int] = None
    clustered_at: Optional[int] = None
    friendliness_violations: list = field(default_factory=list)
    reports: Optional[list] = None

    @property
    def steps(self) -> int:
        return len(self.configs) - 1

    def graph_at(self, t: int) -> Optional[SocialGraph]:
        if self.graphs is None:
            return None
        return self.graphs[t]

    def movement(self, t: int) -> float:
        """Sum over agents of the Euclidean movement in step t."""
        d = self.configs[t + 1].positions - self.configs[t].positions
        return float(np.sqrt((d * d).sum(axis=1)).sum())

    def movements(self) -> np.ndarray:
        return np.array([self.movement(t) for t in range(self.steps)])

    def positions_1d(self) -> np.ndarray:
        """(T+1, n) matrix of positions; only for 1-D runs."""
        if self.configs[0].dimension != 1:
            raise ValueError("positions_1d needs a one-dimensional run")
        return np.stack([c.positions[:, 0] for c in self.configs])

    def write_jsonl(self, path) -> None:
        """One record per state: {"t": t, "positions": [...]}."""
        with open(path, "w") as fh:
            for t, c in enumerate(self.configs):
                pos = c.positions[:, 0] if c.dimension == 1 else c.positions
                fh.write(json.dumps({"t": t, "positions": pos.tolist()}) + "\n")


def _clustered_within(config: Configuration, rho: float) -> bool:
    groups = split_clusters_1d(config.positions[:, 0], config.confidence)
    pos = config.positions[:, 0]
    return all(float(pos[g].max() - pos[g].min()) <= rho for g in groups)


def run(
    model: str,
    x0: Configuration,
    schedule: Union[GraphSchedule, SocialGraph, None] = None,
    noise: Optional[NoiseSource] = None,
    stop: Optional[StopRule] = None,
    allow_unfriendly: bool = False,
) -> Trajectory:
    """Iterate the chosen rule from x0 until a stop condition fires.

    The social model needs a graph or schedule; the non-deterministic models
    need a noise source and one-dimensional opinions. When the schedule is
    declared friendly, every transition is verified and a violation aborts
    the run unless ``allow_unfriendly`` is set (then it is recorded).
    """
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}, expected one of {MODELS}")
    stop = stop or StopRule()
    if isinstance(schedule, SocialGraph):
        schedule = GraphSchedule.static(schedule)

    if model == "social":
        if schedule is None:
            raise ValueError("the social model needs a graph schedule")
        if schedule.n != x0.n:
            raise ValueError("schedule and configuration disagree on n")
    elif schedule is not None:
        raise ValueError(f"model {model!r} does not take a graph schedule")
    if model in ("nd", "nd-pairwise"):
        if noise is None:
            raise ValueError("non-deterministic models need a noise source")
        want = PER_AGENT if model == "nd" else PER_PAIR
        if noise.mode != want:
            raise ValueError(f"model {model!r} needs {want} noise")
        _require_1d(x0, f"model {model!r}")
    elif noise is not None:
        raise ValueError(f"model {model!r} does not take noise")
    if stop.cluster_rho is not None:
        _require_1d(x0, "the cluster stop rule")

    traj = Trajectory(configs=[x0], model=model, noise=noise)
    g = schedule.start() if schedule is not None else None
    if g is not None:
        traj.graphs = []  # graph in force at each time point, one per state

    x = x0
    traj.stop_reason = "max_steps"
    for t in range(stop.max_steps + 1):
        if stop.cluster_rho is not None and _clustered_within(x, stop.cluster_rho):
            traj.stop_reason = "cluster"
            traj.clustered_at = t
            break
        if t == stop.max_steps:
            break

        if model == "classical":
            x_next = step_classical(x)
        elif model == "social":
            x_next = step_social(x, g)
        elif model == "nd":
            x_next = step_nd(x, noise, t)
        else:
            x_next = step_nd_pairwise(x, noise, t)

        traj.configs.append(x_next)
        if g is not None:
            traj.graphs.append(g)
            g_next = schedule.advance(t, g, x, x_next)
            if schedule.declared_friendly and schedule.mode != "static":
                ok, pairs = is_friendly_transition(g, g_next, x, x_next)
                if not ok:
                    if not allow_unfriendly:
                        raise FriendlinessViolation(t, pairs)
                    traj.friendliness_violations.append({"t": t, "pairs": pairs})
            g = g_next

        moved = traj.movement(t)
        x = x_next
        if stop.movement_threshold is not None and moved < stop.movement_threshold:
            traj.stop_reason = "movement"
            traj.converged_at = t
            break

    if traj.graphs is not None:
        traj.graphs.append(g)
    return traj
