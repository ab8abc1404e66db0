"""Convergence-time sweeps over random graphs, and the demo constructions.

A sweep cell (n, p, trial) is an independent job: its seed is derived by
hashing (master_seed, n, repr(p), trial) with SHA-256, so results are
bitwise reproducible regardless of execution order or worker count.
"""

from __future__ import annotations

import hashlib
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .core import Configuration
from .dynamics import NoiseSource, step_social
from .graphs import SocialGraph, barabasi_albert, gnp, named_graph

DEFAULT_THRESHOLD = 1e-6
DEFAULT_MAX_STEPS = 100_000
WORK_BUDGET = 2_000_000_000  # sum over cells of n^2, in pair-evaluations


class WorkBudgetExceeded(RuntimeError):
    """The sweep looks too expensive to run without an explicit force flag."""


def float_grid(start: float, stop: float, step: float) -> list:
    """Inclusive arithmetic grid with values rounded to 10 decimals."""
    count = int(round((stop - start) / step)) + 1
    return [float(v) for v in np.round(start + step * np.arange(count), 10)]


@dataclass
class SweepSpec:
    """Grid of (n, p or m, trial) cells for the convergence-time experiment.

    ``init_lo``/``init_hi`` of None mean the default uniform initialization
    in [1, n]. ``grid`` holds edge probabilities for the gnp model and
    attachment counts for the ba model.
    """

    n_list: list
    grid: list
    trials: int
    master_seed: int
    graph_model: str = "gnp"
    init_lo: Optional[float] = None
    init_hi: Optional[float] = None
    threshold: float = DEFAULT_THRESHOLD
    max_steps: int = DEFAULT_MAX_STEPS

    def __post_init__(self) -> None:
        if not self.n_list or not self.grid:
            raise ValueError("n_list and grid must be non-empty")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.graph_model not in ("gnp", "ba"):
            raise ValueError(f"unknown graph model {self.graph_model!r}")
        if self.graph_model == "gnp" and not all(0.0 <= p <= 1.0 for p in self.grid):
            raise ValueError("every p must lie in [0, 1]")
        if self.graph_model == "ba" and not all(int(m) == m and m >= 1 for m in self.grid):
            raise ValueError("every attachment count must be an integer >= 1")
        if (self.init_lo is None) != (self.init_hi is None):
            raise ValueError("give both init bounds or neither")
        if self.init_lo is not None and not self.init_lo < self.init_hi:
            raise ValueError("init_lo must be < init_hi")
        if self.threshold <= 0:
            raise ValueError("threshold must be positive")

    def init_bounds(self, n: int) -> tuple:
        if self.init_lo is None:
            return 1.0, float(n)
        return float(self.init_lo), float(self.init_hi)

    def to_json_dict(self) -> dict:
        data = {
            "n_list": self.n_list,
            ("p_grid" if self.graph_model == "gnp" else "m_list"): self.grid,
            "trials": self.trials,
            "master_seed": self.master_seed,
            "graph_model": self.graph_model,
            "threshold": self.threshold,
            "max_steps": self.max_steps,
        }
        if self.init_lo is not None:
            data["init"] = {"lo": self.init_lo, "hi": self.init_hi}
        return data

    @classmethod
    def from_json_dict(cls, data: dict) -> "SweepSpec":
        model = data.get("graph_model", "gnp")
        grid = data.get("p_grid" if model == "gnp" else "m_list")
        if grid is None:
            raise ValueError("sweep spec needs a p_grid (gnp) or m_list (ba)")
        init = data.get("init") or {}
        return cls(
            n_list=[int(n) for n in data["n_list"]],
            grid=list(grid),
            trials=int(data["trials"]),
            master_seed=int(data["master_seed"]),
            graph_model=model,
            init_lo=init.get("lo"),
            init_hi=init.get("hi"),
            threshold=float(data.get("threshold", DEFAULT_THRESHOLD)),
            max_steps=int(data.get("max_steps", DEFAULT_MAX_STEPS)),
        )


@dataclass(frozen=True)
class SweepRow:
    n: int
    p: float
    trial: int
    seed: int
    convergence_time: int
    converged: bool


@dataclass
class SweepResult:
    spec: SweepSpec
    rows: list


def cell_seed(master_seed: int, n: int, p, trial: int) -> int:
    """64-bit per-cell seed from a SHA-256 hash of the cell coordinates."""
    key = f"{master_seed}|{n}|{float(p)!r}|{trial}".encode()
    return int.from_bytes(hashlib.sha256(key).digest()[:8], "big")


def _run_cell(args) -> tuple:
    """Social-HK run of one cell; returns (convergence_time, converged)."""
    n, pv, seed, graph_model, lo, hi, threshold, max_steps = args
    ss = np.random.SeedSequence(seed)
    g_ss, i_ss = ss.spawn(2)
    if graph_model == "gnp":
        graph = gnp(n, pv, g_ss)
    else:
        graph = barabasi_albert(n, int(pv), g_ss)
    adj = graph.adjacency | np.eye(n, dtype=bool)
    x = np.random.default_rng(i_ss).uniform(lo, hi, n)
    for t in range(max_steps):
        disp = x[None, :] - x[:, None]  # disp[i, j] = x_j - x_i
        mask = (np.abs(disp) <= 1.0) & adj
        move = (disp * mask).sum(axis=1) / mask.sum(axis=1)
        x = x + move
        if np.abs(move).sum() < threshold:
            return t, True
    return max_steps, False


def run_sweep(spec: SweepSpec, jobs: int = 1, force: bool = False) -> SweepResult:
    """Run every (n, p, trial) cell of the spec; rows come back in grid order."""
    cells = []
    work = 0
    for n in spec.n_list:
        lo, hi = spec.init_bounds(n)
        for pv in spec.grid:
            for trial in range(spec.trials):
                seed = cell_seed(spec.master_seed, n, pv, trial)
                cells.append((n, pv, trial, seed, lo, hi))
                work += n * n
    if not force and (work > WORK_BUDGET or max(spec.n_list) > 2000):
        raise WorkBudgetExceeded(
            f"estimated work {work} pair-evaluations over {len(cells)} cells; "
            "pass force=True (CLI: --force) to run anyway"
        )

    args = [
        (n, pv, seed, spec.graph_model, lo, hi, spec.threshold, spec.max_steps)
        for n, pv, trial, seed, lo, hi in cells
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_run_cell, args, chunksize=8))
    else:
        outcomes = [_run_cell(a) for a in args]

    rows = [
        SweepRow(n=n, p=pv, trial=trial, seed=seed, convergence_time=time, converged=conv)
        for (n, pv, trial, seed, _, _), (time, conv) in zip(cells, outcomes)
    ]
    return SweepResult(spec=spec, rows=rows)


@dataclass(frozen=True)
class AggregateRow:
    n: int
    p: float
    mean_time: float
    std_time: float
    num_converged: int
    num_capped: int


def aggregate(result: SweepResult) -> list:
    """Per-(n, p) statistics; capped runs enter the mean at max_steps."""
    if not result.rows:
        raise ValueError("cannot aggregate an empty sweep result")
    out = []
    for n in result.spec.n_list:
        for pv in result.spec.grid:
            cell = [r for r in result.rows if r.n == n and r.p == pv]
            times = np.array([r.convergence_time for r in cell], dtype=float)
            out.append(
                AggregateRow(
                    n=n,
                    p=pv,
                    mean_time=float(times.mean()),
                    std_time=float(times.std()),
                    num_converged=sum(r.converged for r in cell),
                    num_capped=sum(not r.converged for r in cell),
                )
            )
    return out


def _write_provenance(fh, provenance: Optional[dict]) -> None:
    for key, value in (provenance or {}).items():
        fh.write(f"# {key}={value}\n")


def write_results_csv(result: SweepResult, path, provenance: Optional[dict] = None) -> None:
    with open(path, "w") as fh:
        _write_provenance(fh, provenance)
        fh.write("n,p,trial,seed,convergence_time,converged\n")
        for r in result.rows:
            fh.write(
                f"{r.n},{float(r.p)!r},{r.trial},{r.seed},"
                f"{r.convergence_time},{'true' if r.converged else 'false'}\n"
            )


def write_aggregate_csv(rows: Sequence[AggregateRow], path, provenance: Optional[dict] = None) -> None:
    with open(path, "w") as fh:
        _write_provenance(fh, provenance)
        fh.write("n,p,mean_time,std_time,num_converged,num_capped\n")
        for r in rows:
            fh.write(
                f"{r.n},{float(r.p)!r},{r.mean_time!r},{r.std_time!r},"
                f"{r.num_converged},{r.num_capped}\n"
            )


# ---------------------------------------------------------------------------
# Demo constructions
# ---------------------------------------------------------------------------


@dataclass
class DemoResult:
    """A concrete instance exhibiting one of the qualitative phenomena."""

    kind: str
    model: str
    config: Configuration
    graph: Optional[SocialGraph] = None
    noise: Optional[NoiseSource] = None
    narrative: str = ""
    expected: dict = field(default_factory=dict)


def _search_order_swap(seed: int, max_tries: int = 10_000) -> DemoResult:
    """Brute-force search for a one-step order swap under the social rule."""
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        n = int(rng.integers(3, 6))
        x = rng.uniform(0.0, 2.0, n)
        graph = gnp(n, 0.5, rng)
        config = Configuration(x)
        after = step_social(config, graph).positions[:, 0]
        for i in range(n):
            for j in range(n):
                if x[i] < x[j] - 1e-9 and after[i] > after[j] + 1e-9:
                    return DemoResult(
                        kind="noorder",
                        model="social",
                        config=config,
                        graph=graph,
                        narrative=(
                            f"agents {i} and {j} start at {x[i]:.4f} < {x[j]:.4f} and end "
                            f"at {after[i]:.4f} > {after[j]:.4f}: one social step swaps "
                            "their order, which the classical rule never does"
                        ),
                        expected={"swap_pair": (i, j), "after": after.tolist()},
                    )
    raise RuntimeError("order-swap search failed; this should not happen at these sizes")


def demo(kind: str, delta: Optional[float] = None, eps: float = 0.1, seed: int = 0) -> DemoResult:
    """Construct one of the qualitative demo instances.

    nofrz    three agents on a path whose outer gaps halve forever, so the
             movement is positive at every step (no freezing time);
    initdep  a chain dragging an agent toward a partner at distance 2-delta,
             needing about log2(1/delta) steps before they first interact;
    noorder  a searched social instance where one step swaps two agents;
    nondet   two agents whose leftmost overtakes the rightmost under noise.
    """
    if kind == "nofrz":
        return DemoResult(
            kind=kind,
            model="social",
            config=Configuration([-0.5, 0.0, 0.5]),
            graph=named_graph("path", 3),
            narrative=(
                "outer agents average with the fixed middle one, halving the "
                "gap each step: total movement is 2^-(t+1), positive forever"
            ),
            expected={"movement_ratio": 0.5},
        )
    if kind == "initdep":
        if delta is None or not delta > 0:
            raise ValueError("initdep needs delta > 0")
        return DemoResult(
            kind=kind,
            model="social",
            config=Configuration([0.0, 1.0, 2.0, 2.0 - delta]),
            graph=SocialGraph.from_edges(4, [(0, 1), (1, 2), (0, 3)]),
            narrative=(
                "the chain 0-1-2 contracts geometrically, dragging agent 0 "
                "rightward to 1 - 2^-t; its social partner at 2-delta only "
                "enters range once 2^-t <= delta, so the first contact takes "
                f"about log2(1/delta) = {math.log2(1 / delta):.1f} steps"
            ),
            expected={"first_contact_bound": math.ceil(math.log2(1.0 / delta))},
        )
    if kind == "noorder":
        return _search_order_swap(seed)
    if kind == "nondet":
        if not 0 < eps <= 1:
            raise ValueError("nondet needs 0 < eps <= 1")
        noise = NoiseSource.from_table(eps, {(0, 0): eps, (0, 1): eps})
        return DemoResult(
            kind=kind,
            model="nd",
            config=Configuration([0.0, 0.9]),
            noise=noise,
            narrative=(
                "both agents overshoot the midpoint by the factor 1+eps, so "
                "the leftmost lands right of the rightmost: order is not "
                "preserved under non-determinism even with two agents"
            ),
            expected={"after": [0.45 * (1 + eps), 0.9 - 0.45 * (1 + eps)]},
        )
    raise ValueError(f"unknown demo kind {kind!r}")
