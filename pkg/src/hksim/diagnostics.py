"""Step accounting, convergence detection, and runtime checks of the theory.

The non-deterministic checks assert, on every recorded step, the
inequalities that the convergence analysis guarantees:

  (a) the minimum position never decreases and the maximum never increases
      (needs eps < 1/(n-1));
  (b) every agent outside the leftmost agent's equal-neighborhood core ends
      the step at least 1/n - eps above the old leftmost position
      (1/n - 2 eps for the per-pair rule);
  (c) a separated subsystem whose members all share one neighborhood
      contracts by a factor 2 eps per step (needs eps < 1/(n-1));
  (d) every step falls into at least one of the cases S1 (core neighborhood
      becomes closed), S2 (the core shrinks), S3 (an outside agent enters
      the new leftmost neighborhood);
  (e) after an S3 step, two steps later every agent sits at least 1/(4n^2)
      above the old leftmost position (needs eps < 1/(4n^2)).

These are theorem-backed: a violation on a trajectory whose noise respects
the stated bound is a bug in the dynamics or in the checks, never noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .core import (
    Configuration,
    _component_labels,
    interaction_mask,
    pairwise_sq_dists,
    split_clusters_1d,
)
from .dynamics import (
    PER_AGENT,
    PER_PAIR,
    FriendlinessViolation,
    GraphSchedule,
    NoiseSource,
    StopRule,
    Trajectory,
    run,
)
from .graphs import SocialGraph, gnp, is_friendly_transition, random_edge_addition_policy
from .spectral import (
    DECREMENT_TOL,
    _energy_terms,
    _lambda_from_adjacency,
    _max_component_diameter,
)

LEMMA_TOL = 1e-12


def auto_eps(n: int) -> float:
    """Noise bound 1/(8 n^2), comfortably inside every lemma precondition."""
    return 1.0 / (8.0 * n * n)


def cluster_time_bounds(n: int, eps: float, rho: float) -> dict:
    """Both stated time scales for a closed subsystem to contract into rho.

    The per-step contraction factor is 2 eps, giving log(1/rho)/log(1/eps)
    up to constants; with eps below 1/(4 n^2) that is within a constant of
    log(1/rho)/log(n). Only the per-step contraction itself is asserted by
    the checks; these derived horizons are reported for context.
    """
    if not (0 < eps < 1 and rho > 0):
        raise ValueError("need 0 < eps < 1 and rho > 0")
    return {
        "log_inv_eps_bound": math.log(1.0 / rho) / math.log(1.0 / eps),
        "log_n_bound": math.log(1.0 / rho) / math.log(n) if n >= 2 else float("inf"),
    }


def is_nontrivial(config: Configuration, graph: Optional[SocialGraph], eps: float) -> bool:
    """True iff some interacting pair is separated by at least eps.

    Such a step carries active energy above eps^2 (2 eps^2 under the
    ordered-pair convention), which is what makes the step budget finite.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    sq = pairwise_sq_dists(config)
    mask = interaction_mask(config, graph, sq_dists=sq)
    np.fill_diagonal(mask, False)
    return bool((np.sqrt(sq[mask]) >= eps).any())


def count_nontrivial(traj: Trajectory, eps: float) -> int:
    """Number of recorded steps that are eps-non-trivial."""
    if traj.steps < 1:
        raise ValueError("trajectory must contain at least one step")
    return sum(
        is_nontrivial(traj.configs[t], traj.graph_at(t), eps) for t in range(traj.steps)
    )


def detect_convergence(traj: Trajectory, threshold: float = 1e-6) -> Optional[int]:
    """Least t whose step moved the agents by less than threshold in total."""
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    for t in range(traj.steps):
        if traj.movement(t) < threshold:
            return t
    return None


@dataclass(frozen=True)
class ClusterReport:
    """Separated groups of a 1-D configuration and their extents."""

    groups: list
    extents: list
    max_extent: float
    rho: float
    within: bool


def clusters(config: Configuration, rho: float) -> ClusterReport:
    """Split agents at sorted gaps exceeding the confidence bound.

    Groups are the independent subsystems; ``within`` says whether every
    group already fits in an interval of length rho.
    """
    if rho < 0:
        raise ValueError("rho must be >= 0")
    if config.dimension != 1:
        raise ValueError("clusters is defined for one-dimensional opinions")
    pos = config.positions[:, 0]
    groups = [sorted(g.tolist()) for g in split_clusters_1d(pos, config.confidence)]
    extents = [float(pos[g].max() - pos[g].min()) for g in groups]
    max_extent = max(extents)
    return ClusterReport(
        groups=groups,
        extents=extents,
        max_extent=max_extent,
        rho=rho,
        within=bool(max_extent <= rho),
    )


@dataclass(frozen=True)
class NdPartition:
    """Agents classified relative to the leftmost agent's neighborhood.

    L holds the agents whose neighborhood equals the leftmost agent's,
    S the rest of that neighborhood, T everyone outside it, M = S + T.
    """

    leftmost: int
    rightmost: int
    L: frozenset
    S: frozenset
    T: frozenset
    M: frozenset


def nd_partition(config: Configuration) -> NdPartition:
    """Partition for the current state; leftmost ties break to the lowest index."""
    if config.dimension != 1:
        raise ValueError("nd_partition is defined for one-dimensional opinions")
    x = config.positions[:, 0]
    mask = interaction_mask(config)
    lm = int(np.argmin(x))
    rm = int(np.argmax(x))
    in_nl = mask[lm]
    same = (mask == mask[lm]).all(axis=1)
    L = frozenset(np.flatnonzero(in_nl & same).tolist())
    S = frozenset(np.flatnonzero(in_nl & ~same).tolist())
    T = frozenset(np.flatnonzero(~in_nl).tolist())
    return NdPartition(leftmost=lm, rightmost=rm, L=L, S=S, T=T, M=S | T)


@dataclass
class LemmaReport:
    """Outcome of the non-deterministic lemma checks over one trajectory."""

    n: int
    eps: float
    steps: int
    pairwise: bool
    checked: list
    skipped: list
    violations: list
    case_tags: list
    case_histogram: dict
    margins: dict
    max_consecutive_s2: int

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json_dict(self) -> dict:
        return {
            "checked": self.checked,
            "violations": self.violations,
            "case_histogram": self.case_histogram,
        }


def _max_run(flags: np.ndarray) -> int:
    best = cur = 0
    for f in flags:
        cur = cur + 1 if f else 0
        best = max(best, cur)
    return best


def check_nd_arrays(
    X: np.ndarray,
    eps: float,
    r: float = 1.0,
    pairwise: bool = False,
    tol: float = LEMMA_TOL,
) -> LemmaReport:
    """Run the lemma checks on a (T+1, n) matrix of 1-D positions.

    Checks whose eps precondition fails are skipped and flagged rather than
    failed. All margins are lhs - rhs, so a violation has margin < -tol.
    """
    X = np.asarray(X, dtype=float)
    T1, n = X.shape
    T = T1 - 1
    violations: list = []
    checked: list = []
    skipped: list = []
    margins: dict = {}

    D = np.abs(X[:, :, None] - X[:, None, :])
    M = D <= r
    lmost = np.argmin(X, axis=1)
    Nl = np.take_along_axis(M, lmost[:, None, None], axis=1)[:, 0, :]
    same = (M == Nl[:, None, :]).all(axis=2)
    L = Nl & same
    S = Nl & ~same
    Mset = (Nl & ~same) | ~Nl  # S union T
    xl = np.take_along_axis(X, lmost[:, None], axis=1)[:, 0]

    monotone_ok = n == 1 or eps < 1.0 / (n - 1)

    # (a) extremes are monotone
    if monotone_ok:
        checked.append("min_max_monotone")
        mins, maxs = X.min(axis=1), X.max(axis=1)
        m_min = mins[1:] - mins[:-1]
        m_max = maxs[:-1] - maxs[1:]
        margins["min_max_monotone"] = np.minimum(m_min, m_max)
        for t in np.flatnonzero(margins["min_max_monotone"] < -tol):
            violations.append(
                {"t": int(t), "check": "min_max_monotone",
                 "margin": float(margins["min_max_monotone"][t])}
            )
    else:
        skipped.append("min_max_monotone")

    if T > 0:
        # (b) agents outside the core are pushed above the old leftmost position
        checked.append("m_set_drift")
        slack = eps if not pairwise else 2.0 * eps
        margin_b = X[1:] - (xl[:-1, None] + (1.0 / n - slack))
        relevant = Mset[:-1]
        margins["m_set_drift"] = np.where(relevant, margin_b, np.inf).min(axis=1)
        for t, i in zip(*np.nonzero(relevant & (margin_b < -tol))):
            violations.append(
                {"t": int(t), "check": "m_set_drift", "agent": int(i),
                 "margin": float(margin_b[t, i])}
            )

        # (c) closed subsystems contract by 2 eps per step
        if monotone_ok:
            checked.append("contraction")
            order = np.argsort(X[:-1], axis=1, kind="stable")
            s = np.take_along_axis(X[:-1], order, axis=1)
            labels = np.zeros((T, n), dtype=np.int64)
            if n > 1:
                labels[:, 1:] = np.cumsum(np.diff(s, axis=1) > r, axis=1)
            gid = (labels + (np.arange(T) * n)[:, None]).ravel()
            starts = np.flatnonzero(np.diff(gid, prepend=-1))
            ends = np.r_[starts[1:], T * n] - 1
            flat_s = s.ravel()
            ext_t = flat_s[ends] - flat_s[starts]
            nxt = np.take_along_axis(X[1:], order, axis=1).ravel()
            ext_next = np.maximum.reduceat(nxt, starts) - np.minimum.reduceat(nxt, starts)
            margin_c = 2.0 * eps * ext_t - ext_next
            eligible = ext_t <= r
            seg_t = starts // n
            per_t = np.full(T, np.inf)
            if eligible.any():
                np.minimum.at(per_t, seg_t[eligible], margin_c[eligible])
            margins["contraction"] = per_t
            for k in np.flatnonzero(eligible & (margin_c < -tol)):
                violations.append(
                    {"t": int(seg_t[k]), "check": "contraction",
                     "margin": float(margin_c[k])}
                )
        else:
            skipped.append("contraction")

        # (d) case trichotomy and tagging
        checked.append("case_trichotomy")
        s1 = ~S[1:].any(axis=1)
        s2 = L[1:].sum(axis=1) < L[:-1].sum(axis=1)
        s3 = (Mset[:-1] & Nl[1:]).any(axis=1)
        covered = s1 | s2 | s3
        for t in np.flatnonzero(~covered):
            violations.append({"t": int(t), "check": "case_trichotomy", "margin": -1.0})
        tags = np.where(s1, "S1", np.where(s2, "S2", "S3")).tolist()

        # (e) an S3 step lifts everyone by 1/(4 n^2) within two steps
        if eps < 1.0 / (4.0 * n * n):
            checked.append("s3_two_step_drift")
            idx = np.flatnonzero(s3[: T - 1]) if T >= 2 else np.array([], dtype=int)
            per_t = np.full(T, np.inf)
            if idx.size:
                margin_e = X[idx + 2].min(axis=1) - (xl[idx] + 1.0 / (4.0 * n * n))
                per_t[idx] = margin_e
                for k in np.flatnonzero(margin_e < -tol):
                    violations.append(
                        {"t": int(idx[k]), "check": "s3_two_step_drift",
                         "margin": float(margin_e[k])}
                    )
            margins["s3_two_step_drift"] = per_t
        else:
            skipped.append("s3_two_step_drift")
    else:
        tags = []

    hist = {"S1": tags.count("S1"), "S2": tags.count("S2"), "S3": tags.count("S3")}
    return LemmaReport(
        n=n,
        eps=eps,
        steps=T,
        pairwise=pairwise,
        checked=checked,
        skipped=skipped,
        violations=sorted(violations, key=lambda v: (v["t"], v["check"])),
        case_tags=tags,
        case_histogram=hist,
        margins=margins,
        max_consecutive_s2=_max_run(np.array([tag == "S2" for tag in tags], dtype=bool)),
    )


def check_nd_lemmas(traj: Trajectory, eps: Optional[float] = None) -> LemmaReport:
    """Lemma checks for a trajectory produced by a non-deterministic rule."""
    if traj.model not in ("nd", "nd-pairwise"):
        raise ValueError(f"lemma checks apply to nd trajectories, not {traj.model!r}")
    if eps is None:
        if traj.noise is None:
            raise ValueError("eps not given and the trajectory has no noise source")
        eps = traj.noise.eps
    return check_nd_arrays(
        traj.positions_1d(),
        eps=eps,
        r=traj.configs[0].confidence,
        pairwise=traj.model == "nd-pairwise",
    )


@dataclass
class StepReport:
    """Per-step diagnostics; spectral fields are None unless requested."""

    t: int
    total_movement: float
    nontrivial: Optional[bool] = None
    energy: Optional[float] = None
    active_energy: Optional[float] = None
    lam: Optional[float] = None
    gap_bound: Optional[float] = None
    decrement: Optional[float] = None
    guaranteed_decrement: Optional[float] = None
    diameter: Optional[int] = None
    components: Optional[int] = None
    nd: Optional[NdPartition] = None


REPORT_COLUMNS = (
    "t,energy,active_energy,lambda,gap_bound,decrement,"
    "guaranteed_decrement,total_movement,diameter,components"
)

SPECTRAL_N_LIMIT = 2000


def attach_reports(
    traj: Trajectory,
    spectral: bool = False,
    eps: Optional[float] = None,
    include_partition: Optional[bool] = None,
    spectral_limit: int = SPECTRAL_N_LIMIT,
    force: bool = False,
) -> Trajectory:
    """Attach one StepReport per step of the trajectory.

    Spectral diagnostics use a dense eigensolver and are refused above
    ``spectral_limit`` agents unless forced.
    """
    n = traj.configs[0].n
    if spectral and n > spectral_limit and not force:
        raise ValueError(
            f"spectral diagnostics on n={n} > {spectral_limit} agents need force=True"
        )
    if include_partition is None:
        include_partition = traj.model in ("nd", "nd-pairwise")

    reports = []
    prev = None  # (active, inactive, lam, diam, count) of x_t
    for t in range(traj.steps):
        x_t, x_next = traj.configs[t], traj.configs[t + 1]
        rep = StepReport(t=t, total_movement=traj.movement(t))
        if eps is not None:
            rep.nontrivial = is_nontrivial(x_t, traj.graph_at(t), eps)
        if spectral:
            if prev is None:
                prev = _spectral_terms(x_t, traj.graph_at(t))
            cur = _spectral_terms(x_next, traj.graph_at(t + 1))
            active, inactive, lam, diam, count = prev
            rep.energy = active + inactive
            rep.active_energy = active
            rep.lam = lam
            rep.gap_bound = 0.0 if diam == 0 else 1.0 - 1.0 / (n * n * diam)
            rep.decrement = rep.energy - (cur[0] + cur[1])
            rep.guaranteed_decrement = (1.0 - lam * lam) * active
            rep.diameter = diam
            rep.components = count
            prev = cur
        if include_partition and x_t.dimension == 1:
            rep.nd = nd_partition(x_t)
        reports.append(rep)

    out = Trajectory(
        configs=traj.configs,
        model=traj.model,
        graphs=traj.graphs,
        noise=traj.noise,
        stop_reason=traj.stop_reason,
        converged_at=traj.converged_at,
        clustered_at=traj.clustered_at,
        friendliness_violations=traj.friendliness_violations,
        reports=reports,
    )
    return out


def _spectral_terms(config: Configuration, graph: Optional[SocialGraph]):
    sq = pairwise_sq_dists(config)
    mask = interaction_mask(config, graph, sq_dists=sq)
    active, inactive = _energy_terms(mask, sq)
    lam = _lambda_from_adjacency(mask)
    diam = _max_component_diameter(mask)
    count, _ = _component_labels(mask)
    return active, inactive, lam, diam, count


def write_report_csv(traj: Trajectory, path, provenance: Optional[dict] = None) -> None:
    """Write the per-step report CSV (spectral diagnostics must be attached)."""
    if not traj.reports or traj.reports[0].energy is None:
        raise ValueError("trajectory has no spectral reports attached")
    with open(path, "w") as fh:
        for key, value in (provenance or {}).items():
            fh.write(f"# {key}={value}\n")
        fh.write(REPORT_COLUMNS + "\n")
        for rep in traj.reports:
            fh.write(
                f"{rep.t},{rep.energy!r},{rep.active_energy!r},{rep.lam!r},"
                f"{rep.gap_bound!r},{rep.decrement!r},{rep.guaranteed_decrement!r},"
                f"{rep.total_movement!r},{rep.diameter},{rep.components}\n"
            )


# ---------------------------------------------------------------------------
# Seeded check suites (shared by the CLI `check` command and the test suite)
# ---------------------------------------------------------------------------


@dataclass
class SuiteReport:
    """Aggregated outcome of a seeded Monte-Carlo check suite."""

    suite: str
    trials: int
    checked: list
    skipped: list
    violations: list
    case_histogram: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json_dict(self) -> dict:
        return {
            "suite": self.suite,
            "trials": self.trials,
            "checked": self.checked,
            "skipped": self.skipped,
            "violations": self.violations,
            "case_histogram": self.case_histogram,
            "extras": self.extras,
        }


def _nd_batch_positions(
    n: int, trials_idx: Sequence[int], steps: int, eps: float, master_seed: int,
    pairwise: bool,
) -> np.ndarray:
    """Lock-step batch of nd trajectories; returns positions (B, steps+1, n).

    Trial b uses init stream SeedSequence((master_seed, b, 0)) and noise
    stream SeedSequence((master_seed, b, 1)); the noise stream yields the
    same values as NoiseSource.uniform(eps, seed=(master_seed, b, 1)).
    """
    B = len(trials_idx)
    X = np.empty((B, steps + 1, n))
    for row, b in enumerate(trials_idx):
        rng = np.random.default_rng(np.random.SeedSequence((master_seed, b, 0)))
        spread = rng.uniform(1.0, max(2.0, float(n)))
        X[row, 0] = rng.uniform(0.0, spread, n)
    noise_rngs = [
        np.random.default_rng(np.random.SeedSequence((master_seed, b, 1)))
        for b in trials_idx
    ]
    x = X[:, 0].copy()
    for t in range(steps):
        disp = x[:, None, :] - x[:, :, None]  # disp[b, i, j] = x_j - x_i
        mask = np.abs(disp) <= 1.0
        k = mask.sum(axis=2)
        if pairwise:
            noise = np.stack([rng.uniform(-eps, eps, (n, n)) for rng in noise_rngs])
            move = (disp * ((1.0 + noise) * mask)).sum(axis=2) / k
            x = x + move
        else:
            noise = np.stack([rng.uniform(-eps, eps, n) for rng in noise_rngs])
            move = (disp * mask).sum(axis=2) / k
            x = x + (1.0 + noise) * move
        X[:, t + 1] = x
    return X


def run_nd_lemma_suite(
    n_values: Sequence[int],
    trials: int,
    steps: int,
    master_seed: int,
    eps: Optional[float] = None,
    mix_pairwise: bool = True,
) -> SuiteReport:
    """Random-noise trajectories with every lemma check asserted.

    Trials are spread round-robin over ``n_values``; odd trial indices use
    the per-pair rule when ``mix_pairwise`` is on. ``eps=None`` selects the
    1/(8 n^2) default per n.
    """
    n_values = list(n_values)
    violations: list = []
    hist = {"S1": 0, "S2": 0, "S3": 0}
    checked: set = set()
    skipped: set = set()
    max_s2 = 0
    by_group: dict = {}
    for b in range(trials):
        n = n_values[b % len(n_values)]
        pw = mix_pairwise and b % 2 == 1
        by_group.setdefault((n, pw), []).append(b)

    for (n, pw), idx in sorted(by_group.items()):
        group_eps = auto_eps(n) if eps is None else eps
        X = _nd_batch_positions(n, idx, steps, group_eps, master_seed, pairwise=pw)
        for row, b in enumerate(idx):
            rep = check_nd_arrays(X[row], eps=group_eps, pairwise=pw)
            checked.update(rep.checked)
            skipped.update(rep.skipped)
            for v in rep.violations:
                violations.append({"trial": b, "n": n, **v})
            for key in hist:
                hist[key] += rep.case_histogram[key]
            max_s2 = max(max_s2, rep.max_consecutive_s2)

    return SuiteReport(
        suite="nd-lemmas",
        trials=trials,
        checked=sorted(checked),
        skipped=sorted(skipped - checked),
        violations=violations,
        case_histogram=hist,
        extras={"max_consecutive_s2": max_s2, "steps": steps},
    )


def run_energy_suite(
    trials: int,
    steps: int,
    master_seed: int,
    n_max: int = 30,
    dims: Sequence[int] = (1, 2),
) -> SuiteReport:
    """Random (configuration, G(n, p)) instances checked for energy laws.

    Asserts per step that the energy does not increase and that the
    decrement dominates (1 - lambda^2) times the active energy, both with
    the 1e-9 tolerance.
    """
    violations: list = []
    for trial in range(trials):
        rng = np.random.default_rng(np.random.SeedSequence((master_seed, trial)))
        n = int(rng.integers(2, n_max + 1))
        d = int(rng.choice(list(dims)))
        p = float(rng.random())
        spread = float(rng.uniform(1.0, n))
        x = rng.uniform(0.0, spread, (n, d))
        adj = gnp(n, p, rng).adjacency | np.eye(n, dtype=bool)

        diff = x[:, None, :] - x[None, :, :]
        sq = np.einsum("ijk,ijk->ij", diff, diff)
        mask = (np.sqrt(sq) <= 1.0) & adj
        active, inactive = _energy_terms(mask, sq)
        e_t = active + inactive
        for t in range(steps):
            lam = _lambda_from_adjacency(mask)
            k = mask.sum(axis=1)
            x_next = x + ((-diff) * mask[:, :, None]).sum(axis=1) / k[:, None]
            if np.array_equal(x_next, x):
                break  # exact fixed point; every later step is identical
            diff = x_next[:, None, :] - x_next[None, :, :]
            sq = np.einsum("ijk,ijk->ij", diff, diff)
            mask = (np.sqrt(sq) <= 1.0) & adj
            a_next, i_next = _energy_terms(mask, sq)
            e_next = a_next + i_next
            if e_next > e_t + DECREMENT_TOL:
                violations.append(
                    {"trial": trial, "t": t, "check": "energy_monotone",
                     "margin": float(e_t - e_next)}
                )
            lhs, rhs = e_t - e_next, (1.0 - lam * lam) * active
            if lhs < rhs - DECREMENT_TOL:
                violations.append(
                    {"trial": trial, "t": t, "check": "decrement",
                     "margin": float(lhs - rhs)}
                )
            x, e_t, active = x_next, e_next, a_next

    return SuiteReport(
        suite="energy",
        trials=trials,
        checked=["energy_monotone", "decrement"],
        skipped=[],
        violations=violations,
    )


def run_friendly_suite(
    trials: int,
    steps: int,
    master_seed: int,
    n_max: int = 15,
) -> SuiteReport:
    """Edge-monotone random-addition schedules keep the energy law intact."""
    from .spectral import energy  # local import to keep module load light

    violations: list = []
    for trial in range(trials):
        rng = np.random.default_rng(np.random.SeedSequence((master_seed, trial)))
        n = int(rng.integers(2, n_max + 1))
        d = int(rng.choice([1, 2]))
        spread = float(rng.uniform(1.0, n))
        x0 = Configuration(rng.uniform(0.0, spread, (n, d)))
        g0 = gnp(n, float(rng.random()), rng)
        schedule = GraphSchedule.from_policy(
            g0, random_edge_addition_policy(rng, per_step=1), declared_friendly=True
        )
        try:
            traj = run("social", x0, schedule=schedule, stop=StopRule(max_steps=steps))
        except FriendlinessViolation as exc:  # impossible for additions
            violations.append(
                {"trial": trial, "t": exc.t, "check": "friendly_transition", "margin": -1.0}
            )
            continue
        for t in range(traj.steps):
            ok, _ = is_friendly_transition(
                traj.graph_at(t), traj.graph_at(t + 1), traj.configs[t], traj.configs[t + 1]
            )
            if not ok:
                violations.append(
                    {"trial": trial, "t": t, "check": "friendly_transition", "margin": -1.0}
                )
        energies = [energy(traj.configs[t], traj.graph_at(t)) for t in range(traj.steps + 1)]
        for t in range(traj.steps):
            if energies[t + 1] > energies[t] + DECREMENT_TOL:
                violations.append(
                    {"trial": trial, "t": t, "check": "energy_monotone",
                     "margin": float(energies[t] - energies[t + 1])}
                )

    return SuiteReport(
        suite="friendly",
        trials=trials,
        checked=["friendly_transition", "energy_monotone"],
        skipped=[],
        violations=violations,
    )
