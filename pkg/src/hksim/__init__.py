"""Bounded-confidence opinion dynamics with verification instrumentation.

Simulates the classical Hegselmann-Krause system and two variants (averaging
restricted to a social network, and noise-scaled displacements), together
with the energy/spectral quantities and runtime checks that certify the
convergence behavior, plus a seeded sweep harness over random graphs.
"""

from .core import (
    CommunicationGraph,
    Configuration,
    communication_graph,
    components,
    neighbors,
)
from .diagnostics import (
    ClusterReport,
    LemmaReport,
    NdPartition,
    StepReport,
    SuiteReport,
    attach_reports,
    auto_eps,
    check_nd_lemmas,
    cluster_time_bounds,
    clusters,
    count_nontrivial,
    detect_convergence,
    is_nontrivial,
    nd_partition,
    run_energy_suite,
    run_friendly_suite,
    run_nd_lemma_suite,
    write_report_csv,
)
from .dynamics import (
    FriendlinessViolation,
    NoiseSource,
    StopRule,
    Trajectory,
    run,
    step_classical,
    step_nd,
    step_nd_pairwise,
    step_social,
)
from .experiments import (
    AggregateRow,
    DemoResult,
    SweepResult,
    SweepRow,
    SweepSpec,
    WorkBudgetExceeded,
    aggregate,
    cell_seed,
    demo,
    float_grid,
    run_sweep,
    write_aggregate_csv,
    write_results_csv,
)
from .graphs import (
    GraphSchedule,
    SocialGraph,
    barabasi_albert,
    gnp,
    is_friendly_transition,
    named_graph,
    random_edge_addition_policy,
)
from .spectral import (
    DecrementCheck,
    SpectralReport,
    active_energy,
    check_decrement,
    energy,
    gap_bound,
    second_eigenvalue,
    spectral_report,
)

__version__ = "0.1.0"
