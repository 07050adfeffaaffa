"""Constellation-constrained sum capacities of the two-user Gaussian MAC
under the alternating power-allocation scheme, with the deterministic
split-factor metric, ML demapping, and alphabet-partitioning utilities."""

__version__ = "0.1.0"

from .capacity import (
    CapacityEstimate,
    ChannelSpec,
    CpaConfig,
    McConfig,
    cc_sum_capacity,
    cc_sum_capacity_phase,
    cc_sum_capacity_random_phase,
    cpa_sum_capacity,
)
from .constellations import (
    Constellation,
    SumConstellation,
    by_name,
    is_uniquely_decodable,
    load_constellation,
    make_8qam,
    make_psk,
    make_qam,
    rotate,
    sum_constellation,
)
from .demap import (
    DemapResult,
    PamProjection,
    joint_ml_demap,
    pam_projections,
    separable_ml_demap,
)
from .metric import MetricValue, i1_estimate, q_metric, q_metric_rotated, q_total, qp_metric
from .optimizer import (
    GridSpec,
    SweepRow,
    SweepSpec,
    alpha_opt,
    alpha_star,
    alpha_theta_star,
    sweep,
    theta_star,
)
from .partition import (
    PartitionResult,
    best_partition,
    enumerate_splits,
    partition_score,
    qam_pam_alphabet,
)

__all__ = [
    "__version__",
    "CapacityEstimate",
    "ChannelSpec",
    "Constellation",
    "CpaConfig",
    "DemapResult",
    "GridSpec",
    "McConfig",
    "MetricValue",
    "PamProjection",
    "PartitionResult",
    "SumConstellation",
    "SweepRow",
    "SweepSpec",
    "alpha_opt",
    "alpha_star",
    "alpha_theta_star",
    "best_partition",
    "by_name",
    "cc_sum_capacity",
    "cc_sum_capacity_phase",
    "cc_sum_capacity_random_phase",
    "cpa_sum_capacity",
    "enumerate_splits",
    "i1_estimate",
    "is_uniquely_decodable",
    "joint_ml_demap",
    "load_constellation",
    "make_8qam",
    "make_psk",
    "make_qam",
    "pam_projections",
    "partition_score",
    "q_metric",
    "q_metric_rotated",
    "q_total",
    "qam_pam_alphabet",
    "qp_metric",
    "rotate",
    "separable_ml_demap",
    "sum_constellation",
    "sweep",
    "theta_star",
]
