"""VC dimension of partition families and maximal-in-range auctions for two bidders."""

from .budget import Budget
from .errors import *  # noqa: F401,F403
from .partitions import (
    Partition,
    PartitionFamily,
    Universe,
    bundle_family,
    covering_family,
    distance,
    enumerate_all_partitions,
    enumerate_covering_partitions,
    family_from_json,
    is_covering,
    make_partition,
    project,
    project_family,
)
from .vc import (
    AlphaReport,
    FarFamilyReport,
    SetFamily,
    ShatterReport,
    SplitWitness,
    VcReport,
    alpha_of,
    classical_vc,
    count_shattered_sets,
    covering_vc_lower_bound,
    extract_far_subfamily,
    find_splitting_element,
    is_shattered,
    min_pairwise_distance,
    sauer_shelah_check,
    split_family,
    vc_dimension,
)
from .codes import CodeSpec, build_code_family, construct_code, sample_covering_partition
from .valuations import (
    AdditiveValuation,
    CappedAdditiveValuation,
    DoubleCappedAdditiveValuation,
    TableValuation,
    Valuation,
    ZeroOneAdditiveValuation,
)
from .mechanisms import (
    AuctionInstance,
    MirMechanism,
    Outcome,
    RatioReport,
    bundle_mechanism,
    find_profitable_deviation,
    measure_ratio,
    mir_allocate,
    opt_allocation,
    vcg_payments,
    welfare,
)
from .reductions import (
    BlockDesign,
    ReductionReport,
    is_block_shattered,
    lift_valuation,
    lift_valuation_blocks,
    run_block_reduction,
    run_reduction,
    sample_blocks,
)

__version__ = "0.1.0"
