"""Exact-arithmetic toolkit for gapped proximity problems: planted
instance generators, reference enumeration oracles, the reduction chain
from satisfiability through set containment to closest pair, a split
solver for binary-coefficient lattice problems, batched near-neighbor
solving, and the factor-3 separation bound for distance gadgets."""

from .barrier import (
    BarrierCertificate,
    ExplicitSpace,
    GadgetSearchResult,
    GadgetTables,
    GapKind,
    GapReport,
    PointSpace,
    RestrictionChain,
    check_triangle,
    gadget_gap,
    parse_gadget,
    search_best_gadget,
    serialize_gadget,
    verify_barrier,
)
from .bench import (
    CSV_HEADER,
    BenchRow,
    ExponentFit,
    bench_scaling,
    fit_line,
    write_csv,
)
from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    GapkitError,
    GenerationError,
    InfeasibleParameters,
    MalformedMetric,
    ParameterError,
    ParseError,
)
from .generators import (
    generate,
    generate_ann,
    generate_bcp,
    generate_cnf,
    generate_lattice01,
    generate_setfamily,
)
from .instances import (
    AnnInstance,
    BcpInstance,
    CnfInstance,
    Instance,
    KINDS,
    Lattice01Instance,
    SetFamilyInstance,
    bits_to_mask,
    load_instance,
    mask_to_bits,
    parse_instance,
    rational_rank,
    serialize_instance,
    store_instance,
)
from .metric import (
    ExactPoint,
    Label,
    Norm,
    ScaledMagnitude,
    classify_gap,
    dist_below,
    dist_num,
    distance,
    within_num,
)
from .oracles import (
    OracleVerdict,
    oracle_closest_pair,
    oracle_lattice01,
    oracle_sat,
    oracle_subset_query,
)
from .reductions import (
    BatchSelection,
    CostExpr,
    InstanceProvenance,
    Recombination,
    ReductionOutput,
    convert_ov_bsq,
    embed_subsetquery_to_bcp,
    implied_gap,
    recover_lattice_witness,
    recover_sat_witness,
    reduce_ksat_to_bisq,
    reduce_lattice01_to_bcp,
    select_batch_size,
    solve_bcp_via_ann,
)
from .rng import SplitMix64
from .solvers import (
    AnnKind,
    AnnStructure,
    BcpStrategy,
    CostCounters,
    SolveResult,
    ann_build,
    ann_query,
    bcp_solve,
    solve_cnf_via_bcp,
    svp01_mitm,
)

__version__ = "0.1.0"

__all__ = [
    "AnnInstance",
    "AnnKind",
    "AnnStructure",
    "BarrierCertificate",
    "BatchSelection",
    "BcpInstance",
    "BcpStrategy",
    "BenchRow",
    "BudgetExceeded",
    "CnfInstance",
    "CostCounters",
    "CostExpr",
    "CSV_HEADER",
    "DimensionMismatch",
    "ExactPoint",
    "ExplicitSpace",
    "ExponentFit",
    "GadgetSearchResult",
    "GadgetTables",
    "GapkitError",
    "GapKind",
    "GapReport",
    "GenerationError",
    "InfeasibleParameters",
    "Instance",
    "InstanceProvenance",
    "KINDS",
    "Label",
    "Lattice01Instance",
    "MalformedMetric",
    "Norm",
    "OracleVerdict",
    "ParameterError",
    "ParseError",
    "PointSpace",
    "Recombination",
    "ReductionOutput",
    "RestrictionChain",
    "ScaledMagnitude",
    "SetFamilyInstance",
    "SolveResult",
    "SplitMix64",
    "ann_build",
    "ann_query",
    "bcp_solve",
    "bench_scaling",
    "bits_to_mask",
    "check_triangle",
    "classify_gap",
    "convert_ov_bsq",
    "dist_below",
    "dist_num",
    "distance",
    "embed_subsetquery_to_bcp",
    "fit_line",
    "gadget_gap",
    "generate",
    "generate_ann",
    "generate_bcp",
    "generate_cnf",
    "generate_lattice01",
    "generate_setfamily",
    "implied_gap",
    "load_instance",
    "mask_to_bits",
    "oracle_closest_pair",
    "oracle_lattice01",
    "oracle_sat",
    "oracle_subset_query",
    "parse_gadget",
    "parse_instance",
    "rational_rank",
    "recover_lattice_witness",
    "recover_sat_witness",
    "reduce_ksat_to_bisq",
    "reduce_lattice01_to_bcp",
    "search_best_gadget",
    "select_batch_size",
    "serialize_gadget",
    "serialize_instance",
    "solve_bcp_via_ann",
    "solve_cnf_via_bcp",
    "store_instance",
    "svp01_mitm",
    "verify_barrier",
    "write_csv",
    "within_num",
]
