"""meanlab: exact generalized means of finitely representable real sets."""

from fractions import Fraction as Q

from .analysis import (
    MeanSequence,
    acc_points_by_mean,
    avg_fat_sequence,
    core_restriction_check,
    d_mean,
    d_probe,
    eds_sequence,
    extremal_avg,
    grid_family,
    is_k_closed,
    iso_sequence,
    liminf_by_mean,
    limsup_by_mean,
    pointwise_limit,
    sup_bound_check,
    uniformity_witness,
    uniformity_witness_at,
)
from .axioms import (
    PROPERTY_IDS,
    RECONSTRUCTED,
    GeneratorConfig,
    PropertyReport,
    Witness,
    check,
    full_report,
    gen_dilution,
    gen_disjoint_pairs,
    gen_equal_mean_pairs,
    gen_nested_chain,
    gen_sets,
)
from .errors import MeanlabError, NoConvergence, ParseError
from .exactset import (
    EMPTY,
    Cluster,
    Geometric,
    Harmonic,
    Interval,
    MappedRule,
    RealSet,
    acc_bounds,
    closure,
    derived,
    derived_iter,
    from_interval,
    from_points,
    geometric_cluster,
    harmonic_cluster,
    interior,
    intersects_interval,
    level,
    make_cluster,
    normalize,
    realset,
    reflect,
    scale,
    set_diff,
    set_intersect,
    set_union,
    slice_ge,
    slice_le,
    subset_of,
    translate,
)
from .funcs import (
    SQUARE,
    Affine,
    Compose,
    ExpBase,
    LogBase,
    MonotoneFunc,
    OddPower,
    SquareOnNonneg,
    parse_func,
)
from .limits import DEFAULT_SCHEDULE, LimitSchedule, limit_estimate
from .means import (
    AMEAN,
    AVG1,
    M_ACC,
    MEAN_NAMES,
    MeanRef,
    amean,
    avg1,
    avg_f,
    avg_f_ref,
    avg_fat,
    avg_fat_ref,
    eds_n,
    eds_ref,
    image_set,
    iso_n,
    iso_ref,
    lavg,
    lavg_ref,
    m_acc,
    m_eds,
    m_eds_ref,
    m_iso,
    m_iso_ref,
    m_mu,
    m_mu_ref,
    resolve_mean,
    transform_kf,
)
from .measure import (
    DensityMeasure,
    diameter,
    essential_bounds,
    fatten,
    hausdorff_distance,
    lebesgue,
    moment,
    mu_measure,
    mu_moment,
    support,
)
from .setexpr import (
    SetExpr,
    evaluate,
    parse,
    parse_rational_text,
    print_expr,
    set_to_expr,
)
from .values import Approx, RootValue, decimal_str, value_bounds, value_mid

__all__ = [
    "Q",
    # errors
    "MeanlabError",
    "NoConvergence",
    "ParseError",
    # sets
    "EMPTY",
    "Cluster",
    "Geometric",
    "Harmonic",
    "Interval",
    "MappedRule",
    "RealSet",
    "acc_bounds",
    "closure",
    "derived",
    "derived_iter",
    "from_interval",
    "from_points",
    "geometric_cluster",
    "harmonic_cluster",
    "interior",
    "intersects_interval",
    "level",
    "make_cluster",
    "normalize",
    "realset",
    "reflect",
    "scale",
    "set_diff",
    "set_intersect",
    "set_union",
    "slice_ge",
    "slice_le",
    "subset_of",
    "translate",
    # measure
    "DensityMeasure",
    "diameter",
    "essential_bounds",
    "fatten",
    "hausdorff_distance",
    "lebesgue",
    "moment",
    "mu_measure",
    "mu_moment",
    "support",
    # transforms
    "SQUARE",
    "Affine",
    "Compose",
    "ExpBase",
    "LogBase",
    "MonotoneFunc",
    "OddPower",
    "SquareOnNonneg",
    "parse_func",
    # limits
    "DEFAULT_SCHEDULE",
    "LimitSchedule",
    "limit_estimate",
    # means
    "AMEAN",
    "AVG1",
    "M_ACC",
    "MEAN_NAMES",
    "MeanRef",
    "amean",
    "avg1",
    "avg_f",
    "avg_f_ref",
    "avg_fat",
    "avg_fat_ref",
    "eds_n",
    "eds_ref",
    "image_set",
    "iso_n",
    "iso_ref",
    "lavg",
    "lavg_ref",
    "m_acc",
    "m_eds",
    "m_eds_ref",
    "m_iso",
    "m_iso_ref",
    "m_mu",
    "m_mu_ref",
    "resolve_mean",
    "transform_kf",
    # analysis
    "MeanSequence",
    "acc_points_by_mean",
    "avg_fat_sequence",
    "core_restriction_check",
    "d_mean",
    "d_probe",
    "eds_sequence",
    "extremal_avg",
    "grid_family",
    "is_k_closed",
    "iso_sequence",
    "liminf_by_mean",
    "limsup_by_mean",
    "pointwise_limit",
    "sup_bound_check",
    "uniformity_witness",
    "uniformity_witness_at",
    # properties
    "PROPERTY_IDS",
    "RECONSTRUCTED",
    "GeneratorConfig",
    "PropertyReport",
    "Witness",
    "check",
    "full_report",
    "gen_dilution",
    "gen_disjoint_pairs",
    "gen_equal_mean_pairs",
    "gen_nested_chain",
    "gen_sets",
    # expressions
    "SetExpr",
    "evaluate",
    "parse",
    "parse_rational_text",
    "print_expr",
    "set_to_expr",
    # values
    "Approx",
    "RootValue",
    "decimal_str",
    "value_bounds",
    "value_mid",
]

__version__ = "0.1.0"
