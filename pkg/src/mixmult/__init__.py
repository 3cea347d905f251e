"""Exact mixed and Buchsbaum-Rim multiplicities of monomial ideal/module data."""

__version__ = "0.1.0"

from mixmult.engine import GridSpec, LengthTable, Setup, br_value, fill_table, full_slice, rees_piece
from mixmult.monomial import (
    BiMonomial,
    MonomialModule,
    RingContext,
    krull_dim,
    length_between,
    minimalize,
)
from mixmult.multiplicity import (
    MultiIndex,
    MultiplicityReport,
    WindowPolicy,
    buchsbaum_rim,
    detect_degree,
    dimension_D,
    finite_difference,
    height_mod_ann,
    mixed_multiplicity,
    multiplicity_report,
)

__all__ = [
    "BiMonomial",
    "GridSpec",
    "LengthTable",
    "MonomialModule",
    "MultiIndex",
    "MultiplicityReport",
    "RingContext",
    "Setup",
    "WindowPolicy",
    "br_value",
    "buchsbaum_rim",
    "detect_degree",
    "dimension_D",
    "fill_table",
    "finite_difference",
    "full_slice",
    "height_mod_ann",
    "krull_dim",
    "length_between",
    "minimalize",
    "mixed_multiplicity",
    "multiplicity_report",
    "rees_piece",
]
