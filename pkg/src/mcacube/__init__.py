"""MCA-driven modality arrangement for sparse OLAP data cubes."""
from .arrange import Arrangement, arrange_cube, order_modalities, select_axis
from .cube import (
    Cube,
    CubeSchema,
    DimensionSpec,
    apply_arrangement,
    load_fact_table,
    sample_facts,
    sparsity,
)
from .homogeneity import (
    HomogeneityReport,
    brute_force_best,
    delta,
    evaluate,
    gain,
    ih,
    ihb,
    ihb_max,
    neighbors,
)
from .mca import build_disjunctive, burt, contributions, solve_eigen

__version__ = "0.1.0"

__all__ = [
    "Arrangement",
    "Cube",
    "CubeSchema",
    "DimensionSpec",
    "HomogeneityReport",
    "apply_arrangement",
    "arrange_cube",
    "brute_force_best",
    "build_disjunctive",
    "burt",
    "contributions",
    "delta",
    "evaluate",
    "gain",
    "ih",
    "ihb",
    "ihb_max",
    "load_fact_table",
    "neighbors",
    "order_modalities",
    "sample_facts",
    "select_axis",
    "solve_eigen",
    "sparsity",
]
