"""Exact counting, extraction and bound verification for combinatorial boxes
in r-dimensional 0-1 relations."""

__version__ = "0.1.0"

from .bounds import (
    BoundReport,
    ClaimCheck,
    Frontier,
    claim1_check,
    claim2_check,
    feasibility_frontier,
    r2_remark_params,
    thm1_params,
    thm2_check,
    thm3_chain_check,
    thm3_check,
    thm4_bound,
)
from .counting import (
    CountResult,
    count_boxes,
    enumerate_rectangles,
    jensen_floor,
    jensen_floor_r2,
    naive_count_boxes,
    rect_degree_sum,
    support_sum,
)
from .errors import BudgetExceeded, EmptySearchSpace, ExtractionError, FormatError
from .extraction import (
    ExtractionResult,
    extract_box,
    extract_multipartite,
    hypergraph_to_relation,
    verify_guarantee,
)
from .generators import GenResult, GenSpec, gen
from .kernels import BACKEND
from .peeling import PeelResult, default_theta, peel
from .relation import (
    Box,
    Rectangle,
    Relation,
    Shape,
    common_neighborhood,
    fiber,
    gen_binomial,
    last_axis_degrees,
    project_last,
    rect_support_count,
    validate_box,
)

__all__ = [
    "__version__",
    "BACKEND",
    "Relation",
    "Box",
    "Rectangle",
    "Shape",
    "project_last",
    "fiber",
    "last_axis_degrees",
    "common_neighborhood",
    "rect_support_count",
    "gen_binomial",
    "validate_box",
    "CountResult",
    "count_boxes",
    "naive_count_boxes",
    "enumerate_rectangles",
    "support_sum",
    "rect_degree_sum",
    "jensen_floor",
    "jensen_floor_r2",
    "PeelResult",
    "peel",
    "default_theta",
    "ExtractionResult",
    "extract_box",
    "extract_multipartite",
    "hypergraph_to_relation",
    "verify_guarantee",
    "GenSpec",
    "GenResult",
    "gen",
    "BoundReport",
    "ClaimCheck",
    "Frontier",
    "thm1_params",
    "thm2_check",
    "thm3_check",
    "thm4_bound",
    "claim1_check",
    "claim2_check",
    "thm3_chain_check",
    "r2_remark_params",
    "feasibility_frontier",
    "FormatError",
    "BudgetExceeded",
    "EmptySearchSpace",
    "ExtractionError",
]
