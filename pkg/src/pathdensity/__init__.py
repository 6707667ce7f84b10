"""Monochromatic path density in 2-coloured complete graphs.

The package builds the geometric colourings whose monochromatic paths have
upper density at most ``(12 + sqrt 8)/17``, extracts dense monochromatic
simple forests from finite totally coloured graphs, analyses the oscillation
of degree sequences, and checks small cases by brute force.
"""

from .errors import (
    AmbiguousFloorError,
    ClaimGapError,
    FormatError,
    InvariantViolation,
    PathDensityError,
    PreconditionError,
)
from .quadratic import SILVER, SQRT2, QuadraticValue, as_exact
from .graphmodel import (
    Color,
    ForestReport,
    PathForest,
    SimpleForest,
    TotalColoredGraph,
    complete_random_coloring,
    density_at,
    random_coloring,
    read_coloring,
    validate_path_forest,
    validate_simple_forest,
    write_coloring,
)
from .coloring import (
    GeometricColoring,
    build,
    density_bound,
    density_profile,
    matchings,
    optimal_q,
    reordering,
    sweep_q,
    to_total_graph,
)
from .extract import (
    TARGET_DENSITY,
    BipartiteReduction,
    KonigCertificate,
    degree_sequence,
    extract_forest,
    konig,
    oscillation_or_forest,
    simple_forest_pipeline,
)
from .sequences import (
    choose_N,
    ell_minus,
    ell_plus,
    extremal_sequence,
    find_good_t,
    find_oscillation_t,
    interval_partition,
    oscillation,
    recurrence_trace,
)
from .oracle import faithfulness_check, gg_verify, longest_mono_path, optimal_simple_forest

__version__ = "0.1.0"
