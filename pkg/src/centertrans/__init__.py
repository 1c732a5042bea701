"""Exact depth geometry, mod-2 Schubert calculus, and deep-projection search."""

__version__ = "0.1.0"

from .centers import CenterReport, center_point, classify
from .cloud import OrthoFrame, WeightedPointCloud, apply_affine
from .depth import (
    DepthRegion,
    DepthValue,
    depth_of_measure,
    depth_region,
    halfspace_mass,
    marginal,
    thresholds,
    tukey_depth,
)
from .schubert import (
    Cochain,
    GrassmannContext,
    height_w1,
    min_dimension,
    monomial,
    obstruction_main,
    obstruction_power2free,
    pieri_dual,
    pieri_special,
    special_class,
    wn_power,
)
from .simplex import (
    RegularSimplexPlacement,
    VertexTuple,
    delta_of_vertices,
    jacobi_eigh,
    normalize_volume,
    polar_decompose,
    positive_dependence,
    reference_simplex,
    simplex_map,
    witness_vertices,
)
from .transversal import (
    SearchConfig,
    TransversalReport,
    objective,
    random_frame,
    search,
    verify,
)
