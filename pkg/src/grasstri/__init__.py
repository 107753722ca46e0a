"""Symplectic area of geodesic triangles in complex Grassmannians.

The area of a triangle with regular edges is minus the sum of the continuous
arguments of the normalized canonical kernel ``det(I + Z W*)^2`` over its
edges; the package also provides the quadratures that check it.
"""

__version__ = "0.1.0"

from .area import (
    AreaResult,
    Triangle,
    cocycle_defect,
    mod4pi_ambiguity_demo,
    normalize_area,
    path_integral_rho,
    psi,
    sphere_area,
    surface_integral,
    triangle_area,
)
from .chart import (
    SpaceParams,
    act,
    chart_inverse,
    denominator,
    embed,
    random_point,
    random_unitary,
    same_point,
)
from .errors import (
    ArgUndefined,
    CutLocusError,
    FillingLeavesChart,
    GeometryError,
    NotRegular,
    OutsideBigCell,
    UndefinedAction,
)
from .geodesics import (
    GeodesicSegment,
    PairClass,
    PolysphereDecomposition,
    classify_pair,
    distance,
    geodesic,
    geodesic_from_origin,
    polysphere_decompose,
    transport_to_origin,
)
from .kernel import (
    arg_k_tilde,
    covariance_defect,
    h_kernel,
    k_c,
    k_tilde,
    kahler_form,
    metric,
    potential,
    rho,
)
