"""Mean and directed curvature of piecewise flat surfaces from hinge angles.

The estimators need only edge lengths and hinge angles, so they apply to
surfaces in Euclidean space and in curved ambient spaces alike.  Smooth
reference surfaces, cotan and normal-cycle baselines, and the convergence
studies live alongside.
"""

from .baselines import cotan_mean_curvature, csm_tensor
from .curvature import (
    build_hinge_region, directed_curvature, directed_curvatures, geodesic_tangent_integral,
    hinge_regions, mean_curvature, total_mean_curvature, triangle_tensor,
)
from .dual import DualTessellation, build_dual, cell_fragments_in_triangle
from .embedding import (
    EmbeddedSurface, HingeField, embed, hinge_angle_stats, hinge_angles_euclidean, read_off,
    write_off,
)
from .errors import PFCurvError
from .generators import (
    generate_cylinder_grid, generate_gowdy_grids, generate_layered_surface, layered_scheme,
)
from .layers import build_layers, dihedral_angles, hinge_angles_from_layers, layered_hinge_angles
from .metric import (
    EuclideanMetric, GeodesicCache, GowdyMetric, geodesic_distance, geodesic_distances,
    geodesic_shoot, metric_by_name,
)
from .report import CurvatureReport
from .smooth import (
    directional_curvature, mean_curvature_smooth, smooth_path_integral, surface_sampler,
)
from .surface import SimplicialSurface, build_surface, develop_fan, develop_strip, read_ism, write_ism

__all__ = [
    "CurvatureReport", "DualTessellation", "EmbeddedSurface", "EuclideanMetric", "GeodesicCache",
    "GowdyMetric", "HingeField", "PFCurvError", "SimplicialSurface", "build_dual",
    "build_hinge_region", "build_layers", "build_surface", "cell_fragments_in_triangle",
    "cotan_mean_curvature", "csm_tensor", "develop_fan", "develop_strip", "dihedral_angles",
    "directed_curvature", "directed_curvatures", "directional_curvature", "embed",
    "generate_cylinder_grid", "generate_gowdy_grids", "generate_layered_surface",
    "geodesic_distance", "geodesic_distances", "geodesic_shoot", "geodesic_tangent_integral",
    "hinge_angle_stats", "hinge_angles_euclidean", "hinge_angles_from_layers", "hinge_regions",
    "layered_hinge_angles", "layered_scheme", "mean_curvature", "mean_curvature_smooth",
    "metric_by_name", "read_ism", "read_off", "smooth_path_integral", "surface_sampler",
    "total_mean_curvature", "triangle_tensor", "write_ism", "write_off",
]
