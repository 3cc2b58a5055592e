"""Thick straight-line embeddings of simplicial complexes.

Random placement on a sphere, edgewise subdivision, a bounded-move
thickening pass and the geometric certifiers (Gromov--Guth thickness, link
thickness, crossing counts) used to check them.
"""

from .complex import (SimplicialComplex, build_complex, color_simplices, graph_distance, link,
                      load_profile)
from .embedder import (PlacementParams, check_conditions, crossing_profile, random_sphere_placement,
                       run_pipeline)
from .errors import *  # noqa: F401,F403
from .geometry import (EmbeddedComplex, ball_crossing_count, enclosing_radius, gg_thickness,
                       link_embedding, link_thickness, min_link_thickness, simplex_quality,
                       thickness_report)
from .distance import simplex_distance
from .net import MetricSample, certify_net, greedy_net, mesh_to_metric
from .perturb import thicken_perturb
from .subdivision import edgewise_subdivide, subdivide_embedding

__version__ = "0.1.0"
