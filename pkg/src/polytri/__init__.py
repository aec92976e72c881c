"""Uniform random triangulations of convex polygons and exact laws of
triangle-weight sums."""
from .exactmath import binomial, catalan, narayana
from .gf import DistTable, MomentReport, ZPoly, distribution, h_polynomial, moments_exact, moments_numeric
from .polygon import (
    PolygonSpec,
    Triangulation,
    enumerate_triangulations,
    flip,
    triangle_metrics,
    validate_triangulation,
)
from .sampler import SampleRun, sample_triangulation, split_law, weight_sum
from .weights import WeightSpec, classify, eval_weight, flip_constancy, parse_weight

__version__ = "0.1.0"
