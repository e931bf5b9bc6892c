"""Oriented Riemannian 4-manifolds in one chart."""

from .curvature import BOUNDARY_MARGIN, CurvatureData, christoffel, curvature, orthonormal_frame
from .expr import ParseError, evaluate, parse_expr, to_sympy
from .metric import (
    CATALOG_NAMES,
    ChartDomainError,
    Domain,
    MetricError,
    MetricModel,
    catalog,
    load_metric_config,
    metric_from_mapping,
    parse_metric,
)

__all__ = [
    "BOUNDARY_MARGIN",
    "CATALOG_NAMES",
    "ChartDomainError",
    "CurvatureData",
    "Domain",
    "MetricError",
    "MetricModel",
    "ParseError",
    "catalog",
    "christoffel",
    "curvature",
    "evaluate",
    "load_metric_config",
    "metric_from_mapping",
    "orthonormal_frame",
    "parse_expr",
    "parse_metric",
    "to_sympy",
]
