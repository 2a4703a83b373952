"""Momentum maps, polytopes, strata and cell charts on complex projective space."""

from ._core import (
    Chart,
    Grading,
    MmtkError,
    Representation,
    auto_chart,
    build_chart,
    build_grading,
    classify_point,
    extreme_points,
    flow,
    fs_gradient,
    load_representation,
    moment_component,
    moment_torus,
    moment_value,
    momentum_polytope,
    parse_representation,
    run_battery,
    vector_field,
)

__all__ = [
    "Chart",
    "Grading",
    "MmtkError",
    "Representation",
    "auto_chart",
    "build_chart",
    "build_grading",
    "classify_point",
    "extreme_points",
    "flow",
    "fs_gradient",
    "load_representation",
    "moment_component",
    "moment_torus",
    "moment_value",
    "momentum_polytope",
    "parse_representation",
    "run_battery",
    "vector_field",
]
