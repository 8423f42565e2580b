"""Monte Carlo statistics on model metric spaces (hyperbolic, modular, tree, normed)."""

from ._stathyp import (
    CSV_HEADER,
    ConvexBody,
    CoverageError,
    DomainError,
    Error,
    ModelSpace,
    ParameterError,
    UnsupportedError,
    annular_distance,
    catalog_json,
    default_config,
    densities,
    digest,
    estimate_e,
    horocycle_distance,
    mahler,
    ray_thick_stat,
    reference_sphere_e,
    run_experiment,
    separation_fraction,
    thick_area_fraction,
    thick_stat,
    thin_triangle_probe,
    threshold_floor,
)


def catalog():
    """Experiment catalog as a list of dicts."""
    import json

    return json.loads(catalog_json())


__all__ = [name for name in dir() if not name.startswith("_")]
