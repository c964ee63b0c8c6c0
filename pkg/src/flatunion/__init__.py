"""Exact incidence geometry of affine flats over small prime fields."""
from __future__ import annotations

from .constructions import (
    d_planes,
    hairbrush_family,
    minimize_union,
    planes_family,
    planes_family_lines,
    random_family,
    skew_lines,
)
from .decomposition import (
    Decomposition,
    Foliation,
    HairbrushTrace,
    LedgerRow,
    QuasiExtremizer,
    RefinementTrace,
    captured_fraction,
    extract_quasi_extremizers,
    foliate,
    hairbrush_decompose,
    iterated_popularity,
    plane_select,
    points_family,
    popularity_refine,
    richness_threshold,
)
from .flats import (
    EMPTY,
    AffineFlat,
    GuardError,
    all_flats,
    canonicalize,
    contains,
    count_containing,
    count_disjoint_hyperplanes,
    count_flats,
    enumerate_flats,
    flat_points,
    gaussian_binomial,
    intersect,
    join,
    linear_subspaces,
    point_flat,
    standard_flat,
    subflats,
    superflats,
)
from .gf_linear import PrimeField, field_inverse, rank, rref, solve_membership
from .harness import ExperimentRecord, run_sweep, verify_suite
from .incidence import (
    AxiomReport,
    CSReport,
    FlatFamily,
    HypothesisError,
    check_dplane_wolff,
    check_wolff,
    degree,
    is_direction_separated,
    load_family,
    max_containment,
    save_family,
    union_points,
    union_subflats,
    verify_cauchy_schwarz,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_") and name != "annotations"]
