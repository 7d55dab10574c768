"""Surjectivity of magnetic Schrödinger operators on bundles over weighted graphs."""

__version__ = "0.1.0"

from .bundle import Connection, Endomorphism, HermitianBundle, negate_connection, validate, w_max, w_min
from .certify import (
    form_nonnegativity_probe,
    kernel_search,
    max_principle_analyze,
    surjectivity_certificate,
    zero_energy_component_check,
)
from .fields import VectorField, pairing, pointwise_norm, seminorm_pK
from .gallery import GeneratorSpec, hexagram_eigenfunction, make_graph, star_image_defect
from .graph import FiniteGraph, GraphOracle, ball, component_probe, degree, finite_view
from .schroedinger import (
    MagneticOperator,
    ScalarPotential,
    apply_at,
    apply_supported,
    domination_defect,
    form_matrix,
    green_symmetry_defect,
    negate_operator,
    quadratic_form,
    scalar_laplacian,
)
from .solve import SolveRequest, residual, windowed_solve

__all__ = [
    "Connection", "Endomorphism", "HermitianBundle", "negate_connection", "validate", "w_max", "w_min",
    "form_nonnegativity_probe", "kernel_search", "max_principle_analyze", "surjectivity_certificate",
    "zero_energy_component_check", "VectorField", "pairing", "pointwise_norm", "seminorm_pK",
    "GeneratorSpec", "hexagram_eigenfunction", "make_graph", "star_image_defect",
    "FiniteGraph", "GraphOracle", "ball", "component_probe", "degree", "finite_view",
    "MagneticOperator", "ScalarPotential", "apply_at", "apply_supported", "domination_defect",
    "form_matrix", "green_symmetry_defect", "negate_operator", "quadratic_form", "scalar_laplacian",
    "SolveRequest", "residual", "windowed_solve",
]
