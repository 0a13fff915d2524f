"""Dynamical Mahler measures of integer polynomials.

The measure ``m_f(P)`` averages ``log|P|`` against the equilibrium measure
of a monic integer polynomial ``f`` on its Julia set, one copy per
variable.  The package provides exact polynomial arithmetic, equilibrium
sampling by backward iteration, Green functions and canonical heights,
preperiodicity and cycle classification, Kronecker-type certificates for
``m_f(P) = 0``, Multibrot tools and escape-time rendering.
"""

__version__ = "0.1.0"

from .dynamics import (
    CycleClass,
    CycleReport,
    classify_cycle,
    escape_radius,
    find_linear_commuters,
    is_preperiodic_exact,
    is_preperiodic_numeric,
    orbit,
    periodic_points,
    preimages,
)
from .errors import DynMahlerError, SchemaError
from .kernels import BACKEND
from .kronecker import (
    FactorSpec,
    KroneckerVerdict,
    Verdict,
    certify_zero_bivariate,
    certify_zero_univariate,
    find_preperiodic_pairs,
)
from .measure import (
    MeasureSampler,
    QuadratureResult,
    boyd_lawton_sequence,
    mahler_circle,
    mahler_mc,
    mahler_nested,
    mahler_segment,
    mahler_tree,
)
from .multibrot import (
    multibrot_member,
    multibrot_real_interval,
    preper_in_julia,
    quadratic_normal_form,
    unicritical_normal_form,
)
from .poly import AffineMap, CPoly, MPoly, ZPoly, compose, conjugate, iterate, lehmer
from .polyio import poly_from_json, poly_to_json
from .potential import canonical_height, green, green_batch, mahler_univariate_jensen
from .raster import RasterConfig, render

__all__ = [
    "AffineMap", "BACKEND", "CPoly", "CycleClass", "CycleReport", "DynMahlerError", "FactorSpec",
    "KroneckerVerdict", "MPoly", "MeasureSampler", "QuadratureResult", "RasterConfig", "SchemaError",
    "Verdict", "ZPoly", "__version__", "boyd_lawton_sequence", "canonical_height",
    "certify_zero_bivariate", "certify_zero_univariate", "classify_cycle", "compose", "conjugate",
    "escape_radius", "find_linear_commuters", "find_preperiodic_pairs", "green", "green_batch",
    "is_preperiodic_exact", "is_preperiodic_numeric", "iterate", "lehmer", "mahler_circle", "mahler_mc",
    "mahler_nested", "mahler_segment", "mahler_tree", "mahler_univariate_jensen", "multibrot_member",
    "multibrot_real_interval", "orbit", "periodic_points", "poly_from_json", "poly_to_json",
    "preimages", "preper_in_julia", "quadratic_normal_form", "render", "unicritical_normal_form",
]
