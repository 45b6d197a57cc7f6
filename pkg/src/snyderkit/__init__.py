"""Exact verification of Snyder-type and kappa-deformed phase-space realizations.

Elements of the Heisenberg algebra (optionally extended by tensorial
generators) are kept in normal order with exact rational coefficients and
truncated at a total degree in the deformation parameters.
"""

__version__ = "0.1.0"

from .coeffs import Coefficient, ExactComplex
from .hadamard import make_context, phi3_from_spec, transform, transform_realization
from .parse import parse_series
from .realizations import MODEL_IDS, Realization, build, extract_phis, hermitize
from .series import SeriesBundle, TransformSpec, TruncatedSeries, phi_bundle
from .verify import check_series_identities, verify
from .weyl import AlgebraElement, Metric, commutator, generator, multiply

__all__ = [
    "AlgebraElement", "Coefficient", "ExactComplex", "MODEL_IDS", "Metric", "Realization",
    "SeriesBundle", "TransformSpec", "TruncatedSeries", "build", "check_series_identities",
    "commutator", "extract_phis", "generator", "hermitize", "make_context", "multiply",
    "parse_series", "phi3_from_spec", "phi_bundle", "transform", "transform_realization",
    "verify",
]
