"""Exact q-derangement polynomials of types A and B and normality diagnostics."""

from qmaj.errors import ConsistencyError, DomainError, QmajError, ResourceLimitError
from qmaj.exact import bernoulli
from qmaj.moments import expectation, summarize, variance
from qmaj.qpoly import QPoly
from qmaj.qseries import d_poly_A, d_poly_B, derangement_count_A, derangement_count_B

__version__ = "0.1.0"

__all__ = [
    "ConsistencyError",
    "DomainError",
    "QmajError",
    "ResourceLimitError",
    "QPoly",
    "bernoulli",
    "d_poly_A",
    "d_poly_B",
    "derangement_count_A",
    "derangement_count_B",
    "expectation",
    "variance",
    "summarize",
]
