"""Exact computation of Hilbert-Samuel coefficients, homological degrees and
related inequalities for small affine rings over F_p or QQ."""

__version__ = "0.1.0"

from .core import QQ, PolyRing, Polynomial, PrimeField, make_field  # noqa: E402
from .errors import (ChernlabError, DomainError, GenericityError, ParseError,  # noqa: E402
                     PreconditionError, ResourceError, StabilizationError)
from .rings import PresentedRing, RingIdeal  # noqa: E402

__all__ = [
    "QQ", "PolyRing", "Polynomial", "PrimeField", "make_field", "PresentedRing", "RingIdeal",
    "ChernlabError", "DomainError", "GenericityError", "ParseError", "PreconditionError",
    "ResourceError", "StabilizationError", "__version__",
]
