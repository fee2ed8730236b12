"""Posets, their directed-set operators, and prime spectra of graph algebras."""
from .errors import SpectraError
from .graph import INF, MultiGraph
from .order import FinitePoset, validate_poset
from .rayposet import RayPoset, RealizedElement, validate_rayposet

__all__ = [
    "INF",
    "FinitePoset",
    "MultiGraph",
    "RayPoset",
    "RealizedElement",
    "SpectraError",
    "validate_poset",
    "validate_rayposet",
]
__version__ = "0.1.0"
