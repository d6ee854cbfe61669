"""Exact toolkit for L-spherical codes and equiangular line systems."""
from ._kernels import BACKEND
from .bounds import bukh_constant, classical_caps, gerzon, relative_bound
from .codes import Code, LSet, attachment_graph, gram_of, parse_lset, realize, validate
from .constructions import gallery, ls_family, simplex
from .search import max_lines, spectral_feasibility

__all__ = [
    "BACKEND",
    "Code",
    "LSet",
    "attachment_graph",
    "bukh_constant",
    "classical_caps",
    "gallery",
    "gerzon",
    "gram_of",
    "ls_family",
    "max_lines",
    "parse_lset",
    "realize",
    "relative_bound",
    "simplex",
    "spectral_feasibility",
    "validate",
]
__version__ = "0.1.0"
