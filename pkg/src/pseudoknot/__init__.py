"""Enumeration of canonical k-noncrossing RNA pseudoknot structures.

Exact counts come from an inclusion-exclusion / stack-contraction pipeline
(:mod:`pseudoknot.enumeration`) fed by lattice-walk counts of k-noncrossing
matchings (:mod:`pseudoknot.walks`).  The same numbers are produced
independently as power-series coefficients (:mod:`pseudoknot.series`) and
checked against brute force (:mod:`pseudoknot.diagram`).  Growth rates are
in :mod:`pseudoknot.asymptotics`.
"""

__version__ = "0.1.0"

from .diagram import (
    Diagram,
    StructureClass,
    core_map,
    enumerate_class,
    is_member,
    max_crossing,
    stack_decompose,
)
from .enumeration import secondary_count, t4_sigma, t4_sigma_total, tk21
from .walks import M, f_partial, f_perfect

__all__ = [
    "Diagram",
    "M",
    "StructureClass",
    "core_map",
    "enumerate_class",
    "f_partial",
    "f_perfect",
    "is_member",
    "max_crossing",
    "secondary_count",
    "stack_decompose",
    "t4_sigma",
    "t4_sigma_total",
    "tk21",
]
