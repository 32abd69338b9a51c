"""Exact partition-diagram calculus for Deligne's category Rep(S_t).

Submodules:

- :mod:`deligne.scalars`: exact scalars in ``t`` and ``q``
- :mod:`deligne.diagrams`: partition diagrams, composition, enumeration
- :mod:`deligne.morphisms`: linear combinations, duality and traces
- :mod:`deligne.modtrace`: the antisymmetrizer ``s_n``, the trace ``t_n`` and its verifier
- :mod:`deligne.graded`: the graded category with braiding parameter ``q``
- :mod:`deligne.knots`: framed knot words and their evaluation
- :mod:`deligne.oracle`: matrix realizations used as an independent check
"""

from .diagrams import PartitionDiagram, compose, enumerate_diagrams, format_diagram, parse_diagram
from .morphisms import Morphism, categorical_trace, parse_morphism, partial_trace
from .scalars import QLaurent, TPoly, format_scalar, parse_scalar

__version__ = "0.1.0"

__all__ = [
    "PartitionDiagram",
    "compose",
    "enumerate_diagrams",
    "format_diagram",
    "parse_diagram",
    "Morphism",
    "categorical_trace",
    "parse_morphism",
    "partial_trace",
    "QLaurent",
    "TPoly",
    "format_scalar",
    "parse_scalar",
]
