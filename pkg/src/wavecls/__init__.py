"""Classifier and equivalence-decision tool for quasilinear wave systems
u_t = a(x,u) v_x, v_t = b(x,u) u_x under contact transformations."""

from .classify import (ClassificationReport, ClassifyConfig, SubclassTag,
                       classify, explain, report_dict)
from .expr import (DomainError, Expr, ExprError, ParseError, differentiate,
                   evaluate, parse, substitute, to_str)
from .manifold import (EquivalenceVerdict, decide_equivalence,
                       estimate_dimension, sample_cloud)
from .simplify import simplify
from .system import InadmissibleSystem, WaveSystem

__version__ = "0.1.0"

__all__ = [
    "ClassificationReport", "ClassifyConfig", "DomainError",
    "EquivalenceVerdict", "Expr", "ExprError", "InadmissibleSystem",
    "ParseError", "SubclassTag", "WaveSystem", "classify",
    "decide_equivalence", "differentiate", "estimate_dimension", "evaluate",
    "explain", "parse", "report_dict", "sample_cloud", "simplify",
    "substitute", "to_str", "__version__",
]
