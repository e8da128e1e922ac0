"""Workbench for the strong-union intermediate logic SU."""

from sukit.formula import (
    BOT, And, Bottom, Formula, Implies, Or, Var, axiom, instantiate, neg, parse, to_text, variables,
)
from sukit.frame import Frame
from sukit.kernels import BACKEND
from sukit.semantics import Model, SearchBounds

__all__ = [
    "BOT", "And", "Bottom", "Formula", "Implies", "Or", "Var",
    "axiom", "instantiate", "neg", "parse", "to_text", "variables",
    "Frame", "BACKEND", "Model", "SearchBounds",
]

__version__ = "0.1.0"
