"""Pattern-calculus rewriting engine.

Two interchangeable presentations of the pure pattern calculus: named terms
(symbols, alpha-equivalence, capture-avoiding substitution) and terms over
bidimensional de Bruijn indices (no alpha-conversion, equality modulo
secondary-index assignment), with invertible translations between them and a
differential test harness exercising the correspondence.
"""
from . import core, harness, indexed, named, syntax, translate
from .core import FAIL, WAIT, FreshGen, Success, is_decided
from .syntax import parse, parse_indexed, parse_named, unparse

__all__ = [
    "core", "named", "indexed", "translate", "syntax", "harness",
    "FAIL", "WAIT", "Success", "FreshGen", "is_decided",
    "parse", "parse_named", "parse_indexed", "unparse",
]

__version__ = "0.1.0"
