"""Exact verification of comodule algebras, Hopf modules and their localizations.

Two backends share one reporting layer: finite-dimensional algebras given by
structure constants (``coloc.findim``) and skew-Laurent algebras on
q-commuting generators (``coloc.skew``).  Presentations are read from a small
text language (``coloc.presentations``); ``coloc.cli`` is the command line.
"""

from .exact import GF, QQ, Matrix, Subspace, field_from_name
from .presentations import ParseError, elaborate, parse, print_bundle
from .report import CheckReport, Witness, emit_json, load_json

__version__ = "0.1.0"

__all__ = [
    "GF",
    "QQ",
    "Matrix",
    "Subspace",
    "field_from_name",
    "ParseError",
    "parse",
    "print_bundle",
    "elaborate",
    "CheckReport",
    "Witness",
    "emit_json",
    "load_json",
]
