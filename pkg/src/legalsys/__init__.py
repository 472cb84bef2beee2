"""Legal systems of moves on finite simplicial graphs."""

from __future__ import annotations

from .errors import BudgetExceeded, FormatError, LegalSysError, ResourceRefusal, UsageError
from .graph import Graph, curvature, is_legal_state, is_strongly_legal_state, kappa2
from .legal import MoveSystem, OrbitReport, certify, verify_legal_orbit

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "MoveSystem",
    "OrbitReport",
    "certify",
    "verify_legal_orbit",
    "curvature",
    "kappa2",
    "is_legal_state",
    "is_strongly_legal_state",
    "LegalSysError",
    "UsageError",
    "FormatError",
    "ResourceRefusal",
    "BudgetExceeded",
]
