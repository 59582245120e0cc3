"""Sparse LP models, a bounded-variable revised simplex, optimality
certification and a text serialization format."""

from .certificate import CertificateReport, check_certificate
from .model import (
    EQUAL,
    GREATER_EQUAL,
    INF,
    LESS_EQUAL,
    LpModel,
    MAXIMIZE,
    MINIMIZE,
    Solution,
    SolveStatus,
    StandardForm,
    to_standard_form,
)
from .simplex import SolverOptions, solve
from .textio import parse_model_text, write_model_text

__all__ = [
    "CertificateReport",
    "check_certificate",
    "EQUAL",
    "GREATER_EQUAL",
    "INF",
    "LESS_EQUAL",
    "LpModel",
    "MAXIMIZE",
    "MINIMIZE",
    "Solution",
    "SolveStatus",
    "SolverOptions",
    "StandardForm",
    "solve",
    "to_standard_form",
    "parse_model_text",
    "write_model_text",
]
