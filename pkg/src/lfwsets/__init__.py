"""Clopen sets in F_q((t)): wavelet, framelet and scaling set verification."""

from .errors import DomainError, LfwError, ParamsMismatchError, PreconditionError, SetFileError
from .field import FieldElement, FieldParams, default_params, parse_element, u_map
from .sets import Ball, ClopenSet, ExtendedRational, INFINITE, StepFunction
from .verdict import FAIL, PASS, Verdict

__version__ = "0.1.0"

__all__ = [
    "Ball",
    "ClopenSet",
    "DomainError",
    "ExtendedRational",
    "FAIL",
    "FieldElement",
    "FieldParams",
    "INFINITE",
    "LfwError",
    "PASS",
    "ParamsMismatchError",
    "PreconditionError",
    "SetFileError",
    "StepFunction",
    "Verdict",
    "default_params",
    "parse_element",
    "u_map",
]
