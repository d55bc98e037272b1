"""
Exact finite A-infinity categories and their unitality

The three notions of unitality (unit homotopies, weak units, homotopy
unital structures) are made constructive: each conversion returns its
result together with independent check reports.
"""

from .ainfty import AInfCategory, AInfFunctor, UnitData, check_ainfty, check_functor, dg_import
from .category_file import CategoryFile, emit_category, parse_category
from .errors import AInfError, InputError
from .exact_linalg import Field, parse_field
from .reports import CheckReport, Report

__version__ = "0.1.0"

__all__ = [
    "AInfCategory", "AInfFunctor", "UnitData", "check_ainfty", "check_functor", "dg_import",
    "CategoryFile", "emit_category", "parse_category",
    "AInfError", "InputError", "Field", "parse_field", "CheckReport", "Report",
]
