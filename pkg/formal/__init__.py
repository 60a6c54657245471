# formal/__init__.py
"""Formal monomial algebra: DSL parser, nu counters and exponent bounds."""
from .monomial import (
    AngleUnderline,
    Entry,
    ExponentReport,
    FormalMonomial,
    Underline,
    exponents,
    format_monomial,
    nu_counters,
    random_monomial,
)
from .parser import ParseError, parse_lines, parse_monomial
