"""Orthogonal bases of cusp form spaces built from newform data.

Exact quantities are returned as ``fractions.Fraction`` (or a pair of them for
Gaussian rationals); numeric Petersson products are floats.
"""

from __future__ import annotations

import json
from fractions import Fraction

from ._cuspbasis import (
    DataError,
    DomainError,
    Error,
    PreconditionError,
    SchemaError,
    TruncationError,
    bound_constant,
    embedded_names,
    form_info,
    hi_bound,
    normalization_note,
    orthogonality,
    petersson_gram_entry,
    petersson_lower_bound,
    petersson_norm,
)
from . import _cuspbasis as _ext

__all__ = [
    "DataError",
    "DomainError",
    "Error",
    "PreconditionError",
    "SchemaError",
    "TruncationError",
    "basis",
    "bound_constant",
    "coefficients",
    "eigenvalue",
    "embedded_names",
    "exact",
    "form_info",
    "gram",
    "gram_entry",
    "halfint_predict",
    "hi_bound",
    "normalization_note",
    "orthogonality",
    "petersson_gram_entry",
    "petersson_lower_bound",
    "petersson_norm",
]


def exact(text: str):
    """Parses "p/q" into a Fraction; other strings (complex or decimal) are returned unchanged."""
    try:
        return Fraction(text)
    except ValueError:
        return text


def coefficients(form: str, count: int) -> list:
    return [exact(c) for c in _ext.coefficients(form, count)]


def eigenvalue(form: str, n: int):
    return exact(_ext.eigenvalue(form, n))


def gram_entry(form: str, m: int, n: int):
    return exact(_ext.gram_entry(form, m, n))


def gram(form: str, level: int) -> dict:
    """Gram matrix of the translates f~|V_l, l | level/N, with exact entries."""
    g = json.loads(_ext.gram_json(form, level))
    g["entries"] = [[exact(x) for x in row] for row in g["entries"]]
    return g


def basis(level: int, weight: int, mode: str = "orthogonal") -> list:
    """Orthogonal basis of the translates of the embedded forms of this weight."""
    return json.loads(_ext.basis_json(level, weight, mode))


def halfint_predict(op: str, p: int, kappa: int, lambda_p, level: int = 4):
    return exact(_ext.halfint_predict(op, p, kappa, str(Fraction(lambda_p)), level))
