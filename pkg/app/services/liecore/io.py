"""
algebra.v1 JSON conversion.
"""

import json
from typing import List

from pydantic import ValidationError

from app.core.exceptions import ParseError
from app.schemas.algebra import AlgebraDocument
from app.services.liecore.algebra import MetricEquivariantAlgebra, Structure
from app.utils.exactlin import Mat, format_scalar, to_scalar


def _matrix_strings(M: Mat) -> List[List[str]]:
    return [[format_scalar(v) for v in M.row(i)] for i in range(M.rows)]


def _matrix_from_strings(rows: List[List[str]], n: int) -> Mat:
    return Mat(n, n, [to_scalar(v) for row in rows for v in row])


def algebra_to_document(g: MetricEquivariantAlgebra) -> AlgebraDocument:
    """Serialize; only i < j nonzero brackets are listed."""
    n = g.dim
    bracket = []
    for i in range(n):
        for j in range(i + 1, n):
            row = g.bracket_basis(i, j)
            if row:
                bracket.append((i, j, [format_scalar(row.get(k, to_scalar(0))) for k in range(n)]))
    return AlgebraDocument(
        dim=n,
        labels=list(g.labels),
        bracket=bracket,
        gram=_matrix_strings(g.form),
        D=_matrix_strings(g.derivation),
        theta=_matrix_strings(g.involution),
        weak=g.weak,
    )


def algebra_from_document(doc: AlgebraDocument) -> MetricEquivariantAlgebra:
    n = doc.dim
    structure: Structure = {}
    for i, j, coeffs in doc.bracket:
        row = {k: to_scalar(c) for k, c in enumerate(coeffs) if to_scalar(c)}
        if row:
            structure[(i, j)] = row
            structure[(j, i)] = {k: -v for k, v in row.items()}
    return MetricEquivariantAlgebra(
        tuple(doc.labels),
        structure,
        D=_matrix_from_strings(doc.D, n),
        theta=_matrix_from_strings(doc.theta, n),
        gram=_matrix_from_strings(doc.gram, n),
        weak=doc.weak,
    )


def dumps_algebra(g: MetricEquivariantAlgebra) -> str:
    return json.dumps(algebra_to_document(g).model_dump(mode="json"), indent=2, sort_keys=True)


def loads_algebra(text: str) -> MetricEquivariantAlgebra:
    """Parse algebra.v1 JSON text."""
    try:
        doc = AlgebraDocument.model_validate_json(text)
    except ValidationError as exc:
        raise ParseError(f"Invalid algebra.v1 document: {exc.error_count()} error(s)", {"errors": str(exc)}) from exc
    return algebra_from_document(doc)
