"""
Algebra Pydantic schemas (algebra.v1).
"""

from fractions import Fraction
from typing import List, Literal, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator

RationalMatrix = List[List[str]]


def _check_rational(v: str) -> str:
    try:
        Fraction(v.strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"Invalid rational literal: {v!r}")
    return v.strip()


def _check_matrix(rows: RationalMatrix, n: int, name: str) -> None:
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ValueError(f"{name} must be a {n}x{n} matrix")


class AlgebraDocument(BaseModel):
    """Schema for a metric equivariant algebra; rationals are "p/q" strings."""
    format: Literal["algebra.v1"] = "algebra.v1"
    dim: int = Field(..., ge=0)
    labels: List[str]
    bracket: List[Tuple[int, int, List[str]]] = Field(
        default_factory=list, description="Entries [i, j, coeffs] for i < j with nonzero [e_i, e_j]"
    )
    gram: RationalMatrix
    D: RationalMatrix
    theta: RationalMatrix
    weak: bool = False

    @field_validator("gram", "D", "theta")
    @classmethod
    def validate_entries(cls, v: RationalMatrix) -> RationalMatrix:
        return [[_check_rational(x) for x in row] for row in v]

    @field_validator("bracket")
    @classmethod
    def validate_bracket(cls, v: List[Tuple[int, int, List[str]]]) -> List[Tuple[int, int, List[str]]]:
        out = []
        for i, j, coeffs in v:
            if i >= j:
                raise ValueError(f"Bracket entries must satisfy i < j, got ({i}, {j})")
            out.append((i, j, [_check_rational(c) for c in coeffs]))
        return out

    @model_validator(mode="after")
    def validate_shapes(self) -> "AlgebraDocument":
        n = self.dim
        if len(self.labels) != n:
            raise ValueError("labels must have dim entries")
        for name in ("gram", "D", "theta"):
            _check_matrix(getattr(self, name), n, name)
        for i, j, coeffs in self.bracket:
            if j >= n or len(coeffs) != n:
                raise ValueError(f"Bracket entry ({i}, {j}) does not match dim {n}")
        return self
