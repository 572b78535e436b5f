"""
Quadratic extension Pydantic schemas (quadext.v1).
"""

from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator

from app.schemas.algebra import _check_rational

FormEntry = Tuple[List[int], List[str]]


class FormDocument(BaseModel):
    """Alternating form: entries [indices, values] with strictly increasing indices."""
    degree: int = Field(..., ge=0)
    dim_l: int = Field(..., ge=0)
    dim_target: int = Field(1, ge=0)
    entries: List[FormEntry] = Field(default_factory=list)

    @field_validator("entries")
    @classmethod
    def validate_entries(cls, v: List[FormEntry]) -> List[FormEntry]:
        return [(list(idx), [_check_rational(x) for x in values]) for idx, values in v]

    @model_validator(mode="after")
    def validate_shapes(self) -> "FormDocument":
        seen = set()
        for idx, values in self.entries:
            if len(idx) != self.degree or len(values) != self.dim_target:
                raise ValueError(f"Form entry {idx} does not match degree {self.degree} and target {self.dim_target}")
            if any(i < 0 or i >= self.dim_l for i in idx):
                raise ValueError(f"Form entry {idx} out of range for dim {self.dim_l}")
            if any(a >= b for a, b in zip(idx, idx[1:])):
                raise ValueError(f"Form entry indices must be strictly increasing, got {idx}")
            if tuple(idx) in seen:
                raise ValueError(f"Duplicate form entry {idx}")
            seen.add(tuple(idx))
        return self


class CocycleDocument(BaseModel):
    """Schema for a quadratic cocycle (alpha, gamma) on l with values in a."""
    format: Literal["quadext.v1"] = "quadext.v1"
    kind: Literal["cocycle"] = "cocycle"
    descriptor: Optional[str] = None
    l_labels: List[str]
    a_labels: List[str]
    alpha: FormDocument
    gamma: FormDocument

    @model_validator(mode="after")
    def validate_shapes(self) -> "CocycleDocument":
        n, m = len(self.l_labels), len(self.a_labels)
        if (self.alpha.degree, self.alpha.dim_l, self.alpha.dim_target) != (2, n, m):
            raise ValueError(f"alpha must be a 2-form on dim {n} with values in dim {m}")
        if (self.gamma.degree, self.gamma.dim_l, self.gamma.dim_target) != (3, n, 1):
            raise ValueError(f"gamma must be a scalar 3-form on dim {n}")
        return self


class ConditionEntry(BaseModel):
    name: str
    status: Literal["pass", "fail", "unsupported", "undecided"]
    detail: str = ""


class BalancedCertificateDocument(BaseModel):
    """Outcome of the balanced and fullness conditions for one cocycle."""
    format: Literal["quadext.v1"] = "quadext.v1"
    kind: Literal["balanced-certificate"] = "balanced-certificate"
    descriptor: Optional[str] = None
    conditions: List[ConditionEntry] = Field(default_factory=list)
    balanced: bool

    @field_validator("conditions")
    @classmethod
    def validate_unique(cls, v: List[ConditionEntry]) -> List[ConditionEntry]:
        names = [c.name for c in v]
        if len(set(names)) != len(names):
            raise ValueError("Condition names must be unique")
        return v
