"""
Weak extension Pydantic schemas (weakext.v1).

Two documents share the format tag and are told apart by ``kind``: an
explicit R-valued 2-form omega on a base algebra, or a classifier datum
on a catalog descriptor.
"""

from typing import Annotated, List, Literal, Optional, Union

from pydantic import BaseModel, Field, field_validator, model_validator

from app.schemas.algebra import AlgebraDocument, RationalMatrix, _check_rational
from app.schemas.quadext import FormDocument


class OmegaDocument(BaseModel):
    """CentralExtensionDatum: base (descriptor or inline algebra), dim R and omega."""
    format: Literal["weakext.v1"] = "weakext.v1"
    kind: Literal["omega"] = "omega"
    descriptor: Optional[str] = None
    base: Optional[AlgebraDocument] = None
    r_dim: int = Field(..., ge=0)
    omega: FormDocument

    @model_validator(mode="after")
    def validate_base(self) -> "OmegaDocument":
        if (self.descriptor is None) == (self.base is None):
            raise ValueError("Give exactly one of descriptor and base")
        if self.omega.degree != 2 or self.omega.dim_target != self.r_dim:
            raise ValueError(f"omega must be a 2-form with values in dim {self.r_dim}")
        if self.base is not None and self.omega.dim_l != self.base.dim:
            raise ValueError("omega does not match the base dimension")
        return self


class ClassifierDocument(BaseModel):
    """ClassifierDatum on a catalog descriptor; ``gram`` defaults to the descriptor's (a0)_- form."""
    format: Literal["weakext.v1"] = "weakext.v1"
    kind: Literal["classifier"] = "classifier"
    descriptor: str
    shape: Literal["riemann-B", "lorentz-rBeta", "lorentz-B1B2B"]
    r_dim: int = Field(..., ge=0)
    B: List[RationalMatrix] = Field(default_factory=list)
    gram: Optional[RationalMatrix] = None
    r0: Optional[List[str]] = None
    eta: Optional[RationalMatrix] = None
    B1: List[RationalMatrix] = Field(default_factory=list)
    B2: List[RationalMatrix] = Field(default_factory=list)

    @field_validator("B", "B1", "B2")
    @classmethod
    def validate_matrices(cls, v: List[RationalMatrix]) -> List[RationalMatrix]:
        return [[[_check_rational(x) for x in row] for row in M] for M in v]

    @field_validator("gram", "eta")
    @classmethod
    def validate_matrix(cls, v: Optional[RationalMatrix]) -> Optional[RationalMatrix]:
        if v is None:
            return v
        return [[_check_rational(x) for x in row] for row in v]

    @field_validator("r0")
    @classmethod
    def validate_vector(cls, v: Optional[List[str]]) -> Optional[List[str]]:
        return None if v is None else [_check_rational(x) for x in v]

    @model_validator(mode="after")
    def validate_counts(self) -> "ClassifierDocument":
        if len(self.B) != self.r_dim:
            raise ValueError(f"B needs {self.r_dim} matrices")
        if self.r0 is not None and len(self.r0) != self.r_dim:
            raise ValueError(f"r0 needs {self.r_dim} entries")
        return self


WeakextDocument = Annotated[Union[OmegaDocument, ClassifierDocument], Field(discriminator="kind")]
