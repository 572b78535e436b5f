"""
Radical filtration R_0 = g ⊃ R_1 ⊃ ... ⊃ 0 for the algebra classes met in the catalog.
"""

from dataclasses import dataclass, field
from typing import List

from app.core.exceptions import FiltrationUnsupportedError
from app.core.logging import get_logger
from app.services.liecore.algebra import LieAlgebra
from app.services.liecore.structure import (
    center,
    derived_algebra,
    killing_form,
    killing_form_on,
    lower_central_series,
)
from app.utils.exactlin import Mat, contains, intersection, is_nondegenerate

logger = get_logger(__name__)


@dataclass(frozen=True)
class Filtration:
    """Decreasing chain of ideals with one certificate line per step."""
    kind: str
    ideals: List[Mat]
    certificates: List[str] = field(default_factory=list)

    @property
    def length(self) -> int:
        """m with R_{m+1} = 0."""
        return len(self.ideals) - 2

    def term(self, k: int) -> Mat:
        if k < len(self.ideals):
            return self.ideals[k]
        return self.ideals[-1]


def classify(g: LieAlgebra) -> str:
    """One of abelian, semisimple, nilpotent, reductive, other."""
    if g.dim == 0 or g.is_abelian():
        return "abelian"
    if is_nondegenerate(killing_form(g)):
        return "semisimple"
    series = lower_central_series(g)
    if series[-1].cols == 0:
        return "nilpotent"
    z = center(g)
    derived = derived_algebra(g)
    if (
        z.cols + derived.cols == g.dim
        and intersection(z, derived).cols == 0
        and is_nondegenerate(killing_form_on(g, derived))
    ):
        return "reductive"
    return "other"


def radical_filtration(g: LieAlgebra) -> Filtration:
    """Smallest ideals R_k ⊂ R_{k-1} with semisimple quotient module R_{k-1}/R_k."""
    kind = classify(g)
    n = g.dim
    full = Mat.identity(n)
    zero = Mat.zero(n, 0)

    if kind == "abelian":
        certs = ["g/0 is a trivial module"]
        ideals = [full, zero]
    elif kind == "semisimple":
        certs = ["Killing form nondegenerate: every g-module is semisimple"]
        ideals = [full, zero]
    elif kind == "reductive":
        certs = ["g = z ⊕ [g,g] with nondegenerate Killing form on [g,g]"]
        ideals = [full, zero]
    elif kind == "nilpotent":
        # semisimple modules of a nilpotent algebra are trivial, so R_k = [g, R_{k-1}]
        ideals = lower_central_series(g)
        certs = []
        for k in range(1, len(ideals)):
            acted = g.bracket_span(full, ideals[k - 1])
            if not contains(ideals[k], acted):
                raise FiltrationUnsupportedError("Lower central series failed its own certificate")
            certs.append(f"[g, R_{k - 1}] ⊆ R_{k}; R_{k - 1}/R_{k} is a trivial module")
    else:
        raise FiltrationUnsupportedError(
            "Radical filtration is implemented for abelian, nilpotent, semisimple and reductive algebras",
            {"dim": n},
        )

    logger.debug("Radical filtration computed", kind=kind, dims=[I.cols for I in ideals])
    return Filtration(kind=kind, ideals=ideals, certificates=certs)


def socle(g: LieAlgebra) -> Mat:
    """Maximal semisimple submodule of the adjoint module.

    Implemented for nilpotent algebras, where it is the center.
    """
    kind = classify(g)
    if kind in ("abelian", "nilpotent"):
        return center(g)
    if kind in ("semisimple", "reductive"):
        return Mat.identity(g.dim)
    raise FiltrationUnsupportedError(f"Socle not implemented for {kind} algebras")


def filtration_dims(f: Filtration) -> List[int]:
    return [I.cols for I in f.ideals]
