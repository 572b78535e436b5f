"""
Metric equivariant Lie algebras: axioms, grading and radical filtration.
"""

from app.services.liecore.algebra import (
    EquivariantLieData,
    LieAlgebra,
    MetricEquivariantAlgebra,
    direct_sum,
    structure_from_brackets,
)
from app.services.liecore.axioms import (
    SpanCertificate,
    is_extrinsic_triple,
    is_full,
    split_check,
    verify_algebra,
)
from app.services.liecore.filtration import Filtration, radical_filtration
from app.services.liecore.grading import Grading, grade, is_h_graded

__all__ = [
    "EquivariantLieData",
    "LieAlgebra",
    "MetricEquivariantAlgebra",
    "direct_sum",
    "structure_from_brackets",
    "SpanCertificate",
    "is_extrinsic_triple",
    "is_full",
    "split_check",
    "verify_algebra",
    "Filtration",
    "radical_filtration",
    "Grading",
    "grade",
    "is_h_graded",
]
