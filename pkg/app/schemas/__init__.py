"""
Pydantic schemas for the JSON documents read and written by the toolkit.
"""

from .algebra import AlgebraDocument
from .quadext import BalancedCertificateDocument, CocycleDocument, ConditionEntry, FormDocument
from .report import CheckEntry, ReportSummary, ReportSummaryEntry, RunReport
from .weakext import ClassifierDocument, OmegaDocument, WeakextDocument

__all__ = [
    # algebra.v1
    "AlgebraDocument",

    # quadext.v1
    "FormDocument", "CocycleDocument", "ConditionEntry", "BalancedCertificateDocument",

    # weakext.v1
    "OmegaDocument", "ClassifierDocument", "WeakextDocument",

    # report.v1
    "CheckEntry", "RunReport", "ReportSummaryEntry", "ReportSummary",
]
