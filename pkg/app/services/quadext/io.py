"""
quadext.v1 JSON conversion for forms, cocycles and balanced certificates.
"""

import json
from typing import Optional, Sequence

from pydantic import ValidationError

from app.core.exceptions import ParseError
from app.schemas.quadext import BalancedCertificateDocument, CocycleDocument, ConditionEntry, FormDocument
from app.services.checks import CheckList
from app.services.quadext.cochains import QuadraticCocycle
from app.services.quadext.forms import Form
from app.utils.exactlin import format_scalar, to_scalar


def form_to_document(form: Form) -> FormDocument:
    entries = [
        (list(key), [format_scalar(v) for v in value]) for key, value in sorted(form.values.items())
    ]
    return FormDocument(degree=form.degree, dim_l=form.dim_l, dim_target=form.dim_target, entries=entries)


def form_from_document(doc: FormDocument) -> Form:
    values = {tuple(idx): tuple(to_scalar(v) for v in vals) for idx, vals in doc.entries}
    return Form(doc.degree, doc.dim_l, doc.dim_target, values)


def cocycle_to_document(
    z: QuadraticCocycle,
    l_labels: Sequence[str],
    a_labels: Sequence[str],
    descriptor: Optional[str] = None,
) -> CocycleDocument:
    return CocycleDocument(
        descriptor=descriptor,
        l_labels=list(l_labels),
        a_labels=list(a_labels),
        alpha=form_to_document(z.alpha),
        gamma=form_to_document(z.gamma),
    )


def cocycle_from_document(doc: CocycleDocument) -> QuadraticCocycle:
    return QuadraticCocycle(form_from_document(doc.alpha), form_from_document(doc.gamma))


def certificate_document(checks: CheckList, descriptor: Optional[str] = None) -> BalancedCertificateDocument:
    """Balanced and fullness conditions as a certificate; the cocycle is balanced iff none failed."""
    conditions = [ConditionEntry(name=c.name, status=c.status.value, detail=c.detail) for c in checks]
    return BalancedCertificateDocument(descriptor=descriptor, conditions=conditions, balanced=checks.passed)


def dumps_cocycle(doc: CocycleDocument) -> str:
    return json.dumps(doc.model_dump(mode="json"), indent=2, sort_keys=True)


def loads_cocycle(text: str) -> CocycleDocument:
    """Parse quadext.v1 cocycle JSON text."""
    try:
        return CocycleDocument.model_validate_json(text)
    except ValidationError as exc:
        raise ParseError(f"Invalid quadext.v1 document: {exc.error_count()} error(s)", {"errors": str(exc)}) from exc
