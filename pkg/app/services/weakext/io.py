"""
weakext.v1 JSON conversion for central extension data and classifier data.
"""

import json
from typing import List, Optional, Tuple, Union

from pydantic import TypeAdapter, ValidationError

from app.core.exceptions import ParseError
from app.schemas.weakext import ClassifierDocument, OmegaDocument, WeakextDocument
from app.services.liecore.io import algebra_from_document, algebra_to_document
from app.services.quadext.catalog import CatalogDescriptor, build_catalog_entry
from app.services.quadext.io import form_from_document, form_to_document
from app.services.weakext.central import CentralExtensionDatum
from app.services.weakext.classifier import B1B2B, R_BETA, ClassifierDatum, classifier_layout
from app.utils.exactlin import Mat, format_scalar, to_scalar

_adapter: TypeAdapter = TypeAdapter(WeakextDocument)


def _strings(M: Mat) -> List[List[str]]:
    return [[format_scalar(v) for v in M.row(i)] for i in range(M.rows)]


def _matrix(rows: List[List[str]], cols: int = 0) -> Mat:
    return Mat.from_rows([[to_scalar(v) for v in row] for row in rows], cols)


def omega_to_document(datum: CentralExtensionDatum, descriptor: Optional[str] = None) -> OmegaDocument:
    """Reference a catalog base by descriptor when given, otherwise inline it."""
    return OmegaDocument(
        descriptor=descriptor,
        base=None if descriptor else algebra_to_document(datum.base),
        r_dim=datum.r_dim,
        omega=form_to_document(datum.omega),
    )


def omega_from_document(doc: OmegaDocument) -> CentralExtensionDatum:
    if doc.descriptor is not None:
        base = build_catalog_entry(CatalogDescriptor.parse(doc.descriptor))
    else:
        assert doc.base is not None
        base = algebra_from_document(doc.base)
    return CentralExtensionDatum(base, doc.r_dim, form_from_document(doc.omega))


def classifier_to_document(datum: ClassifierDatum, descriptor: str) -> ClassifierDocument:
    return ClassifierDocument(
        descriptor=descriptor,
        shape=datum.shape,
        r_dim=datum.r_dim,
        B=[_strings(b) for b in datum.B],
        gram=_strings(datum.gram),
        r0=[format_scalar(v) for v in datum.r0.vector()] if datum.r0 is not None else None,
        eta=_strings(datum.eta) if datum.eta is not None else None,
        B1=[_strings(b) for b in datum.B1],
        B2=[_strings(b) for b in datum.B2],
    )


def classifier_from_document(doc: ClassifierDocument) -> Tuple[CatalogDescriptor, ClassifierDatum]:
    """Descriptor and datum; a missing gram is taken from the descriptor's (a0)_-."""
    desc = CatalogDescriptor.parse(doc.descriptor)
    if doc.gram is not None:
        gram = _matrix(doc.gram)
    else:
        gram = classifier_layout(desc).gram
    n0 = gram.rows
    B = tuple(_matrix(b, n0) for b in doc.B)
    if doc.shape == R_BETA:
        r0 = [to_scalar(v) for v in doc.r0 or []]
        eta = _matrix(doc.eta, doc.r_dim) if doc.eta is not None else Mat.zero(n0, doc.r_dim)
        return desc, ClassifierDatum.lorentz_r_beta(r0, B, eta, gram)
    if doc.shape == B1B2B:
        B1 = [_matrix(b) for b in doc.B1]
        B2 = [_matrix(b) for b in doc.B2]
        return desc, ClassifierDatum.lorentz_b1b2b(B1, B2, B, gram)
    return desc, ClassifierDatum.riemann(B, gram)


def loads_weakext(text: str) -> Union[OmegaDocument, ClassifierDocument]:
    """Parse weakext.v1 JSON text into the omega or classifier document."""
    try:
        return _adapter.validate_json(text)
    except ValidationError as exc:
        raise ParseError(f"Invalid weakext.v1 document: {exc.error_count()} error(s)", {"errors": str(exc)}) from exc


def dumps_weakext(doc: Union[OmegaDocument, ClassifierDocument]) -> str:
    return json.dumps(doc.model_dump(mode="json"), indent=2, sort_keys=True)
