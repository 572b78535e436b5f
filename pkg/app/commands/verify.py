"""
verify subcommand: axioms, triple conditions, cocycle, balanced and fullness checks.
"""

import argparse
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple

from app.commands.common import emit, guarded, is_file_input, read_json
from app.core.exceptions import ParseError, TripleError
from app.core.logging import get_logger
from app.schemas.algebra import AlgebraDocument
from app.services.checks import CheckStatus
from app.services.liecore.algebra import EquivariantLieData, MetricEquivariantAlgebra
from app.services.liecore.axioms import is_extrinsic_triple, is_full, verify_algebra
from app.services.liecore.io import algebra_from_document
from app.services.liecore.structure import signature_report
from app.services.quadext.balanced import balanced_check, fullness_t1_t2
from app.services.quadext.catalog import CatalogDescriptor, catalog
from app.services.quadext.cochains import QuadraticCocycle, is_cocycle
from app.services.quadext.extension import build_extension
from app.services.quadext.io import cocycle_from_document, loads_cocycle
from app.services.quadext.module import OrthogonalModuleData, verify_module
from app.services.report import ReportBuilder

logger = get_logger(__name__)

Triple = Tuple[EquivariantLieData, OrthogonalModuleData, QuadraticCocycle]


@dataclass
class VerifyTarget:
    """Algebra to verify, with its (l, a, z) data when the input carries it."""

    label: str
    algebra: MetricEquivariantAlgebra
    data: Optional[Triple] = None


def _from_cocycle_file(path: Path) -> VerifyTarget:
    doc = loads_cocycle(path.read_text(encoding="utf-8"))
    if doc.descriptor is None:
        raise ParseError("A quadext.v1 cocycle needs a descriptor naming its (l, a)")
    desc = CatalogDescriptor.parse(doc.descriptor)
    l, a, _ = catalog(desc)
    if tuple(doc.l_labels) != l.labels or tuple(doc.a_labels) != a.labels:
        raise ParseError(f"Cocycle labels do not match descriptor {desc.id}")
    z = cocycle_from_document(doc)
    # broken cocycles are assembled as given so the axiom checks can report them
    g = build_extension(l, a, z, check=False)
    return VerifyTarget(f"{path}", g, (l, a, z))


def load_target(text: str) -> VerifyTarget:
    """Descriptor id, algebra.v1 file or quadext.v1 cocycle file."""
    if not is_file_input(text):
        desc = CatalogDescriptor.parse(text)
        l, a, z = catalog(desc)
        return VerifyTarget(desc.id, build_extension(l, a, z, check=False), (l, a, z))

    path = Path(text)
    data = read_json(path)
    fmt = data.get("format")
    if fmt == "algebra.v1":
        try:
            doc = AlgebraDocument.model_validate(data)
        except ValueError as exc:
            raise ParseError(f"Invalid algebra.v1 document {path}", {"reason": str(exc)}) from exc
        return VerifyTarget(str(path), algebra_from_document(doc))
    if fmt == "quadext.v1":
        return _from_cocycle_file(path)
    raise ParseError(f"Unknown document format {fmt!r} in {path}")


def verify_target(target: VerifyTarget) -> ReportBuilder:
    builder = ReportBuilder("verify", target.label)
    g = target.algebra

    builder.add(verify_algebra(g), prefix="algebra.")
    guarded(builder, "triple.extrinsic", lambda: builder.span("triple.extrinsic", is_extrinsic_triple(g)))
    guarded(builder, "triple.full", lambda: builder.span("triple.full", is_full(g)))

    if target.data is None:
        reason = "algebra.v1 input carries no (l, a, z) split"
        builder.mark("balanced", CheckStatus.UNSUPPORTED, reason)
        builder.mark("fullness", CheckStatus.UNSUPPORTED, reason)
    else:
        l, a, z = target.data
        builder.add(verify_module(l, a))
        builder.add(is_cocycle(z, l, a))

        def balanced() -> None:
            builder.add(balanced_check(l, a, z))

        def fullness() -> None:
            t1, t2 = fullness_t1_t2(l, a, z)
            builder.span("fullness.T1", t1)
            builder.span("fullness.T2", t2)

        guarded(builder, "balanced", balanced)
        guarded(builder, "fullness", fullness)

    try:
        builder.artifact("signatures", {k: list(v) for k, v in signature_report(g).items()})
    except TripleError as exc:
        logger.debug("Signature report skipped", error=str(exc))
    builder.artifact("dim", g.dim)
    return builder


def run_verify(args: argparse.Namespace) -> int:
    target = load_target(args.input)
    return emit(verify_target(target).build(), args)


def register(subparsers: argparse._SubParsersAction, parents: List[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("verify", parents=parents, help="Run the verification suite")
    parser.add_argument("input", help="Descriptor id, algebra.v1 file or quadext.v1 cocycle file")
    parser.set_defaults(handler=run_verify)
