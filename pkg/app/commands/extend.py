"""
extend subcommand: weak extensions from an omega document, a classifier
datum or classifier matrices given on the command line.
"""

import argparse
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

from app.commands.common import emit, guarded, is_file_input, parse_matrix, parse_vector, write_text
from app.core.exceptions import TripleError, UsageError
from app.core.logging import get_logger
from app.schemas.weakext import OmegaDocument
from app.services.checks import CheckStatus
from app.services.liecore.axioms import verify_algebra
from app.services.liecore.io import dumps_algebra
from app.services.quadext.catalog import CatalogDescriptor, build_catalog_entry
from app.services.report import ReportBuilder
from app.services.weakext.central import CentralExtensionDatum, central_extension
from app.services.weakext.classifier import (
    R_BETA,
    ClassifierDatum,
    classifier_layout,
    classify_omega,
    is_indecomposable_datum,
    pencil_normal_form,
    realize_classifier,
    shape_for_case,
)
from app.services.weakext.derivations import out_and_h2
from app.services.weakext.io import classifier_from_document, loads_weakext, omega_from_document
from app.utils.exactlin import Mat

logger = get_logger(__name__)


@dataclass
class ExtensionInput:
    label: str
    datum: CentralExtensionDatum
    descriptor: Optional[CatalogDescriptor] = None
    classifier: Optional[ClassifierDatum] = None


def classifier_from_flags(desc: CatalogDescriptor, args: argparse.Namespace) -> ClassifierDatum:
    """Datum of the descriptor's shape from --B, --r0 and --eta."""
    gram = classifier_layout(desc).gram
    B = [parse_matrix(text) for text in args.B or []]
    if shape_for_case(desc.case_id) == R_BETA:
        r0 = parse_vector(args.r0) if args.r0 else [0] * len(B)
        eta = parse_matrix(args.eta) if args.eta else Mat.zero(gram.rows, len(B))
        return ClassifierDatum.lorentz_r_beta(r0, B, eta, gram)
    if args.r0 or args.eta:
        raise UsageError(f"Case {desc.case_id} takes B only")
    return ClassifierDatum.riemann(B, gram)


def load_input(args: argparse.Namespace) -> ExtensionInput:
    if is_file_input(args.input):
        doc = loads_weakext(Path(args.input).read_text(encoding="utf-8"))
        if isinstance(doc, OmegaDocument):
            desc = CatalogDescriptor.parse(doc.descriptor) if doc.descriptor else None
            return ExtensionInput(args.input, omega_from_document(doc), desc)
        desc, classifier = classifier_from_document(doc)
        realized = realize_classifier(desc, classifier)
        return ExtensionInput(args.input, realized.extension, desc, classifier)

    desc = CatalogDescriptor.parse(args.input)
    if not (args.B or args.r0 or args.eta):
        base = build_catalog_entry(desc)
        return ExtensionInput(desc.id, CentralExtensionDatum.zero(base, args.r_dim), desc)
    classifier = classifier_from_flags(desc, args)
    realized = realize_classifier(desc, classifier)
    return ExtensionInput(desc.id, realized.extension, desc, classifier)


def _decomposability(builder: ReportBuilder, data: ExtensionInput) -> None:
    classifier = data.classifier
    if classifier is None:
        if data.descriptor is None:
            builder.mark("extension.indecomposable", CheckStatus.UNSUPPORTED, "base is not a catalog entry")
            return
        classifier = classify_omega(data.descriptor, data.datum.omega)

    result = is_indecomposable_datum(classifier)
    detail = f"{result.method}, {result.candidates_tried} candidate splittings"
    if result.indecomposable is None:
        builder.mark("extension.indecomposable", CheckStatus.UNDECIDED, detail)
    else:
        witness = result.witness.describe() if result.witness is not None else {}
        builder.record("extension.indecomposable", result.indecomposable, detail, witness=witness)

    if classifier.r_dim == 1:
        try:
            builder.artifact("normal_form", pencil_normal_form(classifier.B[0], classifier.gram).describe())
        except TripleError as exc:
            logger.debug("Normal form skipped", reason=exc.message)


def run_extend(args: argparse.Namespace) -> int:
    data = load_input(args)
    builder = ReportBuilder("extend", data.label)

    cohomology = out_and_h2(data.datum.base, data.datum.r_dim)
    builder.artifact("h2", {"out_dim": cohomology.out_dim, "r_dim": cohomology.r_dim, "dim": cohomology.dim})

    result = central_extension(data.datum)
    builder.add(result.checks)
    builder.add(verify_algebra(result.algebra), prefix="algebra.")
    builder.record("extension.full", result.full, "" if result.full else "omega(Ker [,]) is a proper subspace of R")
    guarded(builder, "extension.indecomposable", lambda: _decomposability(builder, data))

    if args.out is not None:
        path = write_text(args.out, dumps_algebra(result.algebra) + "\n")
        builder.artifact("path", str(path))
    builder.artifact("dim", result.algebra.dim)
    return emit(builder.build(), args)


def register(subparsers: argparse._SubParsersAction, parents: List[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("extend", parents=parents, help="Build a weak extension")
    parser.add_argument("input", help="weakext.v1 file or descriptor id")
    parser.add_argument("--B", action="append", help="Classifier matrix per R-basis vector, e.g. '1,0;0,3'")
    parser.add_argument("--r0", help="r0 entries for cases 2a, 2b and 3, comma separated")
    parser.add_argument("--eta", help="eta matrix (n0 x r) for cases 2a, 2b and 3")
    parser.add_argument("--r-dim", type=int, default=1, help="dim R for omega = 0 (default: 1)")
    parser.set_defaults(handler=run_extend)
