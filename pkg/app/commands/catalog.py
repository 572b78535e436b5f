"""
catalog and build subcommands.
"""

import argparse
import json
import sys
from typing import Any, Dict, List

from app.commands.common import emit, write_text
from app.core.logging import get_logger
from app.services.liecore.io import dumps_algebra
from app.services.quadext.catalog import CatalogDescriptor, catalog
from app.services.quadext.extension import build_extension
from app.services.quadext.io import cocycle_to_document, dumps_cocycle
from app.services.quadext.registry import CatalogRegistry
from app.services.report import ReportBuilder

logger = get_logger(__name__)


def catalog_listing(prefix: str = "") -> Dict[str, Any]:
    """Families matching ``prefix`` with their cases, descriptor ids and dimensions."""
    entries: List[Dict[str, Any]] = []
    for info in CatalogRegistry.filter(prefix):
        cases = []
        for case in info["cases"]:
            desc = CatalogDescriptor(case)
            cases.append({"case": case, "descriptor": desc.id, "dims": desc.dims()})
        entries.append(
            {
                "family": info["name"],
                "description": info["description"],
                "parameters": info["parameters"],
                "cases": cases,
            }
        )
    return {"format": "catalog.v1", "filter": prefix, "entries": entries}


def run_catalog(args: argparse.Namespace) -> int:
    listing = catalog_listing(args.filter or "")
    if args.text:
        for entry in listing["entries"]:
            ids = ", ".join(c["descriptor"] for c in entry["cases"])
            sys.stdout.write(f"{entry['family']}: {entry['description']} [{ids}]\n")
    else:
        sys.stdout.write(json.dumps(listing, sort_keys=True, indent=2) + "\n")
    return 0


def run_build(args: argparse.Namespace) -> int:
    """Write the algebra.v1 document of a descriptor, or its quadext.v1 cocycle with --cocycle."""
    desc = CatalogDescriptor.parse(args.descriptor)
    l, a, z = catalog(desc)
    if args.cocycle:
        text = dumps_cocycle(cocycle_to_document(z, l.labels, a.labels, descriptor=desc.id)) + "\n"
    else:
        g = build_extension(l, a, z)
        text = dumps_algebra(g) + "\n"
    path = write_text(args.out, text)
    if path is None:
        return 0

    builder = ReportBuilder("build", desc.id)
    builder.artifact("path", str(path))
    builder.artifact("kind", "quadext.v1" if args.cocycle else "algebra.v1")
    builder.artifact("dims", desc.dims())
    builder.run_logger.log_build({"descriptor": desc.id, "path": str(path)})
    return emit(builder.build(), args)


def register(subparsers: argparse._SubParsersAction, parents: List[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("catalog", parents=parents, help="List catalog families")
    parser.add_argument("filter", nargs="?", default="", help="Family prefix, e.g. tfull-4")
    parser.set_defaults(handler=run_catalog)

    parser = subparsers.add_parser("build", parents=parents, help="Build a catalog entry as algebra.v1 JSON")
    parser.add_argument("descriptor", help="Descriptor id, e.g. tfull-4:k=1,l=0,m=2:c=1/2:a0=0")
    parser.add_argument("--cocycle", action="store_true", help="Emit the quadext.v1 cocycle instead")
    parser.set_defaults(handler=run_build)
