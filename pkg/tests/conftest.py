"""
Pytest configuration and fixtures.
"""

import json
from pathlib import Path
from typing import Callable, Dict, List, Tuple

import numpy as np
import pytest
from hypothesis import settings as hypothesis_settings

from app.core.config import override_settings
from app.main import main
from app.services.liecore.algebra import EquivariantLieData, MetricEquivariantAlgebra
from app.services.liecore.standard import heisenberg, sl2, su2
from app.services.quadext.catalog import CatalogDescriptor, build_catalog_entry, catalog

hypothesis_settings.register_profile("triples", max_examples=25, deadline=None)
hypothesis_settings.load_profile("triples")


@pytest.fixture(autouse=True)
def quiet_settings():
    """Keep log output to warnings during tests."""
    with override_settings(log_level="WARNING"):
        yield


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator for probe points."""
    return np.random.default_rng(0)


@pytest.fixture(params=["su2", "sl2", "heisenberg"])
def small_algebra(request) -> EquivariantLieData:
    """The three-dimensional algebras used as l in the catalog."""
    return {"su2": su2, "sl2": sl2, "heisenberg": heisenberg}[request.param]()


@pytest.fixture
def descriptor() -> Callable[[str], CatalogDescriptor]:
    return CatalogDescriptor.parse


@pytest.fixture
def entry() -> Callable[[str], MetricEquivariantAlgebra]:
    """Build a catalog entry from a descriptor id."""

    def build(text: str) -> MetricEquivariantAlgebra:
        return build_catalog_entry(CatalogDescriptor.parse(text))

    return build


@pytest.fixture
def triple_data() -> Callable[[str], Tuple]:
    """(l, a, z) of a catalog entry."""

    def build(text: str) -> Tuple:
        return catalog(CatalogDescriptor.parse(text))

    return build


@pytest.fixture
def cli(capsys) -> Callable[..., Tuple[int, str, str]]:
    """Run the command line and return (exit code, stdout, stderr)."""

    def run(*argv: str) -> Tuple[int, str, str]:
        code = main(list(argv))
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return run


@pytest.fixture
def run_report(cli) -> Callable[..., Tuple[int, Dict]]:
    """Run a reporting subcommand and parse its JSON."""

    def run(*argv: str) -> Tuple[int, Dict]:
        code, out, _ = cli(*argv)
        return code, json.loads(out)

    return run


def statuses(report: Dict) -> Dict[str, str]:
    return {check["name"]: check["status"] for check in report["checks"]}


def write_json(path: Path, document: Dict) -> Path:
    path.write_text(json.dumps(document), encoding="utf-8")
    return path


SIMPLE_CASES: List[str] = [
    "tfull-4:k=0,l=0,m=1:c=0",
    "tfull-4:k=1,l=1,m=0:c=1/2",
    "tfull-5:k=1,l=0,m=0:c=0",
    "tfull-5:k=0,l=1,m=1:c=-2",
]
