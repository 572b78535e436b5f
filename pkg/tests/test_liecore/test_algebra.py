"""
Tests for Lie algebra data, axioms, grading and filtrations.
"""

import pytest

from app.core.exceptions import ParseError, PreconditionError, UsageError
from app.services.geom.embeddings import item_for_descriptor
from app.services.liecore.algebra import MetricEquivariantAlgebra, direct_sum, structure_from_brackets
from app.services.liecore.axioms import is_extrinsic_triple, is_full, split_check, verify_algebra
from app.services.liecore.filtration import classify, filtration_dims, radical_filtration, socle
from app.services.liecore.grading import grade, is_h_graded
from app.services.liecore.io import dumps_algebra, loads_algebra
from app.services.liecore.standard import abelian, heisenberg, sl2, su2
from app.services.liecore.structure import center, killing_form, signature_report
from app.services.quadext.catalog import CatalogDescriptor, build_catalog_entry, descriptor_grid
from app.services.quadext.module import verify_module
from app.utils.exactlin import Mat, inertia, is_nondegenerate
from tests.conftest import SIMPLE_CASES

CATALOG = ["tfull-1", "tfull-2a", "tfull-2b", "tfull-3", "tfull-3:a0=1"] + SIMPLE_CASES


def broken_algebra() -> MetricEquivariantAlgebra:
    labels = ("X", "Y", "Z")
    structure = structure_from_brackets(labels, {("X", "Y"): {"X": 1}, ("Y", "Z"): {"Y": 1}})
    return MetricEquivariantAlgebra(labels, structure, gram=Mat.identity(3))


def test_standard_algebras_satisfy_jacobi(small_algebra):
    """Test su(2), sl(2, R) and h(1) have no Jacobi defects."""
    assert small_algebra.jacobi_defects() == []
    assert is_h_graded(small_algebra)


def test_structure_from_brackets_is_antisymmetric():
    """Test both bracket orders are stored with opposite signs."""
    g = heisenberg()
    x, y, z = (g.index(label) for label in ("X", "Y", "Z"))
    assert g.bracket_basis(x, y) == {z: 1}
    assert g.bracket_basis(y, x) == {z: -1}


def test_unknown_label_rejected():
    """Test bracket tables with unknown labels."""
    with pytest.raises(UsageError):
        structure_from_brackets(("X",), {("X", "W"): {"X": 1}})


def test_classify():
    """Test algebra classification."""
    assert classify(su2()) == "semisimple"
    assert classify(sl2()) == "semisimple"
    assert classify(heisenberg()) == "nilpotent"
    assert classify(abelian(2)) == "abelian"


def test_killing_form_signatures():
    """Test the Killing form is definite on su(2) and indefinite on sl(2, R)."""
    assert inertia(killing_form(su2())) == (3, 0, 0)
    neg, zero, pos = inertia(killing_form(sl2()))
    assert zero == 0 and neg and pos


def test_heisenberg_filtration_and_socle():
    """Test R_0 = h(1), R_1 = center, R_2 = 0."""
    g = heisenberg()
    filtration = radical_filtration(g)
    assert filtration.kind == "nilpotent"
    assert filtration_dims(filtration) == [3, 1, 0]
    assert filtration.length == 1
    assert socle(g).cols == 1
    assert center(g).cols == 1


def test_semisimple_filtration_is_trivial():
    """Test semisimple algebras have radical length zero."""
    filtration = radical_filtration(su2())
    assert filtration.length == 0
    assert filtration.certificates


@pytest.mark.parametrize("text", CATALOG)
def test_catalog_entries_pass_axioms(entry, text):
    """Test every axiom holds on catalog entries."""
    checks = verify_algebra(entry(text))
    assert checks.passed, [c.name for c in checks.failed()]
    assert "bracket.jacobi" in checks


@pytest.mark.parametrize("text", CATALOG)
def test_catalog_entries_are_full_triples(entry, text):
    """Test both span conditions on catalog entries."""
    g = entry(text)
    assert is_extrinsic_triple(g).result
    assert is_full(g).result


@pytest.mark.parametrize("text", CATALOG)
def test_grading_covers_algebra(entry, text):
    """Test the four eigenspaces split g."""
    g = entry(text)
    assert sum(grade(g).dims().values()) == g.dim


def test_grading_rejects_non_h_graded():
    """Test D^3 != -D is a precondition failure."""
    g = abelian(1, D=Mat.diag([1]))
    with pytest.raises(PreconditionError):
        grade(g)


def test_broken_jacobi_is_reported():
    """Test a Jacobi defect is a failed check, not an exception."""
    checks = verify_algebra(broken_algebra())
    assert not checks["bracket.jacobi"].passed
    assert "Jacobiator" in checks["bracket.jacobi"].detail


def test_non_invariant_gram_is_reported():
    """Test invariance of the inner product is checked."""
    g = su2()
    bad = MetricEquivariantAlgebra(g.labels, g.structure, g.D, g.theta, gram=Mat.diag([1, 2, 3]))
    checks = verify_algebra(bad)
    assert not checks["gram.invariant"].passed
    assert not checks.passed


def test_extension_signature(entry):
    """Test the extension of su(2) by a4 has signature (3, 0, 7)."""
    g = entry("tfull-4:k=0,l=0,m=1:c=0")
    assert g.dim == 10
    assert is_nondegenerate(g.form)
    assert signature_report(g)["g"] == (3, 0, 7)


@pytest.mark.parametrize("desc", descriptor_grid(1), ids=lambda d: d.id)
def test_tangent_signature_is_lorentzian(desc):
    """Test g-^- of every catalog entry has the signature of its embedded item."""
    neg, pos = item_for_descriptor(desc).signature
    assert signature_report(build_catalog_entry(desc))["tangent"] == (neg, 0, pos)


@pytest.mark.parametrize("text", ["tfull-5:k=0,l=0,m=1:c=0", "tfull-5:k=1,l=1,m=2:c=1"])
def test_standard_module_of_sl2_keeps_one_negative_direction(triple_data, text):
    """Test the a4 summands of case 5 are orthogonal modules and add only positive tangent directions."""
    l, a, _ = triple_data(text)
    assert verify_module(l, a).passed
    desc = CatalogDescriptor.parse(text)
    assert signature_report(build_catalog_entry(desc))["tangent"] == (1, 0, 1 + desc.k + desc.l + desc.m)


def test_direct_sum_splits(entry):
    """Test the block partition of a direct sum is a splitting."""
    g1, g2 = entry("tfull-3"), entry("tfull-2b")
    g = direct_sum(g1, g2)
    assert g.dim == g1.dim + g2.dim
    assert len(set(g.labels)) == g.dim
    assert split_check(g, [range(g1.dim), range(g1.dim, g.dim)])
    assert not split_check(g, [range(g1.dim - 1), range(g1.dim - 1, g.dim)])
    assert is_full(g).result


def test_algebra_json_round_trip(entry):
    """Test algebra.v1 serialization keeps the algebra."""
    g = entry("tfull-4:k=1,l=0,m=0:c=1/3")
    h = loads_algebra(dumps_algebra(g))
    assert h.labels == g.labels
    assert h.form == g.form
    assert h.derivation == g.derivation
    assert all(h.bracket_basis(i, j) == g.bracket_basis(i, j) for i in range(g.dim) for j in range(g.dim))


def test_algebra_json_rejects_garbage():
    """Test malformed algebra.v1 text is a parse error."""
    with pytest.raises(ParseError):
        loads_algebra('{"format": "algebra.v1", "dim": 2}')
