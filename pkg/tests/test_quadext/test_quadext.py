"""
Tests for forms, cocycles, quadratic extensions and the balanced conditions.
"""

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from app.core.exceptions import ParseError, PreconditionError, UsageError
from app.services.liecore.standard import heisenberg, rotation_plane
from app.services.quadext.balanced import balanced_check, balanced_summary, fullness_t1_t2
from app.services.quadext.catalog import CatalogDescriptor, catalog, descriptor_grid
from app.services.quadext.cochains import (
    QuadraticCochain,
    QuadraticCocycle,
    class_witness_check,
    cochain_inv,
    cochain_mul,
    cocycle_act,
    is_cocycle,
    random_invariant_cochain,
)
from app.services.quadext.extension import build_extension, extension_labels
from app.services.quadext.forms import Form, ce_differential, invariant_form_basis
from app.services.quadext.io import (
    cocycle_from_document,
    cocycle_to_document,
    dumps_cocycle,
    loads_cocycle,
)
from app.services.quadext.module import module_semisimple, trivial_module, verify_module
from app.services.quadext.registry import CatalogRegistry
from app.utils.exactlin import Mat
from tests.conftest import SIMPLE_CASES


def tampered_case_four():
    """Case 4 with k = 1 and alpha(X, Y) = a3_1X."""
    desc = CatalogDescriptor.parse("tfull-4:k=1,l=0,m=0:c=0")
    l, a, z = catalog(desc)
    alpha = Form.from_entries(2, l.dim, a.dim, {(0, 1): [1, 0, 0]})
    return l, a, QuadraticCocycle(alpha, z.gamma)


def test_descriptor_parse_and_id():
    """Test descriptor ids are canonical."""
    desc = CatalogDescriptor.parse("tfull-4:k=1,m=2:c=1/2")
    assert (desc.k, desc.l, desc.m, desc.c) == (1, 0, 2, Fraction(1, 2))
    assert desc.id == "tfull-4:k=1,l=0,m=2:c=1/2:a0=0"
    assert CatalogDescriptor.parse(desc.id) == desc
    assert CatalogDescriptor.parse("tfull-3").id == "tfull-3"
    assert desc.dims() == {"l": 3, "a": 11, "g": 17}


@pytest.mark.parametrize("text", ["tfull-6", "triple-1", "tfull-4:k=x", "tfull-4:q=1", "tfull-4:k=1,k=2"])
def test_descriptor_parse_errors(text):
    """Test malformed descriptors are parse errors."""
    with pytest.raises(ParseError):
        CatalogDescriptor.parse(text)


def test_descriptor_rejects_parameters_on_small_cases():
    """Test k, l, m and c only apply to cases 4 and 5."""
    with pytest.raises(UsageError):
        CatalogDescriptor("3", k=1)


def test_descriptor_grid_counts():
    """Test the grid enumerates four small cases plus every (k, l, m) for cases 4 and 5."""
    assert len(descriptor_grid(1)) == 4 + 2 * 8


def test_differential_squares_to_zero(small_algebra):
    """Test d o d = 0 on scalar forms."""
    n = small_algebra.dim
    one_form = Form.from_entries(1, n, 1, {(0,): [1], (2,): [Fraction(-3, 2)]})
    assert ce_differential(ce_differential(one_form, small_algebra), small_algebra).is_zero()


def test_form_antisymmetrizes_entries():
    """Test out-of-order indices pick up the permutation sign."""
    form = Form.from_entries(2, 3, 1, {(2, 0): [5]})
    assert form(0, 2) == (Fraction(-5),)
    assert form(2, 0) == (Fraction(5),)
    assert form(1, 1) == (Fraction(0),)
    with pytest.raises(UsageError):
        Form.from_entries(2, 3, 1, {(1, 1): [1]})


@pytest.mark.parametrize("text", ["tfull-1", "tfull-2a", "tfull-3", "tfull-3:a0=2"] + SIMPLE_CASES)
def test_catalog_cocycles_are_cocycles(triple_data, text):
    """Test every catalog triple passes the module and cocycle checks."""
    l, a, z = triple_data(text)
    assert verify_module(l, a).passed
    assert is_cocycle(z, l, a).passed


def test_extension_labels_and_order(triple_data):
    """Test the basis order (sigma_l, a, l)."""
    l, a, z = triple_data("tfull-3")
    labels = extension_labels(l, a)
    assert labels == ("sigma_X", "sigma_Y", "sigma_Z", "A1", "A2", "X", "Y", "Z")
    assert build_extension(l, a, z).labels == labels


def test_tampered_alpha_is_not_closed():
    """Test alpha(X, Y) = a3_1X breaks closedness."""
    l, a, z = tampered_case_four()
    checks = is_cocycle(z, l, a)
    assert not checks["cocycle.alpha_closed"].passed


def test_build_extension_checks_preconditions():
    """Test invalid cocycles are refused unless checks are skipped."""
    l, a, z = tampered_case_four()
    with pytest.raises(PreconditionError):
        build_extension(l, a, z)
    g = build_extension(l, a, z, check=False)
    assert g.jacobi_defects()


def test_cochain_inverse():
    """Test c * c^-1 is the identity cochain."""
    l = heisenberg()

    _, a, _ = catalog(CatalogDescriptor("3"))
    c = random_invariant_cochain(l, a, random.Random(3))
    assert cochain_mul(c, cochain_inv(c, a), a).is_identity()


@pytest.mark.parametrize("text", ["tfull-3", "tfull-2b"])
def test_cochain_action_keeps_cocycles(triple_data, text):
    """Test z * c is again a cocycle and is witnessed by c."""
    l, a, z = triple_data(text)
    c = random_invariant_cochain(l, a, random.Random(7))
    moved = cocycle_act(z, c, l, a)
    assert is_cocycle(moved, l, a).passed
    assert class_witness_check(z, moved, c, l, a)


def test_identity_cochain_fixes_cocycle(triple_data):
    """Test the identity cochain acts trivially."""
    l, a, z = triple_data("tfull-2b")
    moved = cocycle_act(z, QuadraticCochain.identity(l.dim, a.dim), l, a)
    assert moved.alpha == z.alpha and moved.gamma == z.gamma


def perturbed(z: QuadraticCocycle, l, a, rng: random.Random) -> QuadraticCocycle:
    """z plus small random invariant alpha and gamma terms."""
    alpha, gamma = z.alpha, z.gamma
    for form in invariant_form_basis(2, l.dim, l.involution, l.derivation, a.dim, a.theta, a.D):
        alpha = alpha + form.scale(rng.randint(-2, 2))
    for form in invariant_form_basis(3, l.dim, l.involution, l.derivation):
        gamma = gamma + form.scale(rng.randint(-2, 2))
    return QuadraticCocycle(alpha, gamma)


@pytest.mark.parametrize("text", ["tfull-2b", "tfull-3", "tfull-3:a0=1", "tfull-4:k=1,l=0,m=0:c=0"])
@given(rng=st.randoms(use_true_random=False))
def test_cocycle_condition_matches_jacobi(text, rng):
    """Test an invariant (alpha, gamma) is a cocycle exactly when its extension satisfies Jacobi."""
    l, a, z = catalog(CatalogDescriptor.parse(text))
    for candidate in (perturbed(z, l, a, rng), cocycle_act(z, random_invariant_cochain(l, a, rng), l, a)):
        jacobi_holds = not build_extension(l, a, candidate, check=False).jacobi_defects()
        assert is_cocycle(candidate, l, a).passed == jacobi_holds


@pytest.mark.parametrize("text", ["tfull-2a", "tfull-2b", "tfull-3"])
def test_solvable_cases_are_balanced(triple_data, text):
    """Test the balanced conditions on the abelian and Heisenberg cases."""
    checks = balanced_check(*triple_data(text))
    assert checks.passed
    assert "balanced.A0" in balanced_summary(checks)


def test_zero_cocycle_on_plane_is_not_balanced():
    """Test R^2 with the zero cocycle violates (A0)."""
    l = rotation_plane()
    a = trivial_module(2, ("A0",), Mat.diag([1]), theta=Mat.diag([-1]))
    checks = balanced_check(l, a, QuadraticCocycle.zero(2, 1))
    assert not checks["balanced.A0"].passed
    assert not checks.passed


def test_isotropic_alpha_is_not_balanced():
    """Test an alpha with isotropic image violates (B0) while (A0) holds."""
    l = rotation_plane()
    a = trivial_module(2, ("A", "B"), Mat.from_rows([[0, 1], [1, 0]]), theta=Mat.diag([-1, -1]))
    z = QuadraticCocycle(Form.from_entries(2, 2, 2, {(0, 1): [1, 0]}), Form.zero(3, 2))
    assert is_cocycle(z, l, a).passed
    checks = balanced_check(l, a, z)
    assert checks["balanced.A0"].passed
    assert not checks["balanced.B0"].passed
    assert not checks.passed


@pytest.mark.parametrize("text", ["tfull-2b", "tfull-3", "tfull-3:a0=1", "tfull-4:k=1,l=1,m=0:c=0"])
@given(rng=st.randoms(use_true_random=False))
def test_cochain_group_laws(text, rng):
    """Test cochain products are associative and z * (c1 c2) = (z * c1) * c2."""
    l, a, z = catalog(CatalogDescriptor.parse(text))
    c1, c2, c3 = (random_invariant_cochain(l, a, rng) for _ in range(3))
    assert cochain_mul(cochain_mul(c1, c2, a), c3, a) == cochain_mul(c1, cochain_mul(c2, c3, a), a)
    stepwise = cocycle_act(cocycle_act(z, c1, l, a), c2, l, a)
    assert stepwise == cocycle_act(z, cochain_mul(c1, c2, a), l, a)


@pytest.mark.parametrize("text", ["tfull-1"] + SIMPLE_CASES)
def test_catalog_is_balanced(triple_data, text):
    """Test the balanced conditions on semisimple and trivial cases."""
    l, a, z = triple_data(text)
    checks = balanced_check(l, a, z)
    assert checks.passed
    assert all(value is None for value in balanced_summary(checks).values())


@pytest.mark.parametrize("text", ["tfull-1", "tfull-3"] + SIMPLE_CASES)
def test_fullness_conditions(triple_data, text):
    """Test (T1) and (T2) hold on catalog triples."""
    t1, t2 = fullness_t1_t2(*triple_data(text))
    assert t1.result
    assert t2.result


def test_semisimplicity_certificates(triple_data):
    """Test semisimplicity comes with a certificate."""
    l, a, _ = triple_data("tfull-5:k=1,l=1,m=1:c=0")
    ok, reason = module_semisimple(l, a)
    assert ok is True
    assert "semisimple" in reason


def test_cocycle_document_round_trip(triple_data):
    """Test quadext.v1 serialization of a cocycle."""
    l, a, z = triple_data("tfull-4:k=0,l=1,m=0:c=-3/4")
    doc = cocycle_to_document(z, l.labels, a.labels, descriptor="tfull-4:k=0,l=1,m=0:c=-3/4:a0=0")
    back = cocycle_from_document(loads_cocycle(dumps_cocycle(doc)))
    assert back.alpha == z.alpha
    assert back.gamma == z.gamma


def test_cocycle_document_rejects_bad_shape():
    """Test a gamma with vector values is a parse error."""
    text = (
        '{"format": "quadext.v1", "kind": "cocycle", "l_labels": ["X"], "a_labels": [],'
        ' "alpha": {"degree": 2, "dim_l": 1, "dim_target": 0, "entries": []},'
        ' "gamma": {"degree": 3, "dim_l": 1, "dim_target": 2, "entries": []}}'
    )
    with pytest.raises(ParseError):
        loads_cocycle(text)


def test_registry_filters_families():
    """Test family filtering by prefix."""
    assert len(CatalogRegistry.filter()) == 5
    assert [f["name"] for f in CatalogRegistry.filter("tfull-4")] == ["tfull-4"]
    assert CatalogRegistry.filter("nope") == []
    assert CatalogRegistry.create("tfull-2a").dim == 5
