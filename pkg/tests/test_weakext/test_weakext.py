"""
Tests for derivations, central extensions, classifier data and automorphisms.
"""

from fractions import Fraction
from itertools import product

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from app.core.exceptions import ParseError, UnsupportedError, UsageError
from app.services.liecore.axioms import verify_algebra
from app.services.liecore.grading import grade
from app.services.quadext.catalog import CatalogDescriptor, build_catalog_entry, catalog
from app.services.quadext.cochains import QuadraticCochain
from app.services.weakext.automorphisms import automorphism_check, automorphism_family
from app.services.weakext.central import CentralExtensionDatum, central_extension, is_full_extension
from app.services.weakext.classifier import (
    RIEMANN,
    ClassifierAction,
    ClassifierDatum,
    act_on_classifier,
    check_witness,
    classifier_layout,
    classify_omega,
    is_indecomposable_datum,
    pencil_normal_form,
    pencils_equivalent,
    realize_classifier,
)
from app.services.weakext.derivations import block_generators, derivation_space, is_restricted_derivation, out_and_h2
from app.services.weakext.io import (
    classifier_from_document,
    classifier_to_document,
    dumps_weakext,
    loads_weakext,
    omega_from_document,
    omega_to_document,
)
from app.utils.exactlin import Mat, inverse, rank

CASE_ONE = CatalogDescriptor.parse("tfull-1:a0=1")


def riemann_datum(*diagonal: int) -> ClassifierDatum:
    return ClassifierDatum.riemann([Mat.diag(list(diagonal))], classifier_layout(CASE_ONE).gram)


def test_out_dimension_case_one():
    """Test Out(g)^D_- of case 1 with one a0 pair is three-dimensional."""
    g = build_catalog_entry(CASE_ONE)
    space = derivation_space(g)
    assert space.out_dim == 3
    assert all(is_restricted_derivation(g, phi) for phi in space.basis)
    assert out_and_h2(g, 2).dim == 6


def test_derivation_routes_agree():
    """Test the generic and block solvers span the same five-dimensional space on case 3."""
    desc = CatalogDescriptor.parse("tfull-3:a0=1")
    dims = desc.dims()
    space = derivation_space(build_catalog_entry(desc), split=(dims["l"], dims["a"]))
    assert space.routes_agree is True
    assert space.route_dims == {"generic": 5, "block": 5}
    assert space.dim == 5


def test_derivation_routes_agree_without_l():
    """Test both solvers agree when l is zero and a carries the whole algebra."""
    desc = CASE_ONE
    dims = desc.dims()
    space = derivation_space(build_catalog_entry(desc), split=(dims["l"], dims["a"]))
    assert space.routes_agree is True


def split_gram(dim_l: int, gram_a: Mat) -> Mat:
    n, m = dim_l, gram_a.rows
    top = n + m
    return Mat.from_function(
        2 * n + m,
        2 * n + m,
        lambda r, c: gram_a[r - n, c - n]
        if n <= r < top and n <= c < top
        else (1 if (r < n and c == r + top) or (c < n and r == c + top) else 0),
    )


def test_block_generators_are_skew_off_the_a_block():
    """Test the S, tau and sigma generators are skew for the split inner product with a non-diagonal gram."""
    n = 2
    gram_a = Mat.from_rows([[0, 1, 0], [1, 0, 0], [0, 0, 2]])
    m = gram_a.rows
    size = 2 * n + m
    G = split_gram(n, gram_a)
    gens = block_generators(n, gram_a)
    assert len(gens) == n * n + m * m + m * n + n * (n - 1) // 2
    off_a_block = gens[: n * n] + gens[n * n + m * m:]
    for gen in off_a_block:
        A = Mat.from_sparse(size, size, {(row, col): v for col, rows in gen.items() for row, v in rows.items()})
        GA = G @ A
        assert (GA + GA.T).is_zero()


def test_h2_rejects_negative_rank(entry):
    """Test a negative R dimension."""
    with pytest.raises(UsageError):
        out_and_h2(entry("tfull-1"), -1)


def test_zero_omega_is_not_full():
    """Test the trivial central extension fails fullness."""
    datum = CentralExtensionDatum.zero(build_catalog_entry(CASE_ONE), 1)
    result = central_extension(datum)
    assert result.checks.passed
    assert result.full is False
    assert result.algebra.weak
    assert result.algebra.dim == 5


def test_realized_classifier_is_full_and_indecomposable():
    """Test B = diag(1, 3) gives a full indecomposable weak extension."""
    realized = realize_classifier(CASE_ONE, riemann_datum(1, 3))
    assert is_full_extension(realized.extension)
    result = central_extension(realized.extension)
    assert result.full
    assert verify_algebra(result.algebra).passed
    decision = is_indecomposable_datum(realized.datum)
    assert decision.indecomposable is True
    assert decision.method == "normal-form"


def test_classify_omega_inverts_realization():
    """Test reading the classifier off the realized omega."""
    datum = riemann_datum(2, -1)
    realized = realize_classifier(CASE_ONE, datum)
    assert classify_omega(CASE_ONE, realized.extension.omega).B == datum.B


def test_kernel_direction_decomposes():
    """Test a degenerate B splits off its kernel line with a valid witness."""
    datum = riemann_datum(1, 0)
    decision = is_indecomposable_datum(datum)
    assert decision.indecomposable is False
    assert decision.witness is not None
    assert check_witness(datum, decision.witness)
    assert decision.witness.describe()["dim a''"] == 1


def test_classifier_validation():
    """Test malformed classifier data."""
    with pytest.raises(UsageError):
        ClassifierDatum.riemann([Mat.from_rows([[0, 1], [0, 0]])])
    with pytest.raises(UsageError):
        ClassifierDatum("no-such-shape", 0, (), Mat.identity(1))
    with pytest.raises(UsageError):
        ClassifierDatum(RIEMANN, 1, (Mat.identity(2),), Mat.identity(2), r0=Mat.column([1]))


def test_realize_rejects_wrong_size():
    """Test a datum on the wrong space is refused."""
    with pytest.raises(UsageError):
        realize_classifier(CASE_ONE, ClassifierDatum.riemann([Mat.identity(3)]))


def test_layout_unavailable_for_simple_cases():
    """Test the data dictionary is limited to cases 1 to 3."""
    with pytest.raises(UnsupportedError):
        classifier_layout(CatalogDescriptor.parse("tfull-4:k=1"))


def test_pencil_normal_form():
    """Test normal forms scale the smallest eigenvalue to one."""
    form = pencil_normal_form(Mat.diag([2, 6]))
    assert form.describe() == ["1", "3"]
    assert pencils_equivalent(Mat.diag([2, 6]), Mat.diag([-1, -3]))
    assert not pencils_equivalent(Mat.diag([1, 2]), Mat.diag([1, 3]))
    assert pencil_normal_form(Mat.diag([0, 5, 0])).describe() == ["1", "0", "0"]


def test_pencil_normal_form_needs_definite_gram():
    """Test indefinite inner products are unsupported."""
    with pytest.raises(UnsupportedError):
        pencil_normal_form(Mat.diag([1, 2]), Mat.diag([1, -1]))


def test_identity_is_automorphism(triple_data):
    """Test both routes accept the identity."""
    l, a, z = triple_data("tfull-3")
    result = automorphism_check(
        l, a, z, Mat.identity(l.dim), Mat.identity(a.dim), QuadraticCochain.identity(l.dim, a.dim)
    )
    assert result.result
    assert result.routes_agree


@pytest.mark.parametrize("lam", [1, -1])
def test_automorphism_family_case_two(lam):
    """Test the sign family on case 2b with one a0 pair."""
    desc = CatalogDescriptor.parse("tfull-2b:a0=1")
    l, a, z = catalog(desc)
    data = automorphism_family(desc, lam, Mat.diag([-1]), [0])
    result = automorphism_check(l, a, z, data.S, data.U, data.cochain)
    assert result.result
    assert result.routes_agree


def test_non_equivariant_map_is_rejected(triple_data):
    """Test a map breaking D-equivariance fails on both routes."""
    l, a, z = triple_data("tfull-2b")
    result = automorphism_check(
        l, a, z, Mat.diag([2, 1]), Mat.identity(a.dim), QuadraticCochain.identity(l.dim, a.dim)
    )
    assert not result.result
    assert result.routes_agree


def test_automorphism_family_unsupported_case():
    """Test the family only exists for cases 2 and 3."""
    with pytest.raises(UnsupportedError):
        automorphism_family(CatalogDescriptor.parse("tfull-4:k=1"), 1, Mat.zero(0, 0), [])


def test_classifier_document_round_trip():
    """Test weakext.v1 classifier documents keep the datum."""
    datum = riemann_datum(1, 3)
    text = dumps_weakext(classifier_to_document(datum, CASE_ONE.id))
    desc, back = classifier_from_document(loads_weakext(text))
    assert desc == CASE_ONE
    assert back == datum


def test_omega_document_round_trip():
    """Test weakext.v1 omega documents keep the 2-form."""
    realized = realize_classifier(CASE_ONE, riemann_datum(1, 3))
    doc = omega_to_document(realized.extension, descriptor=CASE_ONE.id)
    back = omega_from_document(loads_weakext(dumps_weakext(doc)))
    assert back.omega == realized.extension.omega
    assert back.r_dim == 1


def test_weakext_document_needs_one_base():
    """Test an omega document with neither descriptor nor base."""
    text = (
        '{"format": "weakext.v1", "kind": "omega", "r_dim": 0,'
        ' "omega": {"degree": 2, "dim_l": 0, "dim_target": 0, "entries": []}}'
    )
    with pytest.raises(ParseError):
        loads_weakext(text)


@pytest.mark.parametrize("n0", [0, 1, 2])
def test_h2_dimension_case_two_a(n0):
    """Test dim H^2 of case 2a is r (1 + n0 (n0 + 1) / 2 + n0)."""
    g = build_catalog_entry(CatalogDescriptor("2a", a0_dim=n0))
    space = derivation_space(g)
    for r in (1, 2):
        assert out_and_h2(g, r, space).dim == r * (1 + n0 * (n0 + 1) // 2 + n0)


def simple_h2_dimension(k: int, l: int, m: int, n0: int) -> int:
    return k * l + m * (m + 1) // 2 + n0 * (n0 + 1) // 2


@pytest.mark.parametrize("case", ["4", "5"])
@pytest.mark.parametrize("k, l, m, n0", [(0, 0, 0, 0), (1, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (1, 0, 1, 0)])
def test_h2_dimension_simple_cases(case, k, l, m, n0):
    """Test dim H^2 of cases 4 and 5 is r (k l + m (m + 1) / 2 + n0 (n0 + 1) / 2)."""
    g = build_catalog_entry(CatalogDescriptor(case, k=k, l=l, m=m, a0_dim=n0))
    space = derivation_space(g)
    for r in (1, 2):
        assert out_and_h2(g, r, space).dim == r * simple_h2_dimension(k, l, m, n0)


@pytest.mark.slow
@pytest.mark.parametrize("case", ["4", "5"])
@pytest.mark.parametrize("k, l, m, n0", list(product(range(3), repeat=4)))
def test_h2_dimension_simple_grid(case, k, l, m, n0):
    """Test the case 4 and 5 H^2 dimensions for every k, l, m, n0 up to two."""
    g = build_catalog_entry(CatalogDescriptor(case, k=k, l=l, m=m, a0_dim=n0))
    space = derivation_space(g)
    assert out_and_h2(g, 2, space).dim == 2 * simple_h2_dimension(k, l, m, n0)


TWO_BY_TWO = [Mat.from_rows([[1, 2], [2, 0]]), Mat.diag([0, 3])]
FIRST_ACTION = ClassifierAction(
    Mat.from_rows([[0, -1], [1, 0]]), Mat.column([1, 2]), Mat.from_rows([[1, 1], [0, 1]])
)
SECOND_ACTION = ClassifierAction(
    Mat.from_rows([[Fraction(3, 5), Fraction(-4, 5)], [Fraction(4, 5), Fraction(3, 5)]]),
    Mat.column([-1, Fraction(1, 2)]),
    Mat.from_rows([[2, 0], [1, 1]]),
)


@pytest.mark.parametrize(
    "datum",
    [
        ClassifierDatum.riemann(TWO_BY_TWO),
        ClassifierDatum.lorentz_r_beta([1, -2], TWO_BY_TWO, Mat.from_rows([[1, 0], [2, -1]])),
        ClassifierDatum.lorentz_b1b2b(
            [Mat.from_rows([[1, 0, 2]]), Mat.from_rows([[0, 1, 1]])], [Mat.diag([1]), Mat.diag([-2])], TWO_BY_TWO
        ),
    ],
    ids=lambda datum: datum.shape,
)
def test_classifier_action_is_a_right_action(datum):
    """Test acting by h1 then h2 equals acting by the product h1 h2."""
    stepwise = act_on_classifier(act_on_classifier(datum, FIRST_ACTION), SECOND_ACTION)
    assert stepwise == act_on_classifier(datum, FIRST_ACTION.compose(SECOND_ACTION))
    assert act_on_classifier(datum, ClassifierAction.identity(datum)) == datum


@pytest.mark.parametrize(
    "lam, text",
    [(0, "0"), (1, "1"), (-1, "-1"), (2, "2"), (-2, "-2"), (Fraction(3, 2), "3/2"), (Fraction(-7, 3), "-7/3")],
)
def test_pencil_normal_form_fixes_representatives(lam, text):
    """Test diag(1, lambda) with lambda = 0 or |lambda| >= 1 is its own normal form."""
    assert pencil_normal_form(Mat.diag([1, lam])).describe() == ["1", text]


def test_pencil_normal_forms_on_a_grid():
    """Test every nonzero 2 x 2 pencil on a rational grid lands on some diag(1, lambda)."""
    for x, y, w in product([-1, 0, 2], repeat=3):
        if x == y == w == 0:
            continue
        B = Mat.from_rows([[x, y], [y, w]])
        first, lam = pencil_normal_form(B).eigenvalues
        assert sympy.simplify(first - 1) == 0
        value = float(sympy.re(sympy.N(lam)))
        assert value == 0.0 or abs(value) >= 1.0 - 1e-12
        if lam.is_Rational:
            representative = Mat.diag([1, Fraction(int(lam.p), int(lam.q))])
            assert pencils_equivalent(B, representative)


def cayley(a: Fraction) -> Mat:
    """Rational rotation (I - A)(I + A)^-1 for A = [[0, a], [-a, 0]]."""
    A = Mat.from_rows([[0, a], [-a, 0]])
    I = Mat.identity(2)
    return (I - A) @ inverse(I + A)


@given(
    entries=st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)),
    a=st.fractions(min_value=-3, max_value=3, max_denominator=4),
    s=st.integers(-3, 3).filter(bool),
)
def test_pencil_normal_form_is_constant_on_orbits(entries, a, s):
    """Test conjugating by a rational rotation and rescaling keeps the normal form."""
    x, y, w = entries
    B = Mat.from_rows([[x, y], [y, w]])
    U = cayley(a)
    assert U.T @ U == Mat.identity(2)
    assert pencils_equivalent(B, (U.T @ B @ U).scale(s))


def full_by_bracket_ranks(base, extended, r_dim: int) -> bool:
    """omega(ker [,]) = R read off as the rank gain of g-^- x g+^- brackets in the extension."""
    grading = grade(base)
    U, W = grading.minus_minus, grading.plus_minus
    pairs = [(U.col(i), W.col(j)) for i in range(U.cols) for j in range(W.cols)]
    if not pairs:
        return r_dim == 0

    def lift(v):
        return Mat.column([0] * r_dim + list(v))

    plain = [base.bracket(Mat.column(u), Mat.column(w)).vector() for u, w in pairs]
    lifted = [extended.bracket(lift(u), lift(w)).vector() for u, w in pairs]
    gain = rank(Mat.from_columns(lifted, extended.dim)) - rank(Mat.from_columns(plain, base.dim))
    return gain == r_dim


@pytest.mark.parametrize("text", ["tfull-1:a0=1", "tfull-2b:a0=1", "tfull-3:a0=1"])
@pytest.mark.parametrize("r_dim", [1, 2])
def test_fullness_matches_bracket_ranks(text, r_dim):
    """Test the fullness flag agrees with the rank criterion on every H^2 representative and their sum."""
    g = build_catalog_entry(CatalogDescriptor.parse(text))
    reps = out_and_h2(g, r_dim).representatives
    total = CentralExtensionDatum.zero(g, r_dim).omega
    for rep in reps:
        total = total + rep
    for omega in reps + [total]:
        result = central_extension(CentralExtensionDatum(g, r_dim, omega))
        assert result.full == full_by_bracket_ranks(g, result.algebra, r_dim)
