"""
Structural invariants: Killing form, center, derived and lower central series, signatures.
"""

from fractions import Fraction
from typing import Dict, List, Tuple

from app.services.liecore.algebra import LieAlgebra, MetricEquivariantAlgebra
from app.services.liecore.grading import grade
from app.utils.exactlin import (
    Mat,
    contains,
    hstack,
    inertia,
    nullspace,
    restrict_form,
    solve_matrix,
)


def trace_product(A: Mat, B: Mat) -> Fraction:
    """tr(A B) without forming the product."""
    n = A.rows
    return sum((A[k, l] * B[l, k] for k in range(n) for l in range(n) if A[k, l]), Fraction(0))


def killing_form(g: LieAlgebra) -> Mat:
    """B(e_i, e_j) = tr(ad e_i ad e_j)."""
    ads = [g.ad(i) for i in range(g.dim)]
    return Mat.from_function(g.dim, g.dim, lambda i, j: trace_product(ads[i], ads[j]))


def killing_form_on(g: LieAlgebra, U: Mat) -> Mat:
    """Killing form of the subalgebra span(U), assumed closed, in the basis U."""
    ads = []
    for a in range(U.cols):
        image = g.ad_vector(Mat.column(U.col(a))) @ U
        coords = solve_matrix(U, image)
        assert coords is not None
        ads.append(coords)
    return Mat.from_function(U.cols, U.cols, lambda i, j: trace_product(ads[i], ads[j]))


def derived_algebra(g: LieAlgebra) -> Mat:
    I = Mat.identity(g.dim)
    return g.bracket_span(I, I)


def center(g: LieAlgebra) -> Mat:
    """Joint kernel of all ad(e_i)."""
    if g.dim == 0:
        return Mat.zero(0, 0)
    stacked = Mat(
        g.dim * g.dim,
        g.dim,
        [v for i in range(g.dim) for v in g.ad(i).entries],
    )
    kernel = nullspace(stacked)
    return hstack(kernel) if kernel else Mat.zero(g.dim, 0)


def lower_central_series(g: LieAlgebra, max_steps: int = 64) -> List[Mat]:
    """g, [g, g], [g, [g, g]], ... until it stabilizes."""
    I = Mat.identity(g.dim)
    series = [I]
    while len(series) <= max_steps:
        nxt = g.bracket_span(I, series[-1])
        if nxt.cols == series[-1].cols:
            break
        series.append(nxt)
    return series


def is_ideal(g: LieAlgebra, U: Mat) -> bool:
    return contains(U, g.bracket_span(Mat.identity(g.dim), U))


def signature(gram: Mat, U: Mat) -> Tuple[int, int, int]:
    """(negative, zero, positive) counts of the form restricted to span(U)."""
    if U.cols == 0:
        return (0, 0, 0)
    return inertia(restrict_form(gram, U))


def signature_report(g: MetricEquivariantAlgebra) -> Dict[str, Tuple[int, int, int]]:
    """Signatures on g, g_-, and the tangent (g-^-) and normal (g-^+) model spaces."""
    grading = grade(g)
    G = g.form
    return {
        "g": signature(G, Mat.identity(g.dim)),
        "g_-": signature(G, grading.theta_minus),
        "g+^-": signature(G, grading.plus_minus),
        "tangent": signature(G, grading.minus_minus),
        "normal": signature(G, grading.minus_plus),
    }

